//! Connectivity for the covering master, two ways.
//!
//! The static way (`build_mtz_master`) augments the cover with a spanning
//! arborescence rooted at an artificial vertex: unselected vertices hang
//! directly off the root, selected vertices must be reached through selected
//! graph neighbors, and Miller-Tucker-Zemlin labels keep the arcs acyclic.
//! Any feasible point's selection is connected, and every connected
//! selection extends to a feasible point.
//!
//! The lazy way separates minimal a,b-separators: a disconnected incumbent
//! with `a` and `b` in different parts yields the row
//! `s_a + s_b - sum of s over the separator <= 1`, valid for every
//! connected set since a connected set holding both ends also holds an
//! a-b path, which must cross the separator.

use std::cmp::Reverse;
use std::collections::{HashMap, VecDeque};

use crate::fort::Fort;
use crate::graph::Graph;
use crate::milp::{MilpModel, RowSpec, Sense, SeparationCallback, VarId};
use crate::models::s_set_of;
use crate::set::VertexSet;

/// Variable ids for the arborescence master: `s` block, then graph arcs in
/// edge order (both orientations), then the arcs out of the artificial
/// vertices, then the order labels.
pub struct MtzLayout {
    n: usize,
    m: usize,
    arc_of: HashMap<(usize, usize), VarId>,
}

impl MtzLayout {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut arc_of = HashMap::new();
        for (k, (u, v)) in g.edges().into_iter().enumerate() {
            arc_of.insert((u, v), n + 2 * k);
            arc_of.insert((v, u), n + 2 * k + 1);
        }
        MtzLayout { n, m: g.m(), arc_of }
    }

    pub fn s(&self, v: usize) -> VarId {
        v
    }

    /// Arc `u -> v` of the graph; panics when `uv` is not an edge.
    pub fn y(&self, u: usize, v: usize) -> VarId {
        self.arc_of[&(u, v)]
    }

    /// Arc from the dump root straight to `v`, marking `v` unselected.
    pub fn y_alpha(&self, v: usize) -> VarId {
        self.n + 2 * self.m + v
    }

    /// Arc from the subtree root to `v`, marking `v` the first selected one.
    pub fn y_beta(&self, v: usize) -> VarId {
        self.n + 2 * self.m + self.n + v
    }

    pub fn y_alpha_beta(&self) -> VarId {
        self.n + 2 * self.m + 2 * self.n
    }

    pub fn u(&self, v: usize) -> VarId {
        self.n + 2 * self.m + 2 * self.n + 1 + v
    }

    pub fn u_alpha(&self) -> VarId {
        self.u(self.n)
    }

    pub fn u_beta(&self) -> VarId {
        self.u(self.n) + 1
    }

    pub fn n_vars(&self) -> usize {
        4 * self.n + 2 * self.m + 3
    }
}

/// Fort-cover master whose feasible selections are exactly the connected
/// sets hitting every seed fort.
pub fn build_mtz_master(g: &Graph, seeds: &[Fort]) -> (MilpModel, MtzLayout) {
    let n = g.n();
    let big = n as i64 + 1;
    let layout = MtzLayout::new(g);
    let mut model = MilpModel::new(format!("mtz_cover_n{n}"));
    for v in 0..n {
        let s = model.add_binary(format!("s_{v}"));
        model.set_objective(s, 1);
    }
    for (u, v) in g.edges() {
        model.add_binary(format!("y_{u}_{v}"));
        model.add_binary(format!("y_{v}_{u}"));
    }
    for v in 0..n {
        model.add_binary(format!("y_alpha_{v}"));
    }
    for v in 0..n {
        model.add_binary(format!("y_beta_{v}"));
    }
    model.add_binary("y_alpha_beta");
    for v in 0..n {
        model.add_integer(format!("u_{v}"), 1, big);
    }
    model.add_integer("u_alpha", 0, 0);
    model.add_integer("u_beta", 1, big);

    let root = (0..n).map(|v| (layout.y_beta(v), 1)).collect();
    model.add_named_row("root", root, Sense::Eq, 1);
    for v in 0..n {
        // Exactly one parent: a graph neighbor or one of the two roots.
        let mut terms: Vec<(VarId, i64)> =
            g.neighbors(v).iter().map(|&u| (layout.y(u, v), 1)).collect();
        terms.push((layout.y_alpha(v), 1));
        terms.push((layout.y_beta(v), 1));
        model.add_named_row(format!("in_{v}"), terms, Sense::Eq, 1);
        // Dumped vertices relay nothing, so selected subtrees stay selected.
        for &i in g.neighbors(v) {
            model.add_named_row(
                format!("relay_{v}_{i}"),
                vec![(layout.y_alpha(v), 1), (layout.y(v, i), 1)],
                Sense::Le,
                1,
            );
        }
    }
    for v in 0..n {
        for &i in g.neighbors(v) {
            // Lifted order row for the arc v -> i: a chosen arc forces
            // u_v + 1 <= u_i, which rules out cycles.
            model.add_named_row(
                format!("mtz_{v}_{i}"),
                vec![
                    (layout.y(v, i), big),
                    (layout.u(v), 1),
                    (layout.u(i), -1),
                    (layout.y(i, v), big - 2),
                ],
                Sense::Le,
                big - 1,
            );
        }
        model.add_named_row(
            format!("mtz_alpha_{v}"),
            vec![(layout.y_alpha(v), big), (layout.u_alpha(), 1), (layout.u(v), -1)],
            Sense::Le,
            big - 1,
        );
        model.add_named_row(
            format!("mtz_beta_{v}"),
            vec![(layout.y_beta(v), big), (layout.u_beta(), 1), (layout.u(v), -1)],
            Sense::Le,
            big - 1,
        );
        model.add_named_row(
            format!("pick_{v}"),
            vec![(layout.s(v), 1), (layout.y_alpha(v), 1)],
            Sense::Eq,
            1,
        );
    }
    model.add_named_row(
        "mtz_alpha_beta",
        vec![(layout.y_alpha_beta(), big), (layout.u_alpha(), 1), (layout.u_beta(), -1)],
        Sense::Le,
        big - 1,
    );
    model.add_named_row("root_arc", vec![(layout.y_alpha_beta(), 1)], Sense::Eq, 1);
    for (i, fort) in seeds.iter().enumerate() {
        let terms = fort.set().iter().map(|v| (v, 1)).collect();
        model.add_named_row(format!("fort{}", i + 1), terms, Sense::Ge, 1);
    }
    (model, layout)
}

/// Lift a connected forcing set to a full assignment: a breadth-first tree
/// over the set supplies the arcs and depth labels.
pub(crate) fn mtz_warm_values(g: &Graph, layout: &MtzLayout, zfs: &VertexSet) -> Vec<i64> {
    let n = g.n();
    let mut vals = vec![0i64; layout.n_vars()];
    vals[layout.y_alpha_beta()] = 1;
    vals[layout.u_beta()] = 1;
    for v in 0..n {
        if zfs.contains(v) {
            vals[layout.s(v)] = 1;
        } else {
            vals[layout.y_alpha(v)] = 1;
            vals[layout.u(v)] = 1;
        }
    }
    let r = zfs.first().expect("warm start needs a nonempty set");
    vals[layout.y_beta(r)] = 1;
    vals[layout.u(r)] = 2;
    let mut seen = VertexSet::singleton(n, r);
    let mut queue = VecDeque::from([r]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if zfs.contains(w) && !seen.contains(w) {
                seen.insert(w);
                vals[layout.y(u, w)] = 1;
                vals[layout.u(w)] = vals[layout.u(u)] + 1;
                queue.push_back(w);
            }
        }
    }
    debug_assert!(seen == *zfs, "warm start needs a connected set");
    vals
}

/// For a set with at least two components, return `(a, b, cut)`: the lowest
/// vertices of the two largest components and an inclusion-minimal set of
/// outside vertices whose removal separates them. `None` when the set has
/// fewer than two components.
pub fn find_minimal_ab_separator(
    g: &Graph,
    z: &VertexSet,
) -> Option<(usize, usize, VertexSet)> {
    let mut comps = g.components_within(z);
    if comps.len() < 2 {
        return None;
    }
    comps.sort_by_key(|c| (Reverse(c.card()), c.first()));
    let a = comps[0].first().expect("components are nonempty");
    let b = comps[1].first().expect("components are nonempty");
    // Everything outside `z` separates; one ascending sweep trims it. A kept
    // vertex stays necessary as the cut only shrinks afterwards.
    let mut cut = z.complement();
    for c in cut.to_vec() {
        let mut trial = cut.clone();
        trial.remove(c);
        if !connects(g, a, b, &trial) {
            cut = trial;
        }
    }
    Some((a, b, cut))
}

/// Is there an a-b path avoiding `blocked`?
fn connects(g: &Graph, a: usize, b: usize, blocked: &VertexSet) -> bool {
    debug_assert!(!blocked.contains(a) && !blocked.contains(b));
    let mut seen = VertexSet::singleton(g.n(), a);
    let mut queue = vec![a];
    while let Some(u) = queue.pop() {
        if u == b {
            return true;
        }
        for &w in g.neighbors(u) {
            if !blocked.contains(w) && !seen.contains(w) {
                seen.insert(w);
                queue.push(w);
            }
        }
    }
    false
}

/// Lazy separator rows for disconnected incumbents. Runs after the fort
/// callback, so it only sees candidates that already force.
pub(crate) struct ConnectivityCut<'a> {
    g: &'a Graph,
    next_sep: usize,
}

impl<'a> ConnectivityCut<'a> {
    pub(crate) fn new(g: &'a Graph) -> Self {
        ConnectivityCut { g, next_sep: 0 }
    }
}

impl SeparationCallback for ConnectivityCut<'_> {
    fn name(&self) -> &str {
        "connectivity"
    }

    fn separate(&mut self, _model: &MilpModel, values: &[i64]) -> Vec<RowSpec> {
        let s = s_set_of(self.g.n(), values);
        let Some((a, b, cut)) = find_minimal_ab_separator(self.g, &s) else {
            return Vec::new();
        };
        self.next_sep += 1;
        let mut terms = vec![(a, 1), (b, 1)];
        terms.extend(cut.iter().map(|v| (v, -1)));
        vec![RowSpec {
            name: Some(format!("sep{}", self.next_sep)),
            terms,
            sense: Sense::Le,
            rhs: 1,
        }]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_cycle, gen_path, gen_star};
    use rand::{Rng, SeedableRng};

    #[test]
    fn path_center_separates_the_endpoints() {
        let g = gen_path(3).unwrap();
        let z = VertexSet::from_iter(3, [0, 2]);
        let (a, b, cut) = find_minimal_ab_separator(&g, &z).unwrap();
        assert_eq!((a, b), (0, 2));
        assert_eq!(cut, VertexSet::singleton(3, 1));
    }

    #[test]
    fn cycle_needs_both_sides_blocked() {
        let g = gen_cycle(4).unwrap();
        let z = VertexSet::from_iter(4, [0, 2]);
        let (_, _, cut) = find_minimal_ab_separator(&g, &z).unwrap();
        assert_eq!(cut, VertexSet::from_iter(4, [1, 3]));

        let g6 = gen_cycle(6).unwrap();
        let z6 = VertexSet::from_iter(6, [0, 3]);
        let (_, _, cut6) = find_minimal_ab_separator(&g6, &z6).unwrap();
        assert_eq!(cut6, VertexSet::from_iter(6, [2, 5]));
    }

    #[test]
    fn connected_sets_have_no_separator() {
        let g = gen_path(5).unwrap();
        assert!(find_minimal_ab_separator(&g, &VertexSet::from_iter(5, [1, 2, 3])).is_none());
        assert!(find_minimal_ab_separator(&g, &VertexSet::empty(5)).is_none());
    }

    #[test]
    fn separators_are_inclusion_minimal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut scenarios = 0;
        while scenarios < 50 {
            let n = rng.gen_range(4..=10);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.15 && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let z = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen::<f64>() < 0.4));
            let Some((a, b, cut)) = find_minimal_ab_separator(&g, &z) else {
                continue;
            };
            scenarios += 1;
            assert!(!connects(&g, a, b, &cut));
            assert!(cut.is_disjoint_from(&z));
            for c in cut.iter() {
                let mut weaker = cut.clone();
                weaker.remove(c);
                assert!(connects(&g, a, b, &weaker), "vertex {c} is redundant");
            }
        }
    }

    #[test]
    fn master_size_matches_the_formulas() {
        for g in [gen_path(4).unwrap(), gen_cycle(5).unwrap(), gen_star(6).unwrap()] {
            let (model, layout) = build_mtz_master(&g, &[]);
            let (n, m) = (g.n(), g.m());
            assert_eq!(model.n_vars(), 4 * n + 2 * m + 3);
            assert_eq!(layout.n_vars(), model.n_vars());
            assert_eq!(model.n_rows(), 4 * n + 4 * m + 3);
        }
    }

    #[test]
    fn warm_lift_is_feasible() {
        for g in [gen_path(5).unwrap(), gen_cycle(6).unwrap(), gen_star(7).unwrap()] {
            let (model, layout) = build_mtz_master(&g, &[]);
            for z in [
                VertexSet::singleton(g.n(), 0),
                crate::models::greedy_connected_zfs(&g),
                g.vertex_set(),
            ] {
                let vals = mtz_warm_values(&g, &layout, &z);
                assert!(model.is_feasible(&vals), "lift of {z:?} violates a row");
                assert_eq!(model.objective_of(&vals), z.card() as i64);
            }
        }
    }

    #[test]
    fn selections_of_feasible_points_are_connected() {
        // Brute-check on a path: enumerate assignments the backend could
        // return by solving with equality pins instead.
        let g = gen_path(4).unwrap();
        let (model, layout) = build_mtz_master(&g, &[]);
        let disconnected = VertexSet::from_iter(4, [0, 3]);
        // No assignment extends a disconnected selection: try the natural
        // lift and every parent choice for vertex 3.
        let mut vals = mtz_warm_values(&g, &layout, &VertexSet::from_iter(4, [0, 1, 2, 3]));
        for v in 0..4 {
            vals[layout.s(v)] = i64::from(disconnected.contains(v));
        }
        assert!(!model.is_feasible(&vals));
    }
}

//! The infection formulation: selection, chronology, and spread variables.
//!
//! Each vertex is either seeded (`s_v = 1`) or infected across exactly one
//! incoming arc (`y_{u,v} = 1`); `x_v` timestamps the infection. An arc can
//! only fire strictly after its tail and all of the tail's other neighbors
//! are infected, which is the color change rule. Bounding the timestamps by
//! `t` turns the same model into the timestep-limited variant.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::forcing::{compute_closure_traced, propagation_time};
use crate::graph::Graph;
use crate::milp::{MilpBackend, MilpModel, Sense, VarId};
use crate::models::{
    greedy_bounded_zfs, greedy_zfs, master_outcome, trivial_outcome, ModelError,
};
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;

/// Variable ids for an infection model: `s` block, then `x`, then one `y`
/// per arc (both orientations of every edge, in edge order).
pub struct InfectionLayout {
    n: usize,
    t_max: usize,
    arcs: Vec<(usize, usize)>,
    arc_of: HashMap<(usize, usize), VarId>,
}

impl InfectionLayout {
    fn new(g: &Graph, t_max: usize) -> Self {
        let n = g.n();
        let mut arcs = Vec::with_capacity(2 * g.m());
        for (u, v) in g.edges() {
            arcs.push((u, v));
            arcs.push((v, u));
        }
        let arc_of = arcs
            .iter()
            .enumerate()
            .map(|(k, &a)| (a, 2 * n + k))
            .collect();
        InfectionLayout { n, t_max, arcs, arc_of }
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn s(&self, v: usize) -> VarId {
        v
    }

    pub fn x(&self, v: usize) -> VarId {
        self.n + v
    }

    /// Id of the arc variable `u -> v`; panics when `uv` is not an edge.
    pub fn y(&self, u: usize, v: usize) -> VarId {
        self.arc_of[&(u, v)]
    }

    pub fn n_vars(&self) -> usize {
        2 * self.n + self.arcs.len()
    }
}

/// Build the infection model with timestamps in `0..=t_max`.
///
/// Requires `n >= 2` and `1 <= t_max <= n - 1`; the optimum of the model is
/// the smallest forcing set whose propagation finishes within `t_max`
/// rounds, which for `t_max = n - 1` is the plain forcing number.
pub fn build_infection_model(g: &Graph, t_max: usize) -> (MilpModel, InfectionLayout) {
    let n = g.n();
    assert!(n >= 2, "infection model needs at least two vertices");
    assert!(
        (1..n).contains(&t_max),
        "timestep bound {t_max} outside 1..={}",
        n - 1
    );
    let layout = InfectionLayout::new(g, t_max);
    let mut model = MilpModel::new(format!("infection_n{}_t{}", n, t_max));
    for v in 0..n {
        let s = model.add_binary(format!("s_{v}"));
        model.set_objective(s, 1);
    }
    for v in 0..n {
        model.add_integer(format!("x_{v}"), 0, t_max as i64);
    }
    for &(u, v) in layout.arcs() {
        model.add_binary(format!("y_{u}_{v}"));
    }

    // Every vertex is seeded or infected across exactly one incoming arc.
    for v in 0..n {
        let mut terms = vec![(layout.s(v), 1)];
        for &u in g.neighbors(v) {
            terms.push((layout.y(u, v), 1));
        }
        model.add_named_row(format!("cause_{v}"), terms, Sense::Eq, 1);
    }
    let big_m = t_max as i64 + 1;
    // A firing arc forces its head strictly after its tail...
    for &(u, v) in layout.arcs() {
        model.add_named_row(
            format!("chron_{u}_{v}"),
            vec![(layout.x(u), 1), (layout.x(v), -1), (layout.y(u, v), big_m)],
            Sense::Le,
            t_max as i64,
        );
    }
    // ...and after every other neighbor of the tail.
    for &(u, v) in layout.arcs() {
        for &w in g.neighbors(u) {
            if w == v {
                continue;
            }
            model.add_named_row(
                format!("relay_{u}_{v}_{w}"),
                vec![(layout.x(w), 1), (layout.x(v), -1), (layout.y(u, v), big_m)],
                Sense::Le,
                t_max as i64,
            );
        }
    }
    (model, layout)
}

/// Lift a forcing set into a full model assignment by replaying its trace.
/// `None` when the set does not force or needs more than `t_max` rounds.
fn infection_warm(g: &Graph, layout: &InfectionLayout, zfs: &VertexSet) -> Option<Vec<i64>> {
    let trace = compute_closure_traced(g, zfs);
    if !trace.closure.is_full() || trace.total_rounds() > layout.t_max() {
        return None;
    }
    let mut vals = vec![0i64; layout.n_vars()];
    for v in zfs.iter() {
        vals[layout.s(v)] = 1;
    }
    for (v, round) in trace.rounds.iter().enumerate() {
        vals[layout.x(v)] = round.expect("full closure timestamps every vertex") as i64;
    }
    for f in &trace.forces {
        vals[layout.y(f.forcer, f.forced)] = 1;
    }
    Some(vals)
}

/// Exact forcing number via the infection model.
pub fn solve_infection(
    g: &Graph,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, ModelError> {
    let start = Instant::now();
    if g.n() <= 1 {
        return Ok(trivial_outcome(g, start.elapsed()));
    }
    let (model, layout) = build_infection_model(g, g.n() - 1);
    let warm = infection_warm(g, &layout, &greedy_zfs(g));
    debug_assert!(warm.is_some(), "a forcing set always fits in n - 1 rounds");
    let out = backend.solve(&model, warm.as_deref(), time_limit)?;
    let stats = SolveStats { nodes: out.nodes, ..Default::default() };
    Ok(master_outcome(g, &out, start.elapsed(), stats))
}

/// Smallest forcing set whose propagation finishes within `t` rounds.
///
/// Values are non-increasing in `t` and reach the forcing number at
/// `t = n - 1` (propagation can always afford one force per round).
pub fn solve_bounded_timestep(
    g: &Graph,
    t: usize,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, ModelError> {
    assert!(t >= 1, "timestep bound must be at least 1");
    let start = Instant::now();
    if g.n() <= 1 {
        return Ok(trivial_outcome(g, start.elapsed()));
    }
    let t_max = t.min(g.n() - 1);
    let (model, layout) = build_infection_model(g, t_max);
    let warm = infection_warm(g, &layout, &greedy_bounded_zfs(g, t_max));
    debug_assert!(warm.is_some(), "the full vertex set propagates in zero rounds");
    let out = backend.solve(&model, warm.as_deref(), time_limit)?;
    let stats = SolveStats { nodes: out.nodes, ..Default::default() };
    let outcome = master_outcome(g, &out, start.elapsed(), stats);
    if outcome.status == SolveStatus::Optimal {
        let set = outcome.incumbent.as_ref().expect("optimal outcome has a set");
        debug_assert!(propagation_time(g, set).is_some_and(|p| p <= t_max));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::is_zero_forcing_set;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::milp::InternalBackend;
    use crate::solvers::Combinations;
    use rand::{Rng, SeedableRng};

    fn value(out: &SolveOutcome) -> usize {
        assert_eq!(out.status, SolveStatus::Optimal);
        out.best_value.unwrap()
    }

    #[test]
    fn model_shape_matches_the_quantifiers() {
        for g in [gen_star(5).unwrap(), gen_cycle(6).unwrap(), gen_complete(4).unwrap()] {
            let (model, layout) = build_infection_model(&g, 2);
            let (n, m) = (g.n(), g.m());
            assert_eq!(model.n_vars(), 2 * n + 2 * m);
            assert_eq!(layout.n_vars(), model.n_vars());
            let relay: usize = (0..n).map(|v| g.degree(v) * (g.degree(v) - 1)).sum();
            assert_eq!(model.n_rows(), n + 2 * m + relay);
        }
    }

    #[test]
    fn warm_start_replays_a_trace() {
        let g = gen_path(5).unwrap();
        let (model, layout) = build_infection_model(&g, 4);
        let warm = infection_warm(&g, &layout, &VertexSet::singleton(5, 0)).unwrap();
        assert!(model.is_feasible(&warm));
        assert_eq!(model.objective_of(&warm), 1);
        // Too slow for a tight bound: the endpoint needs four rounds.
        let (_, tight) = build_infection_model(&g, 2);
        assert!(infection_warm(&g, &tight, &VertexSet::singleton(5, 0)).is_none());
    }

    #[test]
    fn known_small_values() {
        let b = InternalBackend;
        assert_eq!(value(&solve_infection(&gen_path(5).unwrap(), &b, None).unwrap()), 1);
        assert_eq!(value(&solve_infection(&gen_cycle(6).unwrap(), &b, None).unwrap()), 2);
        assert_eq!(value(&solve_infection(&gen_complete(5).unwrap(), &b, None).unwrap()), 4);
        assert_eq!(value(&solve_infection(&gen_path(1).unwrap(), &b, None).unwrap()), 1);
    }

    #[test]
    fn star_needs_all_leaves_but_one() {
        let g = gen_star(11).unwrap();
        let out = solve_infection(&g, &InternalBackend, None).unwrap();
        assert_eq!(value(&out), 9);
        assert!(is_zero_forcing_set(&g, out.incumbent.as_ref().unwrap()));
    }

    #[test]
    fn bounded_path_values() {
        let g = gen_path(5).unwrap();
        let b = InternalBackend;
        assert_eq!(value(&solve_bounded_timestep(&g, 1, &b, None).unwrap()), 3);
        assert_eq!(value(&solve_bounded_timestep(&g, 2, &b, None).unwrap()), 2);
        assert_eq!(value(&solve_bounded_timestep(&g, 4, &b, None).unwrap()), 1);
        // Bounds beyond n - 1 change nothing.
        assert_eq!(value(&solve_bounded_timestep(&g, 100, &b, None).unwrap()), 1);
    }

    /// Subset-enumeration reference for the bounded problem.
    fn bounded_oracle(g: &Graph, t: usize) -> usize {
        let n = g.n();
        for k in 0..=n {
            let mut combos = Combinations::new(n, k);
            while let Some(members) = combos.next() {
                let s = VertexSet::from_iter(n, members.iter().copied());
                if propagation_time(g, &s).is_some_and(|p| p <= t) {
                    return k;
                }
            }
        }
        unreachable!("the full set always forces");
    }

    fn random_connected(rng: &mut impl Rng, n: usize) -> Graph {
        let mut edges = Vec::new();
        for v in 1..n {
            edges.push((rng.gen_range(0..v), v));
        }
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < 0.2 && !edges.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn bounded_matches_enumeration_and_is_monotone() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let b = InternalBackend;
        for _ in 0..12 {
            let n = rng.gen_range(2..=7);
            let g = random_connected(&mut rng, n);
            let mut last = usize::MAX;
            for t in [1, 2, 4] {
                let got = value(&solve_bounded_timestep(&g, t, &b, None).unwrap());
                assert_eq!(got, bounded_oracle(&g, t));
                assert!(got <= last);
                last = got;
            }
            let z = value(&solve_infection(&g, &b, None).unwrap());
            assert_eq!(value(&solve_bounded_timestep(&g, n - 1, &b, None).unwrap()), z);
        }
    }
}

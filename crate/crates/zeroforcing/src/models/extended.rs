//! The extended cover: seed vertices plus whole closed neighborhoods.
//!
//! Buying a neighborhood `N[w]` for cost `deg(w)` stands for "seed all of
//! `N[w]` except one vertex that `w` forces for free"; everything in the
//! closure of `N[w]` then comes along. The master covers lazily separated
//! forts with seeds and neighborhoods, which can be far fewer rows than the
//! plain cover needs. Its optimum never exceeds the forcing number, and a
//! realized certificate of matching size proves equality; when realization
//! falls short the driver falls back to the plain cover rather than trust
//! the bound.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::forcing::{compute_closure, compute_closure_traced, is_zero_forcing_set};
use crate::fort::{closure_complement_fort, Fort};
use crate::graph::Graph;
use crate::milp::{
    solve_with_separation, MilpBackend, MilpModel, MilpStatus, RowSpec, SeparationCallback,
    Sense, VarId,
};
use crate::models::fort_cover::{
    clamp_limit, preseed_disjoint_min_forts, SubSearch, PRESEED_TOTAL, SUB_SLICE,
};
use crate::models::{
    greedy_zfs, greedy_zfs_biased, s_set_of, solve_fort_cover, trivial_outcome,
    ConnectivityMode, FortSource, ModelError,
};
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use crate::solvers::Deadline;

/// Variable ids for the extended master: the `s` block, then one `z` per
/// vertex with at least one neighbor.
pub struct ExtendedLayout {
    n: usize,
    centers: Vec<usize>,
    z_idx: Vec<Option<usize>>,
    balls: Vec<VertexSet>,
}

impl ExtendedLayout {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let centers: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
        let mut z_idx = vec![None; n];
        let mut balls = Vec::with_capacity(centers.len());
        for (i, &w) in centers.iter().enumerate() {
            z_idx[w] = Some(i);
            balls.push(compute_closure(g, &g.closed_neighborhood(w)));
        }
        ExtendedLayout { n, centers, z_idx, balls }
    }

    pub fn s(&self, v: usize) -> VarId {
        v
    }

    /// Id of the neighborhood variable of `w`, when `w` has neighbors.
    pub fn z(&self, w: usize) -> Option<VarId> {
        self.z_idx[w].map(|i| self.n + i)
    }

    /// Closure of `N[w]`: everything a bought neighborhood colors.
    pub fn ball(&self, w: usize) -> Option<&VertexSet> {
        self.z_idx[w].map(|i| &self.balls[i])
    }

    pub fn centers(&self) -> &[usize] {
        &self.centers
    }

    pub fn n_vars(&self) -> usize {
        self.n + self.centers.len()
    }
}

/// Row for one fort in the extended master: seeds inside the fort count
/// once, a bought neighborhood counts how much of the fort its ball colors.
fn extended_fort_row(layout: &ExtendedLayout, fort: &VertexSet) -> Vec<(VarId, i64)> {
    let mut terms: Vec<(VarId, i64)> = fort.iter().map(|v| (v, 1)).collect();
    for (i, &w) in layout.centers.iter().enumerate() {
        let hits = layout.balls[i].intersection(fort).card();
        if hits > 0 {
            terms.push((layout.n + i, hits as i64));
            let _ = w;
        }
    }
    terms
}

/// Build the extended master over the seed forts. Needs at least one edge;
/// isolated vertices carry no neighborhood variable and are pinned as
/// seeds, since nothing can ever force them.
pub fn build_extended_master(g: &Graph, seeds: &[Fort]) -> (MilpModel, ExtendedLayout) {
    assert!(g.m() >= 1, "the extended master needs at least one edge");
    let n = g.n();
    let layout = ExtendedLayout::new(g);
    let mut model = MilpModel::new(format!("extended_n{n}"));
    for v in 0..n {
        let s = model.add_binary(format!("s_{v}"));
        model.set_objective(s, 1);
    }
    for &w in &layout.centers {
        let z = model.add_binary(format!("z_{w}"));
        model.set_objective(z, g.degree(w) as i64);
    }
    for (i, fort) in seeds.iter().enumerate() {
        let terms = extended_fort_row(&layout, fort.set());
        model.add_named_row(format!("fort{}", i + 1), terms, Sense::Ge, 1);
    }
    let some = layout.centers.iter().map(|&w| (layout.z(w).unwrap(), 1)).collect();
    model.add_named_row("some_ball", some, Sense::Ge, 1);
    for &v in &layout.centers {
        // A bought ball already colors its closure; paying again for a seed
        // inside it can never help, and forbidding it keeps the objective
        // honest about what the expansion costs.
        for w in layout.ball(v).unwrap().iter() {
            model.add_named_row(
                format!("clash_{v}_{w}"),
                vec![(layout.s(w), 1), (layout.z(v).unwrap(), 1)],
                Sense::Le,
                1,
            );
        }
    }
    for v in 0..n {
        if g.degree(v) == 0 {
            model.add_named_row(format!("pin_{v}"), vec![(layout.s(v), 1)], Sense::Eq, 1);
        }
    }
    (model, layout)
}

/// The vertices a master assignment actually seeds: its `s` picks plus the
/// full neighborhood of every bought ball.
fn expansion(g: &Graph, layout: &ExtendedLayout, values: &[i64]) -> VertexSet {
    let mut s = s_set_of(g.n(), values);
    for &w in &layout.centers {
        if values[layout.z(w).unwrap()] == 1 {
            s.union_with(&g.closed_neighborhood(w));
        }
    }
    s
}

/// Lift a forcing set into the extended master via its first force: the
/// forcer's neighborhood is bought, the rest of the set is seeded directly.
/// `None` when the set does not force or forces nothing (the full set).
fn extended_warm(g: &Graph, layout: &ExtendedLayout, zfs: &VertexSet) -> Option<Vec<i64>> {
    let trace = compute_closure_traced(g, zfs);
    if !trace.closure.is_full() {
        return None;
    }
    let v = trace.forces.first()?.forcer;
    let mut vals = vec![0i64; layout.n_vars()];
    vals[layout.z(v)?] = 1;
    for u in zfs.difference(layout.ball(v)?).iter() {
        vals[layout.s(u)] = 1;
    }
    Some(vals)
}

/// Smallest-border fort disjoint from `avoid` (and, by propagation, from
/// its closure). The border is the part of the fort that sees outside
/// vertices; small borders make strong extended rows.
pub fn find_min_border_fort(
    g: &Graph,
    avoid: &VertexSet,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SubSearch, ModelError> {
    let cl = compute_closure(g, avoid);
    if cl.is_full() {
        return Ok(SubSearch::Exhausted);
    }
    let n = g.n();
    let mut model = MilpModel::new(format!("min_border_fort_n{n}"));
    for v in 0..n {
        model.add_binary(format!("x_{v}"));
    }
    let centers: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
    let mut b_of = vec![None; n];
    for &v in &centers {
        let b = model.add_binary(format!("b_{v}"));
        model.set_objective(b, 1);
        b_of[v] = Some(b);
    }
    model.add_named_row("any", (0..n).map(|v| (v, 1)).collect(), Sense::Ge, 1);
    for v in 0..n {
        for &w in g.neighbors(v) {
            let mut terms = vec![(w, 1), (v, -1)];
            terms.extend(g.neighbors(w).iter().filter(|&&a| a != v).map(|&a| (a, 1)));
            model.add_named_row(format!("guard_{v}_{w}"), terms, Sense::Ge, 0);
        }
    }
    for &v in &centers {
        // An inside vertex with an outside neighbor is border.
        let d = g.degree(v) as i64;
        let mut terms = vec![(v, d), (b_of[v].unwrap(), -d)];
        terms.extend(g.neighbors(v).iter().map(|&a| (a, -1)));
        model.add_named_row(format!("border_{v}"), terms, Sense::Le, 0);
    }
    for v in cl.iter() {
        model.add_named_row(format!("fix_{v}"), vec![(v, 1)], Sense::Eq, 0);
    }
    let f0 = cl.complement();
    let mut warm = vec![0i64; model.n_vars()];
    for v in f0.iter() {
        warm[v] = 1;
        if g.neighbors(v).iter().any(|&a| !f0.contains(a)) {
            warm[b_of[v].expect("an outside neighbor implies a degree")] = 1;
        }
    }
    debug_assert!(model.is_feasible(&warm));
    let out = backend.solve(&model, Some(&warm), time_limit)?;
    Ok(match out.status {
        MilpStatus::Optimal => {
            let vals = out.values.as_deref().expect("optimal solve carries values");
            SubSearch::Found(Fort::new_unchecked(g, s_set_of(n, vals)))
        }
        MilpStatus::Timeout => SubSearch::TimedOut,
        MilpStatus::Infeasible => SubSearch::Exhausted,
    })
}

/// Lazy rows for the extended master: whenever the expansion fails to
/// force, a fort it misses gets a row. Minimum-border forts give the
/// sharpest rows; budget or backend trouble degrades to the closure
/// complement, which keeps the loop both exact and moving.
struct BorderFortSeparator<'a> {
    g: &'a Graph,
    layout: &'a ExtendedLayout,
    backend: &'a dyn MilpBackend,
    deadline: Deadline,
    sub_error: Option<ModelError>,
    next_fort: usize,
}

impl SeparationCallback for BorderFortSeparator<'_> {
    fn name(&self) -> &str {
        "border-fort"
    }

    fn separate(&mut self, _model: &MilpModel, values: &[i64]) -> Vec<RowSpec> {
        let s_exp = expansion(self.g, self.layout, values);
        let slice = clamp_limit(self.deadline.remaining(), SUB_SLICE);
        let fort = match find_min_border_fort(self.g, &s_exp, self.backend, slice) {
            Ok(SubSearch::Found(f)) => Some(f),
            Ok(SubSearch::Exhausted) => None,
            Ok(SubSearch::TimedOut) => closure_complement_fort(self.g, &s_exp),
            Err(e) => {
                if self.sub_error.is_none() {
                    self.sub_error = Some(e);
                }
                closure_complement_fort(self.g, &s_exp)
            }
        };
        let Some(fort) = fort else {
            return Vec::new();
        };
        self.next_fort += 1;
        vec![RowSpec {
            name: Some(format!("fort{}", self.next_fort)),
            terms: extended_fort_row(self.layout, fort.set()),
            sense: Sense::Ge,
            rhs: 1,
        }]
    }
}

/// Turn a master assignment whose expansion forces into an honest forcing
/// set: drop one neighbor per bought ball where propagation allows it, then
/// sweep once more for minimality.
fn realize_cert(g: &Graph, layout: &ExtendedLayout, values: &[i64]) -> VertexSet {
    let mut cert = expansion(g, layout, values);
    debug_assert!(is_zero_forcing_set(g, &cert));
    for &w in &layout.centers {
        if values[layout.z(w).unwrap()] != 1 {
            continue;
        }
        for &u in g.neighbors(w) {
            if !cert.contains(u) {
                continue;
            }
            let mut trial = cert.clone();
            trial.remove(u);
            if is_zero_forcing_set(g, &trial) {
                cert = trial;
                break;
            }
        }
    }
    for v in 0..g.n() {
        if cert.card() <= 1 {
            break;
        }
        if !cert.contains(v) {
            continue;
        }
        let mut trial = cert.clone();
        trial.remove(v);
        if is_zero_forcing_set(g, &trial) {
            cert = trial;
        }
    }
    cert
}

/// Exact forcing number via the extended cover.
pub fn solve_extended(
    g: &Graph,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, ModelError> {
    let start = Instant::now();
    if g.n() <= 1 {
        return Ok(trivial_outcome(g, start.elapsed()));
    }
    if g.m() == 0 {
        // No forces ever happen, so every vertex seeds itself.
        return Ok(SolveOutcome::optimal(
            g.n(),
            g.vertex_set(),
            start.elapsed(),
            SolveStats::default(),
        ));
    }
    let n = g.n();
    let deadline = Deadline::new(time_limit);
    let preseed_limit = clamp_limit(deadline.remaining(), PRESEED_TOTAL);
    let mut seeds = preseed_disjoint_min_forts(g, backend, preseed_limit)?;
    let mut seen: BTreeSet<VertexSet> = seeds.iter().map(|f| f.set().clone()).collect();
    for v in 0..n {
        // Complements of neighborhood closures are the forts the balls are
        // blind to; seeding them saves early separation rounds.
        if let Some(f) = closure_complement_fort(g, &g.closed_neighborhood(v)) {
            if seen.insert(f.set().clone()) {
                seeds.push(f);
            }
        }
    }
    let (mut master, layout) = build_extended_master(g, &seeds);
    let warm = extended_warm(g, &layout, &greedy_zfs(g));
    debug_assert!(warm.is_some(), "a graph with an edge has a forcing set with a force");

    let mut best_cert = greedy_zfs(g);
    let mut sep_cb = BorderFortSeparator {
        g,
        layout: &layout,
        backend,
        deadline,
        sub_error: None,
        next_fort: seeds.len(),
    };
    let mut improve = |_: &MilpModel, vals: &[i64]| -> Option<Vec<i64>> {
        let s_exp = expansion(g, &layout, vals);
        let cert = if compute_closure(g, &s_exp).is_full() {
            realize_cert(g, &layout, vals)
        } else {
            greedy_zfs_biased(g, &s_exp)
        };
        if cert.card() < best_cert.card() {
            best_cert = cert.clone();
        }
        extended_warm(g, &layout, &cert)
    };
    let sep = {
        let mut cbs: [&mut dyn SeparationCallback; 1] = [&mut sep_cb];
        solve_with_separation(
            &mut master,
            backend,
            &mut cbs,
            Some(&mut improve),
            warm,
            deadline.remaining(),
        )?
    };
    drop(improve);
    if let Some(e) = sep_cb.sub_error {
        return Err(e);
    }
    let stats = SolveStats {
        nodes: sep.nodes_total,
        cuts_added: sep.cuts_added,
        ..Default::default()
    };
    match sep.outcome.status {
        MilpStatus::Optimal => {
            let obj = sep.outcome.objective.expect("optimal solve carries an objective");
            let vals = sep.outcome.values.as_deref().expect("optimal solve carries values");
            let cert = realize_cert(g, &layout, vals);
            let cert = if cert.card() as i64 == obj {
                cert
            } else if best_cert.card() as i64 == obj {
                best_cert
            } else {
                // The bound is real but no matching set materialized; get
                // the certificate from the plain cover instead.
                let mut out = solve_fort_cover(
                    g,
                    FortSource::default(),
                    ConnectivityMode::None,
                    backend,
                    deadline.remaining(),
                )?;
                out.stats.nodes += stats.nodes;
                out.stats.cuts_added += stats.cuts_added;
                out.wall = start.elapsed();
                return Ok(out);
            };
            Ok(SolveOutcome::optimal(obj as usize, cert, start.elapsed(), stats))
        }
        MilpStatus::Timeout => Ok(SolveOutcome {
            status: SolveStatus::Timeout,
            best_value: Some(best_cert.card()),
            incumbent: Some(best_cert),
            lower_bound: sep.outcome.lower_bound.max(0) as usize,
            wall: start.elapsed(),
            stats,
        }),
        MilpStatus::Infeasible => Ok(SolveOutcome {
            status: SolveStatus::Infeasible,
            best_value: None,
            incumbent: None,
            lower_bound: 0,
            wall: start.elapsed(),
            stats,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fort::is_fort;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::milp::InternalBackend;
    use crate::solvers::brute_force_zf;
    use rand::{Rng, SeedableRng};

    fn value(out: &SolveOutcome) -> usize {
        assert_eq!(out.status, SolveStatus::Optimal);
        out.best_value.unwrap()
    }

    #[test]
    fn master_shape_on_the_star() {
        let g = gen_star(5).unwrap();
        let (model, layout) = build_extended_master(&g, &[]);
        assert_eq!(layout.centers(), &[0, 1, 2, 3, 4]);
        assert_eq!(model.n_vars(), 10);
        // The hub's ball swallows the graph, each leaf ball holds itself and
        // the hub: one some_ball row plus 5 + 4 * 2 clashes.
        assert_eq!(model.n_rows(), 14);
        assert_eq!(layout.ball(0).unwrap().card(), 5);
        assert_eq!(layout.ball(1).unwrap().card(), 2);
    }

    #[test]
    fn warm_lift_is_feasible() {
        for g in [gen_path(5).unwrap(), gen_cycle(6).unwrap(), gen_star(7).unwrap()] {
            let (model, layout) = build_extended_master(&g, &[]);
            let vals = extended_warm(&g, &layout, &greedy_zfs(&g)).unwrap();
            assert!(model.is_feasible(&vals));
        }
    }

    #[test]
    fn border_fort_minimizes_the_boundary() {
        let g = gen_cycle(4).unwrap();
        let b = InternalBackend;
        // With nothing to avoid, the whole cycle is a fort with no border.
        match find_min_border_fort(&g, &VertexSet::empty(4), &b, None).unwrap() {
            SubSearch::Found(f) => assert!(f.set().is_full()),
            other => panic!("expected a fort, got {other:?}"),
        }
        // Avoiding a vertex forces a genuine boundary of two.
        let avoid = VertexSet::singleton(4, 1);
        match find_min_border_fort(&g, &avoid, &b, None).unwrap() {
            SubSearch::Found(f) => {
                assert!(is_fort(&g, f.set()));
                assert!(f.set().is_disjoint_from(&avoid));
                let border = f
                    .set()
                    .iter()
                    .filter(|&v| g.neighbors(v).iter().any(|&a| !f.set().contains(a)))
                    .count();
                assert_eq!(border, 2);
            }
            other => panic!("expected a fort, got {other:?}"),
        }
    }

    #[test]
    fn border_search_detects_exhaustion() {
        let g = gen_path(4).unwrap();
        let avoid = VertexSet::singleton(4, 0);
        assert!(matches!(
            find_min_border_fort(&g, &avoid, &InternalBackend, None).unwrap(),
            SubSearch::Exhausted
        ));
    }

    #[test]
    fn known_forcing_numbers() {
        let b = InternalBackend;
        assert_eq!(value(&solve_extended(&gen_path(5).unwrap(), &b, None).unwrap()), 1);
        assert_eq!(value(&solve_extended(&gen_cycle(6).unwrap(), &b, None).unwrap()), 2);
        assert_eq!(value(&solve_extended(&gen_star(9).unwrap(), &b, None).unwrap()), 7);
        assert_eq!(value(&solve_extended(&gen_complete(4).unwrap(), &b, None).unwrap()), 3);
    }

    #[test]
    fn isolated_vertices_are_seeded_not_covered() {
        // A path with a loose end vertex: the ball trick must not pretend
        // the isolated vertex comes for free.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2)]).unwrap();
        let out = solve_extended(&g, &InternalBackend, None).unwrap();
        assert_eq!(value(&out), 2);
        assert!(out.incumbent.as_ref().unwrap().contains(3));

        // No edges at all: everything is pinned.
        let bare = Graph::from_edges(3, &[]).unwrap();
        let out = solve_extended(&bare, &InternalBackend, None).unwrap();
        assert_eq!(value(&out), 3);
        assert!(out.incumbent.as_ref().unwrap().is_full());
    }

    #[test]
    fn certificates_match_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let b = InternalBackend;
        for round in 0..10 {
            let n = rng.gen_range(3..=7);
            let mut edges = Vec::new();
            for v in 1..n {
                edges.push((rng.gen_range(0..v), v));
            }
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.25 && !edges.contains(&(u, v)) {
                        edges.push((u, v));
                    }
                }
            }
            // Every third graph gets a stray vertex to exercise the pins.
            let extra = usize::from(round % 3 == 0);
            let g = Graph::from_edges(n + extra, &edges).unwrap();
            let want = brute_force_zf(&g, None).best_value.unwrap();
            let out = solve_extended(&g, &b, None).unwrap();
            assert_eq!(value(&out), want);
            let set = out.incumbent.as_ref().unwrap();
            assert!(is_zero_forcing_set(&g, set));
            assert_eq!(set.card(), want);
        }
    }
}

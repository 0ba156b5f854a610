//! Fort-cover master problem and its lazy row generation.
//!
//! A set is zero forcing exactly when it intersects every fort, so the
//! forcing number is a set-covering optimum with exponentially many rows.
//! The master starts from a preseeded batch of pairwise-disjoint forts and
//! grows: every time it proposes a non-forcing set, some fort is untouched
//! and gets separated into a new row. Each added row cuts off the incumbent
//! that produced it, and there are finitely many forts, so the loop ends.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::forcing::compute_closure;
use crate::fort::{closure_complement_fort, greedy_minimal_fort, Fort};
use crate::graph::Graph;
use crate::milp::{
    solve_with_separation, MilpBackend, MilpModel, MilpStatus, RowSpec, SeparationCallback,
    SeparationOutcome, Sense,
};
use crate::models::connectivity::{build_mtz_master, mtz_warm_values, ConnectivityCut};
use crate::models::{
    cg_cut_from_witness, check_facet, greedy_connected_zfs, greedy_zfs,
    greedy_zfs_biased, master_outcome, s_set_of, trivial_outcome, ConnectivityMode, FacetMode,
    FacetVerdict, FortSource, FortStrategy, ModelError,
};
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use crate::solvers::Deadline;

/// Longest a single facet screen may run. Screens on small forts finish in
/// well under this; big ones rarely conclude at all and are not worth more.
const SCREEN_SLICE: Duration = Duration::from_millis(20);

/// Longest a single min-fort sub-solve may run, whether preseeding or
/// separating. A timed-out search degrades to a greedy fort; only row
/// quality suffers, never exactness.
pub(crate) const SUB_SLICE: Duration = Duration::from_secs(2);

/// Total preseeding allowance. Preseeding only accelerates the master, so it
/// must never eat a noticeable share of the real budget.
pub(crate) const PRESEED_TOTAL: Duration = Duration::from_secs(30);

/// `limit` clamped to `cap`, with `cap` standing in when there is no limit.
pub(crate) fn clamp_limit(limit: Option<Duration>, cap: Duration) -> Option<Duration> {
    Some(limit.map_or(cap, |r| r.min(cap)))
}

/// Result of an auxiliary search for a fort under side conditions.
#[derive(Clone, Debug)]
pub enum SubSearch {
    Found(Fort),
    /// No fort satisfies the conditions.
    Exhausted,
    /// The time budget ran out before the search concluded.
    TimedOut,
}

/// Set-covering master over `forts`: one binary per vertex, one `>= 1` row
/// per fort. Its optimum lower-bounds the forcing number; equality holds
/// once no fort is left uncovered.
pub fn build_fort_cover_master(g: &Graph, forts: &[Fort]) -> MilpModel {
    let mut model = MilpModel::new(format!("fort_cover_n{}", g.n()));
    for v in 0..g.n() {
        let s = model.add_binary(format!("s_{v}"));
        model.set_objective(s, 1);
    }
    for (i, fort) in forts.iter().enumerate() {
        let terms = fort.set().iter().map(|v| (v, 1)).collect();
        model.add_named_row(format!("fort{}", i + 1), terms, Sense::Ge, 1);
    }
    model
}

/// Smallest fort disjoint from `avoid`, as an integer program.
///
/// For every ordered adjacent pair `(v, w)` the guard row
/// `x_w - x_v + sum of x over N(w) - v >= 0` forbids the one pattern a fort
/// cannot contain: `w` outside with `v` its only inside neighbor. Vertices
/// in the closure of `avoid` are fixed to zero, not just `avoid` itself:
/// propagation never enters a fort it starts disjoint from, so any fort
/// missing `avoid` also misses the whole closure.
pub fn find_min_fort_ip(
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
    let mut model = MilpModel::new(format!("min_fort_n{n}"));
    for v in 0..n {
        let x = model.add_binary(format!("x_{v}"));
        model.set_objective(x, 1);
    }
    model.add_named_row("any", (0..n).map(|v| (v, 1)).collect(), Sense::Ge, 1);
    for v in 0..n {
        for &w in g.neighbors(v) {
            let mut terms = vec![(w, 1), (v, -1)];
            terms.extend(g.neighbors(w).iter().filter(|&&a| a != v).map(|&a| (a, 1)));
            model.add_named_row(format!("guard_{v}_{w}"), terms, Sense::Ge, 0);
        }
    }
    for v in cl.iter() {
        model.add_named_row(format!("fix_{v}"), vec![(v, 1)], Sense::Eq, 0);
    }
    // Warm start from a greedy minimal fort rather than the raw closure
    // complement: the tighter the incumbent, the harder the backend's budget
    // row prunes.
    let seed = greedy_minimal_fort(g, avoid).expect("closure is not full");
    let warm: Vec<i64> = (0..n).map(|v| i64::from(seed.set().contains(v))).collect();
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

/// Greedy batch of pairwise-disjoint minimum forts: each search avoids the
/// union of everything found so far. Disjoint rows give the master an
/// additive covering bound, which is what makes preseeding pay off.
pub fn preseed_disjoint_min_forts(
    g: &Graph,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<Vec<Fort>, ModelError> {
    let deadline = Deadline::new(time_limit);
    let mut forts: Vec<Fort> = Vec::new();
    let mut avoid = VertexSet::empty(g.n());
    while !deadline.exceeded() {
        let slice = clamp_limit(deadline.remaining(), SUB_SLICE);
        match find_min_fort_ip(g, &avoid, backend, slice)? {
            SubSearch::Found(f) => {
                avoid.union_with(f.set());
                forts.push(f);
            }
            SubSearch::Exhausted | SubSearch::TimedOut => break,
        }
    }
    Ok(forts)
}

/// Lazy fort rows for the cover master. When the incumbent's closure is not
/// everything, its complement is a fort the incumbent misses; the configured
/// strategy may find a better one, and the facet filter may sharpen the row
/// into a Chvatal-Gomory cut.
pub(crate) struct FortSeparator<'a> {
    g: &'a Graph,
    source: FortSource,
    backend: &'a dyn MilpBackend,
    deadline: Deadline,
    /// First sub-solve failure; the driver re-raises it after the loop, the
    /// separation itself continues on fallback rows.
    pub(crate) sub_error: Option<ModelError>,
    next_fort: usize,
    next_cg: usize,
}

impl<'a> FortSeparator<'a> {
    pub(crate) fn new(
        g: &'a Graph,
        source: FortSource,
        backend: &'a dyn MilpBackend,
        deadline: Deadline,
        preseeded: usize,
    ) -> Self {
        FortSeparator {
            g,
            source,
            backend,
            deadline,
            sub_error: None,
            next_fort: preseeded,
            next_cg: 0,
        }
    }

    fn record(&mut self, e: ModelError) {
        if self.sub_error.is_none() {
            self.sub_error = Some(e);
        }
    }

    /// A fort disjoint from `s`, or `None` when `s` forces. The sub-solve
    /// runs on a short slice; budget and backend failures degrade to the
    /// greedy minimal fort, which needs no solve and keeps the loop exact.
    fn candidate(&mut self, s: &VertexSet) -> Option<Fort> {
        match self.source.strategy {
            FortStrategy::ClosureComplement => closure_complement_fort(self.g, s),
            FortStrategy::GreedyMinimal => greedy_minimal_fort(self.g, s),
            FortStrategy::MinFortIp => {
                let slice = clamp_limit(self.deadline.remaining(), SUB_SLICE);
                match find_min_fort_ip(self.g, s, self.backend, slice) {
                    Ok(SubSearch::Found(f)) => Some(f),
                    Ok(SubSearch::Exhausted) => None,
                    Ok(SubSearch::TimedOut) => greedy_minimal_fort(self.g, s),
                    Err(e) => {
                        self.record(e);
                        greedy_minimal_fort(self.g, s)
                    }
                }
            }
        }
    }

    fn fort_row(&mut self, fort: &Fort) -> RowSpec {
        self.next_fort += 1;
        RowSpec {
            name: Some(format!("fort{}", self.next_fort)),
            terms: fort.set().iter().map(|v| (v, 1)).collect(),
            sense: Sense::Ge,
            rhs: 1,
        }
    }
}

impl SeparationCallback for FortSeparator<'_> {
    fn name(&self) -> &str {
        "fort"
    }

    fn separate(&mut self, _model: &MilpModel, values: &[i64]) -> Vec<RowSpec> {
        let s = s_set_of(self.g.n(), values);
        let Some(fort) = self.candidate(&s) else {
            return Vec::new();
        };
        let mut rows = Vec::new();
        let mut strengthened = false;
        if self.source.facet_mode != FacetMode::Off {
            // The screen is only an accelerator: give it a small slice so a
            // stubborn candidate cannot starve the master. A timed-out probe
            // degrades to Unknown and the plain row still goes in.
            let slice = self
                .deadline
                .remaining()
                .map_or(SCREEN_SLICE, |rem| rem.min(SCREEN_SLICE));
            let verdict = check_facet(
                self.g,
                &fort,
                self.source.facet_mode,
                self.backend,
                Some(slice),
            );
            match verdict {
                Ok(FacetVerdict::NotFacet { v, witnesses }) => {
                    match cg_cut_from_witness(self.g, &fort, v, &witnesses) {
                        Ok(support) => {
                            // The strengthened row implies the plain one for
                            // binaries, so it replaces it outright.
                            self.next_cg += 1;
                            rows.push(RowSpec {
                                name: Some(format!("cg{}", self.next_cg)),
                                terms: support.iter().map(|u| (u, 1)).collect(),
                                sense: Sense::Ge,
                                rhs: 2,
                            });
                            strengthened = true;
                        }
                        Err(_) => debug_assert!(false, "own witnesses always validate"),
                    }
                }
                Ok(FacetVerdict::Facet | FacetVerdict::Unknown) => {}
                Err(e) => self.record(e),
            }
        }
        if !strengthened {
            rows.push(self.fort_row(&fort));
        }
        if self.source.strategy == FortStrategy::ClosureComplement {
            // Each row here is weak, so one master solve should buy a whole
            // sheaf of them: growing any uncovered vertex into the closure
            // yields another complement fort, still disjoint from `s` and
            // strictly smaller than the first. Screening the lot would cost
            // more than the rows are worth; they go in plain.
            let mut seen = BTreeSet::new();
            seen.insert(fort.set().clone());
            for v in fort.set().to_vec() {
                let mut grown = s.clone();
                grown.insert(v);
                if let Some(extra) = closure_complement_fort(self.g, &grown) {
                    if seen.insert(extra.set().clone()) {
                        rows.push(self.fort_row(&extra));
                    }
                }
            }
        }
        rows
    }
}

/// Exact forcing number (or connected forcing number, per `connectivity`)
/// by lazy fort covering.
pub fn solve_fort_cover(
    g: &Graph,
    source: FortSource,
    connectivity: ConnectivityMode,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, ModelError> {
    let start = Instant::now();
    if g.n() <= 1 {
        return Ok(trivial_outcome(g, start.elapsed()));
    }
    if connectivity != ConnectivityMode::None && !g.is_connected() {
        return Err(ModelError::Disconnected);
    }
    let n = g.n();
    let deadline = Deadline::new(time_limit);
    let preseed_limit = clamp_limit(deadline.remaining(), PRESEED_TOTAL);
    let preseed = preseed_disjoint_min_forts(g, backend, preseed_limit)?;
    let mut fort_sep = FortSeparator::new(g, source, backend, deadline, preseed.len());

    let sep = match connectivity {
        ConnectivityMode::None => {
            let mut master = build_fort_cover_master(g, &preseed);
            let warm = lift_set(n, &greedy_zfs(g));
            let mut improve = |_: &MilpModel, vals: &[i64]| {
                Some(lift_set(n, &greedy_zfs_biased(g, &s_set_of(n, vals))))
            };
            let mut cbs: [&mut dyn SeparationCallback; 1] = [&mut fort_sep];
            solve_with_separation(
                &mut master,
                backend,
                &mut cbs,
                Some(&mut improve),
                Some(warm),
                deadline.remaining(),
            )?
        }
        ConnectivityMode::AbSeparator => {
            let mut master = build_fort_cover_master(g, &preseed);
            let warm = lift_set(n, &greedy_connected_zfs(g));
            let mut improve = |_: &MilpModel, vals: &[i64]| {
                let repaired = crate::models::greedy_connected_zfs_biased(g, &s_set_of(n, vals));
                Some(lift_set(n, &repaired))
            };
            let mut conn = ConnectivityCut::new(g);
            // Fort rows take precedence: connectivity is only separated for
            // candidates that already force.
            let mut cbs: [&mut dyn SeparationCallback; 2] = [&mut fort_sep, &mut conn];
            solve_with_separation(
                &mut master,
                backend,
                &mut cbs,
                Some(&mut improve),
                Some(warm),
                deadline.remaining(),
            )?
        }
        ConnectivityMode::Mtz => {
            let (mut master, layout) = build_mtz_master(g, &preseed);
            let warm = mtz_warm_values(g, &layout, &greedy_connected_zfs(g));
            let mut improve = |_: &MilpModel, vals: &[i64]| {
                let repaired = crate::models::greedy_connected_zfs_biased(g, &s_set_of(n, vals));
                Some(mtz_warm_values(g, &layout, &repaired))
            };
            let mut cbs: [&mut dyn SeparationCallback; 1] = [&mut fort_sep];
            solve_with_separation(
                &mut master,
                backend,
                &mut cbs,
                Some(&mut improve),
                Some(warm),
                deadline.remaining(),
            )?
        }
    };
    if let Some(e) = fort_sep.sub_error {
        return Err(e);
    }
    let outcome = finish(g, sep, start);
    if connectivity != ConnectivityMode::None && outcome.status == SolveStatus::Optimal {
        debug_assert!(g.is_connected_within(outcome.incumbent.as_ref().unwrap()));
    }
    Ok(outcome)
}

fn finish(g: &Graph, sep: SeparationOutcome, start: Instant) -> SolveOutcome {
    let stats = SolveStats {
        nodes: sep.nodes_total,
        cuts_added: sep.cuts_added,
        ..Default::default()
    };
    master_outcome(g, &sep.outcome, start.elapsed(), stats)
}

pub(crate) fn lift_set(n_vars: usize, s: &VertexSet) -> Vec<i64> {
    let mut vals = vec![0i64; n_vars];
    for v in s.iter() {
        vals[v] = 1;
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::is_zero_forcing_set;
    use crate::fort::is_fort;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::milp::InternalBackend;
    use crate::solvers::{bnb_connected, brute_force_zf};
    use rand::{Rng, SeedableRng};

    fn value(out: &SolveOutcome) -> usize {
        assert_eq!(out.status, SolveStatus::Optimal);
        out.best_value.unwrap()
    }

    #[test]
    fn master_is_a_plain_cover() {
        let g = gen_cycle(6).unwrap();
        let forts = vec![
            Fort::new(&g, VertexSet::from_iter(6, [0, 2, 4])).unwrap(),
            Fort::new(&g, VertexSet::from_iter(6, [1, 3, 5])).unwrap(),
        ];
        let master = build_fort_cover_master(&g, &forts);
        assert_eq!(master.n_vars(), 6);
        assert_eq!(master.n_rows(), 2);
        assert!(master.is_feasible(&[1, 1, 0, 0, 0, 0]));
        assert!(!master.is_feasible(&[1, 0, 0, 0, 1, 0]));
    }

    #[test]
    fn min_fort_on_small_graphs() {
        let b = InternalBackend;
        let star = gen_star(5).unwrap();
        let none = VertexSet::empty(5);
        match find_min_fort_ip(&star, &none, &b, None).unwrap() {
            SubSearch::Found(f) => {
                assert_eq!(f.card(), 2);
                assert!(!f.set().contains(0), "two leaves beat any fort with the hub");
            }
            other => panic!("expected a fort, got {other:?}"),
        }
        // Avoiding a leaf: forts survive among the other leaves.
        let avoid = VertexSet::singleton(5, 1);
        match find_min_fort_ip(&star, &avoid, &b, None).unwrap() {
            SubSearch::Found(f) => {
                assert_eq!(f.card(), 2);
                assert!(f.set().is_disjoint_from(&avoid));
            }
            other => panic!("expected a fort, got {other:?}"),
        }
    }

    #[test]
    fn closure_fixing_detects_exhaustion() {
        // A path endpoint forces everything, so no fort avoids it.
        let p4 = gen_path(4).unwrap();
        let avoid = VertexSet::singleton(4, 0);
        assert!(matches!(
            find_min_fort_ip(&p4, &avoid, &InternalBackend, None).unwrap(),
            SubSearch::Exhausted
        ));
    }

    #[test]
    fn preseed_splits_the_cycle() {
        let g = gen_cycle(6).unwrap();
        let forts = preseed_disjoint_min_forts(&g, &InternalBackend, None).unwrap();
        assert_eq!(forts.len(), 2);
        assert!(forts[0].set().is_disjoint_from(forts[1].set()));
        assert_eq!(forts[0].card() + forts[1].card(), 6);
    }

    #[test]
    fn known_forcing_numbers() {
        let b = InternalBackend;
        let src = FortSource::default();
        let plain = ConnectivityMode::None;
        assert_eq!(value(&solve_fort_cover(&gen_path(5).unwrap(), src, plain, &b, None).unwrap()), 1);
        assert_eq!(value(&solve_fort_cover(&gen_cycle(6).unwrap(), src, plain, &b, None).unwrap()), 2);
        assert_eq!(value(&solve_fort_cover(&gen_star(9).unwrap(), src, plain, &b, None).unwrap()), 7);
        assert_eq!(value(&solve_fort_cover(&gen_complete(5).unwrap(), src, plain, &b, None).unwrap()), 4);
    }

    #[test]
    fn known_connected_forcing_numbers() {
        let b = InternalBackend;
        let src = FortSource::default();
        for mode in [ConnectivityMode::Mtz, ConnectivityMode::AbSeparator] {
            assert_eq!(value(&solve_fort_cover(&gen_path(5).unwrap(), src, mode, &b, None).unwrap()), 1);
            assert_eq!(value(&solve_fort_cover(&gen_cycle(6).unwrap(), src, mode, &b, None).unwrap()), 2);
            // Leaves alone would do with one fewer, but they are scattered.
            assert_eq!(value(&solve_fort_cover(&gen_star(9).unwrap(), src, mode, &b, None).unwrap()), 8);
        }
    }

    #[test]
    fn disconnected_input_is_rejected_when_connectivity_is_on() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let got = solve_fort_cover(
            &g,
            FortSource::default(),
            ConnectivityMode::Mtz,
            &InternalBackend,
            None,
        );
        assert!(matches!(got, Err(ModelError::Disconnected)));
        // Plain covering is fine with components.
        let out = solve_fort_cover(
            &g,
            FortSource::default(),
            ConnectivityMode::None,
            &InternalBackend,
            None,
        )
        .unwrap();
        assert_eq!(value(&out), 2);
    }

    fn random_connected(rng: &mut impl Rng, n: usize) -> Graph {
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
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn every_strategy_agrees_with_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let b = InternalBackend;
        for _ in 0..8 {
            let n = rng.gen_range(3..=7);
            let g = random_connected(&mut rng, n);
            let want = brute_force_zf(&g, None).best_value.unwrap();
            for strategy in [
                FortStrategy::MinFortIp,
                FortStrategy::ClosureComplement,
                FortStrategy::GreedyMinimal,
            ] {
                for facets in [FacetMode::Off, FacetMode::Simplified] {
                    let src = FortSource::new(strategy, facets);
                    let out =
                        solve_fort_cover(&g, src, ConnectivityMode::None, &b, None).unwrap();
                    assert_eq!(value(&out), want, "strategy {strategy:?} facets {facets:?}");
                    assert!(is_zero_forcing_set(&g, out.incumbent.as_ref().unwrap()));
                }
            }
        }
    }

    #[test]
    fn connected_modes_agree_with_branch_and_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let b = InternalBackend;
        for _ in 0..6 {
            let n = rng.gen_range(3..=7);
            let g = random_connected(&mut rng, n);
            let want = bnb_connected(&g, None).unwrap().best_value.unwrap();
            for mode in [ConnectivityMode::Mtz, ConnectivityMode::AbSeparator] {
                let out = solve_fort_cover(&g, FortSource::default(), mode, &b, None).unwrap();
                assert_eq!(value(&out), want, "mode {mode:?}");
                let set = out.incumbent.as_ref().unwrap();
                assert!(is_zero_forcing_set(&g, set));
                assert!(g.is_connected_within(set));
            }
        }
    }

    #[test]
    fn timeout_keeps_an_honest_incumbent() {
        let g = gen_complete(20).unwrap();
        let out = solve_fort_cover(
            &g,
            FortSource::default(),
            ConnectivityMode::None,
            &InternalBackend,
            Some(Duration::from_millis(1)),
        )
        .unwrap();
        assert_eq!(out.status, SolveStatus::Timeout);
        let set = out.incumbent.as_ref().expect("warm start survives");
        assert!(is_zero_forcing_set(&g, set));
        assert!(out.lower_bound <= out.best_value.unwrap());
    }

    #[test]
    fn separated_forts_are_forts() {
        let g = gen_cycle(8).unwrap();
        let deadline = Deadline::new(None);
        let mut sep = FortSeparator::new(&g, FortSource::default(), &InternalBackend, deadline, 0);
        let master = build_fort_cover_master(&g, &[]);
        let vals = lift_set(8, &VertexSet::singleton(8, 0));
        let rows = sep.separate(&master, &vals);
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        let f = VertexSet::from_iter(8, row.terms.iter().map(|&(v, _)| v));
        assert!(is_fort(&g, &f));
        assert!(!f.contains(0), "the row must cut off the incumbent");
    }
}

//! Builders and drivers for the integer programming formulations.
//!
//! Five families cover the solver surface:
//! - infection: chronology variables timestamp every force, giving the
//!   forcing number and its timestep-bounded variant directly
//!   ([`solve_infection`], [`solve_bounded_timestep`]);
//! - fort covering: a set-covering master over lazily separated fort rows
//!   ([`solve_fort_cover`] with connectivity off), with three ways to find a
//!   violated fort ([`FortStrategy`]);
//! - facet filtering: candidate fort rows are tested for facet-ness and
//!   replaced by a Chvatal-Gomory strengthening when they fail
//!   ([`check_facet`], [`cg_cut_from_witness`]);
//! - the extended cover with neighborhood variables and border-fort
//!   separation ([`solve_extended`]);
//! - connected forcing: the fort-cover master with static MTZ spanning-tree
//!   rows or lazy a,b-separator rows ([`solve_fort_cover`] with connectivity
//!   on).
//!
//! Every model is a plain [`crate::milp::MilpModel`] and runs on any
//! [`crate::milp::MilpBackend`]; the drivers add warm starts from the greedy
//! heuristics below and map results into [`crate::outcome::SolveOutcome`].

mod connectivity;
mod extended;
mod facet;
mod fort_cover;
mod infection;

pub use connectivity::{build_mtz_master, find_minimal_ab_separator, MtzLayout};
pub use extended::{build_extended_master, find_min_border_fort, solve_extended, ExtendedLayout};
pub use facet::{cg_cut_from_witness, check_facet, FacetVerdict, WitnessError};
pub use fort_cover::{
    build_fort_cover_master, find_min_fort_ip, preseed_disjoint_min_forts, solve_fort_cover,
    SubSearch,
};
pub use infection::{
    build_infection_model, solve_bounded_timestep, solve_infection, InfectionLayout,
};

use crate::forcing::is_zero_forcing_set;
use crate::graph::Graph;
use crate::milp::{MilpError, MilpOutcome, MilpStatus};
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use std::time::Duration;

/// How the fort-cover driver finds a violated fort for the current master
/// solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FortStrategy {
    /// Solve the auxiliary minimum-fort integer program.
    MinFortIp,
    /// Take complements of the closure and of its one-vertex growths:
    /// the cheapest and weakest rows, so they are added by the sheaf.
    ClosureComplement,
    /// Grow the closure to a maximal non-forcing set; its complement is an
    /// inclusion-minimal fort found without a sub-solve.
    GreedyMinimal,
}

/// Whether separated forts are screened for facet-ness before being added,
/// and how hard the screen tries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FacetMode {
    Off,
    /// Look for a violating witness family of at most two forts. Cheap but
    /// inconclusive when it finds none.
    Simplified,
    /// Full check: up to one witness fort per member of the candidate.
    Full,
}

/// Fort generation policy for [`solve_fort_cover`]: a strategy plus optional
/// facet filtering applied to whatever the strategy returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FortSource {
    pub strategy: FortStrategy,
    pub facet_mode: FacetMode,
}

impl FortSource {
    pub fn new(strategy: FortStrategy, facet_mode: FacetMode) -> Self {
        FortSource { strategy, facet_mode }
    }
}

impl Default for FortSource {
    fn default() -> Self {
        FortSource::new(FortStrategy::MinFortIp, FacetMode::Off)
    }
}

/// How [`solve_fort_cover`] enforces connectivity of the chosen set. With
/// anything other than `None` the optimum is the connected forcing number.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConnectivityMode {
    None,
    /// Static spanning-arborescence rows in the master.
    Mtz,
    /// Lazy minimal a,b-separator rows, added only for fort-feasible but
    /// disconnected incumbents.
    AbSeparator,
}

/// Errors from the model drivers. Backend problems pass through unchanged.
#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error(transparent)]
    Milp(#[from] MilpError),
    #[error("connected forcing requires a connected graph")]
    Disconnected,
}

/// The selected vertices of a master solution; `s` variables occupy ids
/// `0..n` in every model built here.
pub(crate) fn s_set_of(n: usize, values: &[i64]) -> VertexSet {
    VertexSet::from_iter(n, (0..n).filter(|&v| values[v] == 1))
}

/// Graphs with at most one vertex need no model: the whole vertex set is the
/// unique minimum for both the plain and the connected problem.
pub(crate) fn trivial_outcome(g: &Graph, wall: Duration) -> SolveOutcome {
    debug_assert!(g.n() <= 1);
    SolveOutcome::optimal(g.n(), g.vertex_set(), wall, SolveStats::default())
}

/// Map a backend result into a solve outcome, reading the selected set from
/// the `s` prefix of the values.
pub(crate) fn master_outcome(
    g: &Graph,
    out: &MilpOutcome,
    wall: Duration,
    stats: SolveStats,
) -> SolveOutcome {
    let incumbent = out.values.as_deref().map(|v| s_set_of(g.n(), v));
    match out.status {
        MilpStatus::Optimal => {
            let value = out.objective.expect("optimal backend result has an objective");
            let set = incumbent.expect("optimal backend result has values");
            debug_assert!(is_zero_forcing_set(g, &set));
            SolveOutcome::optimal(value as usize, set, wall, stats)
        }
        MilpStatus::Timeout => SolveOutcome {
            status: SolveStatus::Timeout,
            best_value: out.objective.map(|o| o as usize),
            incumbent,
            lower_bound: out.lower_bound.max(0) as usize,
            wall,
            stats,
        },
        MilpStatus::Infeasible => SolveOutcome {
            status: SolveStatus::Infeasible,
            best_value: None,
            incumbent: None,
            lower_bound: 0,
            wall,
            stats,
        },
    }
}

/// Shrink from the full vertex set, dropping vertices in `order` whenever
/// the remainder still satisfies `keep`. Deterministic for a fixed order;
/// never shrinks below one vertex.
fn greedy_shrink(
    g: &Graph,
    order: impl IntoIterator<Item = usize>,
    mut keep: impl FnMut(&VertexSet) -> bool,
) -> VertexSet {
    let mut s = g.vertex_set();
    for v in order {
        if s.card() <= 1 {
            break;
        }
        let mut trial = s.clone();
        trial.remove(v);
        if keep(&trial) {
            s = trial;
        }
    }
    s
}

/// Removal order that tries master-rejected vertices first, so greedy
/// repairs stay close to the relaxation's choice.
pub(crate) fn biased_order(n: usize, selected: &VertexSet) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).filter(|&v| !selected.contains(v)).collect();
    order.extend(selected.iter());
    order
}

/// A minimal (not minimum) zero forcing set, used as a warm start.
pub fn greedy_zfs(g: &Graph) -> VertexSet {
    greedy_shrink(g, 0..g.n(), |s| is_zero_forcing_set(g, s))
}

pub(crate) fn greedy_zfs_biased(g: &Graph, selected: &VertexSet) -> VertexSet {
    greedy_shrink(g, biased_order(g.n(), selected), |s| is_zero_forcing_set(g, s))
}

/// A minimal connected zero forcing set; requires a connected graph.
pub fn greedy_connected_zfs(g: &Graph) -> VertexSet {
    debug_assert!(g.is_connected());
    greedy_shrink(g, 0..g.n(), |s| {
        g.is_connected_within(s) && is_zero_forcing_set(g, s)
    })
}

pub(crate) fn greedy_connected_zfs_biased(g: &Graph, selected: &VertexSet) -> VertexSet {
    greedy_shrink(g, biased_order(g.n(), selected), |s| {
        g.is_connected_within(s) && is_zero_forcing_set(g, s)
    })
}

/// A minimal forcing set whose propagation finishes within `t` rounds.
pub(crate) fn greedy_bounded_zfs(g: &Graph, t: usize) -> VertexSet {
    greedy_shrink(g, 0..g.n(), |s| {
        crate::forcing::propagation_time(g, s).is_some_and(|p| p <= t)
    })
}

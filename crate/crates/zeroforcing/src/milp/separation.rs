use super::{MilpBackend, MilpError, MilpModel, MilpOutcome, MilpStatus, Sense, VarId};
use std::time::{Duration, Instant};

/// A row produced by a separation callback.
pub struct RowSpec {
    pub name: Option<String>,
    pub terms: Vec<(VarId, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// Finds constraints violated by a candidate integer solution. A callback is
/// the lazy-constraint half of a formulation whose full row set is too large
/// to write down (fort covers, connectivity separators).
pub trait SeparationCallback {
    fn name(&self) -> &str;

    /// Returns rows violated by `values`, or an empty vector when the
    /// candidate satisfies everything this callback is responsible for.
    fn separate(&mut self, model: &MilpModel, values: &[i64]) -> Vec<RowSpec>;
}

pub struct SeparationOutcome {
    pub outcome: MilpOutcome,
    pub cuts_added: u64,
    /// Master solves performed, including the final clean one.
    pub iterations: u64,
    /// Branch-and-bound nodes summed over every master solve.
    pub nodes_total: u64,
}

/// Repeatedly solves `model`, asking the callbacks (in order, first
/// non-empty answer wins) for violated rows after every optimal master
/// solution. Terminates when a master optimum satisfies every callback; that
/// point is optimal for the full formulation because each master is a
/// relaxation of it.
///
/// `improve` may turn a master solution into a solution feasible for the
/// full formulation (typically by a combinatorial repair); the best repaired
/// point is carried as the warm start and reported on timeout, since master
/// incumbents can violate rows that were never generated.
pub fn solve_with_separation(
    model: &mut MilpModel,
    backend: &dyn MilpBackend,
    callbacks: &mut [&mut dyn SeparationCallback],
    mut improve: Option<&mut dyn FnMut(&MilpModel, &[i64]) -> Option<Vec<i64>>>,
    warm: Option<Vec<i64>>,
    time_limit: Option<Duration>,
) -> Result<SeparationOutcome, MilpError> {
    let start = Instant::now();
    let mut warm = warm;
    debug_assert!(warm.as_deref().is_none_or(|w| model.is_feasible(w)));
    let mut cuts_added = 0u64;
    let mut iterations = 0u64;
    let mut nodes_total = 0u64;
    let mut best_lb = super::naive_lower_bound(model);

    loop {
        let remaining = match time_limit {
            Some(limit) => {
                let left = limit.saturating_sub(start.elapsed());
                if left.is_zero() {
                    return Ok(SeparationOutcome {
                        outcome: timeout_outcome(model, warm, best_lb),
                        cuts_added,
                        iterations,
                        nodes_total,
                    });
                }
                Some(left)
            }
            None => None,
        };
        let master = backend.solve(model, warm.as_deref(), remaining)?;
        iterations += 1;
        nodes_total += master.nodes;
        best_lb = best_lb.max(master.lower_bound);
        match master.status {
            MilpStatus::Infeasible => {
                return Ok(SeparationOutcome {
                    outcome: master,
                    cuts_added,
                    iterations,
                    nodes_total,
                });
            }
            MilpStatus::Timeout => {
                return Ok(SeparationOutcome {
                    outcome: timeout_outcome(model, warm, best_lb),
                    cuts_added,
                    iterations,
                    nodes_total,
                });
            }
            MilpStatus::Optimal => {}
        }
        let values = master.values.as_deref().expect("optimal master has values");

        let mut added = false;
        for callback in callbacks.iter_mut() {
            let rows = callback.separate(model, values);
            if rows.is_empty() {
                continue;
            }
            for row in rows {
                cuts_added += 1;
                match row.name {
                    Some(name) => model.add_named_row(name, row.terms, row.sense, row.rhs),
                    None => model.add_row(row.terms, row.sense, row.rhs),
                };
            }
            added = true;
            break;
        }
        if !added {
            // The master optimum satisfies every callback, so it solves the
            // full formulation.
            return Ok(SeparationOutcome {
                outcome: master,
                cuts_added,
                iterations,
                nodes_total,
            });
        }
        if let Some(imp) = improve.as_mut() {
            if let Some(repaired) = imp(model, values) {
                debug_assert!(model.is_feasible(&repaired));
                let obj = model.objective_of(&repaired);
                let keep = match &warm {
                    Some(w) => obj < model.objective_of(w),
                    None => true,
                };
                if keep {
                    warm = Some(repaired);
                }
            }
        }
    }
}

fn timeout_outcome(model: &MilpModel, warm: Option<Vec<i64>>, best_lb: i64) -> MilpOutcome {
    let objective = warm.as_deref().map(|w| model.objective_of(w));
    MilpOutcome {
        status: MilpStatus::Timeout,
        objective,
        values: warm,
        lower_bound: best_lb.min(objective.unwrap_or(i64::MAX)),
        nodes: 0,
    }
}

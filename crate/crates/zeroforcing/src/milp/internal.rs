use super::{naive_lower_bound, MilpBackend, MilpError, MilpModel, MilpOutcome, MilpStatus, Sense};
use std::collections::VecDeque;
use std::time::{Duration, Instant};

/// Self-contained exact solver: depth-first branch and bound over variable
/// bounds with integer bounds propagation at every node.
///
/// There is no LP relaxation. The node lower bound is the objective with
/// every variable at its cheapest bound, strengthened by a packing argument
/// over covering rows (`sum x_j >= k` on binaries): variable-disjoint
/// unsatisfied covers must each be paid for separately. That bound is what
/// makes set-cover style masters (fort covers) tractable; models without
/// covering rows lean on propagation conflicts and a warm-start incumbent.
/// The incumbent objective is also propagated as a budget row
/// (`sum c_j x_j <= best - 1`), which turns a good warm start into hard
/// domain filtering instead of a mere pruning test.
pub struct InternalBackend;

/// Internal row form: `sum a_j x_j <= rhs`.
struct NormRow {
    terms: Vec<(usize, i64)>,
    rhs: i64,
}

struct Prepared {
    obj: Vec<i64>,
    rows: Vec<NormRow>,
    /// Rows touching each variable, for the propagation queue.
    cols: Vec<Vec<usize>>,
    /// Rows of the shape `sum -x_j <= -k` over binaries (covers), candidates
    /// for the packing bound.
    covers: Vec<usize>,
    binary: Vec<bool>,
    /// Index of the budget row `sum c_j x_j <= best - 1`. Its rhs tracks the
    /// incumbent during the search so propagation can spend the objective.
    obj_row: Option<usize>,
}

fn prepare(model: &MilpModel) -> Prepared {
    let nv = model.n_vars();
    let mut rows = Vec::new();
    for row in model.rows() {
        match row.sense {
            Sense::Le => rows.push(NormRow {
                terms: row.terms.clone(),
                rhs: row.rhs,
            }),
            Sense::Ge => rows.push(NormRow {
                terms: row.terms.iter().map(|&(v, a)| (v, -a)).collect(),
                rhs: -row.rhs,
            }),
            Sense::Eq => {
                rows.push(NormRow {
                    terms: row.terms.clone(),
                    rhs: row.rhs,
                });
                rows.push(NormRow {
                    terms: row.terms.iter().map(|&(v, a)| (v, -a)).collect(),
                    rhs: -row.rhs,
                });
            }
        }
    }
    let binary: Vec<bool> = model
        .vars()
        .iter()
        .map(|v| v.kind == super::VarKind::Binary)
        .collect();
    let obj: Vec<i64> = model.vars().iter().map(|v| v.objective).collect();
    // The packing bound must only see the model's own rows, so covers are
    // collected before the budget row goes in.
    let covers = rows
        .iter()
        .enumerate()
        .filter(|(_, row)| {
            row.rhs < 0
                && !row.terms.is_empty()
                && row.terms.iter().all(|&(v, a)| a == -1 && binary[v])
        })
        .map(|(r, _)| r)
        .collect();
    let obj_terms: Vec<(usize, i64)> = obj
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c != 0)
        .map(|(v, &c)| (v, c))
        .collect();
    let obj_row = (!obj_terms.is_empty()).then(|| {
        // Vacuous until there is an incumbent: rhs starts at the row's
        // maximum activity over the root bounds.
        let relaxed: i64 = obj_terms
            .iter()
            .map(|&(v, c)| {
                let (lo, hi) = model.vars()[v].kind.bounds();
                (c * lo).max(c * hi)
            })
            .sum();
        rows.push(NormRow {
            terms: obj_terms,
            rhs: relaxed,
        });
        rows.len() - 1
    });
    let mut cols = vec![Vec::new(); nv];
    for (r, row) in rows.iter().enumerate() {
        for &(v, _) in &row.terms {
            cols[v].push(r);
        }
    }
    Prepared {
        obj,
        rows,
        cols,
        covers,
        binary,
        obj_row,
    }
}

/// Queue-driven bounds tightening to a fixpoint. Returns `false` on a
/// detected conflict (some row cannot be satisfied within the bounds).
fn propagate(prep: &Prepared, lb: &mut [i64], ub: &mut [i64]) -> bool {
    let mut queue: VecDeque<usize> = (0..prep.rows.len()).collect();
    let mut queued = vec![true; prep.rows.len()];
    while let Some(r) = queue.pop_front() {
        queued[r] = false;
        let row = &prep.rows[r];
        let min_act: i64 = row
            .terms
            .iter()
            .map(|&(v, a)| if a > 0 { a * lb[v] } else { a * ub[v] })
            .sum();
        if min_act > row.rhs {
            return false;
        }
        for &(v, a) in &row.terms {
            if a > 0 {
                // a*x_v <= rhs - (min_act - a*lb_v)
                let new_ub = (row.rhs - min_act + a * lb[v]).div_euclid(a);
                if new_ub < ub[v] {
                    if new_ub < lb[v] {
                        return false;
                    }
                    ub[v] = new_ub;
                    for &r2 in &prep.cols[v] {
                        if !queued[r2] {
                            queued[r2] = true;
                            queue.push_back(r2);
                        }
                    }
                }
            } else {
                // a*x_v <= rhs - (min_act - a*ub_v), a < 0 flips to a lower bound
                let rest = row.rhs - min_act + a * ub[v];
                let new_lb = -rest.div_euclid(-a);
                if new_lb > lb[v] {
                    if new_lb > ub[v] {
                        return false;
                    }
                    lb[v] = new_lb;
                    for &r2 in &prep.cols[v] {
                        if !queued[r2] {
                            queued[r2] = true;
                            queue.push_back(r2);
                        }
                    }
                }
            }
        }
    }
    true
}

/// Objective bound for any completion within the given bounds: cheapest-bound
/// base plus the packing strengthening over unsatisfied covering rows.
fn lower_bound(prep: &Prepared, lb: &[i64], ub: &[i64], scratch_used: &mut [bool]) -> i64 {
    let base: i64 = prep
        .obj
        .iter()
        .enumerate()
        .map(|(v, &c)| (c * lb[v]).min(c * ub[v]))
        .sum();
    if prep.covers.is_empty() {
        return base;
    }
    scratch_used.iter_mut().for_each(|u| *u = false);
    // (need, free vars) per still-unsatisfied cover; greedily packed shortest
    // first so tight covers claim their variables early.
    let mut cands: Vec<(usize, i64, Vec<usize>)> = Vec::new();
    for &r in &prep.covers {
        let row = &prep.rows[r];
        let mut need = -row.rhs;
        let mut free = Vec::new();
        let mut negative_cost = false;
        for &(v, _) in &row.terms {
            if lb[v] == ub[v] {
                need -= lb[v];
            } else {
                free.push(v);
                negative_cost |= prep.obj[v] < 0;
            }
        }
        // Negative-cost members were already charged at their upper bound in
        // the base term, so the cover adds nothing provable.
        if need <= 0 || negative_cost || free.len() < need as usize {
            continue;
        }
        cands.push((free.len(), need, free));
    }
    cands.sort_by(|a, b| (a.0, &a.2).cmp(&(b.0, &b.2)));
    let mut extra = 0i64;
    'cover: for (_, need, free) in &cands {
        for &v in free {
            if scratch_used[v] {
                continue 'cover;
            }
        }
        let mut costs: Vec<i64> = free.iter().map(|&v| prep.obj[v]).collect();
        costs.sort_unstable();
        extra += costs[..*need as usize].iter().sum::<i64>();
        for &v in free {
            scratch_used[v] = true;
        }
    }
    base + extra
}

struct Node {
    lb: Box<[i64]>,
    ub: Box<[i64]>,
    /// Bound inherited from the parent, checked against the incumbent before
    /// the node is expanded.
    bound: i64,
}

impl MilpBackend for InternalBackend {
    fn name(&self) -> &str {
        "internal"
    }

    fn solve(
        &self,
        model: &MilpModel,
        warm: Option<&[i64]>,
        time_limit: Option<Duration>,
    ) -> Result<MilpOutcome, MilpError> {
        let start = Instant::now();
        let mut prep = prepare(model);
        let nv = model.n_vars();

        let mut best: Option<(i64, Vec<i64>)> = None;
        if let Some(w) = warm {
            debug_assert!(model.is_feasible(w), "warm start must be feasible");
            if model.is_feasible(w) {
                best = Some((model.objective_of(w), w.to_vec()));
            }
        }
        if let (Some(oi), Some((obj, _))) = (prep.obj_row, &best) {
            prep.rows[oi].rhs = obj - 1;
        }

        let root_lb: Vec<i64> = model.vars().iter().map(|v| v.kind.bounds().0).collect();
        let root_ub: Vec<i64> = model.vars().iter().map(|v| v.kind.bounds().1).collect();
        let mut stack = vec![Node {
            lb: root_lb.into_boxed_slice(),
            ub: root_ub.into_boxed_slice(),
            bound: naive_lower_bound(model),
        }];
        let mut scratch_used = vec![false; nv];
        let mut scratch_score = vec![0u32; nv];
        let mut nodes = 0u64;

        while let Some(mut node) = stack.pop() {
            nodes += 1;
            if nodes % 64 == 0 {
                if let Some(limit) = time_limit {
                    if start.elapsed() >= limit {
                        stack.push(node);
                        return Ok(timeout_outcome(model, best, &stack, nodes));
                    }
                }
            }
            if let Some((obj, _)) = &best {
                if node.bound >= *obj {
                    continue;
                }
            }
            if !propagate(&prep, &mut node.lb, &mut node.ub) {
                continue;
            }
            let bound = lower_bound(&prep, &node.lb, &node.ub, &mut scratch_used);
            if let Some((obj, _)) = &best {
                if bound >= *obj {
                    continue;
                }
            }

            // Branch on the free variable hitting the most rows that are not
            // yet surely satisfied; binaries take priority over ranges. The
            // budget row is left out: once every model row holds under any
            // completion, the cheapest completion below either beats the
            // incumbent or proves the whole box useless.
            scratch_score.iter_mut().for_each(|s| *s = 0);
            let mut any_active = false;
            for (r, row) in prep.rows.iter().enumerate() {
                if Some(r) == prep.obj_row {
                    continue;
                }
                let max_act: i64 = row
                    .terms
                    .iter()
                    .map(|&(v, a)| if a > 0 { a * node.ub[v] } else { a * node.lb[v] })
                    .sum();
                if max_act <= row.rhs {
                    continue;
                }
                any_active = true;
                for &(v, _) in &row.terms {
                    if node.lb[v] < node.ub[v] {
                        scratch_score[v] += 1;
                    }
                }
            }
            let mut pick: Option<(bool, u32, usize)> = None;
            if any_active {
                for v in 0..nv {
                    if scratch_score[v] == 0 {
                        continue;
                    }
                    let key = (prep.binary[v], scratch_score[v]);
                    let better = match pick {
                        None => true,
                        Some((b, s, _)) => key > (b, s),
                    };
                    if better {
                        pick = Some((key.0, key.1, v));
                    }
                }
            }
            let Some((_, _, v)) = pick else {
                // Every row is satisfied by any completion; finish each free
                // variable at its cheapest bound.
                let values: Vec<i64> = (0..nv)
                    .map(|j| {
                        if prep.obj[j] * node.lb[j] <= prep.obj[j] * node.ub[j] {
                            node.lb[j]
                        } else {
                            node.ub[j]
                        }
                    })
                    .collect();
                let obj = model.objective_of(&values);
                debug_assert!(model.is_feasible(&values));
                if best.as_ref().is_none_or(|(b, _)| obj < *b) {
                    best = Some((obj, values));
                    if let Some(oi) = prep.obj_row {
                        prep.rows[oi].rhs = obj - 1;
                    }
                }
                continue;
            };

            // Children share the parent's propagated bound. The preferred
            // child goes on top of the stack: high half first for binaries
            // (covers want members), low half first for ranges.
            let mid = (node.lb[v] + node.ub[v]).div_euclid(2);
            let mut low = Node {
                lb: node.lb.clone(),
                ub: node.ub.clone(),
                bound,
            };
            low.ub[v] = mid;
            let mut high = Node {
                lb: node.lb,
                ub: node.ub,
                bound,
            };
            high.lb[v] = mid + 1;
            if prep.binary[v] {
                stack.push(low);
                stack.push(high);
            } else {
                stack.push(high);
                stack.push(low);
            }
        }

        Ok(match best {
            Some((obj, values)) => MilpOutcome {
                status: MilpStatus::Optimal,
                objective: Some(obj),
                values: Some(values),
                lower_bound: obj,
                nodes,
            },
            None => MilpOutcome {
                status: MilpStatus::Infeasible,
                objective: None,
                values: None,
                lower_bound: naive_lower_bound(model),
                nodes,
            },
        })
    }
}

fn timeout_outcome(
    model: &MilpModel,
    best: Option<(i64, Vec<i64>)>,
    open: &[Node],
    nodes: u64,
) -> MilpOutcome {
    // The optimum lies in some open subtree or equals the incumbent.
    let mut lb = best
        .as_ref()
        .map(|(obj, _)| *obj)
        .unwrap_or_else(|| naive_lower_bound(model));
    for node in open {
        lb = lb.min(node.bound);
    }
    let (objective, values) = match best {
        Some((obj, vals)) => (Some(obj), Some(vals)),
        None => (None, None),
    };
    MilpOutcome {
        status: MilpStatus::Timeout,
        objective,
        values,
        lower_bound: lb,
        nodes,
    }
}

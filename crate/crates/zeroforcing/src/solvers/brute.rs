use super::{Deadline, SolverError};
use crate::forcing::compute_closure;
use crate::graph::Graph;
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use std::time::{Duration, Instant};

/// `k`-subsets of `0..n` in colexicographic order. Colex makes the sequence
/// resumable from any point, so size classes split into independent chunks.
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    started: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            cur: (0..k).collect(),
            started: false,
        }
    }

    /// Advance to the next combination; returns the current one as a slice.
    pub fn next(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            if self.cur.len() > self.n {
                return None;
            }
            return Some(&self.cur);
        }
        let k = self.cur.len();
        // Find the first position that can move right, then reset the prefix.
        let mut i = 0;
        loop {
            if i == k {
                return None;
            }
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for (j, slot) in self.cur[..i].iter_mut().enumerate() {
                    *slot = j;
                }
                return Some(&self.cur);
            }
            i += 1;
        }
    }
}

fn exhaustive_search(
    g: &Graph,
    accept: impl Fn(&VertexSet) -> bool,
    deadline: Deadline,
) -> SolveOutcome {
    let start = Instant::now();
    let n = g.n();
    let mut stats = SolveStats::default();
    for k in 0..=n {
        let mut combos = Combinations::new(n, k);
        while let Some(c) = combos.next() {
            if stats.sets_examined % 1024 == 0 && deadline.exceeded() {
                return SolveOutcome {
                    status: SolveStatus::Timeout,
                    best_value: None,
                    incumbent: None,
                    // Every size below k was fully exhausted.
                    lower_bound: k,
                    wall: start.elapsed(),
                    stats,
                };
            }
            stats.sets_examined += 1;
            let z = VertexSet::from_iter(n, c.iter().copied());
            if accept(&z) {
                return SolveOutcome::optimal(k, z, start.elapsed(), stats);
            }
        }
    }
    // Nothing of any size was accepted; only reachable for constrained
    // variants, since the full vertex set always forces.
    SolveOutcome {
        status: SolveStatus::Infeasible,
        best_value: None,
        incumbent: None,
        lower_bound: n + 1,
        wall: start.elapsed(),
        stats,
    }
}

/// Z(g) by checking all vertex subsets in ascending size, colex within each
/// size; the first hit is the optimum.
pub fn brute_force_zf(g: &Graph, time_limit: Option<Duration>) -> SolveOutcome {
    exhaustive_search(
        g,
        |z| compute_closure(g, z).is_full(),
        Deadline::new(time_limit),
    )
}

/// Connected forcing number Zc(g): like `brute_force_zf` but only subsets
/// inducing a connected subgraph count.
pub fn brute_force_czf(
    g: &Graph,
    time_limit: Option<Duration>,
) -> Result<SolveOutcome, SolverError> {
    if !g.is_connected() {
        return Err(SolverError::DisconnectedGraph);
    }
    Ok(exhaustive_search(
        g,
        |z| g.is_connected_within(z) && compute_closure(g, z).is_full(),
        Deadline::new(time_limit),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::graph::Graph;

    #[test]
    fn colex_order() {
        let mut c = Combinations::new(4, 2);
        let mut got = Vec::new();
        while let Some(s) = c.next() {
            got.push(s.to_vec());
        }
        assert_eq!(
            got,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3],
            ]
        );
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next(), Some(&[][..]));
        assert_eq!(empty.next(), None);
        let mut overfull = Combinations::new(2, 3);
        assert_eq!(overfull.next(), None);
    }

    #[test]
    fn known_small_values() {
        let cases: Vec<(Graph, usize)> = vec![
            (gen_path(6).unwrap(), 1),
            (gen_cycle(6).unwrap(), 2),
            (gen_complete(5).unwrap(), 4),
            (gen_star(7).unwrap(), 5),
        ];
        for (g, want) in cases {
            let out = brute_force_zf(&g, None);
            assert_eq!(out.status, SolveStatus::Optimal);
            assert_eq!(out.best_value, Some(want));
            let z = out.incumbent.unwrap();
            assert_eq!(z.card(), want);
            assert!(compute_closure(&g, &z).is_full());
        }
    }

    #[test]
    fn connected_variant_dominates() {
        // Zc of a path is still 1, but on a cycle plus chord it can exceed Z.
        let g = gen_path(5).unwrap();
        let out = brute_force_czf(&g, None).unwrap();
        assert_eq!(out.best_value, Some(1));
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            brute_force_czf(&g, None).unwrap_err(),
            SolverError::DisconnectedGraph
        );
    }

    #[test]
    fn czf_incumbent_is_connected() {
        let g = gen_cycle(7).unwrap();
        let out = brute_force_czf(&g, None).unwrap();
        let z = out.incumbent.unwrap();
        assert!(g.is_connected_within(&z));
        assert_eq!(out.best_value, Some(2));
    }

    #[test]
    fn timeout_reports_exhausted_sizes() {
        let g = gen_complete(16).unwrap();
        let out = brute_force_zf(&g, Some(Duration::ZERO));
        assert_eq!(out.status, SolveStatus::Timeout);
        assert_eq!(out.best_value, None);
        assert!(out.lower_bound <= 15);
    }
}

use super::{Deadline, SolverError};
use crate::forcing::compute_closure;
use crate::graph::Graph;
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use std::time::{Duration, Instant};

struct Search<'g> {
    g: &'g Graph,
    best: usize,
    incumbent: VertexSet,
    nodes: u64,
    deadline: Deadline,
    timed_out: bool,
}

/// Connected forcing number Zc(g) by branch-and-bound over connected induced
/// subgraphs.
///
/// Reverse search: starting from the full candidate set, repeatedly pick a
/// candidate vertex adjacent to the growing set `S` (any vertex while `S` is
/// empty) and branch on excluding or including it, so every connected induced
/// subgraph smaller than the incumbent shows up at exactly one leaf. Leaves
/// (no candidates left) are tested for being forcing sets. The incumbent
/// bound is shared globally across the whole tree.
pub fn bnb_connected(g: &Graph, time_limit: Option<Duration>) -> Result<SolveOutcome, SolverError> {
    if !g.is_connected() {
        return Err(SolverError::DisconnectedGraph);
    }
    let start = Instant::now();
    let n = g.n();
    let mut search = Search {
        g,
        // The full vertex set of a connected graph is a connected forcing
        // set, so it seeds the incumbent (and stays optimal for K_1).
        best: n,
        incumbent: g.vertex_set(),
        nodes: 0,
        deadline: Deadline::new(time_limit),
        timed_out: false,
    };
    let all = g.vertex_set();
    let empty = VertexSet::empty(n);
    recurse(&mut search, &all, &empty);
    let stats = SolveStats {
        nodes: search.nodes,
        ..Default::default()
    };
    if search.timed_out {
        return Ok(SolveOutcome {
            status: SolveStatus::Timeout,
            best_value: Some(search.best),
            incumbent: Some(search.incumbent),
            // Only the incumbent upper bound survives a cut-off search.
            lower_bound: if n == 0 { 0 } else { 1 },
            wall: start.elapsed(),
            stats,
        });
    }
    Ok(SolveOutcome::optimal(
        search.best,
        search.incumbent,
        start.elapsed(),
        stats,
    ))
}

fn recurse(search: &mut Search, candidates: &VertexSet, s: &VertexSet) {
    if search.timed_out {
        return;
    }
    search.nodes += 1;
    if search.nodes % 1024 == 0 && search.deadline.exceeded() {
        search.timed_out = true;
        return;
    }
    // Branch vertices: candidates adjacent to S, so S stays connected.
    let c = if s.is_empty() {
        candidates.clone()
    } else {
        let mut c = search.g.neighborhood_of_set(s);
        c.intersect_with(candidates);
        c
    };
    let Some(v) = c.first() else {
        let size = s.card();
        if size < search.best && compute_closure(search.g, s).is_full() {
            search.best = size;
            search.incumbent = s.clone();
        }
        return;
    };
    let mut rest = candidates.clone();
    rest.remove(v);
    recurse(search, &rest, s);
    if s.card() + 1 < search.best {
        let mut grown = s.clone();
        grown.insert(v);
        recurse(search, &rest, &grown);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::solvers::brute_force_czf;

    #[test]
    fn families() {
        let cases = vec![
            (gen_path(1).unwrap(), 1),
            (gen_path(6).unwrap(), 1),
            (gen_cycle(6).unwrap(), 2),
            (gen_complete(5).unwrap(), 4),
            (gen_star(7).unwrap(), 6),
        ];
        for (g, want) in cases {
            let out = bnb_connected(&g, None).unwrap();
            assert_eq!(out.status, SolveStatus::Optimal);
            assert_eq!(out.best_value, Some(want), "n = {}", g.n());
            let z = out.incumbent.unwrap();
            assert!(g.is_connected_within(&z));
            assert!(compute_closure(&g, &z).is_full());
        }
    }

    #[test]
    fn agrees_with_brute_force_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut tried = 0;
        while tried < 25 {
            let n = rng.gen_range(2..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.45 {
                        edges.push((u, v));
                    }
                }
            }
            let g = crate::graph::Graph::from_edges(n, &edges).unwrap();
            if !g.is_connected() {
                continue;
            }
            tried += 1;
            let bf = brute_force_czf(&g, None).unwrap().best_value.unwrap();
            let out = bnb_connected(&g, None).unwrap();
            assert_eq!(out.best_value, Some(bf));
        }
    }

    #[test]
    fn star_connected_forcing_needs_center() {
        // Leaves alone force (all but one of them suffice), but a connected
        // set must take the center and all but one leaf.
        let g = gen_star(9).unwrap();
        let out = bnb_connected(&g, None).unwrap();
        assert_eq!(out.best_value, Some(8));
        assert!(out.incumbent.unwrap().contains(0));
    }

    #[test]
    fn rejects_disconnected() {
        let g = crate::graph::Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            bnb_connected(&g, None).unwrap_err(),
            SolverError::DisconnectedGraph
        );
    }

    #[test]
    fn timeout_keeps_a_valid_incumbent() {
        // K20 has about 2^20 tree nodes, so the periodic deadline check is
        // guaranteed to fire before exhaustion.
        let g = gen_complete(20).unwrap();
        let out = bnb_connected(&g, Some(Duration::ZERO)).unwrap();
        assert_eq!(out.status, SolveStatus::Timeout);
        let z = out.incumbent.unwrap();
        assert!(compute_closure(&g, &z).is_full());
        assert!(out.lower_bound <= out.best_value.unwrap());
    }
}

//! The zero forcing color change rule and its closure.
//!
//! A colored vertex with exactly one uncolored neighbor forces that neighbor
//! to become colored. The closure `cl(S)` of a starting set `S` is the unique
//! fixed point of applying the rule until it stalls; `S` is a zero forcing
//! set when its closure is the whole vertex set.

use crate::graph::Graph;
use crate::set::VertexSet;

/// Closure of `z` under the color change rule, in `O(n + m)` time.
///
/// Keeps a stack of active vertices (colored, with exactly one uncolored
/// neighbor, tracked through a colored-neighbor counter per vertex); each pop
/// performs one force and activates at most the forced vertex plus its
/// colored neighbors.
pub fn compute_closure(g: &Graph, z: &VertexSet) -> VertexSet {
    let n = g.n();
    debug_assert_eq!(z.universe(), n);
    let mut colored = z.clone();
    // count[v] = number of colored neighbors of v, maintained for colored v.
    let mut count = vec![0usize; n];
    let mut stack = Vec::new();
    for v in z.iter() {
        let c = g.neighbors(v).iter().filter(|&&y| colored.contains(y)).count();
        count[v] = c;
        if c + 1 == g.degree(v) {
            stack.push(v);
        }
    }
    while let Some(u) = stack.pop() {
        if count[u] + 1 != g.degree(u) {
            // Someone else colored u's last uncolored neighbor in the
            // meantime; nothing left for u to force.
            continue;
        }
        let v = *g
            .neighbors(u)
            .iter()
            .find(|&&y| !colored.contains(y))
            .expect("active vertex has an uncolored neighbor");
        colored.insert(v);
        let mut c = 0;
        for &w in g.neighbors(v) {
            if colored.contains(w) {
                c += 1;
                count[w] += 1;
                if count[w] + 1 == g.degree(w) {
                    stack.push(w);
                }
            }
        }
        count[v] = c;
        if c + 1 == g.degree(v) {
            stack.push(v);
        }
    }
    colored
}

pub fn is_zero_forcing_set(g: &Graph, z: &VertexSet) -> bool {
    compute_closure(g, z).is_full()
}

/// One force: `forcer` colored `forced` at timestep `round`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Force {
    pub round: usize,
    pub forcer: usize,
    pub forced: usize,
}

/// Round-by-round record of a forcing process under simultaneous application
/// of the rule: in each round every active vertex fires at once.
#[derive(Clone, Debug)]
pub struct ForcingTrace {
    /// Forces in chronological order; within a round, ascending by forcer.
    pub forces: Vec<Force>,
    /// Timestep at which each vertex became colored: 0 for the initial set,
    /// `None` for vertices never colored.
    pub rounds: Vec<Option<usize>>,
    /// Final coloring, equal to `compute_closure(g, z)`.
    pub closure: VertexSet,
}

impl ForcingTrace {
    /// Number of rounds performed (the largest finite round).
    pub fn total_rounds(&self) -> usize {
        self.rounds.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Maximal chains of forces: vertex-disjoint paths, each rooted at an
    /// initially colored vertex and following forcer-to-forced links.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let n = self.rounds.len();
        let mut next = vec![None; n];
        for f in &self.forces {
            next[f.forcer] = Some(f.forced);
        }
        let mut chains = Vec::new();
        for start in 0..n {
            // Every chain is rooted at an initially colored vertex: a vertex
            // forces at most once, and nothing forces into round 0.
            if self.rounds[start] == Some(0) {
                let mut chain = vec![start];
                let mut cur = start;
                while let Some(nxt) = next[cur] {
                    chain.push(nxt);
                    cur = nxt;
                }
                chains.push(chain);
            }
        }
        chains
    }
}

/// Closure with a full trace. Each forced vertex records its lowest-id forcer
/// when several vertices could force it in the same round.
pub fn compute_closure_traced(g: &Graph, z: &VertexSet) -> ForcingTrace {
    let n = g.n();
    debug_assert_eq!(z.universe(), n);
    let mut colored = z.clone();
    let mut rounds = vec![None; n];
    for v in z.iter() {
        rounds[v] = Some(0);
    }
    let mut forces = Vec::new();
    let mut round = 0;
    loop {
        round += 1;
        let mut fired: Vec<Force> = Vec::new();
        for u in colored.iter() {
            let mut uncolored = g.neighbors(u).iter().filter(|&&y| !colored.contains(y));
            if let (Some(&v), None) = (uncolored.next(), uncolored.next()) {
                if !fired.iter().any(|f| f.forced == v) {
                    fired.push(Force {
                        round,
                        forcer: u,
                        forced: v,
                    });
                }
            }
        }
        if fired.is_empty() {
            break;
        }
        for f in &fired {
            colored.insert(f.forced);
            rounds[f.forced] = Some(round);
        }
        forces.extend(fired);
    }
    ForcingTrace {
        forces,
        rounds,
        closure: colored,
    }
}

/// Number of simultaneous rounds needed for `z` to color the whole graph,
/// or `None` when `z` is not a zero forcing set. `Some(0)` exactly when
/// `z` is already the full vertex set.
pub fn propagation_time(g: &Graph, z: &VertexSet) -> Option<usize> {
    let trace = compute_closure_traced(g, z);
    if trace.closure.is_full() {
        Some(trace.total_rounds())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};

    /// Reference closure: rescan every vertex after each force until no rule
    /// application fires. Quadratic and obviously correct.
    pub fn naive_closure(g: &Graph, z: &VertexSet) -> VertexSet {
        let mut colored = z.clone();
        loop {
            let mut changed = false;
            for u in 0..g.n() {
                if !colored.contains(u) {
                    continue;
                }
                let uncolored: Vec<usize> = g
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&y| !colored.contains(y))
                    .collect();
                if uncolored.len() == 1 {
                    colored.insert(uncolored[0]);
                    changed = true;
                }
            }
            if !changed {
                return colored;
            }
        }
    }

    #[test]
    fn path_endpoint_forces_everything() {
        let g = gen_path(4).unwrap();
        let z = VertexSet::singleton(4, 0);
        assert!(compute_closure(&g, &z).is_full());
        let trace = compute_closure_traced(&g, &z);
        assert_eq!(
            trace.forces,
            vec![
                Force { round: 1, forcer: 0, forced: 1 },
                Force { round: 2, forcer: 1, forced: 2 },
                Force { round: 3, forcer: 2, forced: 3 },
            ]
        );
        assert_eq!(trace.rounds, vec![Some(0), Some(1), Some(2), Some(3)]);
        assert_eq!(trace.chains(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(propagation_time(&g, &z), Some(3));
    }

    #[test]
    fn path_midpoint_stalls() {
        let g = gen_path(4).unwrap();
        let z = VertexSet::singleton(4, 1);
        let cl = compute_closure(&g, &z);
        assert_eq!(cl.to_vec(), vec![1]);
        assert!(!is_zero_forcing_set(&g, &z));
        assert_eq!(propagation_time(&g, &z), None);
    }

    #[test]
    fn complete_graph_needs_all_but_one() {
        let g = gen_complete(4).unwrap();
        let z = VertexSet::from_iter(4, [0, 1, 2]);
        assert!(is_zero_forcing_set(&g, &z));
        assert!(!is_zero_forcing_set(&g, &VertexSet::from_iter(4, [0, 1])));
    }

    #[test]
    fn simultaneous_forces_share_a_round() {
        // P_5 with {0, 2, 4}: both endpoints of the gap get forced in round 1.
        let g = gen_path(5).unwrap();
        let z = VertexSet::from_iter(5, [0, 2, 4]);
        assert_eq!(propagation_time(&g, &z), Some(1));
        let trace = compute_closure_traced(&g, &z);
        assert!(trace.forces.iter().all(|f| f.round == 1));
        assert_eq!(trace.forces.len(), 2);
        // Vertex 0 (not 2) gets credit for forcing 1: lowest-id forcer wins.
        assert_eq!(trace.forces[0], Force { round: 1, forcer: 0, forced: 1 });
    }

    #[test]
    fn full_set_has_zero_rounds() {
        let g = gen_cycle(5).unwrap();
        assert_eq!(propagation_time(&g, &g.vertex_set()), Some(0));
    }

    #[test]
    fn star_leaf_forces_center_only() {
        let g = gen_star(5).unwrap();
        let z = VertexSet::singleton(5, 1);
        assert_eq!(compute_closure(&g, &z).to_vec(), vec![0, 1]);
    }

    #[test]
    fn closure_matches_naive_on_generated_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for gi in 0..60 {
            let n = rng.gen_range(1..=14);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.3 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            for _ in 0..20 {
                let z = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen::<bool>()));
                let fast = compute_closure(&g, &z);
                let slow = naive_closure(&g, &z);
                assert_eq!(fast, slow, "graph {gi}, z = {z:?}");
                // Idempotence and monotonicity.
                assert_eq!(compute_closure(&g, &fast), fast);
                assert!(z.is_subset_of(&fast));
            }
        }
    }

    #[test]
    fn trace_agrees_with_closure() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(2..=12);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.4 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let z = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen::<bool>()));
            let trace = compute_closure_traced(&g, &z);
            assert_eq!(trace.closure, compute_closure(&g, &z));
            // Replay the forces one at a time; each must be legal in order.
            let mut colored = z.clone();
            for f in &trace.forces {
                assert!(colored.contains(f.forcer));
                assert!(!colored.contains(f.forced));
                colored.insert(f.forced);
            }
            assert_eq!(colored, trace.closure);
            // Chains partition the closure into vertex-disjoint paths.
            let chains = trace.chains();
            let mut seen = VertexSet::empty(n);
            for chain in &chains {
                for &v in chain {
                    assert!(!seen.contains(v), "chains overlap at {v}");
                    seen.insert(v);
                }
                for pair in chain.windows(2) {
                    assert!(g.has_edge(pair[0], pair[1]));
                }
            }
            assert_eq!(seen, trace.closure);
        }
    }
}

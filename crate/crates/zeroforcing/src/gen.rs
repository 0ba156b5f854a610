//! Graph family generators. The random families (cubic, Watts-Strogatz) are
//! deterministic given a 64-bit seed: they draw from a ChaCha8 stream, so the
//! same seed yields the same graph on every platform.

use crate::graph::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("{family} requires {requirement}, got n = {n}")]
    BadSize {
        family: &'static str,
        requirement: &'static str,
        n: usize,
    },
    #[error("watts-strogatz requires even k with 2 <= k < n, got n = {n}, k = {k}")]
    BadWsParams { n: usize, k: usize },
    #[error("watts-strogatz requires 0 <= beta <= 1, got {0}")]
    BadBeta(f64),
    #[error("gave up generating a connected simple {family} graph after {attempts} attempts")]
    AttemptsExhausted {
        family: &'static str,
        attempts: usize,
    },
}

pub fn gen_path(n: usize) -> Result<Graph, GenError> {
    if n < 1 {
        return Err(GenError::BadSize {
            family: "path",
            requirement: "n >= 1",
            n,
        });
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Ok(Graph::from_edges(n, &edges).unwrap())
}

pub fn gen_cycle(n: usize) -> Result<Graph, GenError> {
    if n < 3 {
        return Err(GenError::BadSize {
            family: "cycle",
            requirement: "n >= 3",
            n,
        });
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges).unwrap())
}

pub fn gen_complete(n: usize) -> Result<Graph, GenError> {
    if n < 1 {
        return Err(GenError::BadSize {
            family: "complete",
            requirement: "n >= 1",
            n,
        });
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Ok(Graph::from_edges(n, &edges).unwrap())
}

/// Star with center 0 and leaves `1..n`.
pub fn gen_star(n: usize) -> Result<Graph, GenError> {
    if n < 1 {
        return Err(GenError::BadSize {
            family: "star",
            requirement: "n >= 1",
            n,
        });
    }
    let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
    Ok(Graph::from_edges(n, &edges).unwrap())
}

const MAX_ATTEMPTS: usize = 10_000;

/// Random connected cubic graph via the configuration model: pair up three
/// stubs per vertex uniformly at random and reject pairings with loops,
/// parallel edges, or a disconnected result.
pub fn gen_cubic(n: usize, seed: u64) -> Result<Graph, GenError> {
    if n < 4 || n % 2 != 0 {
        return Err(GenError::BadSize {
            family: "cubic",
            requirement: "even n >= 4",
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
    for _ in 0..MAX_ATTEMPTS {
        stubs.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if let Ok(g) = Graph::from_edges(n, &pairs) {
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(GenError::AttemptsExhausted {
        family: "cubic",
        attempts: MAX_ATTEMPTS,
    })
}

/// Connected Watts-Strogatz small-world graph: ring lattice `C(n, k)` (each
/// vertex joined to its `k/2` nearest neighbors on both sides) with every
/// lattice edge rewired to a random endpoint with probability `beta`. Rewiring
/// rounds repeat until the result is connected, up to 1000 attempts.
pub fn gen_watts_strogatz(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph, GenError> {
    if k < 2 || k % 2 != 0 || k >= n {
        return Err(GenError::BadWsParams { n, k });
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(GenError::BadBeta(beta));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let add = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
            adj[u].push(v);
            adj[v].push(u);
        };
        for j in 1..=k / 2 {
            for u in 0..n {
                add(&mut adj, u, (u + j) % n);
            }
        }
        // Rewire each lattice edge (u, u+j) to (u, w) with probability beta,
        // skipping rewires that would create a loop or parallel edge and
        // leaving saturated vertices alone.
        for j in 1..=k / 2 {
            for u in 0..n {
                if rng.gen::<f64>() >= beta {
                    continue;
                }
                if adj[u].len() >= n - 1 {
                    continue;
                }
                let v = (u + j) % n;
                let mut w = rng.gen_range(0..n);
                while w == u || adj[u].contains(&w) {
                    w = rng.gen_range(0..n);
                }
                adj[u].retain(|&x| x != v);
                adj[v].retain(|&x| x != u);
                add(&mut adj, u, w);
            }
        }
        let mut edges = Vec::with_capacity(n * k / 2);
        for u in 0..n {
            for &v in &adj[u] {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).expect("rewiring keeps the graph simple");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::AttemptsExhausted {
        family: "watts-strogatz",
        attempts: 1000,
    })
}

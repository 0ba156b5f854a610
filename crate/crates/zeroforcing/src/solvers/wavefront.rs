use super::Deadline;
use crate::forcing::{compute_closure, is_zero_forcing_set};
use crate::graph::Graph;
use crate::outcome::{SolveOutcome, SolveStats, SolveStatus};
use crate::set::VertexSet;
use std::collections::HashMap;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug)]
pub struct WavefrontConfig {
    pub time_limit: Option<Duration>,
    /// Cap on estimated pool memory. `None` derives a default from the
    /// machine's available RAM (half of it), falling back to 8 GiB.
    pub max_pool_bytes: Option<u64>,
}

impl Default for WavefrontConfig {
    fn default() -> Self {
        WavefrontConfig {
            time_limit: None,
            max_pool_bytes: None,
        }
    }
}

fn default_pool_budget() -> u64 {
    if let Ok(text) = std::fs::read_to_string("/proc/meminfo") {
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("MemAvailable:") {
                if let Some(kb) = rest.split_whitespace().next().and_then(|f| f.parse::<u64>().ok())
                {
                    return kb * 1024 / 2;
                }
            }
        }
    }
    8 << 30
}

/// One stored closure pair: a closure reachable from some seed set of
/// `budget` vertices, plus that seed as the certificate.
struct Entry {
    closure: VertexSet,
    budget: usize,
    certificate: VertexSet,
}

/// Z(g) by wavefront search over closure pairs.
///
/// The pool holds pairs `(cl(A), |A|)` keyed by closure, each kept at the
/// smallest budget at which it was reachable. Stage `R` extends every stored
/// pair by the closed neighborhood of each vertex and admits results whose
/// budget stays within `R`; the first pair whose closure is the full vertex
/// set certifies the optimum. The pool can grow combinatorially (stars
/// exhaust any budget), so the search charges every stored pair against
/// `max_pool_bytes` and stops with `MemoryExceeded` when the cap is hit.
pub fn wavefront(g: &Graph, config: WavefrontConfig) -> SolveOutcome {
    let start = Instant::now();
    let deadline = Deadline::new(config.time_limit);
    let budget_bytes = config.max_pool_bytes.unwrap_or_else(default_pool_budget);
    let n = g.n();
    let mut stats = SolveStats::default();

    let empty = VertexSet::empty(n);
    if empty.is_full() {
        // Zero-vertex graph: the empty set forces vacuously.
        return SolveOutcome::optimal(0, empty, start.elapsed(), stats);
    }

    // Closed neighborhoods, precomputed once.
    let hoods: Vec<VertexSet> = (0..n).map(|v| g.closed_neighborhood(v)).collect();

    let mut index: HashMap<VertexSet, usize> = HashMap::new();
    let mut pool: Vec<Entry> = Vec::new();
    index.insert(empty.clone(), 0);
    pool.push(Entry {
        closure: empty.clone(),
        budget: 0,
        certificate: empty,
    });
    stats.pool_peak = 1;
    // Rough per-entry footprint: closure + certificate + hash-map key copy.
    let entry_bytes = (3 * VertexSet::empty(n).heap_bytes() + 96) as u64;
    let mut used_bytes = entry_bytes;

    let done_with = |status: SolveStatus, completed_stages: usize, stats: SolveStats| {
        SolveOutcome {
            status,
            best_value: None,
            incumbent: None,
            lower_bound: completed_stages + 1,
            wall: start.elapsed(),
            stats,
        }
    };

    for stage in 1..=n {
        // Entries appended during this stage have budget exactly `stage`, and
        // anything they would generate busts the stage budget, so the
        // snapshot is all that needs scanning.
        let snapshot = pool.len();
        for idx in 0..snapshot {
            if deadline.exceeded() {
                return done_with(SolveStatus::Timeout, stage - 1, stats);
            }
            for v in 0..n {
                let (base_budget, grown) = {
                    let entry = &pool[idx];
                    if hoods[v].is_subset_of(&entry.closure) {
                        continue;
                    }
                    (entry.budget, entry.closure.union(&hoods[v]))
                };
                // Cost of reaching cl(grown): v if new, plus all but one of
                // v's neighbors outside the old closure.
                let old = &pool[idx].closure;
                let added_v = usize::from(!old.contains(v));
                let outside = g.neighbors(v).iter().filter(|&&w| !old.contains(w)).count();
                let budget = base_budget + added_v + outside.saturating_sub(1);
                if budget > stage {
                    continue;
                }
                stats.sets_examined += 1;
                let closure = compute_closure(g, &grown);
                if index.contains_key(&closure) {
                    continue;
                }
                let mut certificate = pool[idx].certificate.clone();
                if added_v == 1 {
                    // Only pay for v when the old closure misses it; otherwise
                    // the old seed already forces v.
                    certificate.insert(v);
                }
                let mut skipped_one = false;
                for &w in g.neighbors(v) {
                    if !old.contains(w) && !skipped_one {
                        // v itself forces its first outside neighbor.
                        skipped_one = true;
                        continue;
                    }
                    if !old.contains(w) {
                        certificate.insert(w);
                    }
                }
                debug_assert_eq!(certificate.card(), budget);
                if closure.is_full() {
                    debug_assert!(is_zero_forcing_set(g, &certificate));
                    return SolveOutcome::optimal(budget, certificate, start.elapsed(), stats);
                }
                used_bytes += entry_bytes;
                if used_bytes > budget_bytes {
                    return done_with(SolveStatus::MemoryExceeded, stage - 1, stats);
                }
                index.insert(closure.clone(), pool.len());
                pool.push(Entry {
                    closure,
                    budget,
                    certificate,
                });
                stats.pool_peak = stats.pool_peak.max(pool.len() as u64);
            }
        }
    }
    unreachable!("every graph has a forcing set of size at most n, found by stage n");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_complete, gen_cycle, gen_path, gen_star};
    use crate::graph::Graph;
    use crate::solvers::brute_force_zf;

    #[test]
    fn matches_brute_force_on_families() {
        for g in [
            gen_path(1).unwrap(),
            gen_path(7).unwrap(),
            gen_cycle(8).unwrap(),
            gen_complete(6).unwrap(),
            gen_star(9).unwrap(),
        ] {
            let bf = brute_force_zf(&g, None).best_value.unwrap();
            let out = wavefront(&g, WavefrontConfig::default());
            assert_eq!(out.status, SolveStatus::Optimal);
            assert_eq!(out.best_value, Some(bf));
            let z = out.incumbent.unwrap();
            assert_eq!(z.card(), bf);
            assert!(is_zero_forcing_set(&g, &z));
        }
    }

    #[test]
    fn star_eleven_is_nine() {
        let out = wavefront(&gen_star(11).unwrap(), WavefrontConfig::default());
        assert_eq!(out.best_value, Some(9));
    }

    #[test]
    fn pool_bound_is_tight_on_empty_graphs() {
        // With no edges every subset is its own closure, so after stage s the
        // pool holds exactly sum_{i<=s} C(n, i) entries (counting the empty
        // set); the full set never enters the pool because it returns first.
        let n = 8;
        let g = Graph::from_edges(n, &[]).unwrap();
        let out = wavefront(&g, WavefrontConfig::default());
        assert_eq!(out.best_value, Some(n));
        let expect: u64 = (0..n).map(|i| binom(n, i)).sum();
        assert_eq!(out.stats.pool_peak, expect);
    }

    fn binom(n: usize, k: usize) -> u64 {
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) as u64 / (i + 1) as u64;
        }
        r
    }

    #[test]
    fn memory_cap_reports_memory_exceeded() {
        let g = gen_star(21).unwrap();
        let out = wavefront(
            &g,
            WavefrontConfig {
                time_limit: None,
                max_pool_bytes: Some(10_000),
            },
        );
        assert_eq!(out.status, SolveStatus::MemoryExceeded);
        assert!(out.lower_bound >= 1);
        assert!(out.best_value.is_none());
    }
}

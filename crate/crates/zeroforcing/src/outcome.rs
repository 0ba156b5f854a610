use crate::set::VertexSet;
use serde::Serialize;
use std::time::Duration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    /// Proven optimal value with a witness set.
    Optimal,
    /// Ran out of time; bounds may still be useful.
    Timeout,
    /// No feasible solution exists (e.g. connected variants on inputs with
    /// no connected forcing set of any size under the imposed rows).
    Infeasible,
    /// A configured memory budget was exhausted before the search finished.
    MemoryExceeded,
}

/// Counters reported by every solver; irrelevant fields stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Candidate sets whose closure was evaluated (combinatorial solvers).
    pub sets_examined: u64,
    /// Branch-and-bound nodes expanded.
    pub nodes: u64,
    /// Lazily separated constraints added to a master model.
    pub cuts_added: u64,
    /// Peak number of stored closure pairs (wavefront).
    pub pool_peak: u64,
}

/// Result of an exact solve for a forcing number.
///
/// Invariants: `status == Optimal` implies `best_value` and `incumbent` are
/// present, the incumbent has exactly `best_value` vertices, and
/// `lower_bound == best_value`. Whenever both are present,
/// `lower_bound <= best_value`.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub best_value: Option<usize>,
    pub incumbent: Option<VertexSet>,
    pub lower_bound: usize,
    pub wall: Duration,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn optimal(value: usize, incumbent: VertexSet, wall: Duration, stats: SolveStats) -> Self {
        debug_assert_eq!(incumbent.card(), value);
        SolveOutcome {
            status: SolveStatus::Optimal,
            best_value: Some(value),
            incumbent: Some(incumbent),
            lower_bound: value,
            wall,
            stats,
        }
    }

    /// The stable JSON shape emitted by the CLI:
    /// `{status, value, lower, upper, set, time_s, stats}`.
    /// `value` is only set for proven optima; `upper` reports the incumbent
    /// size when one exists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status,
            "value": if self.status == SolveStatus::Optimal { self.best_value } else { None },
            "lower": self.lower_bound,
            "upper": self.best_value,
            "set": self.incumbent.as_ref().map(|s| s.to_vec()),
            "time_s": self.wall.as_secs_f64(),
            "stats": self.stats,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_stable() {
        let out = SolveOutcome::optimal(
            2,
            VertexSet::from_iter(4, [1, 3]),
            Duration::from_millis(1500),
            SolveStats {
                sets_examined: 7,
                ..Default::default()
            },
        );
        let v = out.to_json();
        assert_eq!(v["status"], "optimal");
        assert_eq!(v["value"], 2);
        assert_eq!(v["lower"], 2);
        assert_eq!(v["upper"], 2);
        assert_eq!(v["set"], serde_json::json!([1, 3]));
        assert_eq!(v["time_s"], 1.5);
        assert_eq!(v["stats"]["sets_examined"], 7);
    }

    #[test]
    fn timeout_reports_bounds_without_value() {
        let out = SolveOutcome {
            status: SolveStatus::Timeout,
            best_value: Some(9),
            incumbent: Some(VertexSet::from_iter(12, 0..9)),
            lower_bound: 4,
            wall: Duration::from_secs(60),
            stats: SolveStats::default(),
        };
        let v = out.to_json();
        assert_eq!(v["status"], "timeout");
        assert_eq!(v["value"], serde_json::Value::Null);
        assert_eq!(v["lower"], 4);
        assert_eq!(v["upper"], 9);
    }
}

//! Exact combinatorial solvers: subset enumeration, the wavefront search
//! over closure pairs, and branch-and-bound over connected induced subgraphs.

mod bnb;
mod brute;
mod wavefront;

pub use bnb::bnb_connected;
pub use brute::{brute_force_czf, brute_force_zf, Combinations};
pub use wavefront::{wavefront, WavefrontConfig};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("connected forcing requires a connected graph")]
    DisconnectedGraph,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Deadline {
    end: Option<std::time::Instant>,
}

impl Deadline {
    pub fn new(limit: Option<std::time::Duration>) -> Self {
        Deadline {
            end: limit.map(|l| std::time::Instant::now() + l),
        }
    }

    pub fn exceeded(&self) -> bool {
        self.end.is_some_and(|e| std::time::Instant::now() >= e)
    }

    /// Time left until the deadline; `None` means unlimited. Zero once the
    /// deadline has passed.
    pub fn remaining(&self) -> Option<std::time::Duration> {
        self.end.map(|e| e.saturating_duration_since(std::time::Instant::now()))
    }
}

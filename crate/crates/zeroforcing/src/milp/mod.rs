//! Solver-agnostic mixed-integer layer.
//!
//! The integer programs in [`crate::models`] are built as [`MilpModel`]
//! values and handed to a [`MilpBackend`]. Two backends ship with the crate:
//! [`InternalBackend`], a self-contained exact branch-and-bound over integer
//! bounds, and [`ExternalBackend`], which exports the model to an LP file and
//! shells out to a user-supplied solver command. Lazy-constraint schemes run
//! through [`solve_with_separation`], which re-solves the master until no
//! callback finds a violated row.

mod external;
mod internal;
mod lp;
mod separation;

pub use external::ExternalBackend;
pub use internal::InternalBackend;
pub use lp::{export_lp, parse_lp, parse_solution_file, LpParseError};
pub use separation::{solve_with_separation, RowSpec, SeparationCallback, SeparationOutcome};

use std::time::Duration;

pub type VarId = usize;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VarKind {
    Binary,
    /// General integer with inclusive bounds.
    Integer { lb: i64, ub: i64 },
}

impl VarKind {
    pub fn bounds(self) -> (i64, i64) {
        match self {
            VarKind::Binary => (0, 1),
            VarKind::Integer { lb, ub } => (lb, ub),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    /// Objective coefficient; the objective is always minimized.
    pub objective: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: String,
    /// Sparse terms, one per variable, variables distinct.
    pub terms: Vec<(VarId, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

/// A linear minimization problem over binary and general-integer variables.
#[derive(Clone, Debug)]
pub struct MilpModel {
    pub name: String,
    vars: Vec<Variable>,
    rows: Vec<Row>,
}

impl MilpModel {
    pub fn new(name: impl Into<String>) -> Self {
        MilpModel {
            name: name.into(),
            vars: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            kind: VarKind::Binary,
            objective: 0,
        });
        self.vars.len() - 1
    }

    pub fn add_integer(&mut self, name: impl Into<String>, lb: i64, ub: i64) -> VarId {
        assert!(lb <= ub, "empty domain for integer variable");
        self.vars.push(Variable {
            name: name.into(),
            kind: VarKind::Integer { lb, ub },
            objective: 0,
        });
        self.vars.len() - 1
    }

    pub fn set_objective(&mut self, var: VarId, coeff: i64) {
        self.vars[var].objective = coeff;
    }

    /// Adds a row named `c{index}` (1-based, matching the LP export).
    pub fn add_row(&mut self, terms: Vec<(VarId, i64)>, sense: Sense, rhs: i64) -> usize {
        let name = format!("c{}", self.rows.len() + 1);
        self.add_named_row(name, terms, sense, rhs)
    }

    pub fn add_named_row(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(VarId, i64)>,
        sense: Sense,
        rhs: i64,
    ) -> usize {
        debug_assert!(terms.iter().all(|&(v, _)| v < self.vars.len()));
        debug_assert!({
            let mut ids: Vec<_> = terms.iter().map(|&(v, _)| v).collect();
            ids.sort_unstable();
            ids.windows(2).all(|w| w[0] != w[1])
        });
        self.rows.push(Row {
            name: name.into(),
            terms,
            sense,
            rhs,
        });
        self.rows.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn var(&self, id: VarId) -> &Variable {
        &self.vars[id]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn objective_of(&self, values: &[i64]) -> i64 {
        self.vars
            .iter()
            .zip(values)
            .map(|(var, &x)| var.objective * x)
            .sum()
    }

    /// Checks a full integer assignment against bounds and every row.
    pub fn is_feasible(&self, values: &[i64]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        for (var, &x) in self.vars.iter().zip(values) {
            let (lb, ub) = var.kind.bounds();
            if x < lb || x > ub {
                return false;
            }
        }
        self.rows.iter().all(|row| {
            let lhs: i64 = row.terms.iter().map(|&(v, a)| a * values[v]).sum();
            match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Eq => lhs == row.rhs,
                Sense::Ge => lhs >= row.rhs,
            }
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MilpStatus {
    Optimal,
    Infeasible,
    Timeout,
}

/// Result of one backend solve. `objective`/`values` describe the incumbent
/// when one exists; `lower_bound` is a proven bound on the minimum (equal to
/// the objective when optimal, trivial when the backend cannot prove more).
#[derive(Clone, Debug)]
pub struct MilpOutcome {
    pub status: MilpStatus,
    pub objective: Option<i64>,
    pub values: Option<Vec<i64>>,
    pub lower_bound: i64,
    pub nodes: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum MilpError {
    #[error("backend failure: {0}")]
    Backend(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad solution file: {0}")]
    Solution(String),
}

pub trait MilpBackend {
    fn name(&self) -> &str;

    /// Solves `model` to proven optimality within `time_limit`. `warm` is a
    /// feasible assignment used as the initial incumbent; backends may
    /// ignore it.
    fn solve(
        &self,
        model: &MilpModel,
        warm: Option<&[i64]>,
        time_limit: Option<Duration>,
    ) -> Result<MilpOutcome, MilpError>;
}

/// Trivial objective bound: every variable at whichever bound minimizes its
/// own term. Used as the fallback lower bound when nothing else is proven.
pub(crate) fn naive_lower_bound(model: &MilpModel) -> i64 {
    model
        .vars
        .iter()
        .map(|var| {
            let (lb, ub) = var.kind.bounds();
            (var.objective * lb).min(var.objective * ub)
        })
        .sum()
}

//! Exact solvers for zero forcing numbers of simple undirected graphs.
//!
//! Zero forcing is a graph coloring game: a colored vertex with exactly one
//! uncolored neighbor forces that neighbor to become colored, and a zero
//! forcing set is a starting coloring that eventually colors everything. The
//! zero forcing number Z(G) is the size of a smallest such set; the connected
//! variant Zc(G) additionally requires the starting set to induce a connected
//! subgraph, and the timestep-bounded variant caps the number of simultaneous
//! forcing rounds.
//!
//! The crate provides:
//!
//! - [`forcing`]: the color change rule, closures, traces, propagation time;
//! - [`fort`]: forts (the dual obstructions) and fort generation;
//! - [`solvers`]: combinatorial exact solvers (brute force, wavefront search,
//!   branch-and-bound over connected induced subgraphs);
//! - [`milp`]: a small solver-agnostic integer programming layer with an
//!   exact built-in branch-and-bound backend, LP file export, and an
//!   external-solver bridge;
//! - [`models`]: the integer programming formulations (infection, fort
//!   covers with lazy separation and facet-based strengthening, extended
//!   covers, and two connected variants);
//! - [`bench`]: a small harness that sweeps instance families and records
//!   per-run CSV rows.
//!
//! Every solver is deterministic: random instance generators take explicit
//! 64-bit seeds, and ties everywhere break by ascending vertex id. See the
//! `examples/` directory for one runnable walkthrough per capability.

pub mod bench;
pub mod forcing;
pub mod fort;
pub mod gen;
pub mod graph;
pub mod io;
pub mod milp;
pub mod models;
pub mod outcome;
pub mod set;
pub mod solvers;

pub use graph::Graph;
pub use set::VertexSet;

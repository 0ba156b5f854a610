//! Z_T: the cheapest forcing set that finishes within T rounds.
//!
//! The variables say when each vertex turns, not just whether: an arc
//! y[u -> v] commits u to force v, chronology rows order the turn times
//! along chosen arcs, and capping turn times at T prices the deadline.
//! T = n - 1 never binds, which makes the same model an exact Z solver.

use zeroforcing::forcing::propagation_time;
use zeroforcing::gen::gen_path;
use zeroforcing::milp::InternalBackend;
use zeroforcing::models::{solve_bounded_timestep, solve_infection};

fn main() {
    let g = gen_path(9).unwrap();
    let backend = InternalBackend;

    let mut last = usize::MAX;
    for t in [1, 2, 4, 8] {
        let out = solve_bounded_timestep(&g, t, &backend, None).unwrap();
        let value = out.best_value.unwrap();
        let witness = out.incumbent.unwrap();
        println!(
            "P9, T = {t}: Z_T = {value}, witness {:?} finishes in {:?} rounds",
            witness.to_vec(),
            propagation_time(&g, &witness).unwrap()
        );
        assert!(propagation_time(&g, &witness).unwrap() <= t);
        // Loosening the deadline can only help.
        assert!(value <= last);
        last = value;
    }

    let out = solve_infection(&g, &backend, None).unwrap();
    println!("P9, no deadline: Z = {}", out.best_value.unwrap());
}

//! Z(G) by wavefront search: breadth-first over closures instead of sets.
//!
//! The pool stores one entry per distinct closure, keyed at the smallest
//! budget that reaches it, so symmetric seed sets collapse. Stars defeat
//! the idea (every leaf subset closes differently); the memory budget turns
//! that failure mode into an honest outcome.

use std::time::Duration;

use zeroforcing::gen::{gen_cubic, gen_star};
use zeroforcing::outcome::SolveStatus;
use zeroforcing::solvers::{wavefront, WavefrontConfig};

fn main() {
    let g = gen_cubic(14, 3).unwrap();
    let out = wavefront(&g, WavefrontConfig::default());
    println!(
        "cubic n=14: Z = {}, pool peaked at {} closure pairs",
        out.best_value.unwrap(),
        out.stats.pool_peak
    );
    println!("witness {:?}", out.incumbent.unwrap().to_vec());

    let star = gen_star(31).unwrap();
    let tight = WavefrontConfig {
        time_limit: Some(Duration::from_secs(5)),
        max_pool_bytes: Some(1 << 20),
    };
    let out = wavefront(&star, tight);
    assert_ne!(out.status, SolveStatus::Optimal);
    println!(
        "star n=31 under a 1 MiB pool: {:?}, proven lower bound {}",
        out.status, out.lower_bound
    );
}

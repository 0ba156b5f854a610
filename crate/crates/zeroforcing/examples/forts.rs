//! Forts: the obstructions a forcing set must hit.
//!
//! A fort is a non-empty set in which no outside vertex sees exactly one
//! member; once a forcing process leaves a fort untouched, it can never
//! enter it. A set forces the whole graph exactly when it meets every fort.

use zeroforcing::forcing::is_zero_forcing_set;
use zeroforcing::fort::{enumerate_forts, greedy_minimal_fort};
use zeroforcing::gen::gen_cycle;
use zeroforcing::VertexSet;

fn main() {
    let g = gen_cycle(6).unwrap();
    let forts = enumerate_forts(&g, 8).unwrap();
    println!("C6 has {} forts; the smallest:", forts.len());
    let min_card = forts.iter().map(|f| f.card()).min().unwrap();
    for f in forts.iter().filter(|f| f.card() == min_card) {
        println!("  {:?}", f.set().to_vec());
    }

    // Hitting every fort is the same as forcing, in both directions.
    let hits_every_fort =
        |s: &VertexSet| forts.iter().all(|f| !s.is_disjoint_from(f.set()));
    for ids in [[0, 1], [0, 3]] {
        let s = VertexSet::from_iter(6, ids);
        let forcing = is_zero_forcing_set(&g, &s);
        println!(
            "{:?}: forces={}, hits every fort={}",
            s.to_vec(),
            forcing,
            hits_every_fort(&s)
        );
        assert_eq!(forcing, hits_every_fort(&s));
    }

    // Cheap fort sources used by the cutting loops: the complement of a
    // failed set's closure, shrunk to inclusion-minimality.
    let stalled = VertexSet::from_iter(6, [0, 3]);
    let fort = greedy_minimal_fort(&g, &stalled).unwrap();
    println!(
        "minimal fort avoiding {:?}: {:?}",
        stalled.to_vec(),
        fort.set().to_vec()
    );
    assert!(fort.set().is_disjoint_from(&stalled));
}

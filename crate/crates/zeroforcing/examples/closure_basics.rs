//! The color change rule: closures, round-by-round traces, forcing chains.

use zeroforcing::forcing::{compute_closure, compute_closure_traced, propagation_time};
use zeroforcing::{Graph, VertexSet};

fn main() {
    // A caterpillar: spine 0-1-2-3 with legs 4 (on 1) and 5 (on 2).
    let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)]).unwrap();

    let z = VertexSet::from_iter(6, [0, 4, 5]);
    let cl = compute_closure(&g, &z);
    println!("closure of {:?} is {:?}", z.to_vec(), cl.to_vec());
    assert!(cl.is_full());

    // The trace records who forced whom, and when. Rounds are simultaneous:
    // every vertex able to force fires at once.
    let trace = compute_closure_traced(&g, &z);
    for f in &trace.forces {
        println!("round {}: {} forces {}", f.round, f.forcer, f.forced);
    }
    println!("propagation time: {:?}", propagation_time(&g, &z));
    assert_eq!(propagation_time(&g, &z), Some(trace.total_rounds()));

    // Chains partition the colored graph into vertex-disjoint paths, one
    // rooted at each initial vertex.
    for chain in trace.chains() {
        println!("chain {chain:?}");
    }

    // A set that stalls: each of 1 and 2 still sees two uncolored
    // neighbors, so nothing ever fires.
    let stuck = VertexSet::from_iter(6, [1, 2]);
    let cl = compute_closure(&g, &stuck);
    println!("closure of {:?} is only {:?}", stuck.to_vec(), cl.to_vec());
    assert_eq!(cl, stuck);
}

//! Zc(G) by branch and bound over connected induced subgraphs.

use zeroforcing::gen::{gen_cubic, gen_star};
use zeroforcing::solvers::{bnb_connected, brute_force_zf};
use zeroforcing::Graph;

fn connected_cubic(n: usize) -> Graph {
    (0..)
        .map(|seed| gen_cubic(n, seed).unwrap())
        .find(|g| g.is_connected())
        .unwrap()
}

fn main() {
    // All-but-two leaves force a star, but they induce an edgeless graph;
    // connectivity drags the hub in and one more leaf with it.
    let star = gen_star(9).unwrap();
    let z = brute_force_zf(&star, None).best_value.unwrap();
    let zc = bnb_connected(&star, None).unwrap().best_value.unwrap();
    println!("star n=9: Z = {z}, Zc = {zc}");
    assert!(zc >= z);

    let g = connected_cubic(12);
    let out = bnb_connected(&g, None).unwrap();
    println!(
        "cubic n=12: Zc = {} after {} search nodes",
        out.best_value.unwrap(),
        out.stats.nodes
    );
    let witness = out.incumbent.unwrap();
    assert!(g.is_connected_within(&witness));
    println!("connected witness {:?}", witness.to_vec());
}

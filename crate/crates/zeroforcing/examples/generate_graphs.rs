//! Instance generators: named families, seeded random graphs, file output.

use zeroforcing::gen::{
    gen_complete, gen_cubic, gen_cycle, gen_path, gen_star, gen_watts_strogatz,
};
use zeroforcing::io::{save_graph, GraphFormat};

fn main() {
    for (name, g) in [
        ("path n=6", gen_path(6).unwrap()),
        ("cycle n=8", gen_cycle(8).unwrap()),
        ("star n=7", gen_star(7).unwrap()),
        ("complete n=5", gen_complete(5).unwrap()),
        ("cubic n=10 seed=1", gen_cubic(10, 1).unwrap()),
        ("watts n=12 k=4 beta=0.2 seed=1", gen_watts_strogatz(12, 4, 0.2, 1).unwrap()),
    ] {
        println!("{name}: {} vertices, {} edges", g.n(), g.m());
    }

    // Random families are pure functions of their seed.
    let a = gen_cubic(10, 42).unwrap();
    let b = gen_cubic(10, 42).unwrap();
    assert_eq!(a.edges(), b.edges());
    assert_ne!(a.edges(), gen_cubic(10, 43).unwrap().edges());

    // Any `Write` works; `save_graph_path` picks the format from the
    // extension instead.
    let mut buffer = Vec::new();
    save_graph(&a, &mut buffer, GraphFormat::EdgeList).unwrap();
    println!("--- cubic n=10 seed=42 as an edge list ---");
    print!("{}", String::from_utf8(buffer).unwrap());
}

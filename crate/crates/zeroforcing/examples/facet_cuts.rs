//! Screening fort rows for facets, and strengthening the ones that fail.
//!
//! A fort row `sum(s_v for v in F) >= 1` may or may not touch the forcing
//! polytope in a facet. The screen hunts for a pivot vertex v outside F and
//! witness forts inside F + v sharing only v; finding them proves the row
//! is not a facet and yields a Chvatal-Gomory row with right-hand side 2
//! that dominates it.

use zeroforcing::fort::Fort;
use zeroforcing::gen::{gen_cycle, gen_star};
use zeroforcing::milp::InternalBackend;
use zeroforcing::models::{
    cg_cut_from_witness, check_facet, solve_fort_cover, ConnectivityMode, FacetMode,
    FacetVerdict, FortSource, FortStrategy,
};
use zeroforcing::VertexSet;

fn main() {
    let backend = InternalBackend;

    // Opposite vertices of C4: already a facet, nothing to strengthen.
    let cyc = gen_cycle(4).unwrap();
    let fort = Fort::new(&cyc, VertexSet::from_iter(4, [0, 2])).unwrap();
    let verdict = check_facet(&cyc, &fort, FacetMode::Full, &backend, None).unwrap();
    println!("C4 fort {{0, 2}}: {verdict:?}");
    assert_eq!(verdict, FacetVerdict::Facet);

    // Two leaves of a star: the pair {leaf, hub} forts pivot on the hub and
    // lift the row to rhs 2.
    let star = gen_star(5).unwrap();
    let fort = Fort::new(&star, VertexSet::from_iter(5, [1, 2])).unwrap();
    match check_facet(&star, &fort, FacetMode::Full, &backend, None).unwrap() {
        FacetVerdict::NotFacet { v, witnesses } => {
            println!("star fort {{1, 2}}: not a facet, pivot {v}");
            for w in &witnesses {
                println!("  witness fort {:?}", w.to_vec());
            }
            let support = cg_cut_from_witness(&star, &fort, v, &witnesses).unwrap();
            println!(
                "  strengthened row: sum over {:?} >= 2",
                support.to_vec()
            );
        }
        other => println!("unexpected verdict {other:?}"),
    }

    // The same screen runs inline during a cover solve; every failing row
    // is replaced by its strengthening before it ever enters the master.
    let out = solve_fort_cover(
        &star,
        FortSource::new(FortStrategy::MinFortIp, FacetMode::Full),
        ConnectivityMode::None,
        &backend,
        None,
    )
    .unwrap();
    println!(
        "star n=5 with full screening: Z = {}",
        out.best_value.unwrap()
    );
}

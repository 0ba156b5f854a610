//! Z and Zc as set covers over forts, with rows separated lazily.
//!
//! The master never sees all forts (there can be exponentially many): it
//! starts from a few disjoint ones and asks a sub-solver for a violated
//! fort whenever its optimum fails to force. Three fort sources trade cut
//! strength against sub-solve cost; two connectivity modes turn the same
//! loop into a connected forcing solver.

use zeroforcing::gen::gen_cubic;
use zeroforcing::milp::InternalBackend;
use zeroforcing::models::{
    solve_fort_cover, ConnectivityMode, FacetMode, FortSource, FortStrategy,
};
use zeroforcing::Graph;

fn connected_cubic(n: usize) -> Graph {
    (0..)
        .map(|seed| gen_cubic(n, seed).unwrap())
        .find(|g| g.is_connected())
        .unwrap()
}

fn main() {
    let g = connected_cubic(12);
    let backend = InternalBackend;

    for strategy in [
        FortStrategy::MinFortIp,
        FortStrategy::ClosureComplement,
        FortStrategy::GreedyMinimal,
    ] {
        let source = FortSource::new(strategy, FacetMode::Off);
        let out =
            solve_fort_cover(&g, source, ConnectivityMode::None, &backend, None).unwrap();
        println!(
            "{strategy:?}: Z = {} with {} separated rows",
            out.best_value.unwrap(),
            out.stats.cuts_added
        );
    }

    for mode in [ConnectivityMode::Mtz, ConnectivityMode::AbSeparator] {
        let out = solve_fort_cover(&g, FortSource::default(), mode, &backend, None).unwrap();
        println!(
            "{mode:?}: Zc = {} with {} separated rows",
            out.best_value.unwrap(),
            out.stats.cuts_added
        );
    }
}

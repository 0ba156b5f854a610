//! Models as LP files: export, and parse back without loss.

use zeroforcing::gen::gen_path;
use zeroforcing::milp::{export_lp, parse_lp};
use zeroforcing::models::build_infection_model;

fn main() {
    let g = gen_path(4).unwrap();
    let (model, _) = build_infection_model(&g, 3);
    let text = export_lp(&model);
    print!("{text}");

    let back = parse_lp(&text).unwrap();
    assert_eq!(back.n_vars(), model.n_vars());
    assert_eq!(back.n_rows(), model.n_rows());
    // Variable ids follow first appearance in the text, so match by name.
    for a in model.vars() {
        let b = back.vars().iter().find(|b| b.name == a.name).unwrap();
        assert_eq!(a.kind, b.kind);
        assert_eq!(a.objective, b.objective);
    }
    eprintln!(
        "round trip kept all {} variables and {} rows",
        back.n_vars(),
        back.n_rows()
    );
}

//! Facet screening for fort rows.
//!
//! A fort row `sum over F >= 1` can be weak. The screen hunts for a witness
//! family: a pivot vertex `v` outside `F` and forts `A_1..A_p`, each inside
//! `F + v` with `v` its only outside member, such that every vertex of `F`
//! is missed by some witness. Such a family both certifies the row is not a
//! facet and fuels a Chvatal-Gomory round-up that tightens it to
//! `sum over F + v >= 2`.

use std::time::Duration;

use crate::fort::{is_fort, Fort};
use crate::graph::Graph;
use crate::milp::{MilpBackend, MilpModel, MilpStatus, Sense, VarId};
use crate::models::{FacetMode, ModelError};
use crate::set::VertexSet;

/// Outcome of a facet screen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetVerdict {
    /// No witness family exists; with a full-size search this proves the
    /// row is facet-defining (for an inclusion-minimal fort).
    Facet,
    /// A witness family was found; the row can be strengthened.
    NotFacet { v: usize, witnesses: Vec<VertexSet> },
    /// The search was truncated (small witness budget or time); nothing is
    /// known either way.
    Unknown,
}

/// A witness family that fails validation.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("a witness family needs at least one fort")]
    Empty,
    #[error("the pivot vertex lies inside the fort")]
    PivotInside,
    #[error("witness {0} is not a fort")]
    NotAFort(usize),
    #[error("witness {0} leaves the fort-plus-pivot support")]
    OutsideSupport(usize),
    #[error("vertex {0} avoids no witness")]
    SharedVertex(usize),
}

struct FacetLayout {
    n: usize,
    outside: Vec<usize>,
    x_of: Vec<Option<VarId>>,
    zf0: VarId,
    y0: VarId,
}

impl FacetLayout {
    fn zf(&self, i: usize, v: usize) -> VarId {
        self.zf0 + i * self.n + v
    }

    fn y(&self, i: usize) -> VarId {
        self.y0 + i
    }
}

fn facet_model(g: &Graph, f: &VertexSet, p: usize) -> (MilpModel, FacetLayout) {
    let n = g.n();
    let outside: Vec<usize> = (0..n).filter(|&v| !f.contains(v)).collect();
    let mut model = MilpModel::new(format!("facet_n{n}_p{p}"));
    let mut x_of = vec![None; n];
    for &v in &outside {
        x_of[v] = Some(model.add_binary(format!("x_{v}")));
    }
    let zf0 = model.n_vars();
    for i in 0..p {
        for v in 0..n {
            model.add_binary(format!("zf_{i}_{v}"));
        }
    }
    let y0 = model.n_vars();
    for i in 0..p {
        let y = model.add_binary(format!("y_{i}"));
        model.set_objective(y, 1);
    }
    let layout = FacetLayout { n, outside, x_of, zf0, y0 };

    let pick = layout.outside.iter().map(|&v| (layout.x_of[v].unwrap(), 1)).collect();
    model.add_named_row("pick", pick, Sense::Eq, 1);
    for i in 0..p {
        // A selected witness holds exactly one outside vertex, and links tie
        // that vertex to the picked pivot. Unselected witnesses are empty.
        let mut size: Vec<(VarId, i64)> =
            layout.outside.iter().map(|&v| (layout.zf(i, v), 1)).collect();
        size.push((layout.y(i), -1));
        model.add_named_row(format!("size_{i}"), size, Sense::Eq, 0);
        for &v in &layout.outside {
            model.add_named_row(
                format!("link_{i}_{v}"),
                vec![(layout.zf(i, v), 1), (layout.x_of[v].unwrap(), -1)],
                Sense::Le,
                0,
            );
        }
        for w in 0..n {
            model.add_named_row(
                format!("use_{i}_{w}"),
                vec![(layout.zf(i, w), 1), (layout.y(i), -1)],
                Sense::Le,
                0,
            );
        }
        // The guard rows that characterize forts, per witness slot.
        for u in 0..n {
            for &w in g.neighbors(u) {
                let mut terms = vec![(layout.zf(i, w), 1), (layout.zf(i, u), -1)];
                terms.extend(
                    g.neighbors(w).iter().filter(|&&a| a != u).map(|&a| (layout.zf(i, a), 1)),
                );
                model.add_named_row(format!("fort_{i}_{u}_{w}"), terms, Sense::Ge, 0);
            }
        }
    }
    for w in f.iter() {
        let mut terms: Vec<(VarId, i64)> = (0..p).map(|i| (layout.zf(i, w), 1)).collect();
        terms.extend((0..p).map(|i| (layout.y(i), -1)));
        model.add_named_row(format!("miss_{w}"), terms, Sense::Le, -1);
    }
    (model, layout)
}

/// Screen a fort row for facet-ness.
///
/// `Simplified` caps the witness family at two forts: fast, and a found
/// family is always conclusive, but absence proves nothing unless the fort
/// itself has at most two vertices. `Full` allows one witness per fort
/// member, which is enough for any family, so infeasibility certifies a
/// facet. The verdict classifies the row of an inclusion-minimal fort;
/// non-minimal rows are dominated anyway.
pub fn check_facet(
    g: &Graph,
    fort: &Fort,
    mode: FacetMode,
    backend: &dyn MilpBackend,
    time_limit: Option<Duration>,
) -> Result<FacetVerdict, ModelError> {
    assert!(mode != FacetMode::Off, "screening with mode Off makes no sense");
    let f = fort.set();
    if f.is_full() {
        // No outside vertex exists, so no family can; the condition holds
        // vacuously.
        return Ok(FacetVerdict::Facet);
    }
    let p = match mode {
        FacetMode::Simplified => fort.card().min(2),
        FacetMode::Full => fort.card(),
        FacetMode::Off => unreachable!(),
    };
    let (model, layout) = facet_model(g, f, p);
    let out = backend.solve(&model, None, time_limit)?;
    Ok(match out.status {
        MilpStatus::Optimal => {
            let vals = out.values.as_deref().expect("optimal solve carries values");
            let v = *layout
                .outside
                .iter()
                .find(|&&v| vals[layout.x_of[v].unwrap()] == 1)
                .expect("the pick row selects a pivot");
            let witnesses: Vec<VertexSet> = (0..p)
                .filter(|&i| vals[layout.y(i)] == 1)
                .map(|i| {
                    VertexSet::from_iter(layout.n, (0..layout.n).filter(|&w| vals[layout.zf(i, w)] == 1))
                })
                .collect();
            debug_assert!(cg_cut_from_witness(g, fort, v, &witnesses).is_ok());
            FacetVerdict::NotFacet { v, witnesses }
        }
        MilpStatus::Infeasible => {
            if p == fort.card() {
                FacetVerdict::Facet
            } else {
                FacetVerdict::Unknown
            }
        }
        MilpStatus::Timeout => FacetVerdict::Unknown,
    })
}

/// Validate a witness family and return the support of the strengthened row
/// `sum of s over the support >= 2`.
///
/// The row is a Chvatal-Gomory round-up: add the fort's row to the `p`
/// witness rows. Every support vertex lands in at most `p` of the `p + 1`
/// rows (the pivot misses the fort's row; a fort member in all `p`
/// witnesses would contradict the missing condition), vertices outside the
/// support land in none, and the right side totals `p + 1`. Divide by `p`
/// and round up.
pub fn cg_cut_from_witness(
    g: &Graph,
    fort: &Fort,
    v: usize,
    witnesses: &[VertexSet],
) -> Result<VertexSet, WitnessError> {
    if witnesses.is_empty() {
        return Err(WitnessError::Empty);
    }
    let f = fort.set();
    if f.contains(v) {
        return Err(WitnessError::PivotInside);
    }
    let mut support = f.clone();
    support.insert(v);
    for (i, a) in witnesses.iter().enumerate() {
        if !is_fort(g, a) {
            return Err(WitnessError::NotAFort(i));
        }
        if !a.is_subset_of(&support) {
            return Err(WitnessError::OutsideSupport(i));
        }
    }
    let mut common = witnesses[0].clone();
    for a in &witnesses[1..] {
        common.intersect_with(a);
    }
    common.remove(v);
    if let Some(u) = common.first() {
        return Err(WitnessError::SharedVertex(u));
    }
    Ok(support)
}

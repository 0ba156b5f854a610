//! Forts: the obstructions to zero forcing.
//!
//! A fort is a non-empty vertex set `F` such that no vertex outside `F` has
//! exactly one neighbor inside `F`. A set is a zero forcing set exactly when
//! it intersects every fort, which is what makes forts usable as covering
//! rows in the integer programming formulations.

use crate::forcing::compute_closure;
use crate::graph::Graph;
use crate::set::VertexSet;

/// A set verified to satisfy the fort condition for its graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fort(VertexSet);

impl Fort {
    pub fn new(g: &Graph, set: VertexSet) -> Option<Fort> {
        if is_fort(g, &set) {
            Some(Fort(set))
        } else {
            None
        }
    }

    /// Wrap a set the caller has already established to be a fort.
    pub(crate) fn new_unchecked(g: &Graph, set: VertexSet) -> Fort {
        debug_assert!(is_fort(g, &set), "{set:?} is not a fort");
        let _ = g;
        Fort(set)
    }

    pub fn set(&self) -> &VertexSet {
        &self.0
    }

    pub fn into_set(self) -> VertexSet {
        self.0
    }

    pub fn card(&self) -> usize {
        self.0.card()
    }
}

pub fn is_fort(g: &Graph, f: &VertexSet) -> bool {
    if f.is_empty() {
        return false;
    }
    for v in 0..g.n() {
        if f.contains(v) {
            continue;
        }
        let inside = g.neighbors(v).iter().filter(|&&w| f.contains(w)).count();
        if inside == 1 {
            return false;
        }
    }
    true
}

/// The complement of a non-forcing closure is a fort; returns `None` when
/// `z` is a zero forcing set. This is the cheapest violated-fort source.
pub fn closure_complement_fort(g: &Graph, z: &VertexSet) -> Option<Fort> {
    let cl = compute_closure(g, z);
    if cl.is_full() {
        return None;
    }
    // The fort condition holds: a closure vertex with exactly one neighbor
    // outside the closure would still have a force to perform.
    Some(Fort::new_unchecked(g, cl.complement()))
}

/// Grow `cl(z)` to a maximal non-forcing set `M` by trying vertices in
/// ascending id order (restarting after each success); the complement `V\M`
/// is then an inclusion-minimal fort. Returns `None` when `z` already forces.
pub fn greedy_minimal_fort(g: &Graph, z: &VertexSet) -> Option<Fort> {
    let mut m = compute_closure(g, z);
    if m.is_full() {
        return None;
    }
    'grow: loop {
        for v in 0..g.n() {
            if m.contains(v) {
                continue;
            }
            let mut trial = m.clone();
            trial.insert(v);
            let cl = compute_closure(g, &trial);
            if !cl.is_full() {
                m = cl;
                continue 'grow;
            }
        }
        break;
    }
    Some(Fort::new_unchecked(g, m.complement()))
}

/// All forts of `g`, in ascending order as bit patterns. Exponential in `n`;
/// guarded to `n <= max_n` (the intended use is cross-checking and tiny
/// exact covers, not production solving).
pub fn enumerate_forts(g: &Graph, max_n: usize) -> Result<Vec<Fort>, usize> {
    let n = g.n();
    if n > max_n {
        return Err(n);
    }
    let mut out = Vec::new();
    let mut partial = VertexSet::empty(n);
    enumerate_rec(g, 0, &mut partial, &mut out);
    out.sort_by(|a, b| a.set().cmp(b.set()));
    Ok(out)
}

/// Decide membership vertex-by-vertex. A branch dies as soon as some decided
/// outside vertex has exactly one inside neighbor and no undecided neighbor
/// left to repair the count.
fn enumerate_rec(g: &Graph, next: usize, partial: &mut VertexSet, out: &mut Vec<Fort>) {
    let n = g.n();
    if next == n {
        if !partial.is_empty() {
            out.push(Fort(partial.clone()));
        }
        return;
    }
    for include in [false, true] {
        if include {
            partial.insert(next);
        }
        let viable = (0..=next).all(|v| {
            if partial.contains(v) {
                return true;
            }
            let inside = g.neighbors(v).iter().filter(|&&w| w <= next && partial.contains(w)).count();
            let undecided = g.neighbors(v).iter().filter(|&&w| w > next).count();
            inside != 1 || undecided > 0
        });
        if viable {
            enumerate_rec(g, next + 1, partial, out);
        }
        if include {
            partial.remove(next);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::is_zero_forcing_set;
    use crate::gen::{gen_cycle, gen_path, gen_star};

    fn forts_naive(g: &Graph) -> Vec<VertexSet> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 1u64..(1 << n) {
            let s = VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
            if is_fort(g, &s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn triangle_forts() {
        let g = gen_cycle(3).unwrap();
        let forts = enumerate_forts(&g, 16).unwrap();
        let got: Vec<Vec<usize>> = forts.iter().map(|f| f.set().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn p3_forts() {
        let g = gen_path(3).unwrap();
        let forts = enumerate_forts(&g, 16).unwrap();
        let got: Vec<Vec<usize>> = forts.iter().map(|f| f.set().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn c4_forts_include_diagonals_and_v() {
        let g = gen_cycle(4).unwrap();
        let forts = enumerate_forts(&g, 16).unwrap();
        let sets: Vec<Vec<usize>> = forts.iter().map(|f| f.set().to_vec()).collect();
        assert!(sets.contains(&vec![0, 2]));
        assert!(sets.contains(&vec![1, 3]));
        assert!(sets.contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn whole_vertex_set_is_always_a_fort() {
        for g in [gen_path(1).unwrap(), gen_path(5).unwrap(), gen_star(6).unwrap()] {
            assert!(is_fort(&g, &g.vertex_set()));
        }
    }

    #[test]
    fn enumeration_matches_naive_filter() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let n = rng.gen_range(1..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.35 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let rec: Vec<VertexSet> = enumerate_forts(&g, 16)
                .unwrap()
                .into_iter()
                .map(Fort::into_set)
                .collect();
            assert_eq!(rec, forts_naive(&g));
        }
        assert!(enumerate_forts(&gen_path(17).unwrap(), 16).is_err());
    }

    #[test]
    fn closure_complement_is_a_violated_fort() {
        let g = gen_path(5).unwrap();
        let z = VertexSet::singleton(5, 2);
        let fort = closure_complement_fort(&g, &z).unwrap();
        assert!(is_fort(&g, fort.set()));
        assert!(fort.set().is_disjoint_from(&compute_closure(&g, &z)));
        assert!(closure_complement_fort(&g, &VertexSet::singleton(5, 0)).is_none());
    }

    #[test]
    fn greedy_fort_is_inclusion_minimal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = rng.gen_range(2..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.4 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let z = VertexSet::from_iter(n, (0..n).filter(|_| rng.gen::<f64>() < 0.2));
            match greedy_minimal_fort(&g, &z) {
                None => assert!(is_zero_forcing_set(&g, &z)),
                Some(fort) => {
                    assert!(is_fort(&g, fort.set()));
                    assert!(fort.set().is_disjoint_from(&compute_closure(&g, &z)));
                    // Minimality: no proper non-empty subset is a fort.
                    let members = fort.set().to_vec();
                    for mask in 1u64..(1 << members.len()) - 1 {
                        let sub = VertexSet::from_iter(
                            n,
                            members
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| mask >> i & 1 == 1)
                                .map(|(_, &v)| v),
                        );
                        assert!(!is_fort(&g, &sub), "{sub:?} inside {:?}", fort.set());
                    }
                }
            }
        }
    }

    #[test]
    fn duality_forcing_iff_hits_every_fort() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let n = rng.gen_range(1..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < 0.4 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let forts = enumerate_forts(&g, 16).unwrap();
            for mask in 0u64..(1 << n) {
                let z = VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1));
                let hits_all = forts.iter().all(|f| !f.set().is_disjoint_from(&z));
                assert_eq!(is_zero_forcing_set(&g, &z), hits_all);
            }
        }
    }
}

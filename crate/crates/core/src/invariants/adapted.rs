//! ℓ-adapted cycle families, k^i_ℓ, and the three-way lemma relating δ, κ
//! and k.

use super::kappa::{kappa, KappaValue};
use super::delta;
use crate::complex::{build_clique_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::graph::{common_neighbors, delete_vertices, Graph, VertexSet};
use crate::homology::{for_each_cycle, Degree};
use crate::subsets::{self, Colex};
use crate::value::{Caps, Extended};
use serde::Serialize;

/// How members of an adapted family must be disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjointness {
    /// No common face (the default reading).
    #[default]
    Support,
    /// No common vertex.
    Vertex,
}

/// A value that is exact unless `partial`, in which case it is a lower bound
/// (some search hit its cap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounded {
    pub value: Extended,
    pub partial: bool,
}

impl Bounded {
    pub fn exact(value: Extended) -> Self {
        Bounded { value, partial: false }
    }
}

/// k^i_ℓ(X): over nonzero classes γ, the least size of a largest family of
/// disjoint i-cycles of support ≤ ℓ each pairing to 1 with γ.
pub fn k_adapted_complex(x: &SimplicialComplex, i: usize, ell: usize, caps: &Caps, mode: Disjointness) -> Result<Bounded> {
    let d = Degree::new(x, i)?;
    let h = d.betti();
    if h == 0 {
        return Ok(Bounded::exact(Extended::Infinite));
    }
    let classes = (1u128 << h.min(127)) - 1;
    if classes > caps.classes as u128 {
        return Err(Error::guard("cohomology classes", classes, caps.classes));
    }

    let mut cycles: Vec<BitVector> = Vec::new();
    let mut overflow = false;
    for_each_cycle(&d, ell, caps.cycles, |z, _| {
        cycles.push(z.clone());
        overflow = cycles.len() as u64 > caps.cycles;
        overflow
    })?;
    if overflow {
        return Err(Error::guard("candidate cycles", cycles.len() as u128, caps.cycles));
    }
    cycles.sort_by_key(|z| z.count_ones());
    let footprint: Vec<BitVector> = match mode {
        Disjointness::Support => cycles.clone(),
        Disjointness::Vertex => cycles
            .iter()
            .map(|z| {
                let mut vs = BitVector::zeros(x.universe());
                for f in z.iter_ones() {
                    for &v in &x.faces(i)[f] {
                        vs.set(v, true);
                    }
                }
                vs
            })
            .collect(),
    };

    let mut best = Bounded::exact(Extended::Infinite);
    for sig in 1..=classes as u64 {
        let chi = d.class_cocycle(&BitVector::from_word(h, sig));
        let hits: Vec<usize> = (0..cycles.len()).filter(|&c| chi.dot(&cycles[c])).collect();
        // a candidate containing another is never needed in a largest family
        let minimal: Vec<usize> = hits
            .iter()
            .copied()
            .filter(|&c| !hits.iter().any(|&o| o != c && cycles[o].is_subset_of(&cycles[c]) && cycles[o] != cycles[c]))
            .collect();
        let fp: Vec<&BitVector> = minimal.iter().map(|&c| &footprint[c]).collect();
        let (size, partial) = max_packing(&fp, caps.cycles);
        let here = Extended::Finite(size);
        if here < best.value || (here == best.value && partial) {
            best = Bounded { value: here, partial };
        }
        if size == 0 && !partial {
            break;
        }
    }
    Ok(best)
}

/// Largest pairwise-disjoint subfamily, by branch and bound on the conflict
/// graph. Returns the best size found and whether the node cap cut it short.
fn max_packing(sets: &[&BitVector], node_cap: u64) -> (usize, bool) {
    let m = sets.len();
    let conflicts: Vec<BitVector> = (0..m)
        .map(|a| BitVector::from_indices(m, (0..m).filter(|&b| b != a && !sets[a].is_disjoint(sets[b]))))
        .collect();
    struct St<'a> {
        conflicts: &'a [BitVector],
        best: usize,
        nodes: u64,
        cap: u64,
    }
    fn rec(st: &mut St, remaining: BitVector, size: usize) -> bool {
        st.nodes += 1;
        if st.nodes > st.cap {
            return false;
        }
        let left = remaining.count_ones();
        if size + left <= st.best {
            return true;
        }
        let Some(v) = remaining.first_one() else {
            st.best = st.best.max(size);
            return true;
        };
        let mut with = remaining.clone();
        with.and_not_assign(&st.conflicts[v]);
        with.set(v, false);
        if !rec(st, with, size + 1) {
            return false;
        }
        if st.conflicts[v].and_count(&remaining) == 0 {
            // v conflicts with nothing left, so taking it is never worse
            return true;
        }
        let mut without = remaining;
        without.set(v, false);
        rec(st, without, size)
    }
    let mut st = St {
        conflicts: &conflicts,
        best: 0,
        nodes: 0,
        cap: node_cap,
    };
    let finished = rec(&mut st, BitVector::ones(m), 0);
    (st.best, !finished)
}

/// k^i_ℓ(G): minimum of k^i_ℓ(Cl(G - C)) over |C| < δ^i(G).
pub fn k_adapted_graph(g: &Graph, i: usize, ell: usize, caps: &Caps, mode: Disjointness) -> Result<Bounded> {
    // with δ^i infinite there are no i-faces anywhere, so every term is ∞
    let Extended::Finite(limit) = delta(g, i) else {
        return Ok(Bounded::exact(Extended::Infinite));
    };
    let n = g.n();
    let mut best = Bounded::exact(Extended::Infinite);
    for s in 0..limit.min(n + 1) {
        subsets::guard("deletion sets", n, s, caps.enumeration)?;
        for c in Colex::new(n, s) {
            let rest = delete_vertices(g, &VertexSet::from_indices(n, c));
            let x = build_clique_complex(&rest, i + 1, caps.faces)?;
            let r = k_adapted_complex(&x, i, ell, caps, mode)?;
            if r.value < best.value || (r.value == best.value && r.partial) {
                best = r;
            }
            if best.value == Extended::Finite(0) && !best.partial {
                return Ok(best);
            }
        }
    }
    Ok(best)
}

/// Outcome of checking the lemma "(i) or (ii) or (iii)" on one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRecord {
    pub delta: Extended,
    pub kappa: KappaValue,
    pub k: Bounded,
    pub case_i_holds: bool,
    pub case_ii_holds: bool,
    pub case_iii_holds: bool,
    /// A for case (i), in vertex indices.
    pub witness_i: Option<Vec<usize>>,
    /// (A, B) for case (ii).
    pub witness_ii: Option<(Vec<usize>, Vec<usize>)>,
}

impl PairRecord {
    pub fn holds(&self) -> bool {
        self.case_i_holds || self.case_ii_holds || self.case_iii_holds
    }
}

/// Evaluate all three clauses exactly:
///   (i)   some A, 1 ≤ |A| ≤ ℓ, with 2ℓ·δ ≥ |N(A)|·k
///   (ii)  some disjoint A, B, 1 ≤ |A| = |B| ≤ ℓ, with δ·|N(A ∪ B)| ≥ |N(A)|²
///   (iii) κ ≥ δ
/// Inequalities are cross-multiplied and use 0·∞ = 0.
pub fn pair_trichotomy_check(g: &Graph, i: usize, ell: usize, caps: &Caps) -> Result<PairRecord> {
    if ell == 0 {
        return Err(Error::Validation("ℓ must be at least 1".into()));
    }
    let n = g.n();
    let d = delta(g, i);
    let kap = kappa(g, i, n, caps)?.value;
    let k = k_adapted_graph(g, i, ell, caps, Disjointness::Support)?;
    let case_iii = match kap {
        KappaValue::Finite(v) => Extended::Finite(v) >= d,
        KappaValue::Infinite => true,
        KappaValue::UnknownAtLeast(_) => unreachable!("full search always decides"),
    };

    let lhs_i = d * Extended::Finite(2 * ell);
    let mut witness_i = None;
    'outer: for s in 1..=ell.min(n) {
        subsets::guard("sets A", n, s, caps.enumeration)?;
        for a in Colex::new(n, s) {
            let na = common_neighbors(g, &VertexSet::from_indices(n, a.iter().copied())).len();
            if lhs_i >= Extended::Finite(na) * k.value {
                witness_i = Some(a);
                break 'outer;
            }
        }
    }

    let mut witness_ii = None;
    'outer2: for s in 1..=ell.min(n / 2) {
        let pairs = crate::value::binomial(n, s).saturating_mul(crate::value::binomial(n - s, s));
        if pairs > caps.enumeration as u128 {
            return Err(Error::guard(format!("disjoint pairs of {s}-sets"), pairs, caps.enumeration));
        }
        for a in Colex::new(n, s) {
            let aset = VertexSet::from_indices(n, a.iter().copied());
            let na = common_neighbors(g, &aset).len();
            let others: Vec<usize> = (0..n).filter(|v| !aset.contains(*v)).collect();
            for bi in Colex::new(others.len(), s) {
                let b: Vec<usize> = bi.iter().map(|&j| others[j]).collect();
                let nab = common_neighbors(g, &aset.union(&VertexSet::from_indices(n, b.iter().copied()))).len();
                if d * Extended::Finite(nab) >= Extended::Finite(na * na) {
                    witness_ii = Some((a, b));
                    break 'outer2;
                }
            }
        }
    }

    Ok(PairRecord {
        delta: d,
        kappa: kap,
        k,
        case_i_holds: witness_i.is_some(),
        case_ii_holds: witness_ii.is_some(),
        case_iii_holds: case_iii,
        witness_i,
        witness_ii,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_clique_complex, delete_faces_complex, Face};

    const CAP: u64 = 1 << 20;

    fn cl(g: &Graph) -> SimplicialComplex {
        build_clique_complex(g, 2, CAP).unwrap()
    }

    #[test]
    fn complex_examples() {
        let caps = Caps::default();
        let c4 = cl(&Graph::cycle(4));
        let k = |x: &SimplicialComplex, ell| k_adapted_complex(x, 1, ell, &caps, Disjointness::Support).unwrap().value;
        assert_eq!(k(&c4, 4), Extended::Finite(1));
        assert_eq!(k(&c4, 3), Extended::Finite(0));
        assert_eq!(k(&cl(&Graph::complete(4)), 7), Extended::Infinite);
    }

    #[test]
    fn graph_examples() {
        let caps = Caps::default();
        let mode = Disjointness::Support;
        assert_eq!(k_adapted_graph(&Graph::cycle(4), 1, 4, &caps, mode).unwrap().value, Extended::Infinite);
        assert_eq!(k_adapted_graph(&Graph::complete(4), 1, 3, &caps, mode).unwrap().value, Extended::Infinite);
    }

    #[test]
    fn disjoint_triangles_pack() {
        // three hollow triangles glued at one vertex: every class meets only
        // its own triangles
        let caps = Caps::default();
        let mut g = Graph::empty(7);
        for (a, b) in [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (0, 5), (0, 6), (5, 6)] {
            g.add_edge(a, b);
        }
        let x = build_clique_complex(&g, 2, CAP).unwrap();
        let hollow = delete_faces_complex(
            &x,
            &[Face::new(vec![0, 1, 2]).unwrap(), Face::new(vec![0, 3, 4]).unwrap(), Face::new(vec![0, 5, 6]).unwrap()],
        );
        let s = k_adapted_complex(&hollow, 1, 6, &caps, Disjointness::Support).unwrap();
        assert_eq!(s.value, Extended::Finite(1));
        // a class pairing with two triangles sees them as support-disjoint but
        // not vertex-disjoint; the minimum over classes is still 1 either way
        let v = k_adapted_complex(&hollow, 1, 6, &caps, Disjointness::Vertex).unwrap();
        assert_eq!(v.value, Extended::Finite(1));
    }

    #[test]
    fn packing_search() {
        let sets: Vec<BitVector> = [vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![5]]
            .into_iter()
            .map(|s| BitVector::from_indices(6, s))
            .collect();
        let refs: Vec<&BitVector> = sets.iter().collect();
        assert_eq!(max_packing(&refs, 1000), (3, false));
        assert!(max_packing(&refs, 2).1);
    }

    #[test]
    fn monotone_in_ell() {
        let caps = Caps::default();
        for seed in 0..40 {
            let g = crate::graph::er_sample(8, 0.45, seed);
            let x = cl(&g);
            let mut prev = Extended::Finite(0);
            for ell in 1..=8 {
                let v = k_adapted_complex(&x, 1, ell, &caps, Disjointness::Support).unwrap().value;
                assert!(v >= prev, "seed {seed} ell {ell}");
                prev = v;
            }
        }
    }

    #[test]
    fn pair_examples() {
        let caps = Caps::default();
        assert!(pair_trichotomy_check(&Graph::complete(4), 1, 5, &caps).unwrap().case_iii_holds);
        let r = pair_trichotomy_check(&Graph::cycle(4), 1, 5, &caps).unwrap();
        assert!(r.case_iii_holds);
        assert_eq!(r.delta, Extended::Finite(0));
        assert_eq!(r.kappa, KappaValue::Finite(0));
    }
}

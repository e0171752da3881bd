//! Condition (S) pairs (C, E), the triangle lemma, f, τ, and condition (∗).

use super::delta;
use crate::complex::{build_clique_complex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::graph::{delete_vertices, Graph, VertexSet};
use crate::homology::{cocycle_norm_of, coset_min_weight, homology_norm_of, minimal_representatives, Degree};
use crate::subsets::{self, Colex};
use crate::value::{Caps, Extended};
use num_rational::Ratio;
use serde::Serialize;

use super::adapted::Bounded;

/// Everything needed to test many cochains E against one deletion set C.
pub struct SContext {
    removed: VertexSet,
    /// Surviving vertices, in the original indexing.
    survivors: Vec<usize>,
    /// Some vertex of G has its whole neighborhood inside C.
    pub dominated: bool,
    pub complex: SimplicialComplex,
    pub degree: Degree,
}

/// The individual clauses of (S).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SVerdict {
    pub no_dominated_vertex: bool,
    pub cocycle: bool,
    pub nontrivial: bool,
    pub minimal: bool,
}

impl SVerdict {
    pub fn holds(&self) -> bool {
        self.no_dominated_vertex && self.cocycle && self.nontrivial && self.minimal
    }
}

impl SContext {
    pub fn new(g: &Graph, c: &VertexSet, caps: &Caps) -> Result<Self> {
        if c.width() != g.n() {
            return Err(Error::WidthMismatch {
                expected: g.n(),
                got: c.width(),
            });
        }
        let dominated = (0..g.n()).any(|v| g.neighbors(v).is_subset_of(c.bits()));
        let rest = delete_vertices(g, c);
        let complex = build_clique_complex(&rest, 2, caps.faces)?;
        let degree = Degree::new(&complex, 1)?;
        Ok(SContext {
            removed: c.clone(),
            survivors: (0..g.n()).filter(|&v| !c.contains(v)).collect(),
            dominated,
            complex,
            degree,
        })
    }

    /// Edges of G - C in the order E is indexed by, as original vertex pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.complex.faces(1).iter().map(|e| (self.survivors[e[0]], self.survivors[e[1]])).collect()
    }

    pub fn removed(&self) -> &VertexSet {
        &self.removed
    }

    pub fn check(&self, e: &BitVector, caps: &Caps) -> Result<SVerdict> {
        if e.width() != self.degree.faces() {
            return Err(Error::WidthMismatch {
                expected: self.degree.faces(),
                got: e.width(),
            });
        }
        let cocycle = self.degree.is_cocycle(e);
        let nontrivial = cocycle && !self.degree.signature(e).is_zero();
        let minimal = nontrivial && coset_min_weight(&self.degree, e, caps)? == e.count_ones();
        Ok(SVerdict {
            no_dominated_vertex: !self.dominated,
            cocycle,
            nontrivial,
            minimal,
        })
    }

    /// max over surviving v of |N_E(v)|.
    pub fn max_e_degree(&self, e: &BitVector) -> usize {
        let mut deg = vec![0usize; self.survivors.len()];
        for j in e.iter_ones() {
            let f = &self.complex.faces(1)[j];
            deg[f[0]] += 1;
            deg[f[1]] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Does (C, E) satisfy (S)? E is indexed by the edges of G - C in
/// lexicographic order.
pub fn satisfies_s(g: &Graph, c: &VertexSet, e: &BitVector, caps: &Caps) -> Result<bool> {
    Ok(SContext::new(g, c, caps)?.check(e, caps)?.holds())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TriangleViolation {
    /// A triangle of G outside the three allowed patterns (vertex labels).
    Triangle {
        vertices: [usize; 3],
        edges_in_e: usize,
        vertices_in_c: usize,
    },
    /// An edge of G - C lying in no triangle of G - C (reported only when
    /// |C| < δ^1(G)).
    EdgeWithoutTriangle { edge: (usize, usize) },
}

/// Scan every triangle of G: allowed are no edge in E, two edges in E, or
/// one edge in E with the opposite vertex in C.
pub fn triangle_trichotomy_check(g: &Graph, c: &VertexSet, e: &BitVector) -> Result<Vec<TriangleViolation>> {
    let n = g.n();
    let survivors: Vec<usize> = (0..n).filter(|&v| !c.contains(v)).collect();
    let rest = delete_vertices(g, c);
    let edges: Vec<(usize, usize)> = rest.edges().map(|(a, b)| (survivors[a], survivors[b])).collect();
    if e.width() != edges.len() {
        return Err(Error::WidthMismatch {
            expected: edges.len(),
            got: e.width(),
        });
    }
    let in_e = |u: usize, v: usize| -> bool {
        let key = (u.min(v), u.max(v));
        edges.binary_search(&key).is_ok_and(|j| e.get(j))
    };
    let mut out = Vec::new();
    for u in 0..n {
        for v in g.neighbors(u).iter_ones().filter(|&v| v > u) {
            for w in g.neighbors(u).and(g.neighbors(v)).iter_ones().filter(|&w| w > v) {
                let sides = [((u, v), w), ((u, w), v), ((v, w), u)];
                let marked: Vec<usize> = sides.iter().filter(|((a, b), _)| in_e(*a, *b)).map(|(_, o)| *o).collect();
                let ok = match marked.len() {
                    0 | 2 => true,
                    1 => c.contains(marked[0]),
                    _ => false,
                };
                if !ok {
                    out.push(TriangleViolation::Triangle {
                        vertices: [g.label(u), g.label(v), g.label(w)],
                        edges_in_e: marked.len(),
                        vertices_in_c: [u, v, w].iter().filter(|&&x| c.contains(x)).count(),
                    });
                }
            }
        }
    }
    if Extended::Finite(c.len()) < delta(g, 1) {
        for &(u, v) in &edges {
            let mut common = g.neighbors(u).and(g.neighbors(v));
            common.and_not_assign(c.bits());
            if common.is_zero() {
                out.push(TriangleViolation::EdgeWithoutTriangle {
                    edge: (g.label(u), g.label(v)),
                });
            }
        }
    }
    Ok(out)
}

/// f(G): least max E-degree over (S)-pairs (C, E), searching |C| ≤
/// `c_size_cap` and every minimum-weight representative of every class.
/// `partial` is set whenever the C-range was truncated.
pub fn f_invariant(g: &Graph, c_size_cap: usize, caps: &Caps) -> Result<Bounded> {
    let n = g.n();
    let mut best = Extended::Infinite;
    'sizes: for s in 0..=c_size_cap.min(n) {
        subsets::guard("deletion sets", n, s, caps.enumeration)?;
        for c in Colex::new(n, s) {
            let c = VertexSet::from_indices(n, c);
            if (0..n).any(|v| g.neighbors(v).is_subset_of(c.bits())) {
                continue;
            }
            let ctx = SContext::new(g, &c, caps)?;
            for class in minimal_representatives(&ctx.degree, caps)? {
                for e in &class.representatives {
                    best = best.min(Extended::Finite(ctx.max_e_degree(e)));
                }
            }
            // E is nonempty, so someone has E-degree at least 1
            if best == Extended::Finite(1) {
                break 'sizes;
            }
        }
    }
    Ok(Bounded {
        value: best,
        partial: c_size_cap < n,
    })
}

/// τ(G): least |D| such that G - D has at least two vertex pairs at distance
/// greater than 2 (disconnected pairs count). Works on graphs with at most
/// 64 vertices.
pub fn tau(g: &Graph, caps: &Caps) -> Result<Extended> {
    let n = g.n();
    let Some(adj) = g.masks() else {
        return Err(Error::Validation(format!("tau supports at most 64 vertices, got {n}")));
    };
    if n < 3 {
        return Ok(Extended::Infinite);
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for s in 0..=n - 3 {
        subsets::guard("deletion sets", n, s, caps.enumeration).map_err(|e| e.with_lower_bound(s))?;
        for d in subsets::masks(n, s) {
            if far_pairs_reach_two(&adj, full & !d) {
                return Ok(Extended::Finite(s));
            }
        }
    }
    Ok(Extended::Infinite)
}

fn far_pairs_reach_two(adj: &[u64], alive: u64) -> bool {
    let mut count = 0;
    let mut it = alive;
    while it != 0 {
        let u = it.trailing_zeros() as usize;
        it &= it - 1;
        let near = adj[u] & alive;
        let mut ball = near | (1u64 << u);
        let mut m = near;
        while m != 0 {
            let w = m.trailing_zeros() as usize;
            m &= m - 1;
            ball |= adj[w];
        }
        // only count partners above u
        count += (alive & !ball & it).count_ones();
        if count >= 2 {
            return true;
        }
    }
    false
}

/// Clause-by-clause evaluation of condition (∗) for one deletion set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelicateRecord {
    /// |C| ≤ n p^{i+1} (2 - ε).
    pub size_ok: bool,
    pub h_norm: usize,
    /// ‖H̃_i(Cl(G - C))‖_h ≤ ℓ_i.
    pub h_norm_ok: bool,
    /// Some v has N(v) ⊆ C.
    pub dominated_vertex_exists: bool,
    pub c_norm: Extended,
    /// ‖H̃^i(Cl(G - C))‖_c ≥ n^{i+1} p^{r_i}.
    pub c_norm_ok: bool,
    /// h_norm_ok and (dominated or c_norm_ok); only meaningful when size_ok.
    pub verdict: Option<bool>,
}

#[allow(clippy::too_many_arguments)]
pub fn delicate_check(
    g: &Graph,
    i: usize,
    c: &VertexSet,
    eps: Ratio<i64>,
    ell_i: usize,
    r_i: Ratio<i64>,
    p: f64,
    caps: &Caps,
) -> Result<DelicateRecord> {
    let n = g.n() as f64;
    let eps = crate::graph::ratio_to_f64(eps);
    let r = crate::graph::ratio_to_f64(r_i);
    let size_ok = (c.len() as f64) <= n * p.powi(i as i32 + 1) * (2.0 - eps);
    let rest = delete_vertices(g, c);
    let x = build_clique_complex(&rest, i + 1, caps.faces)?;
    let d = Degree::new(&x, i)?;
    let h_norm = homology_norm_of(&d, caps)?;
    let dominated = (0..g.n()).any(|v| g.neighbors(v).is_subset_of(c.bits()));
    let c_norm = cocycle_norm_of(&d, caps)?;
    let threshold = n.powi(i as i32 + 1) * p.powf(r);
    let c_norm_ok = match c_norm {
        Extended::Infinite => true,
        Extended::Finite(v) => v as f64 >= threshold,
    };
    let h_norm_ok = h_norm <= ell_i;
    Ok(DelicateRecord {
        size_ok,
        h_norm,
        h_norm_ok,
        dominated_vertex_exists: dominated,
        c_norm,
        c_norm_ok,
        verdict: size_ok.then_some(h_norm_ok && (dominated || c_norm_ok)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::er_sample;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn s_examples() {
        let c4 = Graph::cycle(4);
        let none = VertexSet::empty(4);
        assert!(satisfies_s(&c4, &none, &BitVector::from_indices(4, [0]), &caps()).unwrap());
        assert!(!satisfies_s(&c4, &none, &BitVector::from_indices(4, [0, 1, 2]), &caps()).unwrap());
        let k4 = Graph::complete(4);
        for m in 0u64..64 {
            assert!(!satisfies_s(&k4, &VertexSet::empty(4), &BitVector::from_word(6, m), &caps()).unwrap());
        }
        assert!(satisfies_s(&c4, &none, &BitVector::zeros(3), &caps()).is_err());
    }

    #[test]
    fn triangle_examples() {
        let c4 = Graph::cycle(4);
        assert!(triangle_trichotomy_check(&c4, &VertexSet::empty(4), &BitVector::from_indices(4, [0])).unwrap().is_empty());
        let k4 = Graph::complete(4);
        // three edges of triangle 012: edges (0,1),(0,2),(1,2) are 0, 1, 3
        let v = triangle_trichotomy_check(&k4, &VertexSet::empty(4), &BitVector::from_indices(6, [0, 1, 3])).unwrap();
        assert!(v.contains(&TriangleViolation::Triangle {
            vertices: [0, 1, 2],
            edges_in_e: 3,
            vertices_in_c: 0
        }));
    }

    #[test]
    fn s_pairs_obey_the_triangle_lemma() {
        for seed in 0..25 {
            let g = er_sample(6, 0.6, seed);
            for cm in 0u64..1 << 6 {
                let c = VertexSet::from_mask(6, cm);
                let ctx = SContext::new(&g, &c, &caps()).unwrap();
                let m = ctx.degree.faces();
                if m > 12 || ctx.dominated || ctx.degree.betti() == 0 {
                    continue;
                }
                for em in 1u64..1 << m {
                    let e = BitVector::from_word(m, em);
                    if ctx.check(&e, &caps()).unwrap().holds() {
                        assert!(triangle_trichotomy_check(&g, &c, &e).unwrap().is_empty(), "seed {seed}");
                    }
                }
            }
        }
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_invariant(&Graph::cycle(4), 0, &caps()).unwrap(), Bounded { value: Extended::Finite(1), partial: true });
        assert_eq!(f_invariant(&Graph::complete(4), 4, &caps()).unwrap(), Bounded::exact(Extended::Infinite));
        assert_eq!(f_invariant(&Graph::cycle(5), 0, &caps()).unwrap().value, Extended::Finite(1));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&Graph::cycle(6), &caps()).unwrap(), Extended::Finite(0));
        assert_eq!(tau(&Graph::complete(6), &caps()).unwrap(), Extended::Infinite);
        // one deletion leaves P_4 with a single far pair; two non-adjacent
        // deletions leave an isolated vertex, far from both others
        assert_eq!(tau(&Graph::cycle(5), &caps()).unwrap(), Extended::Finite(2));
    }

    #[test]
    fn delicate_examples() {
        let half = Ratio::new(1, 2);
        let five = Ratio::from_integer(5);
        let r = delicate_check(&Graph::cycle(4), 1, &VertexSet::empty(4), half, 5, five, 0.5, &caps()).unwrap();
        assert_eq!(r.h_norm, 4);
        assert!(r.h_norm_ok);
        let r = delicate_check(&Graph::complete(4), 1, &VertexSet::empty(4), half, 5, five, 0.5, &caps()).unwrap();
        assert!(r.h_norm_ok && r.c_norm_ok);
        assert_eq!(r.c_norm, Extended::Infinite);
        let g = er_sample(8, 0.5, 3);
        let c = g.neighbor_set(0);
        let r = delicate_check(&g, 1, &c, half, 5, five, 0.5, &caps()).unwrap();
        assert!(r.dominated_vertex_exists);
    }
}

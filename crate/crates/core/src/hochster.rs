//! Betti tables of Stanley–Reisner rings of clique complexes via Hochster's
//! formula, strands and the module norms.
//!
//! β_{i,i+j} = Σ_{|W| = i+j} dim H̃^{j-1}(Δ|_W), over F2. Entries are stored
//! as (i, j) → β_{i,i+j}: homological degree i, strand j.

use crate::complex::{build_clique_complex, induced_subcomplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::homology::{cocycle_norm, homology_norm, reduced_betti_all};
use crate::invariants::{kappa, KappaValue};
use crate::value::{Caps, Extended};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

impl BettiTable {
    /// β_{i,i+j}.
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries as ((i, j), β_{i,i+j}), ordered by (i, j).
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    fn add(&mut self, i: usize, j: usize, v: u64) {
        if v > 0 {
            *self.entries.entry((i, j)).or_insert(0) += v;
        }
    }

    /// Rows `i,j,degree,beta` (degree = i + j), one per nonzero entry.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["i", "j", "degree", "beta"]).map_err(csv_err)?;
        for ((i, j), b) in self.entries() {
            out.serialize((i, j, i + j, b)).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Macaulay2-style grid: columns are homological degrees, rows strands.
    pub fn grid(&self) -> String {
        let max_i = self.entries.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.entries.keys().map(|k| k.1).max().unwrap_or(0);
        let cell = |v: u64| if v == 0 { ".".to_string() } else { v.to_string() };
        let width = self.entries.values().map(|v| v.to_string().len()).max().unwrap_or(1).max(max_i.to_string().len());
        let mut s = String::new();
        let _ = write!(s, "{:>7}", "");
        for i in 0..=max_i {
            let _ = write!(s, " {i:>width$}");
        }
        s.push('\n');
        let _ = write!(s, "{:>7}", "total:");
        for i in 0..=max_i {
            let t: u64 = (0..=max_j).map(|j| self.get(i, j)).sum();
            let _ = write!(s, " {:>width$}", cell(t));
        }
        s.push('\n');
        for j in 0..=max_j {
            let _ = write!(s, "{:>7}", format!("{j}:"));
            for i in 0..=max_i {
                let _ = write!(s, " {:>width$}", cell(self.get(i, j)));
            }
            s.push('\n');
        }
        s
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Hochster sum over all 2^n vertex subsets W. `x` must be known in full and
/// live on `n` vertices.
pub fn betti_table(x: &SimplicialComplex, n: usize, caps: &Caps) -> Result<BettiTable> {
    if x.universe() != n {
        return Err(Error::Validation(format!("complex has {} vertices, expected {n}", x.universe())));
    }
    if n > caps.hochster_vertices {
        return Err(Error::guard("Hochster subsets", 1u128 << n.min(127), 1u64 << caps.hochster_vertices.min(63)));
    }
    if x.complete_through() != usize::MAX && x.complete_through() + 1 < n {
        return Err(Error::InsufficientDimension {
            built: x.complete_through(),
            needed: n.saturating_sub(1),
        });
    }
    let mut table = BettiTable {
        n,
        entries: BTreeMap::new(),
    };
    for w in 0u64..1 << n {
        let size = w.count_ones() as usize;
        let sub = induced_subcomplex(x, &VertexSet::from_mask(n, w));
        // betti[k + 1] = dim H̃^k, k ≥ -1; strand j = k + 1
        for (j, &b) in reduced_betti_all(&sub)?.iter().enumerate() {
            if b > 0 {
                table.add(size - j, j, b as u64);
            }
        }
    }
    Ok(table)
}

/// Betti table of Cl(G).
pub fn graph_betti_table(g: &Graph, caps: &Caps) -> Result<BettiTable> {
    if g.n() > caps.hochster_vertices {
        return Err(Error::guard("Hochster subsets", 1u128 << g.n().min(127), 1u64 << caps.hochster_vertices.min(63)));
    }
    let x = build_clique_complex(g, g.n().saturating_sub(1), caps.faces)?;
    betti_table(&x, g.n(), caps)
}

/// λ^j: the largest homological degree with a nonzero entry in strand j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrandLength {
    /// The strand has no nonzero entry.
    Empty,
    Length(usize),
}

impl StrandLength {
    /// The 0-for-empty reading.
    pub fn or_zero(self) -> usize {
        match self {
            StrandLength::Empty => 0,
            StrandLength::Length(l) => l,
        }
    }
}

impl fmt::Display for StrandLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrandLength::Empty => f.write_str("inf"),
            StrandLength::Length(l) => write!(f, "{l}"),
        }
    }
}

impl Serialize for StrandLength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            StrandLength::Empty => s.serialize_str("inf"),
            StrandLength::Length(l) => s.serialize_u64(*l as u64),
        }
    }
}

pub fn strand_length(b: &BettiTable, j: usize) -> StrandLength {
    b.entries
        .keys()
        .filter(|k| k.1 == j)
        .map(|k| k.0)
        .max()
        .map_or(StrandLength::Empty, StrandLength::Length)
}

pub fn projective_dimension(b: &BettiTable) -> usize {
    b.entries.keys().map(|k| k.0).max().unwrap_or(0)
}

/// Both sides of λ^i = n - i - κ^{i-1}, computed independently.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrandIdentity {
    pub n: usize,
    pub i: usize,
    pub lambda: StrandLength,
    pub kappa: KappaValue,
    /// n - i - κ^{i-1}; infinite when κ is.
    pub predicted: Extended,
    pub equal: bool,
}

/// Strand i has an entry in homological degree |W| - i exactly when
/// H̃^{i-1}(Cl(G[W])) ≠ 0, so its length is n - i minus the fewest deletions
/// producing that cohomology. An infinite κ matches an empty strand.
pub fn strand_kappa_identity_check(g: &Graph, i: usize, caps: &Caps) -> Result<StrandIdentity> {
    if i == 0 {
        return Err(Error::Validation("the strand identity needs i ≥ 1".into()));
    }
    let n = g.n();
    let lambda = strand_length(&graph_betti_table(g, caps)?, i);
    let kap = kappa(g, i - 1, n, caps)?.value;
    let (predicted, equal) = match kap {
        KappaValue::Finite(k) => {
            let p = (n as isize) - (i as isize) - (k as isize);
            let eq = p >= 0 && lambda == StrandLength::Length(p as usize);
            (Extended::Finite(p.max(0) as usize), eq)
        }
        KappaValue::Infinite => (Extended::Infinite, lambda == StrandLength::Empty),
        KappaValue::UnknownAtLeast(_) => unreachable!("full search always decides"),
    };
    Ok(StrandIdentity {
        n,
        i,
        lambda,
        kappa: kap,
        predicted,
        equal,
    })
}

/// ‖K[Cl(G)]‖^i, identified with the least support of a nontrivial i-cocycle.
pub fn module_norm_upper(g: &Graph, i: usize, caps: &Caps) -> Result<Extended> {
    let x = build_clique_complex(g, i + 1, caps.faces)?;
    cocycle_norm(&x, i, caps)
}

/// ‖K[Cl(G)]‖_i, identified with the spanning-cycle threshold of H̃_i.
pub fn module_norm_lower(g: &Graph, i: usize, caps: &Caps) -> Result<usize> {
    let x = build_clique_complex(g, i + 1, caps.faces)?;
    homology_norm(&x, i, caps)
}

/// Minimal non-faces of Cl(G), i.e. the non-edges, as label pairs.
pub fn nonface_generators(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let mut out: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).filter(move |&v| !g.has_edge(u, v)).map(move |v| (u, v)))
        .map(|(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            (a.min(b), a.max(b))
        })
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::er_sample;
    use crate::value::binomial;

    fn caps() -> Caps {
        Caps::default()
    }

    fn table(g: &Graph) -> BettiTable {
        graph_betti_table(g, &caps()).unwrap()
    }

    #[test]
    fn c4_table() {
        let b = table(&Graph::cycle(4));
        let got: Vec<_> = b.entries().collect();
        assert_eq!(got, vec![((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]);
        assert_eq!(strand_length(&b, 1), StrandLength::Length(1));
        assert_eq!(strand_length(&b, 2), StrandLength::Length(2));
        assert_eq!(projective_dimension(&b), 2);
        let mut csv = Vec::new();
        b.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "i,j,degree,beta\n0,0,0,1\n1,1,2,2\n2,2,4,1\n");
    }

    #[test]
    fn simplex_and_points() {
        for n in 1..6 {
            let b = table(&Graph::complete(n));
            assert_eq!(b.entries().collect::<Vec<_>>(), vec![((0, 0), 1)]);
            assert_eq!(projective_dimension(&b), 0);
            assert_eq!(strand_length(&b, 3), StrandLength::Empty);
        }
        let b = table(&Graph::empty(2));
        assert_eq!(b.get(1, 1), 1);
        assert_eq!(strand_length(&b, 1), StrandLength::Length(1));
        assert_eq!(projective_dimension(&b), 1);
    }

    #[test]
    fn vanishing_below_the_diagonal() {
        for seed in 0..40 {
            let b = table(&er_sample(7, 0.5, seed));
            assert_eq!(b.get(0, 0), 1);
            for ((i, j), _) in b.entries() {
                assert!(j >= 1 || (i, j) == (0, 0), "β_{{{i},{}}} nonzero", i + j);
            }
        }
    }

    #[test]
    fn alternating_sums_match_face_counts() {
        // K(t) = Σ_k f_{k-1} t^k (1 - t)^{n-k}
        for seed in 0..40 {
            let n = 3 + seed as usize % 5;
            let g = er_sample(n, 0.5, seed);
            let x = build_clique_complex(&g, n, 1 << 20).unwrap();
            let b = table(&g);
            let mut f = vec![1i64];
            f.extend((0..n).map(|d| x.count(d) as i64));
            for d in 0..=n {
                let lhs: i64 = (0..=d).map(|i| if i % 2 == 0 { 1 } else { -1 } * b.get(i, d - i) as i64).sum();
                let rhs: i64 = (0..=d)
                    .map(|k| f[k] * if (d - k) % 2 == 0 { 1 } else { -1 } * binomial(n - k, d - k) as i64)
                    .sum();
                assert_eq!(lhs, rhs, "seed {seed} degree {d}");
            }
        }
    }

    #[test]
    fn relabeling_invariance() {
        for seed in 0..20 {
            let g = er_sample(6, 0.5, seed);
            let perm = [3usize, 5, 0, 1, 4, 2];
            let h = Graph::from_edges(6, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
            assert_eq!(table(&g).entries, table(&h).entries);
        }
    }

    #[test]
    fn identity_examples() {
        let r = strand_kappa_identity_check(&Graph::cycle(4), 2, &caps()).unwrap();
        assert_eq!(r.lambda, StrandLength::Length(2));
        assert_eq!(r.kappa, KappaValue::Finite(0));
        assert!(r.equal);
        let r = strand_kappa_identity_check(&Graph::complete(4), 1, &caps()).unwrap();
        assert_eq!(r.lambda, StrandLength::Empty);
        assert_eq!(r.kappa, KappaValue::Infinite);
        assert!(r.equal);
        let r = strand_kappa_identity_check(&Graph::empty(2), 1, &caps()).unwrap();
        assert_eq!((r.lambda, r.kappa), (StrandLength::Length(1), KappaValue::Finite(0)));
        assert!(r.equal);
    }

    #[test]
    fn norm_and_generator_examples() {
        let c = caps();
        assert_eq!(module_norm_upper(&Graph::cycle(4), 1, &c).unwrap(), Extended::Finite(1));
        assert_eq!(module_norm_upper(&Graph::complete(4), 1, &c).unwrap(), Extended::Infinite);
        assert_eq!(module_norm_upper(&Graph::cycle(5), 1, &c).unwrap(), Extended::Finite(1));
        assert_eq!(module_norm_lower(&Graph::cycle(4), 1, &c).unwrap(), 4);
        assert_eq!(module_norm_lower(&Graph::complete(4), 1, &c).unwrap(), 0);
        assert_eq!(module_norm_lower(&Graph::cycle(4).disjoint_union(&Graph::cycle(5)), 1, &c).unwrap(), 5);
        assert_eq!(nonface_generators(&Graph::cycle(4)), vec![(0, 2), (1, 3)]);
        assert!(nonface_generators(&Graph::complete(5)).is_empty());
        assert_eq!(nonface_generators(&Graph::empty(3)), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn grid_layout() {
        let g = table(&Graph::cycle(4)).grid();
        assert!(g.contains("total: 1 2 1"), "{g}");
        assert!(g.contains("1: . 2 ."), "{g}");
    }

    #[test]
    fn guards() {
        let small = Caps {
            hochster_vertices: 4,
            ..Caps::default()
        };
        assert!(graph_betti_table(&Graph::cycle(5), &small).unwrap_err().is_resource_guard());
        let x = build_clique_complex(&Graph::complete(5), 1, 1 << 20).unwrap();
        assert!(betti_table(&x, 5, &caps()).is_err());
    }
}

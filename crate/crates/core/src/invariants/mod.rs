//! δ^i, κ^i over F2 and the objects built around them: cross-polytope
//! witnesses, adapted cycle families, condition (S), f, τ and the
//! condition-(∗) check.

mod adapted;
mod kappa;
mod s_pairs;

pub use adapted::{k_adapted_complex, k_adapted_graph, pair_trichotomy_check, Bounded, Disjointness, PairRecord};
pub use kappa::{kappa, kappa_with, KappaMethod, KappaOptions, KappaResult, KappaValue};
pub use s_pairs::{
    delicate_check, f_invariant, satisfies_s, tau, triangle_trichotomy_check, DelicateRecord, SContext, SVerdict,
    TriangleViolation,
};

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::graph::Graph;
use crate::value::Extended;
use serde::Serialize;

/// Visit every k-clique (ascending vertex order) together with its common
/// neighborhood. Stops early when `f` returns true.
pub fn for_each_clique(g: &Graph, k: usize, mut f: impl FnMut(&[usize], &BitVector) -> bool) {
    if k == 0 {
        f(&[], &BitVector::ones(g.n()));
        return;
    }
    let mut stack = Vec::with_capacity(k);
    fn rec(g: &Graph, k: usize, stack: &mut Vec<usize>, common: &BitVector, f: &mut impl FnMut(&[usize], &BitVector) -> bool) -> bool {
        if stack.len() == k {
            return f(stack, common);
        }
        let last = *stack.last().unwrap();
        for w in common.iter_ones().filter(|&w| w > last) {
            let next = common.and(g.neighbors(w));
            stack.push(w);
            let stop = rec(g, k, stack, &next, f);
            stack.pop();
            if stop {
                return true;
            }
        }
        false
    }
    for v in 0..g.n() {
        stack.push(v);
        let stop = rec(g, k, &mut stack, g.neighbors(v), &mut f);
        stack.pop();
        if stop {
            return;
        }
    }
}

/// δ^i: least common-neighborhood size over the i-dimensional faces
/// ((i+1)-cliques); infinite when there are none.
pub fn delta(g: &Graph, i: usize) -> Extended {
    let mut best = Extended::Infinite;
    for_each_clique(g, i + 1, |_, common| {
        best = best.min(Extended::Finite(common.count_ones()));
        best == Extended::Finite(0)
    });
    best
}

/// Outcome of the greedy cross-polytope construction. A failure says only
/// that the greedy choice got stuck, not that no cross-polytope exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CrossPolytopeWitness {
    /// `b[j]` is the antipode of `a[j]` (vertex indices).
    Found { a: Vec<usize>, b: Vec<usize> },
    Failure { step: usize },
}

/// Greedy construction: b_j is the lowest vertex of
/// N((A - a_j) ∪ {b_0..b_{j-1}}) - N(a_j) outside A. On success the induced
/// graph on A ∪ B is the cross-polytope graph, whose clique complex is the
/// boundary of the (i+1)-dimensional cross-polytope.
pub fn cross_polytope_witness(g: &Graph, a: &[usize]) -> Result<CrossPolytopeWitness> {
    let mut a = a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.iter().any(|&v| v >= g.n()) {
        return Err(Error::Validation("witness base must be a nonempty set of vertices".into()));
    }
    for (x, &u) in a.iter().enumerate() {
        for &v in &a[x + 1..] {
            if !g.has_edge(u, v) {
                return Err(Error::Validation(format!("{u} and {v} are not adjacent; the base must be a clique")));
            }
        }
    }
    let mut b: Vec<usize> = Vec::with_capacity(a.len());
    for j in 0..a.len() {
        let mut cand = BitVector::ones(g.n());
        for (x, &u) in a.iter().enumerate() {
            if x != j {
                cand.and_assign(g.neighbors(u));
            }
        }
        for &w in &b {
            cand.and_assign(g.neighbors(w));
        }
        cand.and_not_assign(g.neighbors(a[j]));
        for &u in &a {
            cand.set(u, false);
        }
        match cand.first_one() {
            Some(v) => b.push(v),
            None => return Ok(CrossPolytopeWitness::Failure { step: j }),
        }
    }
    verify_cross_polytope(g, &a, &b)?;
    Ok(CrossPolytopeWitness::Found { a, b })
}

fn verify_cross_polytope(g: &Graph, a: &[usize], b: &[usize]) -> Result<()> {
    let all: Vec<usize> = a.iter().chain(b).copied().collect();
    let k = a.len();
    for x in 0..all.len() {
        for y in x + 1..all.len() {
            let antipodal = y == x + k;
            if all[x] == all[y] || g.has_edge(all[x], all[y]) == antipodal {
                return Err(Error::Validation(format!("greedy witness {a:?} / {b:?} is not a cross-polytope")));
            }
        }
    }
    Ok(())
}

/// Does removing the edge {u, v} disconnect u from v?
pub fn edge_is_isthmus(g: &Graph, u: usize, v: usize) -> Result<bool> {
    if u >= g.n() || v >= g.n() || !g.has_edge(u, v) {
        return Err(Error::Validation(format!("{{{u}, {v}}} is not an edge")));
    }
    let mut seen = BitVector::zeros(g.n());
    seen.set(u, true);
    let mut queue = vec![u];
    while let Some(x) = queue.pop() {
        for y in g.neighbors(x).iter_ones() {
            if (x == u && y == v) || seen.get(y) {
                continue;
            }
            if y == v {
                return Ok(false);
            }
            seen.set(y, true);
            queue.push(y);
        }
    }
    Ok(true)
}

//! κ^i over F2 by exhaustive search over deletion sets.

use super::for_each_clique;
use crate::complex::build_clique_complex;
use crate::error::{Error, Result};
use crate::graph::{delete_vertices, min_vertex_separator, Graph, VertexSet};
use crate::homology::reduced_betti;
use crate::subsets::{self, Colex};
use crate::value::Caps;
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaValue {
    Finite(usize),
    Infinite,
    /// The search stopped at its size cap; the true value is at least this.
    UnknownAtLeast(usize),
}

impl KappaValue {
    pub fn is_decided(&self) -> bool {
        !matches!(self, KappaValue::UnknownAtLeast(_))
    }
}

impl fmt::Display for KappaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaValue::Finite(v) => write!(f, "{v}"),
            KappaValue::Infinite => f.write_str("inf"),
            KappaValue::UnknownAtLeast(_) => f.write_str("unknown"),
        }
    }
}

impl Serialize for KappaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            KappaValue::Finite(v) => s.serialize_u64(*v as u64),
            KappaValue::Infinite => s.serialize_str("inf"),
            KappaValue::UnknownAtLeast(b) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("unknown_at_least", b)?;
                m.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaResult {
    pub value: KappaValue,
    pub witness: Option<VertexSet>,
    /// dim H̃^i of Cl(G - witness).
    pub witness_dim_h: Option<usize>,
}

impl KappaResult {
    fn without_witness(value: KappaValue) -> Self {
        KappaResult {
            value,
            witness: None,
            witness_dim_h: None,
        }
    }

    /// Witness in the graph's labels.
    pub fn witness_labels(&self, g: &Graph) -> Option<Vec<usize>> {
        self.witness.as_ref().map(|c| c.iter().map(|v| g.label(v)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMethod {
    /// Deletion sets by increasing size.
    Exhaustive,
    /// Max-flow vertex connectivity for i = 0, exhaustive otherwise.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KappaOptions {
    /// Largest deletion-set size searched; `None` searches everything.
    pub size_cap: Option<usize>,
    /// Within each size class, try the common neighborhoods N(I) of i-faces
    /// before the colex sweep. They are the natural candidates (deleting N(I)
    /// makes I a maximal face), so hits come early.
    pub probe: bool,
    pub method: KappaMethod,
}

impl Default for KappaOptions {
    fn default() -> Self {
        KappaOptions {
            size_cap: None,
            probe: true,
            method: KappaMethod::Exhaustive,
        }
    }
}

/// κ^i: least |C| with H̃^i(Cl(G - C); F2) ≠ 0, searching |C| ≤ size_cap.
pub fn kappa(g: &Graph, i: usize, size_cap: usize, caps: &Caps) -> Result<KappaResult> {
    if size_cap > g.n() {
        return Err(Error::Validation(format!("size cap {size_cap} exceeds n = {}", g.n())));
    }
    let opts = KappaOptions {
        size_cap: Some(size_cap),
        ..KappaOptions::default()
    };
    kappa_with(g, i, &opts, caps)
}

pub fn kappa_with(g: &Graph, i: usize, opts: &KappaOptions, caps: &Caps) -> Result<KappaResult> {
    let n = g.n();
    if opts.method == KappaMethod::Auto && i == 0 {
        return Ok(kappa0_by_flow(g));
    }
    // without i-faces no deletion can create i-dimensional cohomology
    let mut has_face = false;
    for_each_clique(g, i + 1, |_, _| {
        has_face = true;
        true
    });
    if !has_face {
        return Ok(KappaResult::without_witness(KappaValue::Infinite));
    }
    // nonzero H̃^i needs at least i + 2 surviving vertices
    let Some(last) = n.checked_sub(i + 2) else {
        return Ok(KappaResult::without_witness(KappaValue::Infinite));
    };
    let cap = opts.size_cap.unwrap_or(n).min(n);
    let tester = Tester::new(g, i, caps);
    let probes = if opts.probe { probe_sets(g, i) } else { Vec::new() };
    for s in 0..=cap.min(last) {
        for p in probes.iter().filter(|p| p.len() == s) {
            if tester.nonzero(p)? {
                return tester.found(p.clone());
            }
        }
        subsets::guard("deletion sets", n, s, caps.enumeration).map_err(|e| e.with_lower_bound(s))?;
        if let Some(masks) = &tester.masks {
            for m in subsets::masks(n, s) {
                if tester.nonzero_mask(masks, m)? {
                    return tester.found(VertexSet::from_mask(n, m));
                }
            }
        } else {
            for c in Colex::new(n, s) {
                let c = VertexSet::from_indices(n, c);
                if tester.nonzero(&c)? {
                    return tester.found(c);
                }
            }
        }
    }
    Ok(KappaResult::without_witness(if cap >= last {
        KappaValue::Infinite
    } else {
        KappaValue::UnknownAtLeast(cap + 1)
    }))
}

fn kappa0_by_flow(g: &Graph) -> KappaResult {
    match min_vertex_separator(g) {
        None => KappaResult::without_witness(KappaValue::Infinite),
        Some(c) => {
            let parts = delete_vertices(g, &c).components().len();
            KappaResult {
                value: KappaValue::Finite(c.len()),
                witness: Some(c),
                witness_dim_h: Some(parts - 1),
            }
        }
    }
}

/// Distinct N(I) over i-faces I, smallest first.
fn probe_sets(g: &Graph, i: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for_each_clique(g, i + 1, |_, common| {
        out.push(VertexSet::from_bits(common.clone()));
        false
    });
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.bits().words().cmp(b.bits().words())));
    out.dedup();
    out
}

struct Tester<'a> {
    g: &'a Graph,
    i: usize,
    caps: &'a Caps,
    masks: Option<Vec<u64>>,
}

impl<'a> Tester<'a> {
    fn new(g: &'a Graph, i: usize, caps: &'a Caps) -> Self {
        Tester { g, i, caps, masks: g.masks() }
    }

    fn nonzero(&self, c: &VertexSet) -> Result<bool> {
        match &self.masks {
            Some(m) => self.nonzero_mask(m, c.bits().as_word()),
            None => Ok(self.betti(c)? > 0),
        }
    }

    fn nonzero_mask(&self, adj: &[u64], removed: u64) -> Result<bool> {
        let n = self.g.n();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let alive = full & !removed;
        match self.i {
            0 => Ok(alive != 0 && reach(adj, alive, alive.trailing_zeros() as usize) != alive),
            1 => {
                if h1_vanishes_by_closure(adj, alive) {
                    Ok(false)
                } else {
                    Ok(self.betti(&VertexSet::from_mask(n, removed))? > 0)
                }
            }
            _ => Ok(self.betti(&VertexSet::from_mask(n, removed))? > 0),
        }
    }

    fn betti(&self, c: &VertexSet) -> Result<usize> {
        let rest = delete_vertices(self.g, c);
        let x = build_clique_complex(&rest, self.i + 1, self.caps.faces)?;
        reduced_betti(&x, self.i as isize)
    }

    fn found(&self, c: VertexSet) -> Result<KappaResult> {
        let h = self.betti(&c)?;
        Ok(KappaResult {
            value: KappaValue::Finite(c.len()),
            witness: Some(c),
            witness_dim_h: Some(h),
        })
    }
}

fn reach(adj: &[u64], alive: u64, from: usize) -> u64 {
    let mut seen = 1u64 << from;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & alive & !seen;
        seen |= new;
        frontier |= new;
    }
    seen
}

/// Sufficient test for H̃^1(Cl(G[alive])) = 0. Any 1-cocycle can be shifted
/// by a coboundary to vanish on a spanning forest; the cocycle condition then
/// forces it to vanish on the third edge of every triangle with two edges
/// already forced. If the forced set reaches every edge, every cocycle is a
/// coboundary. A false return is inconclusive.
fn h1_vanishes_by_closure(adj: &[u64], alive: u64) -> bool {
    let mut known = [0u64; 64];
    let mut unvisited = alive;
    while unvisited != 0 {
        // rooting each tree at a high-degree vertex makes the closure fast
        let mut root = unvisited.trailing_zeros() as usize;
        let mut best = 0;
        let mut it = unvisited;
        while it != 0 {
            let v = it.trailing_zeros() as usize;
            it &= it - 1;
            let d = (adj[v] & alive).count_ones();
            if d > best {
                best = d;
                root = v;
            }
        }
        unvisited &= !(1u64 << root);
        let mut queue = 1u64 << root;
        while queue != 0 {
            let u = queue.trailing_zeros() as usize;
            queue &= queue - 1;
            let mut new = adj[u] & unvisited;
            unvisited &= !new;
            queue |= new;
            while new != 0 {
                let w = new.trailing_zeros() as usize;
                new &= new - 1;
                known[u] |= 1 << w;
                known[w] |= 1 << u;
            }
        }
    }
    loop {
        let mut changed = false;
        let mut it = alive;
        while it != 0 {
            let u = it.trailing_zeros() as usize;
            it &= it - 1;
            let mut pending = adj[u] & alive & !known[u];
            while pending != 0 {
                let v = pending.trailing_zeros() as usize;
                pending &= pending - 1;
                if known[u] & known[v] != 0 {
                    known[u] |= 1 << v;
                    known[v] |= 1 << u;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut it = alive;
    while it != 0 {
        let u = it.trailing_zeros() as usize;
        it &= it - 1;
        if known[u] != adj[u] & alive {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{er_sample, vertex_connectivity};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn examples() {
        let r = kappa(&Graph::cycle(4), 1, 4, &caps()).unwrap();
        assert_eq!(r.value, KappaValue::Finite(0));
        assert_eq!(r.witness.unwrap().len(), 0);
        assert_eq!(r.witness_dim_h, Some(1));
        let r = kappa(&Graph::path(3), 0, 3, &caps()).unwrap();
        assert_eq!(r.value, KappaValue::Finite(1));
        assert_eq!(r.witness.unwrap().to_vec(), vec![1]);
        assert_eq!(kappa(&Graph::complete(4), 1, 4, &caps()).unwrap().value, KappaValue::Infinite);
        assert_eq!(kappa(&Graph::cross_polytope(3), 2, 6, &caps()).unwrap().value, KappaValue::Finite(0));
    }

    #[test]
    fn caps_give_unknown() {
        // the 5-cycle plus a hub: H̃^1 needs the hub gone
        let mut g = Graph::cycle(5).disjoint_union(&Graph::empty(1));
        for v in 0..5 {
            g.add_edge(v, 5);
        }
        assert_eq!(kappa(&g, 1, 0, &caps()).unwrap().value, KappaValue::UnknownAtLeast(1));
        let r = kappa(&g, 1, 6, &caps()).unwrap();
        assert_eq!(r.value, KappaValue::Finite(1));
        assert_eq!(r.witness.unwrap().to_vec(), vec![5]);
        assert!(kappa(&g, 1, 7, &caps()).is_err());
    }

    #[test]
    fn closure_never_claims_nonzero_cohomology_away() {
        for seed in 0..300 {
            let n = 5 + seed as usize % 8;
            let g = er_sample(n, 0.3 + (seed % 5) as f64 * 0.12, seed);
            let adj = g.masks().unwrap();
            let full = (1u64 << n) - 1;
            for removed in [0u64, 1, 0b101, 1 << (n - 1)] {
                let alive = full & !removed;
                let rest = delete_vertices(&g, &VertexSet::from_mask(n, removed));
                let x = build_clique_complex(&rest, 2, 1 << 20).unwrap();
                let h = reduced_betti(&x, 1).unwrap();
                if h1_vanishes_by_closure(&adj, alive) {
                    assert_eq!(h, 0, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn mask_and_generic_paths_agree() {
        for seed in 0..120 {
            let g = er_sample(7, 0.55, seed);
            let c = caps();
            let t = Tester::new(&g, 1, &c);
            for m in 0u64..1 << 7 {
                let set = VertexSet::from_mask(7, m);
                assert_eq!(t.nonzero_mask(t.masks.as_ref().unwrap(), m).unwrap(), t.betti(&set).unwrap() > 0);
            }
        }
    }

    #[test]
    fn probing_does_not_change_the_value() {
        for seed in 0..60 {
            let g = er_sample(8, 0.6, seed);
            for i in 0..3 {
                let a = kappa_with(&g, i, &KappaOptions::default(), &caps()).unwrap();
                let b = kappa_with(&g, i, &KappaOptions { probe: false, ..Default::default() }, &caps()).unwrap();
                assert_eq!(a.value, b.value);
                if let Some(h) = a.witness_dim_h {
                    assert!(h > 0);
                }
            }
        }
    }

    #[test]
    fn flow_route_matches_enumeration() {
        for seed in 0..100 {
            let g = er_sample(9, 0.5, seed);
            let exhaustive = kappa_with(&g, 0, &KappaOptions::default(), &caps()).unwrap();
            let auto = kappa_with(&g, 0, &KappaOptions { method: KappaMethod::Auto, ..Default::default() }, &caps()).unwrap();
            assert_eq!(exhaustive.value, auto.value);
            match vertex_connectivity(&g) {
                Some(k) => assert_eq!(auto.value, KappaValue::Finite(k)),
                None => assert_eq!(auto.value, KappaValue::Infinite),
            }
        }
    }

    #[test]
    fn serializes_distinguished_values() {
        assert_eq!(serde_json::to_string(&KappaValue::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&KappaValue::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&KappaValue::UnknownAtLeast(4)).unwrap(), "{\"unknown_at_least\":4}");
    }
}

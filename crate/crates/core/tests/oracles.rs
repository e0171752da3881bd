//! Library results against the brute-force references in `common`.

mod common;

use hiconn::complex::build_clique_complex;
use hiconn::graph::{er_sample, Graph};
use hiconn::homology::{cocycle_norm, homology_norm, reduced_betti};
use hiconn::invariants::{delta, k_adapted_complex, k_adapted_graph, kappa, tau, Disjointness, KappaValue};
use hiconn::{Caps, Extended};

fn caps() -> Caps {
    Caps::default()
}

/// Canonical coset representative of `v` modulo the span of `basis`: the
/// unique member with every pivot coordinate cleared.
fn reduce(basis: &[u64], v: u64) -> u64 {
    let mut piv: Vec<u64> = Vec::new();
    for &b in basis {
        let mut b = b;
        for &p in &piv {
            b = b.min(b ^ p);
        }
        if b != 0 {
            piv.push(b);
            piv.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut v = v;
    for &p in &piv {
        v = v.min(v ^ p);
    }
    v
}

fn minus(g: &Graph, c: u32) -> Graph {
    let keep: Vec<usize> = (0..g.n()).filter(|&v| c >> v & 1 == 0).collect();
    let edges = g
        .edges()
        .filter(|&(u, v)| c >> u & 1 == 0 && c >> v & 1 == 0)
        .map(|(u, v)| (keep.iter().position(|&x| x == u).unwrap(), keep.iter().position(|&x| x == v).unwrap()));
    Graph::from_edges(keep.len(), edges).unwrap()
}

/// Homology norm as a min-max over bases of H̃_i: for each class the
/// lightest cycle in it, then the best basis of classes. Needs dim H̃_i ≤ 3.
fn homology_norm_by_bases(g: &Graph, i: usize) -> usize {
    let d = common::dim(g, i);
    let m = d.faces.len();
    let mut lightest: std::collections::BTreeMap<u64, usize> = Default::default();
    for z in 1u64..1 << m {
        if common::apply(&d.down, z) == 0 {
            let key = reduce(&d.up, z);
            if key != 0 {
                let w = z.count_ones() as usize;
                lightest.entry(key).and_modify(|x| *x = (*x).min(w)).or_insert(w);
            }
        }
    }
    let h = common::betti(g, i);
    assert!(h <= 3);
    if h == 0 {
        return 0;
    }
    let classes: Vec<(u64, usize)> = lightest.into_iter().collect();
    assert_eq!(classes.len(), (1 << h) - 1);
    let mut best = usize::MAX;
    let k = classes.len();
    for mask in 1u32..1 << k {
        if mask.count_ones() as usize != h {
            continue;
        }
        let pick: Vec<&(u64, usize)> = (0..k).filter(|&j| mask >> j & 1 == 1).map(|j| &classes[j]).collect();
        if common::rank(&pick.iter().map(|c| c.0).collect::<Vec<_>>()) == h {
            best = best.min(pick.iter().map(|c| c.1).max().unwrap());
        }
    }
    best
}

fn sample_graphs(count: usize, n: usize, max_faces: usize, i: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let p = [0.3, 0.45, 0.6, 0.75][seed as usize % 4];
        let g = er_sample(n, p, 1000 + seed);
        seed += 1;
        if common::cliques(&g, i + 1).len() <= max_faces {
            out.push(g);
        }
    }
    out
}

/// Octahedra with two extra vertices and random noise: random graphs this
/// small almost never carry H̃^2.
fn noisy_octahedra(count: usize, max_faces: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let noise = er_sample(8, 0.35, 5000 + seed);
        seed += 1;
        let mut g = Graph::cross_polytope(3).disjoint_union(&Graph::empty(2));
        for (u, v) in noise.edges() {
            if v >= 6 {
                g.add_edge(u, v);
            } else if seed.is_multiple_of(3) && g.has_edge(u, v) {
                g.remove_edge(u, v);
            }
        }
        if common::cliques(&g, 3).len() <= max_faces {
            out.push(g);
        }
    }
    out
}

#[test]
fn norms_match_exhaustive_search() {
    for (i, n, count) in [(0, 6, 40), (1, 7, 150), (2, 8, 40)] {
        let mut nontrivial = 0;
        let graphs = if i == 2 { noisy_octahedra(count, 16) } else { sample_graphs(count, n, 16, i) };
        for g in graphs {
            let x = build_clique_complex(&g, i + 1, caps().faces).unwrap();
            let c = cocycle_norm(&x, i, &caps()).unwrap();
            assert_eq!(c.finite(), common::cocycle_norm(&g, i), "cocycle norm, i = {i}, {g:?}");
            let h = homology_norm(&x, i, &caps()).unwrap();
            assert_eq!(h, common::homology_norm(&g, i), "homology norm, i = {i}, {g:?}");
            if common::betti(&g, i) <= 3 {
                assert_eq!(h, homology_norm_by_bases(&g, i));
            }
            nontrivial += usize::from(c.is_finite());
        }
        assert!(nontrivial >= count / 10, "too few nontrivial samples for i = {i}: {nontrivial}");
    }
}

#[test]
fn betti_numbers_match_direct_ranks() {
    for g in sample_graphs(60, 8, usize::MAX, 0) {
        let x = build_clique_complex(&g, 4, caps().faces).unwrap();
        for i in 0..=3 {
            assert_eq!(reduced_betti(&x, i as isize).unwrap(), common::betti(&g, i));
        }
    }
}

fn kappa_oracle(g: &Graph, i: usize) -> Option<usize> {
    (0u32..1 << g.n())
        .filter(|&c| common::betti(&minus(g, c), i) > 0)
        .map(|c| c.count_ones() as usize)
        .min()
}

#[test]
fn kappa_matches_exhaustive_deletion() {
    for i in 1..=2 {
        for g in sample_graphs(150, 7, usize::MAX, 0) {
            let k = kappa(&g, i, g.n(), &caps()).unwrap();
            let expected = match kappa_oracle(&g, i) {
                Some(v) => KappaValue::Finite(v),
                None => KappaValue::Infinite,
            };
            assert_eq!(k.value, expected, "i = {i}, {g:?}");
            if let Some(w) = &k.witness {
                let mask = w.iter().fold(0u32, |m, v| m | 1 << v);
                assert!(common::betti(&minus(&g, mask), i) > 0);
            }
        }
    }
}

#[test]
fn kappa0_is_vertex_connectivity_on_all_small_graphs() {
    for n in 2..=5 {
        for g in common::all_graphs(n) {
            let k = kappa(&g, 0, n, &caps()).unwrap().value;
            match common::vertex_connectivity(&g) {
                None => assert_eq!(k, KappaValue::Infinite),
                Some(c) => assert_eq!(k, KappaValue::Finite(c), "{g:?}"),
            }
        }
    }
}

#[test]
fn delta_matches_clique_walk() {
    for g in common::all_graphs(5).chain(sample_graphs(200, 6, usize::MAX, 0)) {
        let adj = common::adjacency(&g);
        for i in 0..=3 {
            let expected = common::cliques(&g, i + 1)
                .into_iter()
                .map(|f| {
                    let common_nbrs = (0..g.n()).filter(|&v| f >> v & 1 == 1).fold(u32::MAX, |m, v| m & adj[v]);
                    (common_nbrs & !f & ((1 << g.n()) - 1)).count_ones() as usize
                })
                .min();
            assert_eq!(delta(&g, i).finite(), expected);
        }
    }
}

fn tau_oracle(g: &Graph) -> Option<usize> {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&d| {
            let h = minus(g, d);
            let far = (0..h.n())
                .flat_map(|u| (u + 1..h.n()).map(move |v| (u, v)))
                .filter(|&(u, v)| h.distances_from(u)[v].is_none_or(|d| d > 2))
                .count();
            far >= 2
        })
        .map(|d| d.count_ones() as usize)
        .min()
}

#[test]
fn tau_matches_brute_force() {
    for g in common::all_graphs(5).chain(sample_graphs(150, 6, usize::MAX, 0)) {
        assert_eq!(tau(&g, &caps()).unwrap().finite(), tau_oracle(&g), "{g:?}");
    }
}

/// k^i_ℓ(Cl(G)) straight from the definition: every class, every cycle of
/// support ≤ ℓ, every disjoint family.
fn k_complex_oracle(g: &Graph, i: usize, ell: usize) -> Option<usize> {
    let d = common::dim(g, i);
    let m = d.faces.len();
    let cobound = common::transpose(&d.down, d.lower.len());
    let mut classes: std::collections::BTreeMap<u64, u64> = Default::default();
    let mut cycles = Vec::new();
    for v in 1u64..1 << m {
        if d.up.iter().all(|&col| (col & v).count_ones() % 2 == 0) {
            let key = reduce(&cobound, v);
            if key != 0 {
                classes.entry(key).or_insert(v);
            }
        }
        if v.count_ones() as usize <= ell && common::apply(&d.down, v) == 0 {
            cycles.push(v);
        }
    }
    fn largest(cands: &[u64], used: u64) -> usize {
        cands
            .iter()
            .enumerate()
            .filter(|&(_, &z)| z & used == 0)
            .map(|(j, &z)| 1 + largest(&cands[j + 1..], used | z))
            .max()
            .unwrap_or(0)
    }
    classes
        .values()
        .map(|&chi| {
            let hits: Vec<u64> = cycles.iter().copied().filter(|z| (z & chi).count_ones() % 2 == 1).collect();
            largest(&hits, 0)
        })
        .min()
}

#[test]
fn adapted_families_match_definition() {
    for g in sample_graphs(120, 6, 12, 1) {
        let x = build_clique_complex(&g, 2, caps().faces).unwrap();
        for ell in [3, 4, 5, 6] {
            let k = k_adapted_complex(&x, 1, ell, &caps(), Disjointness::Support).unwrap();
            assert!(!k.partial);
            assert_eq!(k.value.finite(), k_complex_oracle(&g, 1, ell), "ℓ = {ell}, {g:?}");
        }
    }
}

#[test]
fn wheel_adapted_value() {
    // W_5: δ^1 = 1 (rim edges share only the hub), so only C = ∅ counts, and
    // the cone Cl(W_5) has no H̃^1.
    let mut w5 = Graph::cycle(5).disjoint_union(&Graph::empty(1));
    for v in 0..5 {
        w5.add_edge(v, 5);
    }
    assert_eq!(delta(&w5, 1), Extended::Finite(1));
    let oracle = (0u32..1 << 6)
        .filter(|c| (c.count_ones() as usize) < 1)
        .filter_map(|c| k_complex_oracle(&minus(&w5, c), 1, 5))
        .min();
    assert_eq!(oracle, None);
    let k = k_adapted_graph(&w5, 1, 5, &caps(), Disjointness::Support).unwrap();
    assert_eq!(k.value.finite(), oracle);
    assert!(!k.partial);
}

#[test]
fn adapted_graph_value_matches_definition() {
    for g in sample_graphs(60, 6, usize::MAX, 0) {
        let Extended::Finite(limit) = delta(&g, 1) else { continue };
        let oracle = (0u32..1 << g.n())
            .filter(|c| (c.count_ones() as usize) < limit)
            .filter_map(|c| k_complex_oracle(&minus(&g, c), 1, 5))
            .min();
        let k = k_adapted_graph(&g, 1, 5, &caps(), Disjointness::Support).unwrap();
        assert_eq!(k.value.finite(), oracle, "{g:?}");
    }
}

//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's homology, clique or flow code; faces are
//! vertex bitmasks and chains are bitmasks over face lists.

#![allow(dead_code)]

pub mod golden;

use hiconn::graph::Graph;

pub fn adjacency(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|u| (0..g.n()).filter(|&v| g.has_edge(u, v)).fold(0u32, |m, v| m | 1 << v))
        .collect()
}

/// All k-cliques as vertex masks, by testing every k-subset. k = 0 gives the
/// empty face.
pub fn cliques(g: &Graph, k: usize) -> Vec<u32> {
    let adj = adjacency(g);
    let n = g.n();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .filter(|&s| (0..n).filter(|&v| s >> v & 1 == 1).all(|v| (s & !(1 << v)) & !adj[v] == 0))
        .collect()
}

/// Boundary of each upper face as a mask over `lower` (faces one smaller).
pub fn boundary(upper: &[u32], lower: &[u32]) -> Vec<u64> {
    upper
        .iter()
        .map(|&f| {
            lower
                .iter()
                .enumerate()
                .filter(|&(_, &l)| l & f == l && (f & !l).count_ones() == 1)
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect()
}

/// GF(2) rank of a set of 64-bit vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Image of a chain (mask over `upper`) under the boundary map.
pub fn apply(bd: &[u64], chain: u64) -> u64 {
    (0..bd.len()).filter(|&j| chain >> j & 1 == 1).fold(0, |acc, j| acc ^ bd[j])
}

/// Transpose of a boundary map: the coboundary of each lower face as a mask
/// over the upper faces.
pub fn transpose(bd: &[u64], lower_len: usize) -> Vec<u64> {
    (0..lower_len)
        .map(|r| bd.iter().enumerate().filter(|&(_, &c)| c >> r & 1 == 1).fold(0u64, |m, (j, _)| m | 1 << j))
        .collect()
}

pub struct Dim {
    /// (i-1)-, i- and (i+1)-faces.
    pub lower: Vec<u32>,
    pub faces: Vec<u32>,
    pub upper: Vec<u32>,
    /// ∂_i and ∂_{i+1} as columns.
    pub down: Vec<u64>,
    pub up: Vec<u64>,
}

pub fn dim(g: &Graph, i: usize) -> Dim {
    let lower = cliques(g, i);
    let faces = cliques(g, i + 1);
    let upper = cliques(g, i + 2);
    let down = boundary(&faces, &lower);
    let up = boundary(&upper, &faces);
    Dim {
        lower,
        faces,
        upper,
        down,
        up,
    }
}

pub fn betti(g: &Graph, i: usize) -> usize {
    let d = dim(g, i);
    d.faces.len() - rank(&d.down) - rank(&d.up)
}

/// Least support of a nontrivial cocycle, by trying every cochain.
pub fn cocycle_norm(g: &Graph, i: usize) -> Option<usize> {
    let d = dim(g, i);
    let m = d.faces.len();
    assert!(m <= 20, "oracle needs at most 20 faces");
    let cobound = transpose(&d.down, d.lower.len());
    let r = rank(&cobound);
    let mut best: Option<usize> = None;
    for chi in 1u64..1 << m {
        let w = chi.count_ones() as usize;
        if best.is_some_and(|b| w >= b) {
            continue;
        }
        // δχ = 0: every (i+1)-face sees an even number of support faces
        let cocycle = d.up.iter().all(|&col| (col & chi).count_ones() % 2 == 0);
        if cocycle && rank(&[cobound.as_slice(), &[chi]].concat()) > r {
            best = Some(w);
        }
    }
    best
}

/// Least ℓ such that cycles of support ≤ ℓ together with the boundaries span
/// all cycles; 0 when homology vanishes.
pub fn homology_norm(g: &Graph, i: usize) -> usize {
    let d = dim(g, i);
    let m = d.faces.len();
    assert!(m <= 20, "oracle needs at most 20 faces");
    let cycles_dim = m - rank(&d.down);
    let mut span: Vec<u64> = d.up.clone();
    if rank(&span) == cycles_dim {
        return 0;
    }
    let mut cycles: Vec<u64> = (1u64..1 << m).filter(|&z| apply(&d.down, z) == 0).collect();
    cycles.sort_by_key(|z| z.count_ones());
    for z in cycles {
        span.push(z);
        if rank(&span) == cycles_dim {
            return z.count_ones() as usize;
        }
    }
    unreachable!()
}

/// Vertex connectivity by unit-capacity max flow on the split graph, over
/// all non-adjacent pairs. `None` for complete graphs.
pub fn vertex_connectivity(g: &Graph) -> Option<usize> {
    let n = g.n();
    let mut best: Option<usize> = None;
    for s in 0..n {
        for t in s + 1..n {
            if !g.has_edge(s, t) {
                let f = max_flow_split(g, s, t);
                best = Some(best.map_or(f, |b: usize| b.min(f)));
            }
        }
    }
    best
}

fn max_flow_split(g: &Graph, s: usize, t: usize) -> usize {
    // node v_in = 2v, v_out = 2v + 1
    let n = g.n();
    let size = 2 * n;
    let mut cap = vec![vec![0i32; size]; size];
    for v in 0..n {
        cap[2 * v][2 * v + 1] = if v == s || v == t { 1 << 20 } else { 1 };
        for u in 0..n {
            if g.has_edge(u, v) {
                cap[2 * u + 1][2 * v] = 1 << 20;
            }
        }
    }
    let (src, dst) = (2 * s + 1, 2 * t);
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; size];
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for v in 0..size {
                if prev[v] == usize::MAX && cap[u][v] > 0 {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        if prev[dst] == usize::MAX {
            return flow;
        }
        let mut v = dst;
        while v != src {
            let u = prev[v];
            cap[u][v] -= 1;
            cap[v][u] += 1;
            v = u;
        }
        flow += 1;
    }
}

/// Every labeled graph on n vertices, indexed by edge mask.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |m| {
        Graph::from_edges(n, pairs.iter().enumerate().filter(|&(j, _)| m >> j & 1 == 1).map(|(_, &e)| e)).unwrap()
    })
}

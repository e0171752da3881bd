//! Labeled simple graphs on dense bit rows, Erdős–Rényi sampling, and the
//! neighborhood / interconnection statistics that drive the concentration
//! experiments.

use crate::error::{Error, Result};
use crate::f2::BitVector;
use crate::subsets::{self, Colex};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};

/// A subset of a graph's vertices, stored as a bit row of the graph's width.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(BitVector);

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet(BitVector::zeros(n))
    }

    pub fn full(n: usize) -> Self {
        VertexSet(BitVector::ones(n))
    }

    pub fn from_indices(n: usize, vs: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(BitVector::from_indices(n, vs))
    }

    pub fn from_bits(bits: BitVector) -> Self {
        VertexSet(bits)
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        VertexSet(BitVector::from_word(n, mask))
    }

    pub fn bits(&self) -> &BitVector {
        &self.0
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: usize) {
        self.0.set(v, true);
    }

    pub fn remove(&mut self, v: usize) {
        self.0.set(v, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter_ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.0.is_subset_of(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut b = self.0.clone();
        b.or_assign(&other.0);
        VertexSet(b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.and(&other.0))
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut b = self.0.clone();
        b.and_not_assign(&other.0);
        VertexSet(b)
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet(self.0.complement())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Finite simple graph. Vertex `v` (an index in `0..n`) carries the original
/// identifier `labels[v]`; deleting vertices keeps the survivors' labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<usize>,
    rows: Vec<BitVector>,
}

impl Graph {
    /// Edgeless graph on `0..n`.
    pub fn empty(n: usize) -> Self {
        Graph {
            labels: (0..n).collect(),
            rows: vec![BitVector::zeros(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// Complete multipartite graph with `parts` parts of size 2, i.e. the
    /// 1-skeleton of the boundary of a `parts`-dimensional cross-polytope.
    /// Vertices `2j` and `2j + 1` are the non-adjacent pair.
    pub fn cross_polytope(parts: usize) -> Self {
        let n = 2 * parts;
        let mut g = Graph::complete(n);
        for j in 0..parts {
            g.remove_edge(2 * j, 2 * j + 1);
        }
        g
    }

    /// Build from an edge list; rejects loops, duplicates and out-of-range ends.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge {u}-{v} out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Validation(format!("loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(Error::Validation(format!("duplicate edge {u}-{v}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Disjoint union; the second graph's vertices are shifted past the first.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n() + other.n();
        let mut g = Graph::empty(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        let s = self.n();
        for (u, v) in other.edges() {
            g.add_edge(u + s, v + s);
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Validation("label count differs from vertex count".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::Validation("vertex labels must be distinct".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert_ne!(u, v, "loops are not allowed");
        self.rows[u].set(v, true);
        self.rows[v].set(u, true);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    /// Neighborhood row of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &BitVector {
        &self.rows[v]
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet(self.rows[v].clone())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones()).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, r)| r.iter_ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        (0..self.n()).all(|v| self.degree(v) + 1 == self.n())
    }

    /// Adjacency rows as single words; only for n ≤ 64.
    pub fn masks(&self) -> Option<Vec<u64>> {
        (self.n() <= 64).then(|| self.rows.iter().map(|r| r.as_word()).collect())
    }

    /// Symmetric, loop-free, distinct labels.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n();
        for u in 0..n {
            if self.rows[u].width() != n {
                return Err(Error::Validation(format!("row {u} has wrong width")));
            }
            if self.rows[u].get(u) {
                return Err(Error::Validation(format!("loop at {u}")));
            }
            for v in self.rows[u].iter_ones() {
                if !self.rows[v].get(u) {
                    return Err(Error::Validation(format!("asymmetric pair {u},{v}")));
                }
            }
        }
        let mut sorted = self.labels.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n {
            return Err(Error::Validation("duplicate labels".into()));
        }
        Ok(())
    }

    /// Connected components as vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in self.rows[u].iter_ones() {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for v in self.rows[u].iter_ones() {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Read the edge-list text format: a header line `n m` followed by `m`
    /// lines `u v` of 0-based vertex ids.
    pub fn read_edge_list(reader: impl BufRead) -> Result<Graph> {
        let mut lines = reader
            .lines()
            .enumerate()
            .map(|(i, l)| l.map(|s| (i + 1, s)))
            .filter(|r| r.as_ref().map(|(_, s)| !s.trim().is_empty()).unwrap_or(true));
        let (line_no, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "missing header".into() })??;
        let nums = parse_pair(&header, line_no)?;
        let (n, m) = (nums.0, nums.1);
        let mut g = Graph::empty(n);
        let mut read = 0;
        for line in lines {
            let (line_no, text) = line?;
            let (u, v) = parse_pair(&text, line_no)?;
            if u >= n || v >= n {
                return Err(Error::Parse { line: line_no, msg: format!("vertex out of range 0..{n}") });
            }
            if u == v {
                return Err(Error::Parse { line: line_no, msg: format!("loop at {u}") });
            }
            if g.has_edge(u, v) {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate edge {u} {v}") });
            }
            g.add_edge(u, v);
            read += 1;
        }
        if read != m {
            return Err(Error::Parse { line: 1, msg: format!("header promises {m} edges, found {read}") });
        }
        Ok(g)
    }

    /// Write the edge-list format, using vertex labels as ids.
    pub fn write_edge_list(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{} {}", self.n(), self.edge_count())?;
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.labels[u], self.labels[v])?;
        }
        Ok(())
    }
}

fn parse_pair(s: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse { line, msg: "expected two integers".into() })?
            .parse::<usize>()
            .map_err(|e| Error::Parse { line, msg: e.to_string() })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing tokens".into() });
    }
    Ok((a, b))
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n())?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Sample from G(n, p): each of the n(n-1)/2 pairs, visited in lexicographic
/// order, is an edge iff a uniform draw from a ChaCha8 stream seeded with
/// `seed` falls below `p`.
pub fn er_sample(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    if p <= 0.0 {
        return g;
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn validate_probability(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::Validation(format!("probability {p} outside [0, 1]")))
    }
}

/// N(S): vertices adjacent to every member of `s`. N(∅) = V.
pub fn common_neighbors(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut acc = BitVector::ones(g.n());
    for v in s.iter() {
        acc.and_assign(g.neighbors(v));
    }
    VertexSet(acc)
}

fn common_neighbor_count(g: &Graph, vs: &[usize]) -> usize {
    match vs {
        [] => g.n(),
        [v] => g.degree(*v),
        [first, rest @ ..] => {
            let mut acc = g.neighbors(*first).clone();
            for &v in rest {
                acc.and_assign(g.neighbors(v));
            }
            acc.count_ones()
        }
    }
}

/// Γ - C, the subgraph induced on the complement of `c`. Survivors keep their
/// relative order and their labels.
pub fn delete_vertices(g: &Graph, c: &VertexSet) -> Graph {
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !c.contains(v)).collect();
    induced(g, &keep)
}

/// Subgraph induced on `keep` (ascending vertex indices).
pub fn induced(g: &Graph, keep: &[usize]) -> Graph {
    let m = keep.len();
    let mut rows = vec![BitVector::zeros(m); m];
    for (i, &u) in keep.iter().enumerate() {
        for (j, &v) in keep.iter().enumerate().skip(i + 1) {
            if g.has_edge(u, v) {
                rows[i].set(j, true);
                rows[j].set(i, true);
            }
        }
    }
    Graph {
        labels: keep.iter().map(|&v| g.labels[v]).collect(),
        rows,
    }
}

/// (d⁻_k, d⁺_k): the extremes of |N(A)| over all k-sets A, by exhaustive
/// enumeration.
pub fn neighborhood_size_range(g: &Graph, k: usize, cap: u64) -> Result<(usize, usize)> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::Validation(format!("k = {k} must lie in 1..={n}")));
    }
    subsets::guard("neighborhood sets", n, k, cap)?;
    let (mut lo, mut hi) = (usize::MAX, 0);
    if k == 1 {
        for v in 0..n {
            let d = g.degree(v);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        return Ok((lo, hi));
    }
    for a in Colex::new(n, k) {
        let d = common_neighbor_count(g, &a);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

/// b_{a,b}: the fewest edges between disjoint A, B with |A| = a, |B| = b.
///
/// Larger sets can only add edges, so exact sizes suffice. For a fixed A the
/// best B is the b outside vertices with the fewest neighbors in A, so only
/// A is enumerated.
pub fn min_interconnection(g: &Graph, a: usize, b: usize, cap: u64) -> Result<usize> {
    let n = g.n();
    if a == 0 || b == 0 || a + b > n {
        return Err(Error::Validation(format!("need a, b ≥ 1 and a + b ≤ n (a={a}, b={b}, n={n})")));
    }
    subsets::guard("interconnection sets", n, a, cap)?;
    let mut best = usize::MAX;
    let mut counts = Vec::with_capacity(n);
    for set_a in Colex::new(n, a) {
        let mut in_a = BitVector::zeros(n);
        for &v in &set_a {
            in_a.set(v, true);
        }
        counts.clear();
        counts.extend((0..n).filter(|&v| !in_a.get(v)).map(|v| g.neighbors(v).and_count(&in_a)));
        counts.select_nth_unstable(b - 1);
        let total: usize = counts[..b].iter().sum();
        best = best.min(total);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Falsification mode for sizes beyond the exact cap: the minimum over
/// `samples` random disjoint (A, B) pairs. An upper bound on b_{a,b}.
pub fn min_interconnection_sampled(g: &Graph, a: usize, b: usize, samples: usize, seed: u64) -> Result<usize> {
    let n = g.n();
    if a == 0 || b == 0 || a + b > n {
        return Err(Error::Validation(format!("need a, b ≥ 1 and a + b ≤ n (a={a}, b={b}, n={n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    for _ in 0..samples.max(1) {
        // partial Fisher-Yates for the first a + b slots
        for i in 0..a + b {
            let j = rng.gen_range(i..n);
            order.swap(i, j);
        }
        let set_a = BitVector::from_indices(n, order[..a].iter().copied());
        let count: usize = order[a..a + b].iter().map(|&v| g.neighbors(v).and_count(&set_a)).sum();
        best = best.min(count);
    }
    Ok(best)
}

/// Minimum vertex separator via unit-capacity max flow on the split graph,
/// trying the pairs prescribed by Even's algorithm. `None` for complete graphs
/// (no separator exists).
pub fn min_vertex_separator(g: &Graph) -> Option<VertexSet> {
    let n = g.n();
    let mut best: Option<VertexSet> = None;
    let mut i = 0;
    while i < n && best.as_ref().is_none_or(|b| i <= b.len()) {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let cut = local_separator(g, i, j);
            if best.as_ref().is_none_or(|b| cut.len() < b.len()) {
                best = Some(cut);
            }
        }
        i += 1;
    }
    best
}

/// Vertex connectivity, with complete graphs reported as `None`.
pub fn vertex_connectivity(g: &Graph) -> Option<usize> {
    min_vertex_separator(g).map(|s| s.len())
}

/// Minimum s-t vertex separator for non-adjacent s, t.
fn local_separator(g: &Graph, s: usize, t: usize) -> VertexSet {
    // node 2v = v_in, 2v + 1 = v_out; v_in -> v_out has capacity 1 except at
    // s and t; u_out -> v_in for every edge direction, unbounded.
    let n = g.n();
    let nodes = 2 * n;
    let big = n as i32 + 1;
    let mut head: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    let mut to = Vec::new();
    let mut cap = Vec::new();
    let mut add = |u: usize, v: usize, c: i32, head: &mut Vec<Vec<usize>>| {
        head[u].push(to.len());
        to.push(v);
        cap.push(c);
        head[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for v in 0..n {
        let c = if v == s || v == t { big } else { 1 };
        add(2 * v, 2 * v + 1, c, &mut head);
    }
    for (u, v) in g.edges() {
        add(2 * u + 1, 2 * v, big, &mut head);
        add(2 * v + 1, 2 * u, big, &mut head);
    }
    let (src, sink) = (2 * s + 1, 2 * t);
    loop {
        let mut prev = vec![usize::MAX; nodes];
        let mut seen = vec![false; nodes];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &e in &head[u] {
                let v = to[e];
                if cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    prev[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !seen[sink] {
            // cut edges are v_in -> v_out with v_in reachable, v_out not
            return VertexSet::from_indices(n, (0..n).filter(|&v| seen[2 * v] && !seen[2 * v + 1]));
        }
        let mut v = sink;
        while v != src {
            let e = prev[v];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            v = to[e ^ 1];
        }
    }
}

/// Power-law probability schedule p_n = min(1, c · n^(-alpha)).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub alpha: Ratio<i64>,
    pub c: Ratio<i64>,
}

impl Schedule {
    pub fn new(alpha: Ratio<i64>, c: Ratio<i64>) -> Result<Self> {
        if alpha <= Ratio::from_integer(0) {
            return Err(Error::Validation("schedule exponent must be positive".into()));
        }
        if c <= Ratio::from_integer(0) {
            return Err(Error::Validation("schedule scale must be positive".into()));
        }
        Ok(Schedule { alpha, c })
    }

    pub fn eval(&self, n: usize) -> f64 {
        let alpha = ratio_to_f64(self.alpha);
        let c = ratio_to_f64(self.c);
        (c * (n as f64).powf(-alpha)).min(1.0)
    }

    /// Middling of exponent w: alpha < 1/w, compared exactly.
    pub fn is_middling(&self, w: Ratio<i64>) -> bool {
        self.alpha * w < Ratio::from_integer(1)
    }
}

pub fn schedule_eval(s: &Schedule, n: usize) -> f64 {
    s.eval(n)
}

pub fn is_middling(s: &Schedule, w: Ratio<i64>) -> bool {
    s.is_middling(w)
}

pub fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Parse `"3"`, `"1/10"` or a short decimal like `"0.25"` into a ratio.
pub fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let bad = || Error::Validation(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10i64.pow(frac.len() as u32);
        let neg = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int.abs() * den + frac;
        return Ok(Ratio::new(if neg { -num } else { num }, den));
    }
    s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad())
}

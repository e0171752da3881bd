//! Clique complexes and their induced / deleted-face variants.
//!
//! Faces are strictly increasing tuples of vertex indices. Each dimension's
//! face list is kept in lexicographic order, so the position of a face in its
//! dimension is found by binary search and boundary matrices come out with a
//! deterministic row and column order.

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector};
use crate::graph::{Graph, VertexSet};
use serde::Serialize;
use std::collections::BTreeMap;

/// A simplex: strictly increasing vertex indices. Dimension is `len - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Face(Vec<usize>);

impl Face {
    /// Sorts the input; rejects repeated vertices and the empty tuple.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::Validation("a face needs at least one vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("repeated vertex in face {vertices:?}")));
        }
        Ok(Face(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_subset_of(&self, other: &[usize]) -> bool {
        // both sorted
        let mut it = other.iter();
        self.0.iter().all(|v| it.by_ref().any(|w| w == v))
    }
}

impl From<Face> for Vec<usize> {
    fn from(f: Face) -> Self {
        f.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_labels: Vec<usize>,
    faces: Vec<Vec<Vec<usize>>>,
    /// Every face of dimension ≤ this value is present. `usize::MAX` when the
    /// complex is known in full.
    complete_through: usize,
}

impl SimplicialComplex {
    /// Downward closure of `maximal` over a vertex universe with the given
    /// labels. Intended for tests and fixtures; complexes in the main
    /// pipeline come from graphs.
    pub fn from_faces(vertex_labels: Vec<usize>, maximal: &[Face]) -> Result<Self> {
        let n = vertex_labels.len();
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        for f in maximal {
            if f.vertices().iter().any(|&v| v >= n) {
                return Err(Error::Validation(format!("face {f:?} uses a vertex outside 0..{n}")));
            }
            let k = f.vertices().len();
            if k > 20 {
                return Err(Error::Validation("face too large to close downward".into()));
            }
            for mask in 1u32..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|j| mask >> j & 1 == 1).map(|j| f.vertices()[j]).collect();
                let d = sub.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(sub);
            }
        }
        Ok(SimplicialComplex {
            vertex_labels,
            faces: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
            complete_through: usize::MAX,
        })
    }

    pub fn vertex_labels(&self) -> &[usize] {
        &self.vertex_labels
    }

    /// Size of the vertex universe (not all of it need be used by faces).
    pub fn universe(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn complete_through(&self) -> usize {
        self.complete_through
    }

    /// Highest dimension with a stored face; `None` for the void complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.faces.iter().rposition(|f| !f.is_empty())
    }

    pub fn faces(&self, d: usize) -> &[Vec<usize>] {
        self.faces.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.faces(d).len()
    }

    /// Face counts for dimensions `0..=top`.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.top_dim() {
            None => vec![],
            Some(t) => (0..=t).map(|d| self.count(d)).collect(),
        }
    }

    pub fn is_void(&self) -> bool {
        self.count(0) == 0
    }

    pub fn index_of(&self, face: &[usize]) -> Option<usize> {
        if face.is_empty() {
            return None;
        }
        self.faces(face.len() - 1).binary_search_by(|f| f.as_slice().cmp(face)).ok()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.index_of(face).is_some()
    }

    /// Faces of dimension `d` as tuples of vertex labels.
    pub fn labeled_faces(&self, d: usize) -> Vec<Vec<usize>> {
        self.faces(d)
            .iter()
            .map(|f| f.iter().map(|&v| self.vertex_labels[v]).collect())
            .collect()
    }

    /// Error unless every face of dimension ≤ `d` is present.
    pub fn require_dim(&self, d: usize) -> Result<()> {
        if self.complete_through >= d {
            Ok(())
        } else {
            Err(Error::InsufficientDimension {
                built: self.complete_through,
                needed: d,
            })
        }
    }

    /// Check the structural invariants: sorted duplicate-free face lists,
    /// downward closure, vertices inside the universe.
    pub fn check_invariants(&self) -> Result<()> {
        for (d, list) in self.faces.iter().enumerate() {
            for f in list {
                if f.len() != d + 1 || f.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::Validation(format!("malformed face {f:?} in dimension {d}")));
                }
                if f.iter().any(|&v| v >= self.universe()) {
                    return Err(Error::Validation(format!("face {f:?} leaves the vertex universe")));
                }
                if d > 0 {
                    for skip in 0..f.len() {
                        let sub: Vec<usize> = facet(f, skip);
                        if !self.contains(&sub) {
                            return Err(Error::Validation(format!("{f:?} is missing its facet {sub:?}")));
                        }
                    }
                }
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!("dimension {d} is not strictly sorted")));
            }
        }
        Ok(())
    }

    /// ∂_i over GF(2): rows are (i-1)-faces, columns i-faces. `i = 0` gives
    /// the 0 × f_0 matrix (no augmentation).
    pub fn boundary_matrix(&self, i: usize) -> BitMatrix {
        if i == 0 {
            return BitMatrix::zeros(0, self.count(0));
        }
        let (rows, cols) = (self.count(i - 1), self.count(i));
        let mut m = BitMatrix::zeros(rows, cols);
        for (c, f) in self.faces(i).iter().enumerate() {
            for skip in 0..f.len() {
                let r = self.index_of(&facet(f, skip)).expect("complex is downward closed");
                m.set(r, c, true);
            }
        }
        m
    }

    /// Boundary of each i-face as a vector over (i-1)-faces. For `i = 0` the
    /// augmentation: every vertex maps to the single (-1)-face.
    pub fn boundary_columns(&self, i: usize) -> Vec<BitVector> {
        if i == 0 {
            return vec![BitVector::ones(1); self.count(0)];
        }
        let rows = self.count(i - 1);
        self.faces(i)
            .iter()
            .map(|f| BitVector::from_indices(rows, (0..f.len()).map(|s| self.index_of(&facet(f, s)).unwrap())))
            .collect()
    }

    /// Coboundary of each (i-1)-face as a vector over i-faces: the rows of
    /// ∂_i, with the augmentation row (all ones) when `i = 0`.
    pub fn coboundary_rows(&self, i: usize) -> Vec<BitVector> {
        let cols = self.count(i);
        if i == 0 {
            return vec![BitVector::ones(cols)];
        }
        let mut rows = vec![BitVector::zeros(cols); self.count(i - 1)];
        for (c, f) in self.faces(i).iter().enumerate() {
            for s in 0..f.len() {
                rows[self.index_of(&facet(f, s)).unwrap()].set(c, true);
            }
        }
        rows
    }

    /// JSON with `"vertices"` (labels) and `"faces"` keyed by dimension, face
    /// tuples written in labels.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export {
            vertices: Vec<usize>,
            faces: BTreeMap<String, Vec<Vec<usize>>>,
        }
        let faces = (0..self.faces.len())
            .filter(|&d| self.count(d) > 0)
            .map(|d| (d.to_string(), self.labeled_faces(d)))
            .collect();
        serde_json::to_value(Export {
            vertices: self.vertex_labels.clone(),
            faces,
        })
        .expect("complex export serializes")
    }
}

/// `f` with position `skip` removed.
pub(crate) fn facet(f: &[usize], skip: usize) -> Vec<usize> {
    f.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v).collect()
}

/// Clique complex of `g` through dimension `max_dim`, i.e. all cliques of at
/// most `max_dim + 1` vertices. Cliques are grown by intersecting neighbor
/// rows, always extending by larger vertices, which yields each dimension in
/// lexicographic order.
pub fn build_clique_complex(g: &Graph, max_dim: usize, face_cap: u64) -> Result<SimplicialComplex> {
    let n = g.n();
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 1];
    let mut total = 0u64;
    let mut stack: Vec<usize> = Vec::with_capacity(max_dim + 1);

    fn grow(
        g: &Graph,
        stack: &mut Vec<usize>,
        cand: BitVector,
        max_dim: usize,
        faces: &mut Vec<Vec<Vec<usize>>>,
        total: &mut u64,
        cap: u64,
    ) -> Result<()> {
        *total += 1;
        if *total > cap {
            return Err(Error::guard("clique complex faces", *total as u128, cap));
        }
        faces[stack.len() - 1].push(stack.clone());
        if stack.len() > max_dim {
            return Ok(());
        }
        for v in cand.iter_ones() {
            let mut next = cand.clone();
            next.and_assign(g.neighbors(v));
            // only larger vertices extend the clique
            clear_through(&mut next, v);
            stack.push(v);
            grow(g, stack, next, max_dim, faces, total, cap)?;
            stack.pop();
        }
        Ok(())
    }

    for v in 0..n {
        let mut cand = g.neighbors(v).clone();
        clear_through(&mut cand, v);
        stack.push(v);
        grow(g, &mut stack, cand, max_dim, &mut faces, &mut total, face_cap)?;
        stack.pop();
    }
    // DFS emits each dimension in lexicographic order already
    let complete_through = if faces[max_dim].is_empty() { usize::MAX } else { max_dim };
    while faces.len() > 1 && faces.last().is_some_and(|f| f.is_empty()) {
        faces.pop();
    }
    if n == 0 {
        faces.clear();
    }
    Ok(SimplicialComplex {
        vertex_labels: g.labels().to_vec(),
        faces,
        complete_through,
    })
}

fn clear_through(b: &mut BitVector, v: usize) {
    for k in 0..=v {
        b.set(k, false);
    }
}

/// Δ|_W: faces of `x` with every vertex in `w`.
pub fn induced_subcomplex(x: &SimplicialComplex, w: &VertexSet) -> SimplicialComplex {
    assert_eq!(w.width(), x.universe(), "vertex set width must match the complex");
    let faces = x
        .faces
        .iter()
        .map(|list| list.iter().filter(|f| f.iter().all(|&v| w.contains(v))).cloned().collect())
        .collect();
    trimmed(SimplicialComplex {
        vertex_labels: x.vertex_labels.clone(),
        faces,
        complete_through: x.complete_through,
    })
}

/// Cl(Γ)^U: faces of `x` containing no member of `u` as a subset.
pub fn delete_faces_complex(x: &SimplicialComplex, u: &[Face]) -> SimplicialComplex {
    let faces = x
        .faces
        .iter()
        .map(|list| {
            list.iter()
                .filter(|f| !u.iter().any(|bad| bad.is_subset_of(f)))
                .cloned()
                .collect()
        })
        .collect();
    trimmed(SimplicialComplex {
        vertex_labels: x.vertex_labels.clone(),
        faces,
        complete_through: x.complete_through,
    })
}

fn trimmed(mut x: SimplicialComplex) -> SimplicialComplex {
    while x.faces.last().is_some_and(|f| f.is_empty()) {
        x.faces.pop();
        // an emptied top dimension means everything above is empty as well
        if x.complete_through != usize::MAX && x.faces.len() <= x.complete_through {
            x.complete_through = usize::MAX;
        }
    }
    x
}

//! Reduced (co)homology over GF(2), the chain–cochain pairing and the two
//! support norms.
//!
//! Everything works on the augmented chain complex: C_{-1} = F2 and the
//! boundary of a vertex is the single (-1)-face. A cocycle is a coboundary
//! iff it pairs to zero with every cycle of a homology basis, so the class of
//! a cocycle is read off as its vector of pairings ("signature") against a
//! fixed basis of H̃_i.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::f2::{BitMatrix, BitVector, EchelonBasis};
use crate::value::{binomial, Caps, Extended};
use serde::Serialize;

/// dim H̃^i(X; F2) for `i ≥ -1`.
pub fn reduced_betti(x: &SimplicialComplex, i: isize) -> Result<usize> {
    if i < -1 {
        return Err(Error::Validation(format!("cohomological degree {i} is below -1")));
    }
    if i == -1 {
        return Ok(usize::from(x.is_void()));
    }
    let i = i as usize;
    x.require_dim(i + 1)?;
    let n_i = x.count(i);
    if n_i == 0 {
        return Ok(0);
    }
    let r_low = if i == 0 { 1 } else { boundary_rank(x, i) };
    let r_high = boundary_rank(x, i + 1);
    Ok(n_i - r_low - r_high)
}

/// β̃_{-1}, β̃_0, ..., β̃_top in one pass. Needs the complex to be known in
/// full (built past its top dimension, or through dimension |V| - 1).
pub fn reduced_betti_all(x: &SimplicialComplex) -> Result<Vec<usize>> {
    let Some(top) = x.top_dim() else {
        return Ok(vec![1]);
    };
    let full = x.complete_through() > top || x.complete_through() + 1 >= x.universe();
    if !full {
        return Err(Error::InsufficientDimension {
            built: x.complete_through(),
            needed: top + 1,
        });
    }
    // ranks[k] = rank ∂_k for k = 0..=top+1, with the augmentation at 0
    let mut ranks = vec![1usize];
    ranks.extend((1..=top).map(|k| boundary_rank(x, k)));
    ranks.push(0);
    let mut out = vec![0];
    out.extend((0..=top).map(|k| x.count(k) - ranks[k] - ranks[k + 1]));
    Ok(out)
}

fn boundary_rank(x: &SimplicialComplex, i: usize) -> usize {
    if x.count(i) == 0 || x.count(i - 1) == 0 {
        return 0;
    }
    BitMatrix::from_columns(x.count(i - 1), &x.boundary_columns(i)).rank()
}

/// χ(ζ): parity of the common support.
pub fn pairing(chi: &BitVector, zeta: &BitVector) -> Result<bool> {
    if chi.width() != zeta.width() {
        return Err(Error::WidthMismatch {
            expected: chi.width(),
            got: zeta.width(),
        });
    }
    Ok(chi.dot(zeta))
}

/// All the linear algebra of one degree `i`, computed once and shared by
/// the norm searches.
#[derive(Debug, Clone)]
pub struct Degree {
    pub i: usize,
    /// ∂ of each i-face over (i-1)-faces (a single coordinate when i = 0).
    pub boundaries: Vec<BitVector>,
    /// δ of each i-face over (i+1)-faces.
    pub coboundaries: Vec<BitVector>,
    /// For each (i-1)-face, the i-faces containing it.
    pub lower_cofaces: Vec<Vec<usize>>,
    /// B_i, spanned by boundaries of (i+1)-faces.
    pub boundary_space: EchelonBasis,
    /// B^i, spanned by coboundaries of (i-1)-faces.
    pub coboundary_space: EchelonBasis,
    pub cocycle_basis: Vec<BitVector>,
    /// Cycles z_1..z_h whose classes form a basis of H̃_i.
    pub homology_basis: Vec<BitVector>,
    /// Cocycles χ_1..χ_h with χ_a(z_b) = [a = b].
    pub cohomology_basis: Vec<BitVector>,
    /// Per i-face j, the bits z_b[j]: the signature of the single-face cochain.
    pub face_signatures: Vec<BitVector>,
}

impl Degree {
    pub fn new(x: &SimplicialComplex, i: usize) -> Result<Self> {
        x.require_dim(i + 1)?;
        let n_i = x.count(i);
        let n_low = if i == 0 { 1 } else { x.count(i - 1) };
        let boundaries = x.boundary_columns(i);
        let upper = x.boundary_columns(i + 1);
        let lower_rows = x.coboundary_rows(i);
        let lower_cofaces: Vec<Vec<usize>> = if n_i == 0 {
            vec![Vec::new(); n_low]
        } else {
            lower_rows.iter().map(|r| r.iter_ones().collect()).collect()
        };
        let mut coboundaries = vec![BitVector::zeros(upper.len()); n_i];
        for (f, col) in upper.iter().enumerate() {
            for j in col.iter_ones() {
                coboundaries[j].set(f, true);
            }
        }

        let boundary_space = EchelonBasis::from_vectors(n_i, &upper);
        let coboundary_space = if n_i == 0 {
            EchelonBasis::new(0)
        } else {
            EchelonBasis::from_vectors(n_i, &lower_rows)
        };
        let cocycle_basis = BitMatrix::from_rows(n_i, &upper).kernel_basis();
        let cycles = if n_i == 0 {
            Vec::new()
        } else {
            BitMatrix::from_columns(n_low, &boundaries).kernel_basis()
        };
        let mut span = boundary_space.clone();
        let homology_basis: Vec<BitVector> = cycles.into_iter().filter(|z| span.insert(z.clone())).collect();
        let h = homology_basis.len();

        let mut face_signatures = vec![BitVector::zeros(h); n_i];
        for (b, z) in homology_basis.iter().enumerate() {
            for j in z.iter_ones() {
                face_signatures[j].set(b, true);
            }
        }

        // Gauss–Jordan on (signature, cocycle) pairs gives the dual basis.
        let mut pairs: Vec<(usize, BitVector, BitVector)> = Vec::new();
        for z in &cocycle_basis {
            let mut s = signature_of(&homology_basis, z);
            let mut v = z.clone();
            for (p, ps, pv) in &pairs {
                if s.get(*p) {
                    s.xor_assign(ps);
                    v.xor_assign(pv);
                }
            }
            if let Some(p) = s.first_one() {
                for (_, qs, qv) in pairs.iter_mut() {
                    if qs.get(p) {
                        qs.xor_assign(&s);
                        qv.xor_assign(&v);
                    }
                }
                pairs.push((p, s, v));
            }
        }
        debug_assert_eq!(pairs.len(), h);
        pairs.sort_by_key(|(p, _, _)| *p);
        let cohomology_basis = pairs.into_iter().map(|(_, _, v)| v).collect();

        Ok(Degree {
            i,
            boundaries,
            coboundaries,
            lower_cofaces,
            boundary_space,
            coboundary_space,
            cocycle_basis,
            homology_basis,
            cohomology_basis,
            face_signatures,
        })
    }

    pub fn faces(&self) -> usize {
        self.boundaries.len()
    }

    /// dim H̃^i = dim H̃_i.
    pub fn betti(&self) -> usize {
        self.homology_basis.len()
    }

    pub fn is_cocycle(&self, chi: &BitVector) -> bool {
        let mut acc = BitVector::zeros(self.coboundaries.first().map_or(0, |c| c.width()));
        for j in chi.iter_ones() {
            acc.xor_assign(&self.coboundaries[j]);
        }
        acc.is_zero()
    }

    pub fn is_cycle(&self, zeta: &BitVector) -> bool {
        let width = if self.i == 0 { 1 } else { self.lower_cofaces.len() };
        let mut acc = BitVector::zeros(width);
        for j in zeta.iter_ones() {
            acc.xor_assign(&self.boundaries[j]);
        }
        acc.is_zero()
    }

    /// Coordinates of the class of a cocycle in the dual basis.
    pub fn signature(&self, chi: &BitVector) -> BitVector {
        signature_of(&self.homology_basis, chi)
    }

    /// Cocycle representing the class with the given coordinates.
    pub fn class_cocycle(&self, signature: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.faces());
        for a in signature.iter_ones() {
            v.xor_assign(&self.cohomology_basis[a]);
        }
        v
    }
}

fn signature_of(homology_basis: &[BitVector], chi: &BitVector) -> BitVector {
    BitVector::from_bools(&homology_basis.iter().map(|z| z.dot(chi)).collect::<Vec<_>>())
}

/// ‖H̃^i‖_c: least support of a cocycle that is not a coboundary.
pub fn cocycle_norm(x: &SimplicialComplex, i: usize, caps: &Caps) -> Result<Extended> {
    cocycle_norm_of(&Degree::new(x, i)?, caps)
}

/// Supports are tried by increasing size, restricted to faces some cocycle
/// touches. When the remaining subset count would exceed a full walk over
/// the cocycle space, the search switches to that walk instead; both are
/// exact.
pub fn cocycle_norm_of(d: &Degree, caps: &Caps) -> Result<Extended> {
    if d.betti() == 0 {
        return Ok(Extended::Infinite);
    }
    let mut touched = BitVector::zeros(d.faces());
    for z in &d.cocycle_basis {
        touched.or_assign(z);
    }
    let coords: Vec<usize> = touched.iter_ones().collect();
    let m = coords.len();
    let walk = 1u128.checked_shl(d.cocycle_basis.len() as u32).unwrap_or(u128::MAX);
    let walk_ok = walk <= caps.coset as u128;
    let mut spent: u128 = 0;
    for s in 1..=m {
        let here = binomial(m, s);
        if walk_ok && spent + here > walk {
            return Ok(Extended::Finite(min_weight_walk(d)));
        }
        if here > caps.enumeration as u128 {
            return Err(Error::guard(format!("cocycle supports of size {s}"), here, caps.enumeration).with_lower_bound(s));
        }
        if support_search(d, &coords, s) {
            return Ok(Extended::Finite(s));
        }
        spent += here;
    }
    unreachable!("a nonzero class always has a representative")
}

/// Is there an s-subset of `coords` that is a nontrivial cocycle?
fn support_search(d: &Degree, coords: &[usize], s: usize) -> bool {
    let up = d.coboundaries[0].width();
    let h = d.betti();
    let mut cob = vec![BitVector::zeros(up); s + 1];
    let mut sig = vec![BitVector::zeros(h); s + 1];

    fn rec(d: &Degree, coords: &[usize], from: usize, depth: usize, s: usize, cob: &mut [BitVector], sig: &mut [BitVector]) -> bool {
        if depth == s {
            return cob[depth].is_zero() && !sig[depth].is_zero();
        }
        for k in from..=coords.len() - (s - depth) {
            let j = coords[k];
            let (lo, hi) = cob.split_at_mut(depth + 1);
            hi[0].clone_from(&lo[depth]);
            hi[0].xor_assign(&d.coboundaries[j]);
            let (lo, hi) = sig.split_at_mut(depth + 1);
            hi[0].clone_from(&lo[depth]);
            hi[0].xor_assign(&d.face_signatures[j]);
            if rec(d, coords, k + 1, depth + 1, s, cob, sig) {
                return true;
            }
        }
        false
    }
    rec(d, coords, 0, 0, s, &mut cob, &mut sig)
}

/// Gray-code walk over the whole cocycle space.
fn min_weight_walk(d: &Degree) -> usize {
    let basis = &d.cocycle_basis;
    let sigs: Vec<BitVector> = basis.iter().map(|z| d.signature(z)).collect();
    let mut v = BitVector::zeros(d.faces());
    let mut s = BitVector::zeros(d.betti());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << basis.len()) {
        let bit = step.trailing_zeros() as usize;
        v.xor_assign(&basis[bit]);
        s.xor_assign(&sigs[bit]);
        if !s.is_zero() {
            best = best.min(v.count_ones());
        }
    }
    best
}

/// Least weight in the coset χ + B^i.
pub fn coset_min_weight(d: &Degree, chi: &BitVector, caps: &Caps) -> Result<usize> {
    let basis = d.coboundary_space.vectors();
    let total = 1u128 << basis.len().min(127);
    if total > caps.coset as u128 {
        return Err(Error::guard("coboundary coset walk", total, caps.coset));
    }
    let mut v = chi.clone();
    let mut best = v.count_ones();
    for step in 1u64..(1u64 << basis.len()) {
        v.xor_assign(&basis[step.trailing_zeros() as usize]);
        best = best.min(v.count_ones());
    }
    Ok(best)
}

/// Minimum-weight representatives of one nonzero class.
#[derive(Debug, Clone)]
pub struct MinimalClass {
    pub signature: BitVector,
    pub weight: usize,
    pub representatives: Vec<BitVector>,
}

/// Every minimum-weight representative of every nonzero class, found by
/// one walk over the cocycle space.
pub fn minimal_representatives(d: &Degree, caps: &Caps) -> Result<Vec<MinimalClass>> {
    let h = d.betti();
    if h == 0 {
        return Ok(Vec::new());
    }
    let classes = (1u128 << h.min(127)) - 1;
    if classes > caps.classes as u128 {
        return Err(Error::guard("cohomology classes", classes, caps.classes));
    }
    let basis = &d.cocycle_basis;
    let total = 1u128 << basis.len().min(127);
    if total > caps.coset as u128 {
        return Err(Error::guard("cocycle space walk", total, caps.coset));
    }
    let sigs: Vec<u64> = basis.iter().map(|z| d.signature(z).as_word()).collect();
    let mut best: Vec<(usize, Vec<BitVector>)> = vec![(usize::MAX, Vec::new()); 1 << h];
    let mut v = BitVector::zeros(d.faces());
    let mut s = 0u64;
    for step in 1u64..(1u64 << basis.len()) {
        let bit = step.trailing_zeros() as usize;
        v.xor_assign(&basis[bit]);
        s ^= sigs[bit];
        if s == 0 {
            continue;
        }
        let w = v.count_ones();
        let slot = &mut best[s as usize];
        if w < slot.0 {
            *slot = (w, vec![v.clone()]);
        } else if w == slot.0 {
            slot.1.push(v.clone());
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(sig, (weight, mut reps))| {
            reps.sort();
            MinimalClass {
                signature: BitVector::from_word(h, sig as u64),
                weight,
                representatives: reps,
            }
        })
        .collect())
}

/// Walk every i-cycle whose support is at most `ell` and that has no
/// proper sub-cycle as a prefix of the search. Any cycle of support ≤ ℓ is a
/// sum of visited ones, and every inclusion-minimal cycle is visited.
///
/// Search: fix the smallest face of the cycle, then repeatedly cancel the
/// smallest (i-1)-face of the running boundary with one of its cofaces.
/// Cofaces rejected on one branch are forbidden on later siblings so each
/// support is produced once. `visit` returns true to stop early.
pub fn for_each_cycle(
    d: &Degree,
    ell: usize,
    node_cap: u64,
    mut visit: impl FnMut(&BitVector, usize) -> bool,
) -> Result<bool> {
    let n = d.faces();
    let per_face = d.i + 1;
    let width = if d.i == 0 { 1 } else { d.lower_cofaces.len() };
    let mut st = Search {
        d,
        ell,
        per_face,
        chosen: BitVector::zeros(n),
        forbidden: BitVector::zeros(n),
        boundary: BitVector::zeros(width),
        nodes: 0,
        cap: node_cap,
    };
    for f0 in 0..n {
        st.chosen.set(f0, true);
        st.boundary.xor_assign(&d.boundaries[f0]);
        let stop = st.rec(f0, 1, &mut visit)?;
        st.boundary.xor_assign(&d.boundaries[f0]);
        st.chosen.set(f0, false);
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

struct Search<'a> {
    d: &'a Degree,
    ell: usize,
    per_face: usize,
    chosen: BitVector,
    forbidden: BitVector,
    boundary: BitVector,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn rec(&mut self, start: usize, size: usize, visit: &mut impl FnMut(&BitVector, usize) -> bool) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::guard("cycle search nodes", self.nodes as u128, self.cap));
        }
        let Some(r) = self.boundary.first_one() else {
            return Ok(visit(&self.chosen, size));
        };
        let open = self.boundary.count_ones();
        if size + open.div_ceil(self.per_face) > self.ell {
            return Ok(false);
        }
        let d = self.d;
        let cands: Vec<usize> = d.lower_cofaces[r]
            .iter()
            .copied()
            .filter(|&c| c > start && !self.chosen.get(c) && !self.forbidden.get(c))
            .collect();
        let mut stop = false;
        for &c in &cands {
            self.chosen.set(c, true);
            self.boundary.xor_assign(&d.boundaries[c]);
            let r = self.rec(start, size + 1, visit);
            self.boundary.xor_assign(&d.boundaries[c]);
            self.chosen.set(c, false);
            match r {
                Ok(true) => {
                    stop = true;
                    break;
                }
                Ok(false) => {}
                Err(e) => {
                    for &c in &cands {
                        self.forbidden.set(c, false);
                    }
                    return Err(e);
                }
            }
            self.forbidden.set(c, true);
        }
        for &c in &cands {
            self.forbidden.set(c, false);
        }
        Ok(stop)
    }
}

/// ‖H̃_i‖_h: least ℓ such that cycles of support ≤ ℓ span H̃_i; 0 when
/// H̃_i = 0.
pub fn homology_norm(x: &SimplicialComplex, i: usize, caps: &Caps) -> Result<usize> {
    homology_norm_of(&Degree::new(x, i)?, caps)
}

pub fn homology_norm_of(d: &Degree, caps: &Caps) -> Result<usize> {
    let h = d.betti();
    if h == 0 {
        return Ok(0);
    }
    let mut span = d.boundary_space.clone();
    let target = span.rank() + h;
    for ell in 1..=d.faces() {
        let done = for_each_cycle(d, ell, caps.cycles, |z, size| {
            if size == ell {
                span.insert(z.clone());
            }
            span.rank() == target
        })
        .map_err(|e| e.with_lower_bound(ell))?;
        if done {
            return Ok(ell);
        }
    }
    unreachable!("all cycles together span homology")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CochainClassInfo {
    pub dimension: usize,
    /// Indicator over the i-faces of the complex.
    #[serde(serialize_with = "ser_bits")]
    pub representative: BitVector,
    pub is_nontrivial: bool,
}

fn ser_bits<S: serde::Serializer>(v: &BitVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter_ones())
}

/// One representative per nonzero class of H̃^i, ordered by class
/// coordinates.
pub fn class_representatives(x: &SimplicialComplex, i: usize, cap: u64) -> Result<Vec<CochainClassInfo>> {
    let d = Degree::new(x, i)?;
    let h = d.betti();
    let classes = (1u128 << h.min(127)) - 1;
    if classes > cap as u128 {
        return Err(Error::guard("cohomology classes", classes, cap));
    }
    Ok((1u64..=classes as u64)
        .map(|sig| CochainClassInfo {
            dimension: i,
            representative: d.class_cocycle(&BitVector::from_word(h, sig)),
            is_nontrivial: true,
        })
        .collect())
}

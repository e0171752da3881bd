//! Dense GF(2) linear algebra over packed 64-bit words.
//!
//! Everything homological in this crate reduces to ranks, kernels and span
//! membership of boundary matrices, so this module is the hot path. Vectors
//! and matrix rows share the same packing: bit `j` lives in word `j / 64` at
//! position `j % 64`, and bits past the logical width are always zero.

use crate::error::{Error, Result};
use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(width: usize) -> usize {
    width.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    width: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(width: usize) -> Self {
        BitVector {
            width,
            words: vec![0; words_for(width)],
        }
    }

    pub fn ones(width: usize) -> Self {
        let mut v = BitVector {
            width,
            words: vec![!0; words_for(width)],
        };
        v.mask_tail();
        v
    }

    pub fn from_indices(width: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVector::zeros(width);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Low `width` bits of `word` (width ≤ 64).
    pub fn from_word(width: usize, word: u64) -> Self {
        assert!(width <= WORD);
        let mut v = BitVector {
            width,
            words: if width == 0 { vec![] } else { vec![word] },
        };
        v.mask_tail();
        v
    }

    fn mask_tail(&mut self) {
        let r = self.width % WORD;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width, "bit {i} out of range {}", self.width);
        let m = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.width);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    fn check_width(&self, other: &BitVector) {
        assert_eq!(self.width, other.width, "bit vector width mismatch");
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        self.check_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVector) {
        self.check_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVector) {
        self.check_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self & !other`
    pub fn and_not_assign(&mut self, other: &BitVector) {
        self.check_width(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn and(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.and_assign(other);
        v
    }

    pub fn complement(&self) -> BitVector {
        let mut v = BitVector {
            width: self.width,
            words: self.words.iter().map(|w| !w).collect(),
        };
        v.mask_tail();
        v
    }

    pub fn and_count(&self, other: &BitVector) -> usize {
        self.check_width(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        self.check_width(other);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    pub fn is_subset_of(&self, other: &BitVector) -> bool {
        self.check_width(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitVector) -> bool {
        self.check_width(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// First word, for widths ≤ 64.
    pub fn as_word(&self) -> u64 {
        debug_assert!(self.width <= WORD);
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.width)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect();
        write!(f, "BitVector({s})")
    }
}

/// Row-major packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = BitMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Build from row vectors of a common width `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.width(), cols);
            m.data[r * m.stride..(r + 1) * m.stride].copy_from_slice(v.words());
        }
        m
    }

    /// Build from column vectors of a common height `rows`.
    pub fn from_columns(rows: usize, cols: &[BitVector]) -> Self {
        let mut m = BitMatrix::zeros(rows, cols.len());
        for (c, v) in cols.iter().enumerate() {
            assert_eq!(v.width(), rows);
            for r in v.iter_ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let m = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= m;
        } else {
            *w &= !m;
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            width: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_indices(self.rows, (0..self.rows).filter(|&r| self.get(r, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// `self * v` for a column vector `v` of width `cols`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.width() != self.cols {
            return Err(Error::WidthMismatch {
                expected: self.cols,
                got: v.width(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::WidthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let i = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let (dst, src) = (r * out.stride, i * other.stride);
                    for j in 0..out.stride {
                        out.data[dst + j] ^= other.data[src + j];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns. Input is left untouched.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// In-place elimination. With `full`, rows above each pivot are cleared too.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let (wi, bit) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (rank..self.rows).find(|&r| self.data[r * stride + wi] & bit != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..stride {
                    self.data.swap(p * stride + j, rank * stride + j);
                }
            }
            let start = if full { 0 } else { rank + 1 };
            for r in start..self.rows {
                if r != rank && self.data[r * stride + wi] & bit != 0 {
                    for j in wi..stride {
                        let v = self.data[rank * stride + j];
                        self.data[r * stride + j] ^= v;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // eliminate along the shorter side
        if self.cols > self.rows * 2 && self.rows > 0 {
            let mut t = self.transpose();
            return t.eliminate(false).len();
        }
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Basis of `{v : self * v = 0}`; exactly `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::zeros(self.cols);
                v.set(f, true);
                for (row, &p) in pivots.iter().enumerate() {
                    if r.get(row, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a subspace of GF(2)^width.
///
/// Each stored vector's lowest set bit is its pivot and no two vectors share
/// a pivot, so reduction only ever clears the current lowest bit and moves
/// upward. Repeated membership queries against one span reuse this cache.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    pivot_of: Vec<Option<u32>>,
    vectors: Vec<BitVector>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            pivot_of: vec![None; width],
            vectors: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(width: usize, vs: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut b = EchelonBasis::new(width);
        for v in vs {
            b.insert(v.clone());
        }
        b
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    /// Reduce `v` in place until its lowest set bit is not a pivot.
    /// Afterwards `v` is zero iff it was in the span: a nonzero member of
    /// the span always has a pivot as its lowest bit.
    pub fn reduce(&self, v: &mut BitVector) {
        assert_eq!(v.width(), self.width);
        let mut k = 0;
        loop {
            let words = v.words();
            while k < words.len() && words[k] == 0 {
                k += 1;
            }
            if k == words.len() {
                return;
            }
            let p = k * WORD + words[k].trailing_zeros() as usize;
            match self.pivot_of[p] {
                Some(idx) => v.xor_assign(&self.vectors[idx as usize]),
                None => return,
            }
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Insert `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        self.reduce(&mut v);
        match v.first_one() {
            None => false,
            Some(p) => {
                self.pivot_of[p] = Some(self.vectors.len() as u32);
                self.vectors.push(v);
                true
            }
        }
    }
}

/// True iff `v` lies in the span of `basis`.
pub fn in_span(basis: &[BitVector], v: &BitVector) -> Result<bool> {
    for b in basis {
        if b.width() != v.width() {
            return Err(Error::WidthMismatch {
                expected: v.width(),
                got: b.width(),
            });
        }
    }
    Ok(EchelonBasis::from_vectors(v.width(), basis).contains(v))
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    m.kernel_basis()
}

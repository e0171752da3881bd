//! Extended integers and the resource caps shared by every search.

use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// A nonnegative integer or +infinity. Minimum over the empty set is `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(usize),
    Infinite,
}

impl Extended {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            Extended::Finite(v) => Some(*v),
            Extended::Infinite => None,
        }
    }

    /// Minimum of an iterator, `Infinite` when empty.
    pub fn min_of<I: IntoIterator<Item = Extended>>(it: I) -> Extended {
        it.into_iter().min().unwrap_or(Extended::Infinite)
    }
}

/// Extended-real product with the measure-theory convention 0 * inf = 0.
impl std::ops::Mul for Extended {
    type Output = Extended;
    fn mul(self, other: Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(0), _) | (_, Extended::Finite(0)) => Extended::Finite(0),
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a * b),
            _ => Extended::Infinite,
        }
    }
}

impl From<usize> for Extended {
    fn from(v: usize) -> Self {
        Extended::Finite(v)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(v) => s.serialize_u64(*v as u64),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Enumeration limits. Exceeding any of them is an explicit
/// [`Error::ResourceGuard`](crate::Error::ResourceGuard), never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Subsets enumerated per size class (vertex sets, (A, B) pairs, deletion sets).
    pub enumeration: u64,
    /// Total faces in a built clique complex.
    pub faces: u64,
    /// Nonzero cohomology classes enumerated (2^dim - 1).
    pub classes: u64,
    /// Candidate cycles collected by support-bounded search, and search nodes
    /// of the packing backtracker.
    pub cycles: u64,
    /// Vectors visited by cocycle / coset minimum-weight searches.
    pub coset: u64,
    /// Largest vertex count accepted by the Hochster sum.
    pub hochster_vertices: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: 10_000_000,
            faces: 5_000_000,
            classes: 1 << 12,
            cycles: 2_000_000,
            coset: 1 << 26,
            hochster_vertices: 16,
        }
    }
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

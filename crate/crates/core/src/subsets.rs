//! Fixed-size subset enumeration in colexicographic order.

use crate::error::{Error, Result};
use crate::value::binomial;

/// k-subsets of `0..n` in colex order: sorted by largest element, then next
/// largest, and so on. `{0,1,2}, {0,1,3}, {0,2,3}, {1,2,3}, {0,1,4}, ...`
#[derive(Debug, Clone)]
pub struct Colex {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Colex {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        // lowest position that can move up without colliding with its successor
        let mut j = 0;
        loop {
            if j == k {
                self.done = true;
                break;
            }
            let limit = if j + 1 < k { self.current[j + 1] } else { self.n };
            if self.current[j] + 1 < limit {
                self.current[j] += 1;
                for (t, slot) in self.current[..j].iter_mut().enumerate() {
                    *slot = t;
                }
                break;
            }
            j += 1;
        }
        Some(out)
    }
}

/// Next bitmask with the same popcount (Gosper's hack). Walks k-subsets of
/// a ≤ 64 element universe in colex order.
#[inline]
pub fn next_same_popcount(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    Some((((r ^ x) >> 2) / c) | r)
}

/// All k-subsets of `0..n` as masks (n ≤ 64), colex order.
pub fn masks(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 64);
    let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let first = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else if k == 64 {
        Some(u64::MAX)
    } else {
        Some((1u64 << k) - 1)
    };
    let mut cur = first;
    std::iter::from_fn(move || {
        let x = cur?;
        cur = if x == 0 {
            None
        } else {
            next_same_popcount(x).filter(|&y| y & !limit == 0)
        };
        Some(x)
    })
}

/// Reject a size class whose subset count exceeds `cap`.
pub fn guard(what: &str, n: usize, k: usize, cap: u64) -> Result<()> {
    let needed = binomial(n, k);
    if needed > cap as u128 {
        Err(Error::guard(format!("{what} ({n} choose {k})"), needed, cap))
    } else {
        Ok(())
    }
}

pub fn mask_to_vec(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

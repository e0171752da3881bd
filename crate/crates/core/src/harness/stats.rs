//! Seed derivation and proportion intervals.

/// One SplitMix64 output step applied to `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`: the (index+1)-th output of a
/// SplitMix64 stream started at `master`. Stable across releases; records
/// can be replayed from (master, index) alone.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// 95% two-sided normal quantile.
pub const Z95: f64 = 1.959964;

/// Wilson score interval for `successes` out of `total`; (0, 1) when empty.
pub fn wilson(successes: usize, total: usize, z: f64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let m = total as f64;
    let phat = successes as f64 / m;
    let z2 = z * z;
    let denom = 1.0 + z2 / m;
    let center = (phat + z2 / (2.0 * m)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / m + z2 / (4.0 * m * m)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

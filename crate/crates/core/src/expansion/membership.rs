//! Index-set membership for the terms that may appear in the metric.
//!
//! For `n > 4` the allowed terms are `r^sigma G_m` with
//! `sigma = 2j - (n-2) l - k`, `k >= l >= j + 1`, `k >= m`, `k = m (mod 2)`
//! and no logarithms. For `n = 4` they are `r^sigma (log r)^i G_m` with
//! `sigma = -2l - k`, `l >= 1`, `k >= l + i`, `k >= m`, `k = m (mod 2)`.
//!
//! The "product" variants describe the right-hand side of the equation,
//! which is at least quadratic in the metric perturbation: `l >= j + 2`
//! (n > 4) and `l >= 2` (n = 4).

use super::TermKey;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TWitness {
    pub j: i64,
    pub l: i64,
    pub k: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TildeWitness {
    pub l: i64,
    pub k: i64,
}

fn search_t(key: TermKey, n: usize, gap: i64) -> Result<Option<TWitness>> {
    if n <= 4 {
        return Err(Error::DimensionTooSmall(n));
    }
    if key.logpow != 0 {
        return Ok(None);
    }
    let n = n as i64;
    let m = key.degree as i64;
    let s = key.sigma;
    // -sigma = (n-2) l + k - 2j >= (n-3) l + 2 gap
    let budget = -s - 2 * gap;
    if budget < 0 {
        return Ok(None);
    }
    let max_l = budget / (n - 3);
    for l in gap..=max_l {
        for j in 0..=(l - gap) {
            let k = 2 * j - (n - 2) * l - s;
            if k >= l && k >= m && (k - m) % 2 == 0 {
                return Ok(Some(TWitness { j, l, k }));
            }
        }
    }
    Ok(None)
}

fn search_ttilde(key: TermKey, n: usize, min_l: i64) -> Result<Option<TildeWitness>> {
    if n != 4 {
        return Err(Error::InvalidConfig(format!("log index set is defined for n = 4, got n = {n}")));
    }
    let i = key.logpow as i64;
    let m = key.degree as i64;
    let s = key.sigma;
    // -sigma = 2l + k >= 3l + i
    let budget = -s - i;
    if budget < 3 * min_l {
        return Ok(None);
    }
    for l in min_l..=budget / 3 {
        let k = -s - 2 * l;
        if k >= l + i && k >= m && (k - m) % 2 == 0 {
            return Ok(Some(TildeWitness { l, k }));
        }
    }
    Ok(None)
}

/// Smallest witness `(l, j, k)` (lexicographic in `l` then `j`) placing the
/// term in the `n > 4` index set, or `None`.
pub fn membership_t(key: TermKey, n: usize) -> Result<Option<TWitness>> {
    search_t(key, n, 1)
}

/// Smallest `l` witnessing membership in the `n = 4` index set.
pub fn membership_ttilde(key: TermKey, n: usize) -> Result<Option<TildeWitness>> {
    search_ttilde(key, n, 1)
}

/// Membership in the quadratic (product) class for `n > 4`.
pub fn product_witness_t(key: TermKey, n: usize) -> Result<Option<TWitness>> {
    search_t(key, n, 2)
}

/// Membership in the quadratic (product) class for `n = 4`.
pub fn product_witness_ttilde(key: TermKey, n: usize) -> Result<Option<TildeWitness>> {
    search_ttilde(key, n, 2)
}

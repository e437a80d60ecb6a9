use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest number of qubits `r = 4e + ⌈log₂ k⌉` allowed for a code of
/// dimension `k` that corrects every error on at most `e` qubits.
pub fn qubit_lower_bound(e: usize, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let ceil_log2 = if k == 1 { 0 } else { (usize::BITS - (k - 1).leading_zeros()) as usize };
    Ok(4 * e + ceil_log2)
}

/// Sphere-packing style count `k·Σ_{j≤e} C(r,j)·3^j ≤ 2^r`.
///
/// Informational only: the counting argument assumes distinct errors map
/// to orthogonal states, which quantum codes need not satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingBound {
    pub satisfied: bool,
    pub lhs: u128,
    pub rhs: u128,
}

pub fn naive_counting_bound(r: usize, e: usize, k: usize) -> Result<CountingBound> {
    if r > 120 {
        return Err(Error::param("r", "must be at most 120"));
    }
    let mut words: u128 = 0;
    let mut binom: u128 = 1; // C(r, j)
    let mut three: u128 = 1; // 3^j
    for j in 0..=e.min(r) {
        if j > 0 {
            binom = binom * (r - j + 1) as u128 / j as u128;
            three = three.checked_mul(3).ok_or_else(|| Error::param("e", "count overflows"))?;
        }
        words = binom
            .checked_mul(three)
            .and_then(|t| words.checked_add(t))
            .ok_or_else(|| Error::param("e", "count overflows"))?;
    }
    let lhs = words.checked_mul(k as u128).ok_or_else(|| Error::param("k", "count overflows"))?;
    let rhs = 1u128 << r;
    Ok(CountingBound {
        satisfied: lhs <= rhs,
        lhs,
        rhs,
    })
}

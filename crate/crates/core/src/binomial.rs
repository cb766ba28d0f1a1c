//! Exact binomial sums and the binary entropy function.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::Rational;

/// `C(n, k)`, with `C(n, k) = 0` whenever `k < 0` or `k > n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `sum_{i=lo}^{hi} C(n, i)`.
pub fn binom_partial_sum(n: u64, lo: u64, hi: u64) -> Result<BigUint> {
    if lo > hi || hi > n {
        return Err(precondition(format!(
            "binomial sum needs 0 <= lo <= hi <= n, got n={n}, lo={lo}, hi={hi}"
        )));
    }
    let mut total = BigUint::zero();
    let mut term = binom(n, lo as i64);
    for i in lo..=hi {
        total += &term;
        // C(n, i+1) = C(n, i) (n - i) / (i + 1)
        term = term * (n - i) / (i + 1);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometricBound {
    #[serde(serialize_with = "crate::ser_display")]
    pub lhs: BigUint,
    #[serde(serialize_with = "crate::ser_display")]
    pub rhs: Rational,
    pub holds: bool,
}

/// Compares `sum_{i<=m} C(n, i)` against `(n - m)/(n - 2m) * C(n, m)`.
///
/// Requires `2m < n`; `m = 0` is accepted and gives equality.
pub fn geometric_bound(n: u64, m: u64) -> Result<GeometricBound> {
    if 2 * m >= n {
        return Err(precondition(format!("need 2m < n, got n={n}, m={m}")));
    }
    let lhs = binom_partial_sum(n, 0, m)?;
    let rhs = Rational::new(
        BigInt::from(n - m) * BigInt::from(binom(n, m as i64)),
        BigInt::from(n - 2 * m),
    );
    let holds = Rational::from_integer(BigInt::from(lhs.clone())) <= rhs;
    Ok(GeometricBound { lhs, rhs, holds })
}

/// Binary entropy `H(x) = -x log2 x - (1 - x) log2 (1 - x)`, with
/// `H(0) = H(1) = 0`.
pub fn binary_entropy(x: &Rational) -> Result<f64> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::Precondition(format!("entropy argument {x} outside [0, 1]")));
    }
    let y = Rational::one() - x;
    Ok(plogp(x) + plogp(&y))
}

fn plogp(p: &Rational) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let v = p.to_f64().expect("rational in [0,1] converts to f64");
    -v * v.log2()
}

//! Generators for the extremal families and their closed-form sizes.
//!
//! Every generator returns an explicit upward-closed [`Family`]; ground sets
//! are `[sm - 1]` or `[sm]` and must fit the full-cube limit.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::binomial::{binom, binom_partial_sum};
use crate::error::{precondition, Error, Result};
use crate::sets::{check_cube_n, full_bits, Family};

/// Size parameters shared by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub s: usize,
    pub m: usize,
    pub t: usize,
}

impl Params {
    pub fn new(n: usize, s: usize, m: usize, t: usize) -> Result<Self> {
        if s < 2 {
            return Err(precondition(format!("need s >= 2, got {s}")));
        }
        if t < 1 || m < 1 || n < 1 {
            return Err(precondition("n, m and t must be positive"));
        }
        Ok(Params { n, s, m, t })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    /// All sets of size `>= m` in `[sm - 1]`.
    KleitmanA,
    /// `m`-sets avoiding `sm`, plus all sets of size `> m`, in `[sm]`.
    KleitmanB,
    /// All sets of size `>= m - 1` in `[sm - 1]`.
    Sm1AllAtLeast,
    /// All sets of size `>= m` plus `(m-1)`-sets avoiding a fixed element,
    /// in `[sm]`.
    SmT3Pointed,
    /// All sets of size `>= m` plus, for `1 <= i <= s-1`, the `(m-i)`-sets
    /// meeting `[s-1]` in at least `i` elements, in `[sm]`.
    Lemma22,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 5] = [
        ConstructionKind::KleitmanA,
        ConstructionKind::KleitmanB,
        ConstructionKind::Sm1AllAtLeast,
        ConstructionKind::SmT3Pointed,
        ConstructionKind::Lemma22,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConstructionKind::KleitmanA => "kleitman-a",
            ConstructionKind::KleitmanB => "kleitman-b",
            ConstructionKind::Sm1AllAtLeast => "sm1",
            ConstructionKind::SmT3Pointed => "sm-t3",
            ConstructionKind::Lemma22 => "lemma22",
        }
    }

    /// Whether the ground set is `[sm - 1]` (otherwise `[sm]`).
    pub fn uses_sm_minus_one(self) -> bool {
        matches!(self, ConstructionKind::KleitmanA | ConstructionKind::Sm1AllAtLeast)
    }
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConstructionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                precondition(format!(
                    "unknown construction `{s}` (expected one of kleitman-a, kleitman-b, sm1, sm-t3, lemma22)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub params: Params,
    /// Only for [`ConstructionKind::SmT3Pointed`]; defaults to `n`.
    pub fixed_element: Option<usize>,
}

impl ConstructionSpec {
    /// Derives `n` from the kind and validates the arithmetic constraint.
    pub fn new(kind: ConstructionKind, s: usize, m: usize, t: usize, fixed_element: Option<usize>) -> Result<Self> {
        let n = if kind.uses_sm_minus_one() { s * m - 1 } else { s * m };
        let params = Params::new(n.max(1), s, m, t)?;
        if fixed_element.is_some() && kind != ConstructionKind::SmT3Pointed {
            return Err(precondition("a fixed element only applies to sm-t3"));
        }
        Ok(ConstructionSpec {
            kind,
            params,
            fixed_element,
        })
    }

    pub fn build(&self) -> Result<Family> {
        let Params { n, s, m, .. } = self.params;
        let expected = if self.kind.uses_sm_minus_one() {
            s * m - 1
        } else {
            s * m
        };
        if n != expected {
            return Err(precondition(format!("{} needs n = {expected}, got n = {n}", self.kind)));
        }
        match self.kind {
            ConstructionKind::KleitmanA => kleitman_a(s, m),
            ConstructionKind::KleitmanB => kleitman_b(s, m),
            ConstructionKind::Sm1AllAtLeast => family_sm1(s, m),
            ConstructionKind::SmT3Pointed => family_sm_t3(s, m, self.fixed_element),
            ConstructionKind::Lemma22 => lemma22_family(s, m),
        }
    }

    /// Size predicted by the closed-form count for this kind.
    pub fn closed_form_size(&self) -> Result<BigUint> {
        let Params { n, s, m, .. } = self.params;
        Ok(match self.kind {
            ConstructionKind::KleitmanA => kleitman_a_size(s, m),
            ConstructionKind::KleitmanB => kleitman_b_size(s, m),
            ConstructionKind::Sm1AllAtLeast => binom_partial_sum(n as u64, m as u64 - 1, n as u64)?,
            ConstructionKind::SmT3Pointed => family_sm_t3_size(s, m),
            ConstructionKind::Lemma22 => lemma22_size(s, m)?,
        })
    }
}

fn require(s: usize, m: usize, min_m: usize) -> Result<()> {
    if s < 3 {
        return Err(precondition(format!("constructions need s >= 3, got s = {s}")));
    }
    if m < min_m {
        return Err(precondition(format!("need m >= {min_m}, got m = {m}")));
    }
    Ok(())
}

fn filtered(n: usize, keep: impl Fn(u32) -> bool) -> Result<Family> {
    check_cube_n(n)?;
    Ok(Family::from_raw_bits(n, (0..=full_bits(n)).filter(|&b| keep(b))))
}

fn size(b: u32) -> usize {
    b.count_ones() as usize
}

pub fn kleitman_a(s: usize, m: usize) -> Result<Family> {
    require(s, m, 1)?;
    filtered(s * m - 1, |b| size(b) >= m)
}

pub fn kleitman_b(s: usize, m: usize) -> Result<Family> {
    require(s, m, 1)?;
    let n = s * m;
    let last = 1u32 << (n - 1);
    filtered(n, |b| size(b) > m || (size(b) == m && b & last == 0))
}

pub fn family_sm1(s: usize, m: usize) -> Result<Family> {
    require(s, m, 2)?;
    filtered(s * m - 1, |b| size(b) + 1 >= m)
}

/// `fixed` is the 1-based excluded element; `None` means `n`.
pub fn family_sm_t3(s: usize, m: usize, fixed: Option<usize>) -> Result<Family> {
    require(s, m, 2)?;
    let n = s * m;
    let x = fixed.unwrap_or(n);
    if x == 0 || x > n {
        return Err(Error::ElementOutOfRange { element: x, n });
    }
    let xbit = 1u32 << (x - 1);
    filtered(n, |b| size(b) >= m || (size(b) + 1 == m && b & xbit == 0))
}

pub fn lemma22_family(s: usize, m: usize) -> Result<Family> {
    require(s, m, 2)?;
    let n = s * m;
    let head = full_bits(s - 1);
    filtered(n, |b| {
        let k = size(b);
        if k >= m {
            return true;
        }
        // k = m - i with 1 <= i <= s - 1, and at least i elements of [s-1]
        let i = m - k;
        i < s && (b & head).count_ones() as usize >= i
    })
}

/// `sum_{j=i}^{s-1} C(s-1, j) C(sm-s+1, m-i-j)`: the number of `(m-i)`-sets
/// of `[sm]` with at least `i` elements in `[s-1]`.
pub fn layer_size_formula(s: usize, m: usize, i: usize) -> Result<BigUint> {
    if s < 2 || i < 1 || i > s - 1 {
        return Err(precondition(format!("need 1 <= i <= s-1, got s = {s}, i = {i}")));
    }
    let rest = (s * m - s + 1) as u64;
    let mut total = BigUint::zero();
    for j in i..s {
        total += binom((s - 1) as u64, j as i64) * binom(rest, m as i64 - i as i64 - j as i64);
    }
    Ok(total)
}

/// `2^n - sum_{i<=m-1} C(n, i)` with `n = sm - 1`.
pub fn kleitman_a_size(s: usize, m: usize) -> BigUint {
    let n = (s * m - 1) as u64;
    (BigUint::one() << n) - lower_sum(n, m as u64 - 1)
}

/// `2^n - [C(n, m) - C(n-1, m) + sum_{i<=m-1} C(n, i)]` with `n = sm`.
pub fn kleitman_b_size(s: usize, m: usize) -> BigUint {
    let n = (s * m) as u64;
    let mi = m as i64;
    let missing = binom(n, mi) - binom(n - 1, mi) + lower_sum(n, m as u64 - 1);
    (BigUint::one() << n) - missing
}

/// `sum_{i>=m} C(sm, i) + C(sm-1, m-1)`.
pub fn family_sm_t3_size(s: usize, m: usize) -> BigUint {
    let n = (s * m) as u64;
    binom_partial_sum(n, m as u64, n).expect("m <= n") + binom(n - 1, m as i64 - 1)
}

/// `sum_{i>=m} C(sm, i) + sum_i layer_size_formula(s, m, i)`.
pub fn lemma22_size(s: usize, m: usize) -> Result<BigUint> {
    let n = (s * m) as u64;
    let mut total = binom_partial_sum(n, m as u64, n)?;
    for i in 1..s {
        total += layer_size_formula(s, m, i)?;
    }
    Ok(total)
}

fn lower_sum(n: u64, hi: u64) -> BigUint {
    binom_partial_sum(n, 0, hi).expect("hi <= n")
}

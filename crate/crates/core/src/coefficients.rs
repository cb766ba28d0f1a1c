//! Exact values of the coefficients `alpha_s` and `beta_s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::binomial::binom;
use crate::error::{precondition, Result};
use crate::Rational;

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn check_s(s: usize) -> Result<()> {
    if s < 3 {
        return Err(precondition(format!("coefficients need s >= 3, got s = {s}")));
    }
    Ok(())
}

/// `1 - (1 - 1/s)^(s-1)`.
pub fn alpha(s: usize) -> Result<Rational> {
    check_s(s)?;
    let s = s as i64;
    Ok(Rational::one() - rat(s - 1, s).pow((s - 1) as i32))
}

/// `(s-1)/(s-2) * (1 - (1 - (s-2)/(s^2-s))^(s-1))`.
pub fn beta(s: usize) -> Result<Rational> {
    check_s(s)?;
    let s = s as i64;
    let inner = Rational::one() - rat(s - 2, s * s - s);
    Ok(rat(s - 1, s - 2) * (Rational::one() - inner.pow((s - 1) as i32)))
}

/// `sum_{i=1}^{s-1} sum_{j=i}^{s-1} C(s-1, j) (s-1)^(s-i-j) / s^(s-1)`,
/// evaluated term by term without any algebraic simplification.
pub fn beta_via_sum(s: usize) -> Result<Rational> {
    check_s(s)?;
    let base = Rational::from_integer(BigInt::from(s - 1));
    let denom = Rational::from_integer(BigInt::from(s)).pow((s - 1) as i32);
    let mut total = Rational::zero();
    for i in 1..s {
        for j in i..s {
            let c = Rational::from_integer(BigInt::from(binom((s - 1) as u64, j as i64)));
            let exponent = s as i32 - i as i32 - j as i32;
            total += c * base.pow(exponent) / &denom;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    HalfEven,
    HalfUp,
}

/// Fixed-point rendering of an exact rational with `places` decimals.
pub fn to_decimal(value: &Rational, places: usize, rounding: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let floor = scaled.floor().to_integer();
    let frac = scaled - Rational::from_integer(floor.clone());
    let half = rat(1, 2);
    let round_up = match frac.cmp(&half) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => match rounding {
            Rounding::HalfUp => true,
            Rounding::HalfEven => floor.is_odd(),
        },
    };
    let digits = if round_up { floor + 1 } else { floor };
    let (int_part, frac_part) = digits.div_rem(&scale);
    let sign = if value.is_negative() && !digits_is_zero(&int_part, &frac_part) {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = places)
    }
}

fn digits_is_zero(a: &BigInt, b: &BigInt) -> bool {
    a.is_zero() && b.is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub s: usize,
    #[serde(serialize_with = "crate::ser_display")]
    pub alpha: Rational,
    #[serde(serialize_with = "crate::ser_display")]
    pub beta: Rational,
    /// Six places, round-half-even.
    pub alpha_decimal: String,
    pub beta_decimal: String,
    /// Half-up rendering differs from half-even for one of the two values.
    pub rounding_discrepancy: bool,
}

/// Rows `3..=s_max` of the `alpha_s` / `beta_s` comparison table.
pub fn table1(s_max: usize) -> Result<Vec<Table1Row>> {
    check_s(s_max)?;
    (3..=s_max)
        .map(|s| {
            let a = alpha(s)?;
            let b = beta(s)?;
            let ad = to_decimal(&a, 6, Rounding::HalfEven);
            let bd = to_decimal(&b, 6, Rounding::HalfEven);
            let discrepancy = ad != to_decimal(&a, 6, Rounding::HalfUp) || bd != to_decimal(&b, 6, Rounding::HalfUp);
            Ok(Table1Row {
                s,
                alpha: a,
                beta: b,
                alpha_decimal: ad,
                beta_decimal: bd,
                rounding_discrepancy: discrepancy,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(3).unwrap(), rat(5, 9));
        assert_eq!(alpha(4).unwrap(), rat(37, 64));
        assert_eq!(alpha(5).unwrap(), rat(369, 625));
        assert!(alpha(2).is_err());
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(3).unwrap(), rat(11, 18));
        assert_eq!(beta(4).unwrap(), rat(91, 144));
        assert_eq!(beta(5).unwrap(), rat(25493, 40000));
        assert!(beta(1).is_err());
    }

    #[test]
    fn double_sum_matches_closed_form() {
        assert_eq!(beta_via_sum(3).unwrap(), rat(11, 18));
        assert_eq!(beta_via_sum(4).unwrap(), rat(91, 144));
        for s in 3..=40 {
            assert_eq!(beta_via_sum(s).unwrap(), beta(s).unwrap(), "s = {s}");
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(5, 9), 6, Rounding::HalfEven), "0.555556");
        assert_eq!(to_decimal(&rat(1, 8), 2, Rounding::HalfEven), "0.12");
        assert_eq!(to_decimal(&rat(1, 8), 2, Rounding::HalfUp), "0.13");
        assert_eq!(to_decimal(&rat(3, 8), 2, Rounding::HalfEven), "0.38");
        assert_eq!(to_decimal(&rat(-1, 3), 3, Rounding::HalfEven), "-0.333");
        assert_eq!(to_decimal(&rat(7, 2), 0, Rounding::HalfEven), "4");
        assert_eq!(
            to_decimal(&rat(199999999, 100000000), 6, Rounding::HalfEven),
            "2.000000"
        );
    }

    #[test]
    fn table_rows() {
        let t = table1(20).unwrap();
        assert_eq!(t.len(), 18);
        assert_eq!(
            (t[0].alpha_decimal.as_str(), t[0].beta_decimal.as_str()),
            ("0.555556", "0.611111")
        );
        assert_eq!(
            (t[3].alpha_decimal.as_str(), t[3].beta_decimal.as_str()),
            ("0.598122", "0.638818")
        );
        assert_eq!(
            (t[17].alpha_decimal.as_str(), t[17].beta_decimal.as_str()),
            ("0.622646", "0.635743")
        );
        for row in &t {
            assert!(row.beta > row.alpha);
            assert!(!row.rounding_discrepancy);
        }
    }
}

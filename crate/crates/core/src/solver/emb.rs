//! Largest `m` such that the Kneser graph `Kn(n, m)` contains a pattern.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::binomial::binary_entropy;
use crate::error::{Error, Result};
use crate::freeness::{Matcher, Witness};
use crate::pattern::PatternGraph;
use crate::sets::{check_cube_n, full_bits, SetMask};
use crate::solver::chif::chi_f;
use crate::Rational;

/// All `m`-subsets of `[n]` in increasing numeric order.
pub(crate) fn kneser_vertices(n: usize, m: usize) -> Vec<u32> {
    (0..=full_bits(n)).filter(|b| b.count_ones() as usize == m).collect()
}

/// A copy of `pattern` in `Kn(n, m)`, if any. `Kn(n, m)` is
/// vertex-transitive, so the first placed pattern vertex is pinned to
/// `{1, ..., m}`.
pub fn kneser_graph_copy(n: usize, m: usize, pattern: &PatternGraph) -> Result<Option<Witness>> {
    check_cube_n(n)?;
    if m > n {
        return Ok(None);
    }
    let vertices = kneser_vertices(n, m);
    if vertices.len() < pattern.vertex_count() {
        return Ok(None);
    }
    let matcher = Matcher::single_anchor(pattern, n);
    let anchor = full_bits(m);
    Ok(matcher.find_through(&vertices, anchor).map(|imgs| Witness {
        images: imgs.into_iter().map(|b| SetMask::from_raw(b, n)).collect(),
    }))
}

/// `emb(n, G)` with a witness copy in `Kn(n, emb)`; `(0, None)` when no
/// `m >= 1` admits a copy.
pub fn emb_with_witness(n: usize, pattern: &PatternGraph) -> Result<(usize, Option<Witness>)> {
    if pattern.edge_count() == 0 {
        return Err(Error::Pattern("emb needs a pattern with at least one edge".into()));
    }
    check_cube_n(n)?;
    // two disjoint m-sets need 2m <= n, so larger m has no edges
    for m in (1..=n / 2).rev() {
        if let Some(w) = kneser_graph_copy(n, m, pattern)? {
            return Ok((m, Some(w)));
        }
    }
    Ok((0, None))
}

pub fn emb(n: usize, pattern: &PatternGraph) -> Result<usize> {
    Ok(emb_with_witness(n, pattern)?.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyRow {
    pub n: usize,
    pub emb: usize,
    #[serde(serialize_with = "crate::ser_display")]
    pub ratio: Rational,
    pub ratio_decimal: f64,
    /// `|1/chi_f - emb/n|`.
    pub gap: f64,
    /// `chi_f * emb <= n`.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    #[serde(serialize_with = "crate::ser_display")]
    pub chi_f: Rational,
    /// `H(1 / chi_f)`.
    pub entropy: f64,
    pub rows: Vec<EntropyRow>,
}

impl EntropyReport {
    pub fn all_bounds_hold(&self) -> bool {
        self.rows.iter().all(|r| r.bound_holds)
    }
}

/// `emb(n, G)/n` for `n = n_min..=n_max` next to `1/chi_f(G)` and
/// `H(1/chi_f(G))`. Every row checks `chi_f(G) emb(n, G) <= n`, which holds
/// because an embedding is a homomorphism.
pub fn entropy_limit_report(pattern: &PatternGraph, n_min: usize, n_max: usize) -> Result<EntropyReport> {
    let chi = chi_f(pattern)?;
    let inv = Rational::one() / &chi;
    let inv_f = num_traits::ToPrimitive::to_f64(&inv).unwrap_or(f64::NAN);
    let entropy = binary_entropy(&inv)?;
    let mut rows = Vec::new();
    for n in n_min.max(1)..=n_max {
        let e = emb(n, pattern)?;
        let ratio = Rational::new(BigInt::from(e), BigInt::from(n));
        let ratio_decimal = num_traits::ToPrimitive::to_f64(&ratio).unwrap_or(f64::NAN);
        let bound_holds = &chi * Rational::from_integer(BigInt::from(e)) <= Rational::from_integer(BigInt::from(n));
        rows.push(EntropyRow {
            n,
            emb: e,
            ratio,
            ratio_decimal,
            gap: (inv_f - ratio_decimal).abs(),
            bound_holds,
        });
    }
    Ok(EntropyReport {
        chi_f: chi,
        entropy,
        rows,
    })
}

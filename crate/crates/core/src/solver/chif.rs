//! Fractional chromatic number with a primal/dual certificate.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::PatternGraph;
use crate::solver::lp::maximize;
use crate::Rational;

/// Above this many maximal independent sets the LP is not attempted.
pub const MAX_INDEPENDENT_SETS: usize = 20_000;

/// Maximal independent sets as vertex bitmasks (Bron-Kerbosch with pivoting
/// on the complement graph).
pub fn maximal_independent_sets(pattern: &PatternGraph) -> Result<Vec<u32>> {
    let v = pattern.vertex_count();
    let all: u32 = if v == 32 { u32::MAX } else { (1u32 << v) - 1 };
    let non_nbr: Vec<u32> = (0..v).map(|u| all & !pattern.neighbours(u) & !(1u32 << u)).collect();
    let mut out = Vec::new();
    fn rec(r: u32, mut p: u32, mut x: u32, non_nbr: &[u32], out: &mut Vec<u32>) -> Result<()> {
        if p == 0 && x == 0 {
            if out.len() >= MAX_INDEPENDENT_SETS {
                return Err(Error::TooLarge(format!(
                    "more than {MAX_INDEPENDENT_SETS} maximal independent sets"
                )));
            }
            out.push(r);
            return Ok(());
        }
        let px = p | x;
        let pivot = (0..32)
            .filter(|&u| px & (1 << u) != 0)
            .max_by_key(|&u| (p & non_nbr[u as usize]).count_ones())
            .unwrap();
        let mut cand = p & !non_nbr[pivot as usize];
        while cand != 0 {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let bit = 1u32 << u;
            rec(r | bit, p & non_nbr[u], x & non_nbr[u], non_nbr, out)?;
            p &= !bit;
            x |= bit;
        }
        Ok(())
    }
    rec(0, all, 0, &non_nbr, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedSet {
    pub vertices: Vec<usize>,
    #[serde(serialize_with = "crate::ser_display")]
    pub weight: Rational,
}

/// `chi_f` together with a fractional colouring and a fractional clique of
/// the same total weight.
#[derive(Debug, Clone, Serialize)]
pub struct ChiFCertificate {
    #[serde(serialize_with = "crate::ser_display")]
    pub value: Rational,
    /// Independent sets with positive weight; every vertex is covered with
    /// total weight at least 1.
    pub colouring: Vec<WeightedSet>,
    /// Vertex weights; every independent set has total weight at most 1.
    #[serde(serialize_with = "ser_vec")]
    pub clique: Vec<Rational>,
}

fn ser_vec<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn bits_to_vec(bits: u32) -> Vec<usize> {
    (0..32).filter(|&i| bits & (1 << i) != 0).collect()
}

impl ChiFCertificate {
    /// Checks feasibility of both sides and equality of their weights.
    pub fn verify(&self, pattern: &PatternGraph) -> bool {
        let v = pattern.vertex_count();
        let one = Rational::one();
        let independent = |set: &[usize]| {
            set.iter()
                .all(|&a| set.iter().all(|&b| a == b || !pattern.adjacent(a, b)))
        };
        let mut cover = vec![Rational::zero(); v];
        let mut colour_total = Rational::zero();
        for ws in &self.colouring {
            if ws.weight.is_negative() || !independent(&ws.vertices) || ws.vertices.iter().any(|&u| u >= v) {
                return false;
            }
            for &u in &ws.vertices {
                cover[u] += &ws.weight;
            }
            colour_total += &ws.weight;
        }
        if cover.iter().any(|c| *c < one) || self.clique.len() != v {
            return false;
        }
        if self.clique.iter().any(|y| y.is_negative()) {
            return false;
        }
        let Ok(sets) = maximal_independent_sets(pattern) else {
            return false;
        };
        for s in sets {
            let w: Rational = bits_to_vec(s).iter().map(|&u| self.clique[u].clone()).sum();
            if w > one {
                return false;
            }
        }
        let clique_total: Rational = self.clique.iter().sum();
        colour_total == self.value && clique_total == self.value
    }
}

/// Solves the fractional clique LP over maximal independent sets; its
/// optimal dual is a fractional colouring.
pub fn chi_f_certified(pattern: &PatternGraph) -> Result<ChiFCertificate> {
    let v = pattern.vertex_count();
    let sets = maximal_independent_sets(pattern)?;
    let one = Rational::one();
    let a: Vec<Vec<Rational>> = sets
        .iter()
        .map(|&s| {
            (0..v)
                .map(|u| {
                    if s & (1 << u) != 0 {
                        one.clone()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let b = vec![one.clone(); sets.len()];
    let c = vec![one.clone(); v];
    let sol = maximize(&a, &b, &c)?;
    let colouring = sets
        .iter()
        .zip(sol.dual)
        .filter(|(_, w)| w.is_positive())
        .map(|(&s, weight)| WeightedSet {
            vertices: bits_to_vec(s),
            weight,
        })
        .collect();
    let cert = ChiFCertificate {
        value: sol.value,
        colouring,
        clique: sol.primal,
    };
    debug_assert!(cert.verify(pattern));
    Ok(cert)
}

pub fn chi_f(pattern: &PatternGraph) -> Result<Rational> {
    Ok(chi_f_certified(pattern)?.value)
}

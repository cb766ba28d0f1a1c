//! Ordered partitions of `[n]`, the ratios `rho_r`, and exact audits of
//! Kleitman's partition inequalities.
//!
//! An ordered partition of type `(i_1, ..., i_p)` is a tuple of pairwise
//! disjoint sets of those sizes covering `[n]`. Parts are distinguished by
//! position, so there are exactly `n! / prod i_j!` of them.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::binomial::binom;
use crate::error::{precondition, Error, Result};
use crate::freeness::disjoint_tuple;
use crate::good::good_family;
use crate::sets::{full_bits, Family, SetMask};
use crate::Rational;

/// Upper limit on the number of ordered partitions an audit will enumerate.
pub const MAX_ORDERED_PARTITIONS: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartitionType {
    sizes: Vec<usize>,
}

impl PartitionType {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(precondition("partition type needs at least one part, all positive"));
        }
        Ok(PartitionType { sizes })
    }

    /// `s` parts of size `m`.
    pub fn equipartition(s: usize, m: usize) -> Result<Self> {
        Self::new(vec![m; s])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn parts(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// `n! / prod_j i_j!`.
pub fn count_ordered(pi: &PartitionType) -> BigUint {
    // product of binomials C(remaining, i_j)
    let mut remaining = pi.n() as u64;
    let mut total = BigUint::one();
    for &size in pi.sizes() {
        total *= binom(remaining, size as i64);
        remaining -= size as u64;
    }
    total
}

fn check_enumerable(pi: &PartitionType) -> Result<()> {
    let count = count_ordered(pi);
    match count.to_u64() {
        Some(c) if c <= MAX_ORDERED_PARTITIONS => Ok(()),
        _ => Err(Error::TooLarge(format!(
            "{count} ordered partitions of type {:?}",
            pi.sizes()
        ))),
    }
}

/// Submasks of `pool` with exactly `k` bits, in increasing numeric order.
fn submasks_of_size(pool: u32, k: usize) -> impl Iterator<Item = u32> {
    // walk all submasks from 0 upward via the (x - pool) & pool trick
    let mut next = Some(0u32);
    std::iter::from_fn(move || loop {
        let cur = next?;
        next = if cur == pool {
            None
        } else {
            Some((cur.wrapping_sub(pool)) & pool)
        };
        if cur.count_ones() as usize == k {
            return Some(cur);
        }
    })
}

/// Visits every ordered partition of type `sizes` of the elements in `pool`.
fn for_each_ordered(pool: u32, sizes: &[usize], parts: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    match sizes.split_first() {
        None => visit(parts),
        Some((&first, rest)) => {
            if rest.is_empty() {
                if pool.count_ones() as usize == first {
                    parts.push(pool);
                    visit(parts);
                    parts.pop();
                }
                return;
            }
            for part in submasks_of_size(pool, first) {
                parts.push(part);
                for_each_ordered(pool & !part, rest, parts, visit);
                parts.pop();
            }
        }
    }
}

/// Calls `visit` with the parts (as masks) of every ordered partition of
/// type `pi`.
pub fn for_each_ordered_partition(pi: &PartitionType, mut visit: impl FnMut(&[u32])) -> Result<()> {
    check_enumerable(pi)?;
    let mut parts = Vec::with_capacity(pi.parts());
    for_each_ordered(full_bits(pi.n()), pi.sizes(), &mut parts, &mut visit);
    Ok(())
}

/// Counts ordered partitions by how many parts satisfy `in_family`,
/// sharding over the choice of the first part.
fn hit_histogram(pi: &PartitionType, in_family: &(dyn Fn(u32) -> bool + Sync)) -> Result<Vec<u64>> {
    check_enumerable(pi)?;
    let p = pi.parts();
    let full = full_bits(pi.n());
    let (first, rest) = pi.sizes().split_first().expect("non-empty type");
    let firsts: Vec<u32> = if rest.is_empty() {
        vec![full]
    } else {
        submasks_of_size(full, *first).collect()
    };
    let hist = firsts
        .par_iter()
        .map(|&part| {
            let mut local = vec![0u64; p + 1];
            let base = usize::from(in_family(part));
            let mut parts = vec![part];
            for_each_ordered(full & !part, rest, &mut parts, &mut |ps| {
                let hits = ps[1..].iter().filter(|&&x| in_family(x)).count();
                local[base + hits] += 1;
            });
            local
        })
        .reduce(
            || vec![0u64; p + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(hist)
}

/// `rho[r]` is the fraction of ordered partitions with exactly `r` parts in
/// the designated family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RhoVector {
    #[serde(serialize_with = "ser_rationals")]
    pub rho: Vec<Rational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl RhoVector {
    pub fn get(&self, r: usize) -> Rational {
        self.rho.get(r).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.rho.iter().fold(Rational::zero(), |acc, r| acc + r)
    }
}

pub fn rho_vector(family: &Family, pi: &PartitionType) -> Result<RhoVector> {
    if family.n() != pi.n() {
        return Err(Error::WidthMismatch {
            expected: pi.n(),
            found: family.n(),
        });
    }
    let present = family.mask_set();
    let hist = hit_histogram(pi, &|x| present.contains(x))?;
    let total = BigInt::from(count_ordered(pi));
    let rho = hist
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), total.clone()))
        .collect();
    Ok(RhoVector { rho })
}

/// Every ordered partition of type `pi` has at least `p - s + 1` parts that
/// are good with respect to `family` and `t`.
pub fn audit_good_partition_count(family: &Family, s: usize, t: usize, pi: &PartitionType) -> Result<bool> {
    let p = pi.parts();
    if p < s {
        return Err(precondition(format!("need at least s = {s} parts, type has {p}")));
    }
    let good = good_family(family, t)?;
    let g = good.mask_set();
    let hist = hit_histogram(pi, &|x| g.contains(x))?;
    Ok(hist[..p + 1 - s].iter().all(|&c| c == 0))
}

/// All unordered partitions of `[n]` into nonempty blocks, by restricted
/// growth strings. Bell(n) of them.
pub fn set_partitions(n: usize) -> Vec<Vec<SetMask>> {
    fn rec(i: usize, n: usize, blocks: &mut Vec<u32>, out: &mut Vec<Vec<SetMask>>) {
        if i == n {
            out.push(blocks.iter().map(|&b| SetMask::from_raw(b, n)).collect());
            return;
        }
        for k in 0..blocks.len() {
            blocks[k] |= 1 << i;
            rec(i + 1, n, blocks, out);
            blocks[k] &= !(1 << i);
        }
        blocks.push(1 << i);
        rec(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    if n >= 1 {
        rec(0, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    /// `i`, `ii` or `iii`.
    pub item: &'static str,
    pub j: usize,
    #[serde(serialize_with = "crate::ser_display")]
    pub lhs: Rational,
    #[serde(serialize_with = "crate::ser_display")]
    pub rhs: Rational,
    pub holds: bool,
    /// For `ii`: `sum_{r>j} (r/j) rho_r + sum_{r<=j} rho_r`, reported only.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt")]
    pub middle: Option<Rational>,
}

fn ser_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleitmanReport {
    pub s: usize,
    pub m: usize,
    pub upward_closed: bool,
    pub ks_free: bool,
    pub rho: RhoVector,
    /// `s |B^m| / C(sm, m)` and `sum_j j rho_j` agree exactly.
    #[serde(serialize_with = "crate::ser_display")]
    pub identity_lhs: Rational,
    #[serde(serialize_with = "crate::ser_display")]
    pub identity_middle: Rational,
    #[serde(serialize_with = "crate::ser_display")]
    pub identity_rhs: Rational,
    pub checks: Vec<InequalityCheck>,
}

impl KleitmanReport {
    pub fn preconditions_hold(&self) -> bool {
        self.upward_closed && self.ks_free
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn layer_density(layer: usize, n: usize, k: i64) -> Rational {
    Rational::new(BigInt::from(layer), BigInt::from(binom(n as u64, k)))
}

/// Audits the partition inequalities for `A` on `[sm]` with
/// `B = 2^[sm] \ A` and the ratios `rho` over ordered equipartitions into
/// `s` parts of size `m`:
///
/// * (i) `s |B^m| / C(sm,m) = sum_j j rho_j = 1 + sum_j (j-1) rho_j`;
/// * (ii) for `1 <= j <= m-1`:
///   `|B^(m-j)|/C(sm,m-j) + (s-1)|B^(m+1)|/C(sm,m+1) >= 1 - sum_{r>j} (1 - r/s) rho_r`;
/// * (iii) for `0 <= j <= m-s`:
///   `|B^(m-s+1-j)|/C(sm,m-s+1-j) + (s-1)|B^(m+1)|/C(sm,m+1) >= 1`.
///
/// Preconditions (upward closed, no `s` pairwise-disjoint members) are
/// verified and reported alongside.
pub fn audit_kleitman(a: &Family, s: usize, m: usize) -> Result<KleitmanReport> {
    if s < 2 || m < 1 {
        return Err(precondition("need s >= 2 and m >= 1"));
    }
    let n = s * m;
    if a.n() != n {
        return Err(Error::WidthMismatch {
            expected: n,
            found: a.n(),
        });
    }
    let upward_closed = a.is_upward_closed();
    let ks_free = disjoint_tuple(a, s, n).is_none();
    let b = a.complement()?;
    let rho = rho_vector(&b, &PartitionType::equipartition(s, m)?)?;

    let sr = Rational::from_integer(BigInt::from(s));
    let one = Rational::one();
    let identity_lhs = &sr * layer_density(b.layer_len(m), n, m as i64);
    let mut identity_middle = Rational::zero();
    let mut identity_rhs = one.clone();
    for j in 1..=s {
        let jr = Rational::from_integer(BigInt::from(j));
        identity_middle += &jr * rho.get(j);
        identity_rhs += (jr - &one) * rho.get(j);
    }
    let mut checks = vec![InequalityCheck {
        item: "i",
        j: 0,
        holds: identity_lhs == identity_middle && identity_middle == identity_rhs,
        lhs: identity_lhs.clone(),
        rhs: identity_rhs.clone(),
        middle: Some(identity_middle.clone()),
    }];

    let upper = Rational::from_integer(BigInt::from(s - 1)) * layer_density(b.layer_len(m + 1), n, m as i64 + 1);
    for j in 1..m {
        let lhs = layer_density(b.layer_len(m - j), n, (m - j) as i64) + &upper;
        let mut rhs = one.clone();
        let mut middle = Rational::zero();
        let jr = Rational::from_integer(BigInt::from(j));
        for r in 1..=s {
            let rr = Rational::from_integer(BigInt::from(r));
            if r > j {
                rhs -= (&one - &rr / &sr) * rho.get(r);
                middle += &rr / &jr * rho.get(r);
            } else {
                middle += rho.get(r);
            }
        }
        checks.push(InequalityCheck {
            item: "ii",
            j,
            holds: lhs >= rhs,
            lhs,
            rhs,
            middle: Some(middle),
        });
    }
    if m >= s {
        for j in 0..=m - s {
            let k = m - s + 1 - j;
            let lhs = layer_density(b.layer_len(k), n, k as i64) + &upper;
            checks.push(InequalityCheck {
                item: "iii",
                j,
                holds: lhs >= one,
                lhs,
                rhs: one.clone(),
                middle: None,
            });
        }
    }
    Ok(KleitmanReport {
        s,
        m,
        upward_closed,
        ks_free,
        rho,
        identity_lhs,
        identity_middle,
        identity_rhs,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{family_sm1, kleitman_b, lemma22_family};
    use crate::monotone::random_free_upward_closed;
    use crate::pattern::PatternGraph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn ty(s: &[usize]) -> PartitionType {
        PartitionType::new(s.to_vec()).unwrap()
    }

    #[test]
    fn ordered_counts() {
        assert_eq!(count_ordered(&ty(&[2, 2, 2])), 90u32.into());
        assert_eq!(count_ordered(&ty(&[1, 1])), 2u32.into());
        assert_eq!(count_ordered(&ty(&[3, 3])), 20u32.into());
        assert!(PartitionType::new(vec![]).is_err());
        assert!(PartitionType::new(vec![2, 0]).is_err());
    }

    #[test]
    fn enumeration_matches_count() {
        for sizes in [&[2, 2, 2][..], &[1, 2, 3], &[3, 1, 1, 2], &[4], &[2, 2, 1]] {
            let pi = ty(sizes);
            let mut seen = std::collections::HashSet::new();
            for_each_ordered_partition(&pi, |parts| {
                assert_eq!(parts.iter().fold(0, |a, &p| a | p), full_bits(pi.n()));
                for (p, &k) in parts.iter().zip(sizes) {
                    assert_eq!(p.count_ones() as usize, k);
                }
                assert!(seen.insert(parts.to_vec()));
            })
            .unwrap();
            assert_eq!(BigUint::from(seen.len()), count_ordered(&pi));
        }
    }

    #[test]
    fn set_partition_counts() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn rho_examples() {
        let pi = ty(&[2, 2, 2]);
        let small = Family::layers(6, 0, 2).unwrap();
        let rho = rho_vector(&small, &pi).unwrap();
        assert_eq!(rho.rho, vec![r(0, 1), r(0, 1), r(0, 1), r(1, 1)]);

        let pointed = Family::from_masks(
            6,
            Family::layers(6, 0, 2)
                .unwrap()
                .iter()
                .copied()
                .filter(|m| m.len() <= 1 || m.contains(6)),
        )
        .unwrap();
        let rho = rho_vector(&pointed, &pi).unwrap();
        assert_eq!(rho.rho, vec![r(0, 1), r(1, 1), r(0, 1), r(0, 1)]);

        let rho = rho_vector(&Family::full_cube(6).unwrap(), &pi).unwrap();
        assert_eq!(rho.get(3), r(1, 1));
        assert_eq!(rho.total(), r(1, 1));
        assert!(rho_vector(&Family::full_cube(5).unwrap(), &pi).is_err());
    }

    #[test]
    fn kleitman_audit_examples() {
        let report = audit_kleitman(&kleitman_b(3, 2).unwrap(), 3, 2).unwrap();
        assert!(report.preconditions_hold());
        assert_eq!(report.identity_lhs, r(1, 1));
        assert_eq!(report.rho.get(1), r(1, 1));
        assert!(report.all_hold());

        let report = audit_kleitman(&Family::layers(6, 3, 6).unwrap(), 3, 2).unwrap();
        assert_eq!(report.identity_lhs, r(3, 1));
        assert_eq!(report.identity_middle, r(3, 1));
        assert_eq!(report.rho.get(3), r(1, 1));
        assert!(report.all_hold());

        let report = audit_kleitman(&Family::empty(6).unwrap(), 3, 2).unwrap();
        assert_eq!(report.identity_lhs, r(3, 1));
        let ii = &report.checks[1];
        assert_eq!((ii.item, ii.j), ("ii", 1));
        assert_eq!(ii.lhs, r(3, 1));
        assert_eq!(ii.rhs, r(1, 1));
        assert_eq!(report.checks.iter().filter(|c| c.item == "iii").count(), 0);
        assert!(report.all_hold());
    }

    #[test]
    fn kleitman_audit_third_inequality_range() {
        // m >= s gives the (iii) rows; sets of size >= m+1 are K_3-free
        let a = Family::layers(9, 4, 9).unwrap();
        let report = audit_kleitman(&a, 3, 3).unwrap();
        assert_eq!(report.checks.iter().filter(|c| c.item == "iii").count(), 1);
        assert!(report.all_hold());
    }

    #[test]
    fn audit_reports_broken_preconditions() {
        let report = audit_kleitman(&Family::full_cube(6).unwrap(), 3, 2).unwrap();
        assert!(!report.ks_free);
        let bad = Family::from_sets(6, [vec![1]]).unwrap();
        let report = audit_kleitman(&bad, 3, 2).unwrap();
        assert!(!report.upward_closed);
    }

    #[test]
    fn good_parts_examples() {
        let pi = ty(&[2, 2, 2]);
        assert!(audit_good_partition_count(&lemma22_family(3, 2).unwrap(), 3, 2, &pi).unwrap());
        assert!(audit_good_partition_count(&Family::empty(6).unwrap(), 3, 2, &pi).unwrap());
        assert!(audit_good_partition_count(&family_sm1(3, 2).unwrap(), 3, 2, &ty(&[2, 2, 1])).unwrap());
        // the full cube is not free: three parts, none good
        assert!(!audit_good_partition_count(&Family::full_cube(6).unwrap(), 3, 2, &pi).unwrap());
        assert!(audit_good_partition_count(&Family::empty(6).unwrap(), 3, 2, &ty(&[3, 3])).is_err());
    }

    #[test]
    fn rho_is_a_distribution_and_kleitman_identity_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k3 = PatternGraph::complete(3).unwrap();
        for _ in 0..40 {
            let a = random_free_upward_closed(6, &k3, &mut rng).unwrap();
            let report = audit_kleitman(&a, 3, 2).unwrap();
            assert!(report.preconditions_hold());
            assert_eq!(report.rho.total(), r(1, 1));
            assert_eq!(report.rho.get(0), r(0, 1));
            assert!(report.all_hold(), "{a:?}");
        }
    }

    #[test]
    fn good_part_counts_follow_from_ks_freeness() {
        // if the non-good sets have no s pairwise-disjoint members, no
        // partition can have s non-good parts
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for t in 2..=3 {
            let p = PatternGraph::complete_multipartite(3, t).unwrap();
            for _ in 0..20 {
                let f = random_free_upward_closed(6, &p, &mut rng).unwrap();
                let e = good_family(&f, t).unwrap().complement().unwrap();
                let e_free = disjoint_tuple(&e, 3, 6).is_none();
                for sizes in [&[2, 2, 2][..], &[1, 2, 3], &[1, 1, 2, 2]] {
                    let ok = audit_good_partition_count(&f, 3, t, &ty(sizes)).unwrap();
                    assert!(!e_free || ok);
                    assert!(ok);
                }
            }
        }
    }
}

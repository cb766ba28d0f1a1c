//! Good sets of a forbidden-configuration family and their exact audits.
//!
//! A set `X` is good with respect to `F` and `t` when at most `t - 2` members
//! of its shadow lie in `F`. For an upward-closed `K_{s x t}`-free `F` the
//! good sets form a downward-closed family whose complement is `K_s`-free,
//! and each layer of good sets is bounded by the layer below it in the
//! complement of `F`.

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{precondition, Result};
use crate::freeness::{disjoint_tuple, find_copy};
use crate::pattern::PatternGraph;
use crate::sets::{check_cube_n, full_bits, shadow_bits, Family, SetMask};

/// `{X in 2^[n] : |shadow(X) ∩ F| <= t - 2}`.
pub fn good_family(family: &Family, t: usize) -> Result<Family> {
    if t < 2 {
        return Err(precondition(format!("good sets need t >= 2, got t = {t}")));
    }
    let n = family.n();
    check_cube_n(n)?;
    let present = family.mask_set();
    let limit = t - 2;
    let good = (0..=full_bits(n)).filter(|&x| {
        let mut hits = 0;
        for y in shadow_bits(x) {
            if present.contains(y) {
                hits += 1;
                if hits > limit {
                    return false;
                }
            }
        }
        true
    });
    Ok(Family::from_raw_bits(n, good))
}

/// One instance of `|G^i| (i - t + 2) <= |H^(i-1)| (n - i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerCheck {
    pub i: usize,
    #[serde(serialize_with = "crate::ser_display")]
    pub lhs: BigUint,
    #[serde(serialize_with = "crate::ser_display")]
    pub rhs: BigUint,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoodReport {
    pub s: usize,
    pub t: usize,
    /// Caller preconditions, re-verified.
    pub family_upward_closed: bool,
    pub family_is_free: bool,
    pub good_family: Family,
    pub downward_closed: bool,
    #[serde(rename = "E_is_Ks_free")]
    pub e_is_ks_free: bool,
    /// `s` pairwise-disjoint non-good sets, when the second check fails.
    pub e_clique: Option<Vec<SetMask>>,
    pub counting_holds_per_layer: Vec<LayerCheck>,
}

impl GoodReport {
    /// The three structural checks all hold.
    pub fn checks_pass(&self) -> bool {
        self.downward_closed && self.e_is_ks_free && self.counting_holds_per_layer.iter().all(|c| c.holds)
    }
}

/// Builds the good family of `F` for `K_{s x t}` and checks, exactly:
/// the good family is downward closed; its complement has no `s` pairwise
/// disjoint members; and the layer counting inequality against
/// `H = 2^[n] \ F` for every `i >= 1` with `i - t + 2 > 0`.
///
/// Failed checks are reported, not raised.
pub fn audit_good(family: &Family, s: usize, t: usize) -> Result<GoodReport> {
    if s < 2 {
        return Err(precondition(format!("audit needs s >= 2, got s = {s}")));
    }
    let n = family.n();
    let good = good_family(family, t)?;
    let pattern = PatternGraph::complete_multipartite(s, t)?;
    let family_is_free = find_copy(family, &pattern).is_none();
    let family_upward_closed = family.is_upward_closed();

    let downward_closed = good.is_downward_closed();
    let bad = good.complement()?;
    let e_clique = disjoint_tuple(&bad, s, n);
    let e_is_ks_free = e_clique.is_none();

    let lower = family.complement()?;
    let mut layers = Vec::new();
    for i in 1..=n {
        if i + 2 <= t {
            continue;
        }
        let lhs = BigUint::from(good.layer_len(i)) * (i + 2 - t);
        let rhs = BigUint::from(lower.layer_len(i - 1)) * (n - i + 1);
        let holds = lhs <= rhs;
        layers.push(LayerCheck { i, lhs, rhs, holds });
    }
    Ok(GoodReport {
        s,
        t,
        family_upward_closed,
        family_is_free,
        good_family: good,
        downward_closed,
        e_is_ks_free,
        e_clique,
        counting_holds_per_layer: layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{family_sm1, family_sm_t3, lemma22_family};
    use crate::monotone::{for_each_upward_closed, random_free_upward_closed};
    use crate::partitions::set_partitions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn good_family_examples() {
        let f = Family::layers(3, 2, 3).unwrap();
        assert_eq!(good_family(&f, 2).unwrap(), Family::layers(3, 0, 2).unwrap());
        assert_eq!(good_family(&f, 3).unwrap(), Family::layers(3, 0, 2).unwrap());
        let e = Family::empty(4).unwrap();
        assert_eq!(good_family(&e, 2).unwrap(), Family::full_cube(4).unwrap());
        assert_eq!(good_family(&e, 5).unwrap(), Family::full_cube(4).unwrap());
        assert!(good_family(&f, 1).is_err());
    }

    #[test]
    fn audit_examples() {
        let f = Family::layers(6, 2, 6).unwrap();
        let r = audit_good(&f, 3, 2).unwrap();
        assert!(r.family_is_free && r.family_upward_closed);
        assert_eq!(r.good_family, Family::layers(6, 0, 2).unwrap());
        assert!(r.checks_pass());
        // i = 1: 6*1 <= 1*6, i = 2: 15*2 <= 6*5, both tight
        assert_eq!(r.counting_holds_per_layer[0].lhs, 6u32.into());
        assert_eq!(r.counting_holds_per_layer[0].rhs, 6u32.into());
        assert_eq!(r.counting_holds_per_layer[1].lhs, 30u32.into());
        assert_eq!(r.counting_holds_per_layer[1].rhs, 30u32.into());

        let r = audit_good(&Family::empty(6).unwrap(), 3, 2).unwrap();
        assert!(r.checks_pass());

        let r = audit_good(&lemma22_family(3, 2).unwrap(), 3, 2).unwrap();
        assert!(r.family_is_free && r.checks_pass());
    }

    #[test]
    fn failed_checks_are_reported() {
        // the full cube contains every pattern; its non-good sets do too
        let f = Family::full_cube(6).unwrap();
        let r = audit_good(&f, 3, 2).unwrap();
        assert!(!r.family_is_free);
        assert!(!r.e_is_ks_free);
        assert!(r.e_clique.is_some());
    }

    #[test]
    fn good_sets_contain_complement_of_upward_closed() {
        for n in 1..=5 {
            for t in 2..=4 {
                for_each_upward_closed(n, |f| {
                    let g = good_family(f, t).unwrap();
                    assert!(f.complement().unwrap().is_subfamily_of(&g));
                });
            }
        }
    }

    #[test]
    fn partitions_have_enough_good_parts() {
        let constructed = [
            (family_sm1(3, 2).unwrap(), 3, 2),
            (family_sm1(3, 2).unwrap(), 3, 3),
            (family_sm1(3, 3).unwrap(), 3, 2),
            (lemma22_family(3, 2).unwrap(), 3, 2),
            (family_sm_t3(3, 2, None).unwrap(), 3, 3),
        ];
        for (f, s, t) in &constructed {
            let g = good_family(f, *t).unwrap();
            let n = f.n();
            for partition in set_partitions(n) {
                let p = partition.len();
                if p < *s {
                    continue;
                }
                let good_parts = partition.iter().filter(|x| g.contains(**x)).count();
                assert!(good_parts + s > p, "n={n} partition {partition:?}");
            }
        }
    }

    #[test]
    fn random_free_families_pass_audit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // n = sm - 1 or sm with m >= 2
        for k in 0..60 {
            let s = 2 + k % 2;
            let n = 2 * s - 1 + (k / 2) % 2;
            let t = 2 + (k / 4) % 2;
            let p = PatternGraph::complete_multipartite(s, t).unwrap();
            let f = random_free_upward_closed(n, &p, &mut rng).unwrap();
            let r = audit_good(&f, s, t).unwrap();
            assert!(r.family_is_free && r.checks_pass(), "{f:?}");
        }
    }

    #[test]
    fn full_cube_on_s_points_breaks_the_bad_set_claim() {
        // 2^[3] is K_{3x2}-free, yet its singletons are pairwise disjoint bad sets
        let f = Family::full_cube(3).unwrap();
        let r = audit_good(&f, 3, 2).unwrap();
        assert!(r.family_is_free);
        assert!(r.downward_closed);
        assert!(!r.e_is_ks_free);
    }
}

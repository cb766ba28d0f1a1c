//! Enumeration and random sampling of upward-closed families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::freeness::Matcher;
use crate::pattern::PatternGraph;
use crate::sets::{check_cube_n, full_bits, Family, MaskSet};
use crate::Result;

/// All masks of `2^[n]` in decreasing canonical order (largest sets first).
pub(crate) fn descending_masks(n: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..=full_bits(n)).collect();
    all.sort_unstable_by_key(|&b| std::cmp::Reverse((b.count_ones(), b)));
    all
}

/// Calls `visit` once for every upward-closed family on `[n]`, including the
/// empty family and `2^[n]`. There are 3, 6, 20, 168, 7581 of them for
/// `n = 1..=5`.
pub fn for_each_upward_closed<F: FnMut(&Family)>(n: usize, mut visit: F) {
    assert!(
        (1..=6).contains(&n),
        "exhaustive monotone enumeration is limited to n <= 6"
    );
    let order = descending_masks(n);
    let mut member = vec![false; 1 << n];
    let mut chosen = Vec::with_capacity(order.len());
    enumerate(n, &order, 0, &mut member, &mut chosen, &mut visit);
}

fn enumerate<F: FnMut(&Family)>(
    n: usize,
    order: &[u32],
    idx: usize,
    member: &mut [bool],
    chosen: &mut Vec<u32>,
    visit: &mut F,
) {
    if idx == order.len() {
        visit(&Family::from_raw_bits(n, chosen.iter().copied()));
        return;
    }
    let x = order[idx];
    let can_join = (0..n).all(|i| x & (1 << i) != 0 || member[(x | (1 << i)) as usize]);
    if can_join {
        member[x as usize] = true;
        chosen.push(x);
        enumerate(n, order, idx + 1, member, chosen, visit);
        chosen.pop();
        member[x as usize] = false;
    }
    enumerate(n, order, idx + 1, member, chosen, visit);
}

pub fn count_upward_closed(n: usize) -> u64 {
    let mut count = 0u64;
    for_each_upward_closed(n, |_| count += 1);
    count
}

/// Samples an upward-closed `pattern`-free family on `[n]`.
///
/// Sets are visited in random order; each is offered with a per-family
/// acceptance rate, and an offered set is added together with its upward
/// closure only if the result stays free. Every intermediate family is free,
/// so each new member is checked only for copies passing through it.
pub fn random_free_upward_closed<R: Rng + ?Sized>(n: usize, pattern: &PatternGraph, rng: &mut R) -> Result<Family> {
    check_cube_n(n)?;
    let matcher = Matcher::new(pattern, n);
    let rate: f64 = rng.gen_range(0.05..=1.0);
    let mut order: Vec<u32> = (0..=full_bits(n)).collect();
    order.shuffle(rng);

    let mut present = MaskSet::new(n);
    let mut members: Vec<u32> = Vec::new();
    for x in order {
        if present.contains(x) || !rng.gen_bool(rate) {
            continue;
        }
        // supersets of x not yet present, largest first
        let free_bits = !x & full_bits(n);
        let mut added: Vec<u32> = Vec::new();
        let mut sub = free_bits;
        loop {
            let y = x | sub;
            if !present.contains(y) {
                added.push(y);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free_bits;
        }
        added.sort_unstable_by_key(|&b| std::cmp::Reverse((b.count_ones(), b)));

        let mut trial = members.clone();
        let mut ok = true;
        for &y in &added {
            let pos = trial.partition_point(|&b| (b.count_ones(), b) < (y.count_ones(), y));
            trial.insert(pos, y);
            if matcher.find_through(&trial, y).is_some() {
                ok = false;
                break;
            }
        }
        if ok {
            for &y in &added {
                present.insert(y);
            }
            members = trial;
        }
    }
    Ok(Family::from_raw_bits(n, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeness::find_copy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dedekind_counts() {
        // upward-closed families on [n] are counted by Dedekind numbers
        let expected = [3u64, 6, 20, 168, 7581];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(count_upward_closed(i + 1), e);
        }
    }

    #[test]
    fn enumerated_families_are_upward_closed_and_distinct() {
        let mut seen = std::collections::HashSet::new();
        for_each_upward_closed(4, |f| {
            assert!(f.is_upward_closed());
            assert!(seen.insert(f.clone()));
        });
        assert_eq!(seen.len(), 168);
    }

    #[test]
    fn random_families_are_free_and_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for s in 2..=3 {
            for t in 1..=3 {
                let p = PatternGraph::complete_multipartite(s, t).unwrap();
                for n in 2..=6 {
                    let f = random_free_upward_closed(n, &p, &mut rng).unwrap();
                    assert!(f.is_upward_closed());
                    assert!(find_copy(&f, &p).is_none());
                }
            }
        }
    }
}

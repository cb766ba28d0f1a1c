//! Kneser-cube adjacency and detection of forbidden configurations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{PatternGraph, PatternSpec};
use crate::sets::{Family, SetMask};

/// Two subsets are adjacent in the Kneser cube iff they are distinct and
/// disjoint. The empty set is adjacent to every other set but not to itself.
pub fn kneser_adjacent(a: SetMask, b: SetMask) -> Result<bool> {
    a.same_width(b)?;
    Ok(a != b && a.is_disjoint(b))
}

/// `K_{s x t}`; see [`PatternGraph::complete_multipartite`].
pub fn complete_multipartite(s: usize, t: usize) -> Result<PatternGraph> {
    PatternGraph::complete_multipartite(s, t)
}

/// A copy of a pattern inside a family: `images[v]` is the set assigned to
/// pattern vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub images: Vec<SetMask>,
}

/// Serialized witness. Elements are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub n: usize,
    pub pattern: PatternSpec,
    pub images: Vec<Vec<usize>>,
}

impl Witness {
    /// Images are pairwise distinct members of `family`, one per pattern
    /// vertex, and every pattern edge maps to a disjoint pair.
    pub fn validate(&self, family: &Family, pattern: &PatternGraph) -> bool {
        if self.images.len() != pattern.vertex_count() {
            return false;
        }
        for (i, a) in self.images.iter().enumerate() {
            if !family.contains(*a) || self.images[..i].contains(a) {
                return false;
            }
        }
        pattern
            .edges()
            .iter()
            .all(|&(u, v)| self.images[u].is_disjoint(self.images[v]))
    }

    pub fn to_json(&self, n: usize, pattern: &PatternGraph) -> WitnessJson {
        WitnessJson {
            n,
            pattern: pattern.spec(),
            images: self.images.iter().map(|m| m.elements()).collect(),
        }
    }

    pub fn from_json(json: &WitnessJson) -> Result<(Witness, PatternGraph)> {
        let pattern = PatternGraph::from_spec(&json.pattern)?;
        let images = json
            .images
            .iter()
            .map(|e| SetMask::from_elements(json.n, e.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        if images.len() != pattern.vertex_count() {
            return Err(Error::Pattern(format!(
                "witness has {} images for {} pattern vertices",
                images.len(),
                pattern.vertex_count()
            )));
        }
        Ok((Witness { images }, pattern))
    }
}

/// Backtracking subgraph matcher over a candidate list of masks.
///
/// Pattern vertices are visited in a fixed order (degree descending, ties by
/// index). At each step a candidate must be unused and disjoint from the
/// images of all earlier-placed neighbours, which is the same as being
/// disjoint from their union.
pub(crate) struct Matcher {
    n: usize,
    /// Search orders, one per anchor vertex tried; order[0] is the anchor.
    orders: Vec<Vec<usize>>,
    /// For each order and position, the earlier positions holding neighbours.
    back_nbrs: Vec<Vec<Vec<usize>>>,
    /// Symmetry breaking per order and position: the candidate must come
    /// after the member placed at the given earlier position.
    after: Vec<Vec<Option<usize>>>,
    parts: Option<(usize, usize)>,
    vertex_count: usize,
}

impl Matcher {
    pub(crate) fn new(pattern: &PatternGraph, n: usize) -> Self {
        // complete multipartite patterns are vertex-transitive: one anchor
        Self::build(pattern, n, pattern.parts().is_none())
    }

    /// Anchored searches only place the anchor on the first vertex of the
    /// canonical order. Sound when the host graph is vertex-transitive.
    pub(crate) fn single_anchor(pattern: &PatternGraph, n: usize) -> Self {
        Self::build(pattern, n, false)
    }

    fn build(pattern: &PatternGraph, n: usize, every_anchor: bool) -> Self {
        let vc = pattern.vertex_count();
        let mut base: Vec<usize> = (0..vc).collect();
        base.sort_by_key(|&v| (std::cmp::Reverse(pattern.degree(v)), v));
        let anchors: Vec<usize> = if every_anchor { base.clone() } else { vec![base[0]] };
        let mut orders = Vec::new();
        let mut back_nbrs = Vec::new();
        let mut after = Vec::new();
        for &a in &anchors {
            let mut order = vec![a];
            order.extend(base.iter().copied().filter(|&v| v != a));
            let back = (0..vc)
                .map(|k| (0..k).filter(|&j| pattern.adjacent(order[j], order[k])).collect())
                .collect();
            // For K_{s x t}, order is part by part: images increase inside a
            // part and first images increase across parts. Position 0 may be
            // an anchor with no index, so rules pointing at it are dropped
            // when anchored; the anchor's part then plays part 0.
            let rules = match pattern.parts() {
                Some((_, t)) if order.iter().enumerate().all(|(k, &v)| k == v) => (0..vc)
                    .map(|k| match (k / t, k % t) {
                        (_, i) if i > 0 => Some(k - 1),
                        (p, _) if p > 0 => Some(k - t),
                        _ => None,
                    })
                    .collect(),
                _ => vec![None; vc],
            };
            orders.push(order);
            back_nbrs.push(back);
            after.push(rules);
        }
        Matcher {
            n,
            orders,
            back_nbrs,
            after,
            parts: pattern.parts(),
            vertex_count: vc,
        }
    }

    /// Unanchored search in the canonical order. `members` must be sorted in
    /// canonical (cardinality, value) order.
    pub(crate) fn find(&self, members: &[u32]) -> Option<Vec<u32>> {
        let mut placed = Vec::with_capacity(self.vertex_count);
        let mut idx = Vec::with_capacity(self.vertex_count);
        let need = self.part_width(members);
        if self.extend_order(0, 0, members, &mut placed, &mut idx, (false, need)) {
            Some(self.unpermute(0, &placed))
        } else {
            None
        }
    }

    /// Searches for a copy that uses `anchor` as one of its images. `members`
    /// must contain `anchor` and be sorted canonically.
    pub(crate) fn find_through(&self, members: &[u32], anchor: u32) -> Option<Vec<u32>> {
        let mut placed = Vec::with_capacity(self.vertex_count);
        let mut idx = Vec::with_capacity(self.vertex_count);
        let need = self.part_width(members);
        for oi in 0..self.orders.len() {
            placed.clear();
            placed.push(anchor);
            idx.clear();
            idx.push(usize::MAX);
            if self.extend_order(oi, 1, members, &mut placed, &mut idx, (true, need)) {
                return Some(self.unpermute(oi, &placed));
            }
        }
        None
    }

    /// Lower bound on the union of one part of a `K_{s x t}` copy: the
    /// largest of `t` distinct members is at least the `t`-th smallest
    /// cardinality, and `t` distinct subsets need `log2 t` elements.
    fn part_width(&self, members: &[u32]) -> usize {
        match self.parts {
            Some((_, t)) if members.len() >= t => {
                let by_card = members[t - 1].count_ones() as usize;
                let by_count = (usize::BITS - (t - 1).leading_zeros()) as usize;
                by_card.max(by_count)
            }
            _ => 0,
        }
    }

    fn unpermute(&self, oi: usize, placed: &[u32]) -> Vec<u32> {
        let mut images = vec![0u32; self.vertex_count];
        for (k, &v) in self.orders[oi].iter().enumerate() {
            images[v] = placed[k];
        }
        images
    }

    fn extend_order(
        &self,
        oi: usize,
        k: usize,
        members: &[u32],
        placed: &mut Vec<u32>,
        idx: &mut Vec<usize>,
        (anchored, need): (bool, usize),
    ) -> bool {
        if k == self.vertex_count {
            return true;
        }
        if let Some((s, t)) = self.parts {
            // every part not yet started needs `need` fresh elements
            let used = placed.iter().fold(0u32, |a, &b| a | b).count_ones() as usize;
            if (s - k.div_ceil(t)) * need + used > self.n {
                return false;
            }
        }
        let forbidden = self.back_nbrs[oi][k].iter().fold(0u32, |acc, &j| acc | placed[j]);
        let room = self.n - forbidden.count_ones() as usize;
        let start = match self.after[oi][k] {
            Some(0) if anchored => 0,
            Some(j) => idx[j] + 1,
            None => 0,
        };
        for (ci, &c) in members.iter().enumerate().skip(start) {
            if c.count_ones() as usize > room {
                break;
            }
            if c & forbidden != 0 || placed.contains(&c) {
                continue;
            }
            placed.push(c);
            idx.push(ci);
            if self.extend_order(oi, k + 1, members, placed, idx, (anchored, need)) {
                return true;
            }
            placed.pop();
            idx.pop();
        }
        false
    }
}

pub(crate) fn member_bits(family: &Family) -> Vec<u32> {
    family.iter().map(|m| m.bits()).collect()
}

/// Finds a copy of `pattern` in the Kneser cube induced on `family`.
///
/// The witness is the first one met when pattern vertices are placed in
/// degree-descending order and members are tried in canonical order, so it
/// is deterministic.
pub fn find_copy(family: &Family, pattern: &PatternGraph) -> Option<Witness> {
    if pattern.vertex_count() > family.len() {
        return None;
    }
    let matcher = Matcher::new(pattern, family.n());
    let bits = member_bits(family);
    matcher.find(&bits).map(|images| Witness {
        images: images.into_iter().map(|b| SetMask::from_raw(b, family.n())).collect(),
    })
}

/// `s` distinct pairwise-disjoint members whose sizes sum to at most
/// `budget`, or `None`.
///
/// With `budget = n` this detects `K_s`. For an upward-closed family, a
/// tuple with `budget = n - s` exists exactly when the family contains
/// `K_{s x 2}`.
pub fn disjoint_tuple(family: &Family, s: usize, budget: usize) -> Option<Vec<SetMask>> {
    let bits = member_bits(family);
    let mut chosen = Vec::with_capacity(s);
    if disjoint_tuple_bits(&bits, s, budget, 0, 0, 0, &mut chosen) {
        Some(chosen.into_iter().map(|b| SetMask::from_raw(b, family.n())).collect())
    } else {
        None
    }
}

/// `members` sorted canonically, so cardinalities are non-decreasing.
pub(crate) fn disjoint_tuple_bits(
    members: &[u32],
    s: usize,
    budget: usize,
    start: usize,
    used: u32,
    total: usize,
    chosen: &mut Vec<u32>,
) -> bool {
    let left = s - chosen.len();
    if left == 0 {
        return true;
    }
    for idx in start..members.len() {
        let c = members[idx];
        let size = c.count_ones() as usize;
        // every later pick is at least this large
        if total + left * size > budget {
            break;
        }
        if c & used != 0 {
            continue;
        }
        chosen.push(c);
        if disjoint_tuple_bits(members, s, budget, idx + 1, used | c, total + size, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotone::for_each_upward_closed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(n: usize, e: &[usize]) -> SetMask {
        SetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    /// Brute force: try every injective assignment of members to vertices.
    fn brute_force_contains(family: &Family, pattern: &PatternGraph) -> bool {
        fn rec(f: &[SetMask], p: &PatternGraph, img: &mut Vec<SetMask>) -> bool {
            let k = img.len();
            if k == p.vertex_count() {
                return true;
            }
            for &c in f {
                if img.contains(&c) {
                    continue;
                }
                if (0..k).any(|j| p.adjacent(j, k) && !c.is_disjoint(img[j])) {
                    continue;
                }
                img.push(c);
                if rec(f, p, img) {
                    return true;
                }
                img.pop();
            }
            false
        }
        rec(family.members(), pattern, &mut Vec::new())
    }

    #[test]
    fn adjacency_examples() {
        assert!(kneser_adjacent(set(3, &[1]), set(3, &[2])).unwrap());
        assert!(!kneser_adjacent(set(3, &[1, 2]), set(3, &[2, 3])).unwrap());
        assert!(kneser_adjacent(set(3, &[]), set(3, &[1])).unwrap());
        assert!(!kneser_adjacent(set(3, &[]), set(3, &[])).unwrap());
        assert!(kneser_adjacent(set(3, &[]), set(4, &[1])).is_err());
    }

    #[test]
    fn find_copy_examples() {
        let k3 = complete_multipartite(3, 1).unwrap();
        let f = fam(3, &[&[1], &[2], &[3]]);
        let w = find_copy(&f, &k3).unwrap();
        assert_eq!(w.images, vec![set(3, &[1]), set(3, &[2]), set(3, &[3])]);
        assert!(w.validate(&f, &k3));

        let big = Family::layers(6, 2, 6).unwrap();
        assert!(find_copy(&big, &complete_multipartite(3, 2).unwrap()).is_none());

        let f = Family::full_cube(2).unwrap();
        let f = Family::from_masks(2, f.iter().copied().filter(|m| !m.is_empty())).unwrap();
        let k2 = complete_multipartite(2, 1).unwrap();
        let w = find_copy(&f, &k2).unwrap();
        assert_eq!(w.images, vec![set(2, &[1]), set(2, &[2])]);
    }

    #[test]
    fn disjoint_tuple_examples() {
        let big = Family::layers(6, 2, 6).unwrap();
        assert!(disjoint_tuple(&big, 3, 3).is_none());
        let t = disjoint_tuple(&big, 3, 6).unwrap();
        assert_eq!(t, vec![set(6, &[1, 2]), set(6, &[3, 4]), set(6, &[5, 6])]);
        let cube = Family::full_cube(4).unwrap();
        assert!(disjoint_tuple(&cube, 3, 1).is_none());
        assert!(disjoint_tuple(&cube, 3, 2).is_some());
    }

    #[test]
    fn witness_json_round_trip() {
        let k32 = complete_multipartite(3, 2).unwrap();
        let f = Family::full_cube(6).unwrap();
        let w = find_copy(&f, &k32).unwrap();
        assert!(w.validate(&f, &k32));
        let json = serde_json::to_string(&w.to_json(6, &k32)).unwrap();
        let back: WitnessJson = serde_json::from_str(&json).unwrap();
        let (w2, p2) = Witness::from_json(&back).unwrap();
        assert_eq!((w2, p2), (w, k32));
    }

    #[test]
    fn find_copy_matches_brute_force_on_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let patterns = [
            complete_multipartite(2, 1).unwrap(),
            complete_multipartite(3, 1).unwrap(),
            complete_multipartite(2, 2).unwrap(),
            PatternGraph::cycle(5).unwrap(),
            PatternGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
        ];
        for _ in 0..300 {
            let n = rng.gen_range(2..=5);
            let k = rng.gen_range(0..=12);
            let f = Family::from_bits(n, (0..k).map(|_| rng.gen_range(0..1u32 << n))).unwrap();
            for p in &patterns {
                let got = find_copy(&f, p);
                assert_eq!(got.is_some(), brute_force_contains(&f, p), "{f:?} {p}");
                if let Some(w) = got {
                    assert!(w.validate(&f, p));
                }
            }
        }
    }

    #[test]
    fn clique_search_agrees_with_disjoint_tuple() {
        // every monotone family on n <= 5
        for n in 1..=5 {
            for s in 2..=4 {
                let ks = complete_multipartite(s, 1).unwrap();
                for_each_upward_closed(n, |f| {
                    assert_eq!(find_copy(f, &ks).is_some(), disjoint_tuple(f, s, n).is_some());
                });
            }
        }
        // random families on n <= 8
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(3..=8);
            let k = rng.gen_range(0..40);
            let f = Family::from_bits(n, (0..k).map(|_| rng.gen_range(0..1u32 << n))).unwrap();
            for s in 2..=4 {
                let ks = complete_multipartite(s, 1).unwrap();
                assert_eq!(find_copy(&f, &ks).is_some(), disjoint_tuple(&f, s, n).is_some());
            }
        }
    }

    #[test]
    fn disjoint_tuple_criterion_for_two_per_part() {
        for n in 1..=5 {
            for s in 2..=3 {
                let p = complete_multipartite(s, 2).unwrap();
                for_each_upward_closed(n, |f| {
                    let by_search = find_copy(f, &p).is_some();
                    let by_tuple = n >= s && disjoint_tuple(f, s, n - s).is_some();
                    assert_eq!(by_search, by_tuple, "n={n} s={s} {f:?}");
                });
            }
        }
    }

    #[test]
    fn anchored_search_finds_copies_through_anchor() {
        let k3 = complete_multipartite(3, 1).unwrap();
        let f = fam(4, &[&[1], &[2], &[3], &[1, 2]]);
        let m = Matcher::new(&k3, 4);
        let bits = member_bits(&f);
        assert!(m.find_through(&bits, set(4, &[1]).bits()).is_some());
        assert!(m.find_through(&bits, set(4, &[1, 2]).bits()).is_none());
    }
}

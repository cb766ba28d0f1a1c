//! Subsets of `[n]` as bitmasks and explicit families of them.
//!
//! Elements are 1-based at every text and JSON boundary; element `i` lives in
//! bit `i - 1` internally.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_N: usize = 30;
/// Largest ground set for which operations may enumerate all of `2^[n]`.
pub const MAX_CUBE_N: usize = 22;

pub(crate) fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::GroundSetTooLarge(n));
    }
    Ok(())
}

pub(crate) fn check_cube_n(n: usize) -> Result<()> {
    check_n(n)?;
    if n > MAX_CUBE_N {
        return Err(Error::CubeTooLarge(n));
    }
    Ok(())
}

#[inline]
pub(crate) fn full_bits(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A subset of the ground set `[n]`.
///
/// Ordering is by cardinality first and then by the numeric value of the
/// mask. That is the canonical member order of every [`Family`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SetMask {
    bits: u32,
    n: u8,
}

impl SetMask {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_n(n)?;
        if bits & !full_bits(n) != 0 {
            let element = 32 - bits.leading_zeros() as usize;
            return Err(Error::ElementOutOfRange { element, n });
        }
        Ok(SetMask { bits, n: n as u8 })
    }

    /// Caller guarantees `1 <= n <= MAX_N` and that `bits` fits in `n`.
    #[inline]
    pub(crate) fn from_raw(bits: u32, n: usize) -> Self {
        debug_assert!((1..=MAX_N).contains(&n) && bits & !full_bits(n) == 0);
        SetMask { bits, n: n as u8 }
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(0, n)
    }

    pub fn full(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(SetMask::from_raw(full_bits(n), n))
    }

    /// Builds a set from 1-based elements.
    pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Result<Self> {
        check_n(n)?;
        let mut bits = 0u32;
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::ElementOutOfRange { element: e, n });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetMask::from_raw(bits, n))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// Membership of the 1-based element `e`.
    pub fn contains(self, e: usize) -> bool {
        e >= 1 && e <= self.n() && self.bits & (1 << (e - 1)) != 0
    }

    /// 1-based elements in increasing order.
    pub fn elements(self) -> Vec<usize> {
        (0..self.n())
            .filter(|i| self.bits & (1 << i) != 0)
            .map(|i| i + 1)
            .collect()
    }

    #[inline]
    pub fn is_disjoint(self, other: SetMask) -> bool {
        self.bits & other.bits == 0
    }

    #[inline]
    pub fn is_subset(self, other: SetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn union(self, other: SetMask) -> Result<SetMask> {
        self.same_width(other)?;
        Ok(SetMask::from_raw(self.bits | other.bits, self.n()))
    }

    pub fn intersection(self, other: SetMask) -> Result<SetMask> {
        self.same_width(other)?;
        Ok(SetMask::from_raw(self.bits & other.bits, self.n()))
    }

    pub(crate) fn same_width(self, other: SetMask) -> Result<()> {
        if self.n != other.n {
            return Err(Error::WidthMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(())
    }

    /// `2^[n]` minus this set, i.e. `[n] \ X`.
    pub fn set_complement(self) -> SetMask {
        SetMask::from_raw(!self.bits & full_bits(self.n()), self.n())
    }

    /// The shadow `{X \ {x} : x in X}`.
    pub fn shadow(self) -> Family {
        let mut members: Vec<SetMask> = shadow_bits(self.bits).map(|b| SetMask::from_raw(b, self.n())).collect();
        members.sort_unstable();
        Family { n: self.n(), members }
    }
}

/// Masks obtained by clearing one set bit of `bits`.
pub(crate) fn shadow_bits(bits: u32) -> impl Iterator<Item = u32> {
    let mut rest = bits;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let low = rest & rest.wrapping_neg();
        rest &= !low;
        Some(bits & !low)
    })
}

impl Ord for SetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.bits.cmp(&other.bits))
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for SetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().into_iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Membership table over `2^[n]`; dense for small `n`.
pub(crate) enum MaskSet {
    Dense(Vec<u64>),
    Sparse(HashSet<u32>),
}

impl MaskSet {
    pub(crate) fn new(n: usize) -> Self {
        if n <= MAX_CUBE_N {
            MaskSet::Dense(vec![0; (1usize << n).div_ceil(64)])
        } else {
            MaskSet::Sparse(HashSet::new())
        }
    }

    #[inline]
    pub(crate) fn contains(&self, bits: u32) -> bool {
        match self {
            MaskSet::Dense(words) => words[(bits >> 6) as usize] & (1 << (bits & 63)) != 0,
            MaskSet::Sparse(set) => set.contains(&bits),
        }
    }

    /// Returns true when `bits` was not present before.
    #[inline]
    pub(crate) fn insert(&mut self, bits: u32) -> bool {
        match self {
            MaskSet::Dense(words) => {
                let word = &mut words[(bits >> 6) as usize];
                let bit = 1 << (bits & 63);
                let fresh = *word & bit == 0;
                *word |= bit;
                fresh
            }
            MaskSet::Sparse(set) => set.insert(bits),
        }
    }
}

/// A deduplicated collection of subsets of `[n]`.
///
/// Members are kept sorted in the canonical [`SetMask`] order, so iteration
/// order and every search built on it are deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    n: usize,
    members: Vec<SetMask>,
}

impl Family {
    pub fn empty(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Family { n, members: Vec::new() })
    }

    pub fn from_masks<I: IntoIterator<Item = SetMask>>(n: usize, masks: I) -> Result<Self> {
        check_n(n)?;
        let mut members = Vec::new();
        for m in masks {
            if m.n() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    found: m.n(),
                });
            }
            members.push(m);
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { n, members })
    }

    pub fn from_bits<I: IntoIterator<Item = u32>>(n: usize, bits: I) -> Result<Self> {
        check_n(n)?;
        let masks = bits
            .into_iter()
            .map(|b| SetMask::new(b, n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, masks)
    }

    /// Builds a family from lists of 1-based elements.
    pub fn from_sets<I, S>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        let masks = sets
            .into_iter()
            .map(|s| SetMask::from_elements(n, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(n, masks)
    }

    /// `2^[n]`.
    pub fn full_cube(n: usize) -> Result<Self> {
        check_cube_n(n)?;
        Self::from_bits(n, 0..=full_bits(n))
    }

    /// All subsets of `[n]` whose size lies in `lo..=hi`.
    pub fn layers(n: usize, lo: usize, hi: usize) -> Result<Self> {
        check_cube_n(n)?;
        let members = (0..=full_bits(n))
            .filter(|b| {
                let c = b.count_ones() as usize;
                c >= lo && c <= hi
            })
            .map(|b| SetMask::from_raw(b, n));
        Self::from_masks(n, members)
    }

    /// Canonical construction from masks the caller has already validated.
    pub(crate) fn from_raw_bits<I: IntoIterator<Item = u32>>(n: usize, bits: I) -> Self {
        let mut members: Vec<SetMask> = bits.into_iter().map(|b| SetMask::from_raw(b, n)).collect();
        members.sort_unstable();
        members.dedup();
        Family { n, members }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn members(&self) -> &[SetMask] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SetMask> {
        self.members.iter()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: SetMask) -> bool {
        x.n() == self.n && self.members.binary_search(&x).is_ok()
    }

    pub fn contains_bits(&self, bits: u32) -> bool {
        bits & !full_bits(self.n) == 0 && self.contains(SetMask::from_raw(bits, self.n))
    }

    /// The subfamily of members with exactly `i` elements.
    pub fn layer(&self, i: usize) -> Family {
        let start = self.members.partition_point(|m| m.len() < i);
        let end = self.members.partition_point(|m| m.len() <= i);
        Family {
            n: self.n,
            members: self.members[start..end].to_vec(),
        }
    }

    pub fn layer_len(&self, i: usize) -> usize {
        let start = self.members.partition_point(|m| m.len() < i);
        let end = self.members.partition_point(|m| m.len() <= i);
        end - start
    }

    pub(crate) fn mask_set(&self) -> MaskSet {
        let mut set = MaskSet::new(self.n);
        for m in &self.members {
            set.insert(m.bits);
        }
        set
    }

    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.n == other.n && self.members.iter().all(|m| other.contains(*m))
    }

    pub fn union(&self, other: &Family) -> Result<Family> {
        if self.n != other.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Family::from_raw_bits(
            self.n,
            self.members.iter().chain(other.members.iter()).map(|m| m.bits),
        ))
    }

    /// Smallest superset-closed family containing `self`.
    pub fn upward_closure(&self) -> Family {
        self.closure(true)
    }

    /// Smallest subset-closed family containing `self`.
    pub fn downward_closure(&self) -> Family {
        self.closure(false)
    }

    fn closure(&self, upward: bool) -> Family {
        let n = self.n;
        let mut seen = MaskSet::new(n);
        let mut stack: Vec<u32> = Vec::new();
        let mut out = Vec::new();
        for m in &self.members {
            if seen.insert(m.bits) {
                stack.push(m.bits);
            }
        }
        while let Some(b) = stack.pop() {
            out.push(b);
            for i in 0..n {
                let bit = 1u32 << i;
                let next = if upward {
                    if b & bit != 0 {
                        continue;
                    }
                    b | bit
                } else {
                    if b & bit == 0 {
                        continue;
                    }
                    b & !bit
                };
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        Family::from_raw_bits(n, out)
    }

    pub fn is_upward_closed(&self) -> bool {
        let set = self.mask_set();
        self.members
            .iter()
            .all(|m| (0..self.n).all(|i| m.bits & (1 << i) != 0 || set.contains(m.bits | (1 << i))))
    }

    pub fn is_downward_closed(&self) -> bool {
        let set = self.mask_set();
        self.members
            .iter()
            .all(|m| shadow_bits(m.bits).all(|b| set.contains(b)))
    }

    /// `2^[n] \ F`. Enumerates the cube, so `n <= MAX_CUBE_N`.
    pub fn complement(&self) -> Result<Family> {
        check_cube_n(self.n)?;
        let set = self.mask_set();
        Ok(Family::from_raw_bits(
            self.n,
            (0..=full_bits(self.n)).filter(|b| !set.contains(*b)),
        ))
    }

    /// Renders the family in the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for m in &self.members {
            if m.is_empty() {
                out.push_str("{}");
            } else {
                let parts: Vec<String> = m.elements().iter().map(|e| e.to_string()).collect();
                out.push_str(&parts.join(","));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the text format: a header line `n=<int>`, then one set per
    /// line as comma-separated 1-based elements, `{}` for the empty set.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Family> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header `n=<int>`".into(),
        })?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: hline,
                message: format!("expected `n=<int>`, found `{header}`"),
            })?;
        check_n(n)?;
        let mut masks = Vec::new();
        for (lineno, line) in lines {
            if line == "{}" {
                masks.push(SetMask::from_raw(0, n));
                continue;
            }
            let mut elems = Vec::new();
            for tok in line.split(',') {
                let e: usize = tok.trim().parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad element `{}`", tok.trim()),
                })?;
                elems.push(e);
            }
            masks.push(SetMask::from_elements(n, elems).map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?);
        }
        Family::from_masks(n, masks)
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a SetMask;
    type IntoIter = std::slice::Iter<'a, SetMask>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, ", self.n)?;
        f.debug_set().entries(self.members.iter()).finish()?;
        f.write_str(")")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::parse_text(s)
    }
}

impl Serialize for SetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FamilyRepr {
            n: self.n,
            members: self.members.iter().map(|m| m.elements()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(deserializer)?;
        Family::from_sets(repr.n, repr.members).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, e: &[usize]) -> SetMask {
        SetMask::from_elements(n, e.iter().copied()).unwrap()
    }

    fn fam(n: usize, sets: &[&[usize]]) -> Family {
        Family::from_sets(n, sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    #[test]
    fn shadow_examples() {
        assert_eq!(set(3, &[1, 2]).shadow(), fam(3, &[&[1], &[2]]));
        assert!(set(3, &[]).shadow().is_empty());
        assert_eq!(set(8, &[2, 5, 7]).shadow(), fam(8, &[&[5, 7], &[2, 7], &[2, 5]]));
    }

    #[test]
    fn closure_examples() {
        let f = fam(2, &[&[1]]);
        assert_eq!(f.upward_closure(), fam(2, &[&[1], &[1, 2]]));
        assert!(Family::empty(4).unwrap().upward_closure().is_empty());
        let g = fam(1, &[&[]]);
        assert_eq!(g.complement().unwrap(), fam(1, &[&[1]]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SetMask::new(0b1000, 3).is_err());
        assert!(SetMask::from_elements(3, [0]).is_err());
        assert!(SetMask::from_elements(3, [4]).is_err());
        assert!(SetMask::empty(31).is_err());
        assert!(Family::full_cube(23).is_err());
        let a = set(3, &[1]);
        let b = set(4, &[2]);
        assert!(a.union(b).is_err());
    }

    #[test]
    fn layers_and_order() {
        let f = Family::full_cube(4).unwrap();
        assert_eq!(f.len(), 16);
        for i in 0..=4 {
            let l = f.layer(i);
            assert!(l.iter().all(|m| m.len() == i));
            assert_eq!(l.len(), f.layer_len(i));
        }
        assert_eq!(f.layer(2).len(), 6);
        assert!(f.members().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_format() {
        let f = fam(4, &[&[], &[1, 3], &[4]]);
        let text = f.to_text();
        assert_eq!(text, "n=4\n{}\n4\n1,3\n");
        assert_eq!(Family::parse_text(&text).unwrap(), f);
        assert!(Family::parse_text("n=3\n1,4\n").is_err());
        assert!(Family::parse_text("3\n1\n").is_err());
        assert!(Family::parse_text("").is_err());
        // duplicates collapse
        assert_eq!(Family::parse_text("n=3\n1,2\n2,1\n").unwrap().len(), 1);
    }

    fn arb_family() -> impl Strategy<Value = Family> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(0u32..(1 << n), 0..20).prop_map(move |bits| Family::from_bits(n, bits).unwrap())
        })
    }

    proptest! {
        #[test]
        fn text_round_trip(f in arb_family()) {
            prop_assert_eq!(Family::parse_text(&f.to_text()).unwrap(), f);
        }

        #[test]
        fn shadow_members_are_subsets(bits in 0u32..(1 << 10)) {
            let x = SetMask::new(bits, 10).unwrap();
            let sh = x.shadow();
            prop_assert_eq!(sh.len(), x.len());
            for y in &sh {
                prop_assert!(y.is_subset(x));
                prop_assert_eq!(y.len() + 1, x.len());
            }
        }

        #[test]
        fn closures_are_closure_operators(f in arb_family(), extra in proptest::collection::vec(0u32..64, 0..5)) {
            let n = f.n();
            let up = f.upward_closure();
            let down = f.downward_closure();
            prop_assert!(f.is_subfamily_of(&up));
            prop_assert!(f.is_subfamily_of(&down));
            prop_assert_eq!(up.upward_closure(), up.clone());
            prop_assert_eq!(down.downward_closure(), down.clone());
            prop_assert!(up.is_upward_closed());
            prop_assert!(down.is_downward_closed());
            // monotone
            let bigger = f.union(&Family::from_bits(n, extra.into_iter().map(|b| b & full_bits(n))).unwrap()).unwrap();
            prop_assert!(up.is_subfamily_of(&bigger.upward_closure()));
            prop_assert!(down.is_subfamily_of(&bigger.downward_closure()));
            // complements
            let c = f.complement().unwrap();
            prop_assert_eq!(c.complement().unwrap(), f.clone());
            prop_assert!(up.complement().unwrap().is_downward_closed());
        }
    }
}

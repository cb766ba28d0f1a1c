//! Homomorphisms from a pattern into Kneser graphs `Kn(a, b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::PatternGraph;
use crate::sets::{check_n, SetMask};

/// A map sending each pattern vertex to a `b`-subset of `[a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    pub a: usize,
    pub b: usize,
    pub images: Vec<SetMask>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HomomorphismJson {
    pub a: usize,
    pub b: usize,
    pub images: Vec<Vec<usize>>,
}

impl Homomorphism {
    /// Images are 1-based element lists; each must have exactly `b` elements.
    pub fn new(a: usize, b: usize, images: &[Vec<usize>]) -> Result<Self> {
        check_n(a)?;
        let images = images
            .iter()
            .map(|img| SetMask::from_elements(a, img.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        if let Some(bad) = images.iter().find(|m| m.len() != b) {
            return Err(Error::InvalidHomomorphism(format!(
                "image {bad} does not have {b} elements"
            )));
        }
        Ok(Homomorphism { a, b, images })
    }

    pub fn to_json(&self) -> HomomorphismJson {
        HomomorphismJson {
            a: self.a,
            b: self.b,
            images: self.images.iter().map(|m| m.elements()).collect(),
        }
    }

    pub fn from_json(json: &HomomorphismJson) -> Result<Self> {
        Homomorphism::new(json.a, json.b, &json.images)
    }

    /// One image per vertex, all of size `b` in `[a]`, with adjacent
    /// vertices sent to disjoint sets.
    pub fn validate(&self, pattern: &PatternGraph) -> Result<()> {
        if self.images.len() != pattern.vertex_count() {
            return Err(Error::InvalidHomomorphism(format!(
                "{} images for {} vertices",
                self.images.len(),
                pattern.vertex_count()
            )));
        }
        for (v, img) in self.images.iter().enumerate() {
            if img.n() != self.a || img.len() != self.b {
                return Err(Error::InvalidHomomorphism(format!(
                    "image of vertex {v} is not a {}-subset of [{}]",
                    self.b, self.a
                )));
            }
        }
        for &(u, v) in pattern.edges() {
            if !self.images[u].is_disjoint(self.images[v]) {
                return Err(Error::InvalidHomomorphism(format!(
                    "edge {u}-{v} maps to intersecting sets {} and {}",
                    self.images[u], self.images[v]
                )));
            }
        }
        Ok(())
    }

    /// Injective homomorphism, i.e. a copy of the pattern in `Kn(a, b)`.
    pub fn is_embedding(&self, pattern: &PatternGraph) -> bool {
        if self.validate(pattern).is_err() {
            return false;
        }
        let mut bits: Vec<u32> = self.images.iter().map(|m| m.bits()).collect();
        bits.sort_unstable();
        bits.windows(2).all(|w| w[0] != w[1])
    }
}

/// Replaces every element `i` by the block `{(i-1)k+1, ..., ik}`, giving a
/// homomorphism into `Kn(ak, bk)`.
pub fn blow_up(h: &Homomorphism, pattern: &PatternGraph, k: usize) -> Result<Homomorphism> {
    h.validate(pattern)?;
    if k == 0 {
        return Err(Error::Precondition("blow-up factor must be at least 1".into()));
    }
    let a = h.a * k;
    check_n(a)?;
    let block = (1u32 << k) - 1;
    let images = h
        .images
        .iter()
        .map(|m| {
            let bits = m
                .elements()
                .into_iter()
                .fold(0u32, |acc, i| acc | (block << ((i - 1) * k)));
            SetMask::new(bits, a)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Homomorphism { a, b: h.b * k, images })
}

/// Removes one element from each image so that the images become pairwise
/// distinct, giving an embedding into `Kn(a, b-1)`. Shrinking keeps
/// disjoint images disjoint. The choice is a bipartite matching between
/// vertices and their shadow sets.
pub fn shrink_injective(h: &Homomorphism, pattern: &PatternGraph) -> Result<Homomorphism> {
    h.validate(pattern)?;
    if h.b == 0 {
        return Err(Error::ShrinkInfeasible);
    }
    let options: Vec<Vec<u32>> = h
        .images
        .iter()
        .map(|m| {
            let bits = m.bits();
            let mut rest = bits;
            let mut out = Vec::new();
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                out.push(bits & !low);
                rest &= rest - 1;
            }
            out
        })
        .collect();
    let mut owner: std::collections::HashMap<u32, usize> = std::collections::HashMap::new();
    fn augment(
        v: usize,
        options: &[Vec<u32>],
        owner: &mut std::collections::HashMap<u32, usize>,
        seen: &mut std::collections::HashSet<u32>,
    ) -> bool {
        for &s in &options[v] {
            if !seen.insert(s) {
                continue;
            }
            match owner.get(&s).copied() {
                None => {
                    owner.insert(s, v);
                    return true;
                }
                Some(w) => {
                    if augment(w, options, owner, seen) {
                        owner.insert(s, v);
                        return true;
                    }
                }
            }
        }
        false
    }
    for v in 0..options.len() {
        let mut seen = std::collections::HashSet::new();
        if !augment(v, &options, &mut owner, &mut seen) {
            return Err(Error::ShrinkInfeasible);
        }
    }
    let mut images = vec![SetMask::empty(h.a)?; options.len()];
    for (s, v) in owner {
        images[v] = SetMask::new(s, h.a)?;
    }
    let out = Homomorphism {
        a: h.a,
        b: h.b - 1,
        images,
    };
    debug_assert!(out.is_embedding(pattern));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5_into_kn52() -> (PatternGraph, Homomorphism) {
        let p = PatternGraph::cycle(5).unwrap();
        let h = Homomorphism::new(5, 2, &[vec![1, 2], vec![3, 4], vec![5, 1], vec![2, 3], vec![4, 5]]).unwrap();
        (p, h)
    }

    #[test]
    fn base_map_is_embedding() {
        let (p, h) = c5_into_kn52();
        assert!(h.is_embedding(&p));
    }

    #[test]
    fn blow_up_then_shrink() {
        let (p, h) = c5_into_kn52();
        for k in 1..=3 {
            let big = blow_up(&h, &p, k).unwrap();
            assert_eq!((big.a, big.b), (5 * k, 2 * k));
            assert!(big.validate(&p).is_ok());
            let small = shrink_injective(&big, &p).unwrap();
            assert_eq!((small.a, small.b), (5 * k, 2 * k - 1));
            assert!(small.is_embedding(&p));
            for (s, b) in small.images.iter().zip(&big.images) {
                assert!(s.is_subset(*b));
            }
        }
        assert_eq!(blow_up(&h, &p, 2).unwrap().images[2].elements(), vec![1, 2, 9, 10]);
    }

    #[test]
    fn invalid_maps_rejected() {
        let p = PatternGraph::cycle(5).unwrap();
        let bad = Homomorphism::new(5, 2, &[vec![1, 2], vec![2, 3], vec![4, 5], vec![1, 3], vec![2, 4]]).unwrap();
        assert!(bad.validate(&p).is_err());
        assert!(Homomorphism::new(5, 2, &[vec![1, 2, 3]]).is_err());
        let (p, h) = c5_into_kn52();
        assert!(blow_up(&h, &p, 7).is_err());
    }

    #[test]
    fn shrink_infeasible_when_too_many_vertices_share_an_image() {
        // edgeless pattern on 3 vertices, all sent to {1}; shadows are all {}
        let p = PatternGraph::from_edges(3, &[]).unwrap();
        let h = Homomorphism::new(2, 1, &[vec![1], vec![1], vec![1]]).unwrap();
        assert_eq!(shrink_injective(&h, &p), Err(Error::ShrinkInfeasible));
    }
}

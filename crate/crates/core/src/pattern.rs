//! Small abstract graphs used as forbidden configurations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on pattern size; adjacency is stored as one `u32` row per vertex.
pub const MAX_PATTERN_VERTICES: usize = 32;

/// A simple graph on vertices `0..vertex_count`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<u32>,
    parts: Option<(usize, usize)>,
}

/// JSON form of a pattern: either the multipartite shorthand or an explicit
/// edge list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternSpec {
    Multipartite {
        s: usize,
        t: usize,
    },
    Edges {
        vertex_count: usize,
        edges: Vec<[usize; 2]>,
    },
}

impl PatternGraph {
    /// Builds a simple graph, rejecting loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Pattern("pattern needs at least one vertex".into()));
        }
        if vertex_count > MAX_PATTERN_VERTICES {
            return Err(Error::Pattern(format!(
                "{vertex_count} vertices exceeds the limit of {MAX_PATTERN_VERTICES}"
            )));
        }
        let mut adjacency = vec![0u32; vertex_count];
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::Pattern(format!("edge {u}-{v} has an endpoint out of range")));
            }
            if u == v {
                return Err(Error::Pattern(format!("loop at vertex {u}")));
            }
            if adjacency[u] & (1 << v) != 0 {
                return Err(Error::Pattern(format!("duplicate edge {u}-{v}")));
            }
            adjacency[u] |= 1 << v;
            adjacency[v] |= 1 << u;
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        Ok(PatternGraph {
            vertex_count,
            edges: norm,
            adjacency,
            parts: None,
        })
    }

    /// `K_{s x t}`: `s` parts of `t` vertices, every cross-part pair joined.
    /// Vertex `v` lies in part `v / t`.
    pub fn complete_multipartite(s: usize, t: usize) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::Pattern("K_{s x t} needs s, t >= 1".into()));
        }
        let vc = s * t;
        let mut edges = Vec::new();
        for u in 0..vc {
            for v in u + 1..vc {
                if u / t != v / t {
                    edges.push((u, v));
                }
            }
        }
        let mut g = Self::from_edges(vc, &edges)?;
        g.parts = Some((s, t));
        Ok(g)
    }

    pub fn complete(s: usize) -> Result<Self> {
        Self::complete_multipartite(s, 1)
    }

    pub fn cycle(len: usize) -> Result<Self> {
        if len < 3 {
            return Err(Error::Pattern("a cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Self::from_edges(len, &edges)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(s, t)` when built as a complete multipartite graph.
    pub fn parts(&self) -> Option<(usize, usize)> {
        self.parts
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] & (1 << v) != 0
    }

    /// Neighbourhood of `v` as a bitmask over pattern vertices.
    #[inline]
    pub fn neighbours(&self, v: usize) -> u32 {
        self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count_ones() as usize
    }

    pub fn spec(&self) -> PatternSpec {
        match self.parts {
            Some((s, t)) => PatternSpec::Multipartite { s, t },
            None => PatternSpec::Edges {
                vertex_count: self.vertex_count,
                edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            },
        }
    }

    pub fn from_spec(spec: &PatternSpec) -> Result<Self> {
        match spec {
            PatternSpec::Multipartite { s, t } => Self::complete_multipartite(*s, *t),
            PatternSpec::Edges { vertex_count, edges } => {
                let e: Vec<_> = edges.iter().map(|[u, v]| (*u, *v)).collect();
                Self::from_edges(*vertex_count, &e)
            }
        }
    }
}

/// Parses the pattern mini-language: `kst:S,T`, `k:S` (clique),
/// `cycle:L`, or `edges:0-1,1-2,...` (vertex count is one more than the
/// largest endpoint).
impl FromStr for PatternGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Pattern(format!("`{s}`: {msg}"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad("expected an integer"));
        match kind {
            "kst" => {
                let (a, b) = rest.split_once(',').ok_or_else(|| bad("expected `kst:S,T`"))?;
                Self::complete_multipartite(num(a)?, num(b)?)
            }
            "k" => Self::complete(num(rest)?),
            "cycle" => Self::cycle(num(rest)?),
            "edges" => {
                let mut edges = Vec::new();
                for tok in rest.split(',').filter(|t| !t.trim().is_empty()) {
                    let (a, b) = tok.split_once('-').ok_or_else(|| bad("edge must be `u-v`"))?;
                    edges.push((num(a)?, num(b)?));
                }
                if edges.is_empty() {
                    return Err(bad("empty edge list"));
                }
                let vc = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0) + 1;
                Self::from_edges(vc, &edges)
            }
            _ => Err(bad("unknown pattern kind")),
        }
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parts {
            Some((s, t)) => write!(f, "kst:{s},{t}"),
            None => {
                f.write_str("edges:")?;
                for (i, (u, v)) in self.edges.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{u}-{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PatternGraph({self})")
    }
}

//! Immutable simple undirected graphs with the canonical orderings used by
//! both coloring algorithms.
//!
//! Vertices are `0..l` and ordered by index. Edges are stored with `u < v`
//! and sorted lexicographically, so an [`EdgeId`] (an index into the edge
//! list) orders edges the same way their endpoint pairs do.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// Index into [`Graph::edges`]; ordering matches the lexicographic order on
/// the sorted endpoint pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<(Vertex, Vertex)>,
    /// Per vertex: `(neighbor, edge)` sorted by neighbor.
    adj: Vec<Vec<(Vertex, EdgeId)>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph on exactly `vertex_count` vertices. Vertex ids are
    /// taken as given.
    pub fn new(vertex_count: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(pairs.len());
        let mut edges = Vec::with_capacity(pairs.len());
        for &(a, b) in pairs {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            edges.push(e);
        }
        edges.sort_unstable();

        let mut adj = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, EdgeId(i)));
            adj[v].push((u, EdgeId(i)));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            edges,
            adj,
            max_degree,
        })
    }

    /// Builds a graph from an edge list alone. Distinct vertex ids are
    /// renumbered densely to `0..l`, keeping their relative order.
    pub fn from_edges(pairs: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut ids: Vec<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        let rank: BTreeMap<Vertex, Vertex> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let renamed: Vec<_> = pairs.iter().map(|&(a, b)| (rank[&a], rank[&b])).collect();
        Graph::new(ids.len(), &renamed)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e.0]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    /// `(neighbor, edge)` pairs sorted by neighbor.
    #[inline]
    pub fn incident(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn edge_between(&self, a: Vertex, b: Vertex) -> Option<EdgeId> {
        let list = self.adj.get(a)?;
        list.binary_search_by_key(&b, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    #[inline]
    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.edge_between(a, b).is_some()
    }

    /// Vertices at distance exactly two from `u`, with `|N(u) ∩ N(v)|`,
    /// sorted by vertex.
    pub fn second_neighborhood(&self, u: Vertex) -> Vec<(Vertex, usize)> {
        let mut counts: BTreeMap<Vertex, usize> = BTreeMap::new();
        for x in self.neighbors(u) {
            for v in self.neighbors(x) {
                if v != u && !self.adjacent(u, v) {
                    *counts.entry(v).or_default() += 1;
                }
            }
        }
        counts.into_iter().collect()
    }

    /// Sorted common neighbors of `a` and `b`.
    pub fn common_neighbors(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        let (mut i, mut j) = (0, 0);
        let (la, lb) = (&self.adj[a], &self.adj[b]);
        let mut out = Vec::new();
        while i < la.len() && j < lb.len() {
            match la[i].0.cmp(&lb[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(la[i].0);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

//! Cycles, 5-paths and the search primitives over them.
//!
//! A cycle is stored in canonical form: it starts at its minimum vertex and
//! continues towards the smaller of that vertex's two cycle neighbors. That
//! orientation is the positive traversal. Cycles are ordered by length, then
//! by canonical vertex sequence.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, Vertex};
use crate::stream::Color;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleRef {
    vertices: Vec<Vertex>,
}

impl CycleRef {
    /// Validates `seq` as a cycle of `g` (any rotation or reflection) and
    /// canonicalizes it.
    pub fn new(g: &Graph, seq: &[Vertex]) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidStructure {
            kind: "cycle",
            reason: reason.to_string(),
        };
        if seq.len() < 3 {
            return Err(bad("fewer than three vertices"));
        }
        let mut sorted = seq.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated vertex"));
        }
        if let Some(&v) = sorted.last() {
            if v >= g.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: g.vertex_count(),
                });
            }
        }
        for i in 0..seq.len() {
            if !g.adjacent(seq[i], seq[(i + 1) % seq.len()]) {
                return Err(bad("consecutive vertices are not adjacent"));
            }
        }
        Ok(CycleRef {
            vertices: canonicalize(seq),
        })
    }

    /// Trusted constructor for sequences already known to be cycles of the
    /// graph at hand.
    pub(crate) fn from_valid(seq: &[Vertex]) -> Self {
        CycleRef {
            vertices: canonicalize(seq),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Edges in positive traversal order, starting with the edge from the
    /// first to the second canonical vertex.
    pub fn edges(&self, g: &Graph) -> Vec<EdgeId> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                g.edge_between(self.vertices[i], self.vertices[(i + 1) % n])
                    .expect("cycle vertices are adjacent")
            })
            .collect()
    }

    /// `C(e)`: the edges of the cycle in positive traversal starting at `e`.
    pub fn edges_from(&self, g: &Graph, e: EdgeId) -> Result<Vec<EdgeId>> {
        let mut edges = self.edges(g);
        let start = edges
            .iter()
            .position(|&x| x == e)
            .ok_or(Error::AnchorNotOnCycle)?;
        edges.rotate_left(start);
        Ok(edges)
    }

    /// `sc(C(e))`: all but the last two edges of `C(e)`.
    pub fn edge_scope(&self, g: &Graph, e: EdgeId) -> Result<Vec<EdgeId>> {
        let mut edges = self.edges_from(g, e)?;
        edges.truncate(edges.len() - 2);
        Ok(edges)
    }

    /// `C(u)`: the vertices in positive traversal starting at `u`.
    pub fn vertices_from(&self, u: Vertex) -> Result<Vec<Vertex>> {
        let start = self
            .vertices
            .iter()
            .position(|&x| x == u)
            .ok_or(Error::AnchorNotOnCycle)?;
        let mut out = self.vertices.clone();
        out.rotate_left(start);
        Ok(out)
    }

    /// `sc(C(u))`: all but the last two vertices of `C(u)`.
    pub fn vertex_scope(&self, u: Vertex) -> Result<Vec<Vertex>> {
        let mut out = self.vertices_from(u)?;
        out.truncate(out.len() - 2);
        Ok(out)
    }
}

impl Ord for CycleRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for CycleRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn canonicalize(seq: &[Vertex]) -> Vec<Vertex> {
    let n = seq.len();
    let (start, _) = seq
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| *v)
        .expect("non-empty cycle");
    let next = seq[(start + 1) % n];
    let prev = seq[(start + n - 1) % n];
    if next <= prev {
        (0..n).map(|i| seq[(start + i) % n]).collect()
    } else {
        (0..n).map(|i| seq[(start + n - i) % n]).collect()
    }
}

/// A simple path with five edges, oriented from its pivot endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathRef {
    vertices: [Vertex; 6],
}

impl PathRef {
    pub fn new(g: &Graph, seq: &[Vertex]) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidStructure {
            kind: "5-path",
            reason: reason.to_string(),
        };
        let vertices: [Vertex; 6] = seq.try_into().map_err(|_| bad("needs six vertices"))?;
        let mut sorted = vertices;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad("repeated vertex"));
        }
        if sorted[5] >= g.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: sorted[5],
                count: g.vertex_count(),
            });
        }
        if vertices.windows(2).any(|w| !g.adjacent(w[0], w[1])) {
            return Err(bad("consecutive vertices are not adjacent"));
        }
        Ok(PathRef { vertices })
    }

    pub fn vertices(&self) -> &[Vertex; 6] {
        &self.vertices
    }

    pub fn pivot(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn is_endpoint(&self, u: Vertex) -> bool {
        self.vertices[0] == u || self.vertices[5] == u
    }

    /// The same path oriented from endpoint `u`.
    pub fn from_endpoint(&self, u: Vertex) -> Result<PathRef> {
        if self.vertices[0] == u {
            Ok(self.clone())
        } else if self.vertices[5] == u {
            let mut v = self.vertices;
            v.reverse();
            Ok(PathRef { vertices: v })
        } else {
            Err(Error::AnchorNotOnCycle)
        }
    }

    /// First four vertices from endpoint `u`.
    pub fn scope(&self, u: Vertex) -> Result<Vec<Vertex>> {
        Ok(self.from_endpoint(u)?.vertices[..4].to_vec())
    }
}

/// All 4-cycles through `u`, canonical, sorted by (opposite vertex, cycle).
pub fn enumerate_4cycles_through(g: &Graph, u: Vertex) -> Vec<CycleRef> {
    let mut out: Vec<(Vertex, CycleRef)> = Vec::new();
    let nbrs: Vec<Vertex> = g.neighbors(u).collect();
    for (i, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[i + 1..] {
            for v in g.common_neighbors(x, y) {
                if v != u {
                    out.push((v, CycleRef::from_valid(&[u, x, v, y])));
                }
            }
        }
    }
    out.sort();
    out.into_iter().map(|(_, c)| c).collect()
}

/// The vertex opposite `u` on a 4-cycle.
pub fn opposite_in_4cycle(c: &CycleRef, u: Vertex) -> Option<Vertex> {
    let vs = c.vertices();
    if vs.len() != 4 {
        return None;
    }
    vs.iter().position(|&x| x == u).map(|i| vs[(i + 2) % 4])
}

/// Lazy depth-first enumeration of the simple 5-paths starting at a vertex,
/// in lexicographic order.
pub struct FivePaths<'g> {
    g: &'g Graph,
    path: Vec<Vertex>,
    cursor: Vec<usize>,
}

impl Iterator for FivePaths<'_> {
    type Item = PathRef;

    fn next(&mut self) -> Option<PathRef> {
        while let Some(&tip) = self.path.last() {
            let depth = self.path.len() - 1;
            let nbrs = self.g.incident(tip);
            let i = self.cursor[depth];
            if i >= nbrs.len() {
                self.path.pop();
                self.cursor.pop();
                continue;
            }
            self.cursor[depth] += 1;
            let w = nbrs[i].0;
            if self.path.contains(&w) {
                continue;
            }
            if self.path.len() == 5 {
                let mut vertices = [0; 6];
                vertices[..5].copy_from_slice(&self.path);
                vertices[5] = w;
                return Some(PathRef { vertices });
            }
            self.path.push(w);
            self.cursor.push(0);
        }
        None
    }
}

pub fn enumerate_5paths_from(g: &Graph, u: Vertex) -> FivePaths<'_> {
    FivePaths {
        g,
        path: vec![u],
        cursor: vec![0],
    }
}

/// The least badly colored cycle of even length at least six through `e`.
///
/// A cycle through `e` is badly colored when each of its two equal-parity
/// edge classes is monochromatic, so with `a = colors[e]` the cycle
/// alternates `a` and some `b` (possibly `b == a`). For each candidate `b`
/// the search follows only that alternation, with lengths tried in
/// increasing order so the first hits found are the shortest ones.
pub fn find_least_bad_edge_cycle(g: &Graph, colors: &[Color], e: EdgeId) -> Option<CycleRef> {
    let (x, y) = g.endpoints(e);
    let a = colors[e.0];

    let mut at_x: Vec<Color> = g
        .incident(x)
        .iter()
        .filter(|&&(_, f)| f != e)
        .map(|&(_, f)| colors[f.0])
        .collect();
    at_x.sort_unstable();
    at_x.dedup();
    let mut candidates: Vec<Color> = g
        .incident(y)
        .iter()
        .filter(|&&(_, f)| f != e)
        .map(|&(_, f)| colors[f.0])
        .filter(|c| at_x.binary_search(c).is_ok())
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.is_empty() {
        return None;
    }

    let searches: Vec<(Color, Vec<usize>)> = candidates
        .into_iter()
        .map(|b| (b, distances_to(g, colors, e, x, a, b)))
        .filter(|(_, dist)| dist[y] != usize::MAX)
        .collect();

    let n = g.vertex_count();
    let mut len = 6;
    while len <= n {
        let mut hits: Vec<CycleRef> = Vec::new();
        for (b, dist) in &searches {
            let mut search = AlternatingSearch {
                g,
                colors,
                skip: e,
                target: x,
                a,
                b: *b,
                dist,
                path_len: len - 1,
                path: vec![x, y],
                on_path: vec![false; n],
                hits: &mut hits,
            };
            search.on_path[x] = true;
            search.on_path[y] = true;
            search.extend(y, 0);
        }
        if let Some(best) = hits.into_iter().min() {
            return Some(best);
        }
        len += 2;
    }
    None
}

/// Hop distances to `target` in the subgraph of edges colored `a` or `b`,
/// excluding `skip`.
fn distances_to(
    g: &Graph,
    colors: &[Color],
    skip: EdgeId,
    target: Vertex,
    a: Color,
    b: Color,
) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    let mut queue = VecDeque::from([target]);
    dist[target] = 0;
    while let Some(v) = queue.pop_front() {
        for &(w, f) in g.incident(v) {
            let c = colors[f.0];
            if f != skip && (c == a || c == b) && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

struct AlternatingSearch<'a> {
    g: &'a Graph,
    colors: &'a [Color],
    skip: EdgeId,
    target: Vertex,
    a: Color,
    b: Color,
    dist: &'a [usize],
    /// Edges on the closing path, excluding the anchor edge.
    path_len: usize,
    path: Vec<Vertex>,
    on_path: Vec<bool>,
    hits: &'a mut Vec<CycleRef>,
}

impl AlternatingSearch<'_> {
    fn extend(&mut self, v: Vertex, used: usize) {
        let remaining = self.path_len - used;
        // Path edges at odd positions take `b`, even positions `a`.
        let want = if (used + 1) % 2 == 1 { self.b } else { self.a };
        for &(w, f) in self.g.incident(v) {
            if f == self.skip || self.colors[f.0] != want {
                continue;
            }
            if w == self.target {
                if remaining == 1 {
                    self.hits.push(CycleRef::from_valid(&self.path));
                }
                continue;
            }
            if remaining == 1 || self.on_path[w] || self.dist[w] > remaining - 1 {
                continue;
            }
            self.on_path[w] = true;
            self.path.push(w);
            self.extend(w, used + 1);
            self.path.pop();
            self.on_path[w] = false;
        }
    }
}

/// Whether every equal-parity class of `seq` (cyclic or not) is
/// monochromatic under `color_of`.
pub fn parity_classes_monochromatic(len: usize, color_of: impl Fn(usize) -> Color) -> bool {
    (2..len).all(|i| color_of(i) == color_of(i - 2))
}

/// Whether the even cycle `c` is badly colored under an edge coloring.
pub fn is_badly_colored_edge_cycle(g: &Graph, colors: &[Color], c: &CycleRef) -> bool {
    let edges = c.edges(g);
    edges.len().is_multiple_of(2) && parity_classes_monochromatic(edges.len(), |i| colors[edges[i].0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_graph(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    fn path_graph(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::new(n, &pairs).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::new(n, &pairs).unwrap()
    }

    /// Colors the edges of a cycle graph in traversal order 0-1, 1-2, ...
    fn color_around(g: &Graph, around: &[Color]) -> Vec<Color> {
        let n = g.vertex_count();
        let mut colors = vec![0; g.edge_count()];
        for i in 0..n {
            colors[g.edge_between(i, (i + 1) % n).unwrap().0] = around[i];
        }
        colors
    }

    #[test]
    fn canonical_form() {
        let g = cycle_graph(6);
        let c = CycleRef::new(&g, &[3, 2, 1, 0, 5, 4]).unwrap();
        assert_eq!(c.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert!(CycleRef::new(&g, &[0, 1, 3, 4, 5]).is_err());
    }

    #[test]
    fn scope_sizes() {
        let g = cycle_graph(6);
        let c = CycleRef::new(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        let e = g.edge_between(2, 3).unwrap();
        let scope = c.edge_scope(&g, e).unwrap();
        assert_eq!(scope.len(), 4);
        assert_eq!(scope[0], e);
        assert_eq!(scope[3], g.edge_between(5, 0).unwrap());

        let g4 = cycle_graph(4);
        let c4 = CycleRef::new(&g4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(c4.vertex_scope(2).unwrap(), vec![2, 3]);
        assert!(matches!(c4.vertex_scope(9), Err(Error::AnchorNotOnCycle)));

        let p6 = path_graph(6);
        let p = PathRef::new(&p6, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(p.scope(5).unwrap(), vec![5, 4, 3, 2]);
        assert_eq!(p.scope(0).unwrap(), vec![0, 1, 2, 3]);
        assert!(p.scope(2).is_err());
    }

    #[test]
    fn bad_cycle_examples() {
        let c6 = cycle_graph(6);
        let mono = vec![1; 6];
        for e in c6.edge_ids() {
            let found = find_least_bad_edge_cycle(&c6, &mono, e).unwrap();
            assert_eq!(found.vertices(), &[0, 1, 2, 3, 4, 5]);
        }
        let three = color_around(&c6, &[1, 2, 3, 1, 2, 3]);
        assert!(c6
            .edge_ids()
            .all(|e| find_least_bad_edge_cycle(&c6, &three, e).is_none()));

        let c4 = cycle_graph(4);
        assert!(c4
            .edge_ids()
            .all(|e| find_least_bad_edge_cycle(&c4, &[1; 4], e).is_none()));

        let c8 = cycle_graph(8);
        let alt = color_around(&c8, &[1, 2, 1, 2, 1, 2, 1, 2]);
        for e in c8.edge_ids() {
            assert_eq!(find_least_bad_edge_cycle(&c8, &alt, e).unwrap().len(), 8);
        }
    }

    #[test]
    fn four_cycles() {
        let c4 = cycle_graph(4);
        assert_eq!(enumerate_4cycles_through(&c4, 2).len(), 1);
        assert!(enumerate_4cycles_through(&path_graph(5), 2).is_empty());
        let k4 = complete(4);
        for u in 0..4 {
            assert_eq!(enumerate_4cycles_through(&k4, u).len(), 3);
        }
    }

    #[test]
    fn five_paths() {
        assert_eq!(enumerate_5paths_from(&path_graph(6), 0).count(), 1);
        assert_eq!(enumerate_5paths_from(&path_graph(6), 2).count(), 0);
        for u in 0..5 {
            assert_eq!(enumerate_5paths_from(&path_graph(5), u).count(), 0);
        }
        let c6 = cycle_graph(6);
        for u in 0..6 {
            let paths: Vec<_> = enumerate_5paths_from(&c6, u).collect();
            assert_eq!(paths.len(), 2);
            assert!(paths.iter().all(|p| p.pivot() == u));
        }
    }
}

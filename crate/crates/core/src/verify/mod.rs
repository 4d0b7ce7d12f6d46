//! Ground-truth predicates on finished colorings.
//!
//! Every failing [`Verdict`] carries a witness that can be rechecked on its
//! own.

mod oracle;

pub use oracle::{brute_force_min_acyclic, greedy_specially_proper, greedy_strongly_proper, Mode};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cycle::enumerate_4cycles_through;
use crate::graph::{EdgeId, Graph, Vertex};
use crate::resample::Coloring;
use crate::special::SpecialPairsIndex;
use crate::stream::Color;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// Two coincident edges with one color.
    EdgePair(EdgeId, EdgeId),
    /// Two adjacent vertices with one color.
    VertexPair(Vertex, Vertex),
    /// `v ∈ S_α(u)` with `c(u) = c(v)`.
    SpecialPair(Vertex, Vertex),
    /// A bichromatic cycle, as a vertex sequence.
    Cycle(Vec<Vertex>),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::EdgePair(..) => "edge_pair",
            Witness::VertexPair(..) => "vertex_pair",
            Witness::SpecialPair(..) => "special_pair",
            Witness::Cycle(_) => "cycle",
        }
    }

    pub fn elements(&self) -> Vec<usize> {
        match self {
            Witness::EdgePair(a, b) => vec![a.0, b.0],
            Witness::VertexPair(a, b) | Witness::SpecialPair(a, b) => vec![*a, *b],
            Witness::Cycle(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            ok: true,
            witness: None,
        }
    }

    pub fn fail(witness: Witness) -> Self {
        Verdict {
            ok: false,
            witness: Some(witness),
        }
    }

    /// `{ok, witness_kind, witness_elements}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "ok": self.ok,
            "witness_kind": self.witness.as_ref().map(Witness::kind),
            "witness_elements": self.witness.as_ref().map(Witness::elements),
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

pub fn is_proper_edge(g: &Graph, c: &Coloring) -> Verdict {
    for v in 0..g.vertex_count() {
        let inc = g.incident(v);
        for (i, &(_, e)) in inc.iter().enumerate() {
            for &(_, f) in &inc[i + 1..] {
                if c.colors[e.0] == c.colors[f.0] {
                    return Verdict::fail(Witness::EdgePair(e.min(f), e.max(f)));
                }
            }
        }
    }
    Verdict::pass()
}

pub fn is_proper_vertex(g: &Graph, c: &Coloring) -> Verdict {
    g.edges()
        .iter()
        .find(|&&(u, v)| c.colors[u] == c.colors[v])
        .map_or_else(Verdict::pass, |&(u, v)| Verdict::fail(Witness::VertexPair(u, v)))
}

fn color_classes(colors: &[Color]) -> BTreeMap<Color, Vec<usize>> {
    let mut classes: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(i);
    }
    classes
}

/// Proper and no two-colored cycle.
///
/// In a proper coloring each vertex meets at most two edges colored `a` or
/// `b`, so the `{a, b}` subgraph is a union of paths and cycles; any cycle
/// found there is bichromatic.
pub fn is_acyclic_edge(g: &Graph, c: &Coloring) -> Verdict {
    let proper = is_proper_edge(g, c);
    if !proper.ok {
        return proper;
    }
    let classes: Vec<Vec<usize>> = color_classes(&c.colors).into_values().collect();
    let mut links: Vec<Vec<Vertex>> = vec![Vec::new(); g.vertex_count()];
    for (i, ca) in classes.iter().enumerate() {
        for cb in &classes[i + 1..] {
            let mut touched = Vec::new();
            for &e in ca.iter().chain(cb) {
                let (u, v) = g.endpoints(EdgeId(e));
                links[u].push(v);
                links[v].push(u);
                touched.extend([u, v]);
            }
            let found = cycle_in_degree_two(&links, &touched);
            for &v in &touched {
                links[v].clear();
            }
            if let Some(cycle) = found {
                return Verdict::fail(Witness::Cycle(cycle));
            }
        }
    }
    Verdict::pass()
}

/// Finds a cycle in a graph of maximum degree two given by `links`.
fn cycle_in_degree_two(links: &[Vec<Vertex>], touched: &[Vertex]) -> Option<Vec<Vertex>> {
    let mut seen = std::collections::HashSet::new();
    for &start in touched {
        if !seen.insert(start) || links[start].len() != 2 {
            continue;
        }
        let mut walk = vec![start];
        let (mut prev, mut cur) = (start, links[start][0]);
        loop {
            if cur == start {
                return Some(walk);
            }
            seen.insert(cur);
            if links[cur].len() != 2 {
                break;
            }
            walk.push(cur);
            let next = if links[cur][0] == prev {
                links[cur][1]
            } else {
                links[cur][0]
            };
            prev = cur;
            cur = next;
        }
    }
    None
}

/// Proper and, for every pair of colors, the subgraph induced by the
/// vertices of those two colors is a forest.
pub fn is_acyclic_vertex(g: &Graph, c: &Coloring) -> Verdict {
    let proper = is_proper_vertex(g, c);
    if !proper.ok {
        return proper;
    }
    let classes: Vec<Vec<usize>> = color_classes(&c.colors).into_values().collect();
    let mut member = vec![false; g.vertex_count()];
    for (i, ca) in classes.iter().enumerate() {
        for cb in &classes[i + 1..] {
            for &v in ca.iter().chain(cb) {
                member[v] = true;
            }
            let found = cycle_in_induced(g, &member, ca.iter().chain(cb).copied());
            for &v in ca.iter().chain(cb) {
                member[v] = false;
            }
            if let Some(cycle) = found {
                return Verdict::fail(Witness::Cycle(cycle));
            }
        }
    }
    Verdict::pass()
}

/// Depth-first search of the subgraph induced by `member`; a non-tree edge
/// closes a cycle with the tree path back to its ancestor.
fn cycle_in_induced(
    g: &Graph,
    member: &[bool],
    vertices: impl Iterator<Item = Vertex>,
) -> Option<Vec<Vertex>> {
    let mut parent: BTreeMap<Vertex, Option<Vertex>> = BTreeMap::new();
    for root in vertices {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        let mut stack: Vec<(Vertex, usize)> = vec![(root, 0)];
        let mut on_stack = std::collections::HashSet::from([root]);
        while let Some(&mut (v, ref mut cursor)) = stack.last_mut() {
            let inc = g.incident(v);
            if *cursor >= inc.len() {
                on_stack.remove(&v);
                stack.pop();
                continue;
            }
            let w = inc[*cursor].0;
            *cursor += 1;
            if !member[w] || parent[&v] == Some(w) {
                continue;
            }
            if on_stack.contains(&w) {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[&x].expect("ancestor chain reaches w");
                    cycle.push(x);
                }
                cycle.reverse();
                return Some(cycle);
            }
            if parent.contains_key(&w) {
                continue;
            }
            parent.insert(w, Some(v));
            on_stack.insert(w);
            stack.push((w, 0));
        }
    }
    None
}

/// Proper and no bichromatic 4-cycle.
pub fn is_strongly_proper(g: &Graph, c: &Coloring) -> Verdict {
    let proper = is_proper_edge(g, c);
    if !proper.ok {
        return proper;
    }
    for u in 0..g.vertex_count() {
        for cycle in enumerate_4cycles_through(g, u) {
            let e: Vec<Color> = cycle.edges(g).iter().map(|e| c.colors[e.0]).collect();
            if e[0] == e[2] && e[1] == e[3] {
                return Verdict::fail(Witness::Cycle(cycle.vertices().to_vec()));
            }
        }
    }
    Verdict::pass()
}

/// Neighbors and special pairs are heterochromatic.
pub fn is_specially_proper(g: &Graph, idx: &SpecialPairsIndex, c: &Coloring) -> Verdict {
    let proper = is_proper_vertex(g, c);
    if !proper.ok {
        return proper;
    }
    for u in 0..g.vertex_count() {
        if let Some(&v) = idx.special(u).iter().find(|&&v| c.colors[u] == c.colors[v]) {
            return Verdict::fail(Witness::SpecialPair(u, v));
        }
    }
    Verdict::pass()
}

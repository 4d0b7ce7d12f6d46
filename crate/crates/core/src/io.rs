//! Text formats for graphs, colorings, witness forests and special-pair
//! indices.
//!
//! Edge list: one `u v` pair per line, `#` starts a comment. A leading
//! `# vertices N` comment fixes the vertex count; without it ids are
//! renumbered densely. DIMACS: `p edge l m` header, `e u v` lines with
//! 1-based ids, `c` comment lines.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::cycle::{CycleRef, PathRef};
use crate::edge::{EdgeForest, EdgeLabel};
use crate::error::{Error, Result};
use crate::forest::WitnessForest;
use crate::graph::{Graph, Vertex};
use crate::resample::Coloring;
use crate::special::SpecialPairsIndex;
use crate::stream::Color;
use crate::vertex::{BadSet, VertexForest, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Dimacs,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" => Ok(GraphFormat::EdgeList),
            "dimacs" => Ok(GraphFormat::Dimacs),
            _ => Err(Error::InvalidParams(format!("unknown graph format {s:?}"))),
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Dimacs => parse_dimacs(text),
    }
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Dimacs => write_dimacs(g),
    }
}

fn numbers<T: FromStr>(line: usize, fields: &[&str]) -> Result<Vec<T>> {
    fields
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| Error::parse(line, format!("expected an integer, got {f:?}")))
        })
        .collect()
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let (body, comment) = raw.split_once('#').unwrap_or((raw, ""));
        if let Some(n) = comment.trim().strip_prefix("vertices") {
            if pairs.is_empty() {
                declared = Some(numbers::<usize>(line, &[n.trim()])?[0]);
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fields.len() {
            0 => continue,
            2 => {
                let v = numbers::<Vertex>(line, &fields)?;
                pairs.push((v[0], v[1]));
            }
            _ => return Err(Error::parse(line, "expected two vertex ids")),
        }
    }
    match declared {
        Some(n) => Graph::new(n, &pairs),
        None => Graph::from_edges(&pairs),
    }
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# vertices {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first().copied() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(Error::parse(line, "second problem line"));
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(Error::parse(line, "expected `p edge l m`"));
                }
                let v = numbers::<usize>(line, &fields[2..])?;
                header = Some((v[0], v[1], line));
            }
            Some("e") => {
                let Some((l, _, _)) = header else {
                    return Err(Error::parse(line, "edge before the problem line"));
                };
                if fields.len() != 3 {
                    return Err(Error::parse(line, "expected `e u v`"));
                }
                let v = numbers::<usize>(line, &fields[1..])?;
                if v.iter().any(|&x| x == 0 || x > l) {
                    return Err(Error::parse(line, format!("vertex ids must be in 1..={l}")));
                }
                pairs.push((v[0] - 1, v[1] - 1));
            }
            Some(other) => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let (l, m, line) = header.ok_or_else(|| Error::parse(0, "missing problem line"))?;
    if m != pairs.len() {
        return Err(Error::parse(
            line,
            format!("header declares {m} edges, found {}", pairs.len()),
        ));
    }
    Graph::new(l, &pairs)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// `index color` lines, indices `0..n` in any order, each exactly once.
pub fn parse_coloring(text: &str, expected_len: usize) -> Result<Coloring> {
    let mut colors: Vec<Option<Color>> = vec![None; expected_len];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::parse(line, "expected `index color`"));
        }
        let idx: usize = numbers(line, &fields[..1])?[0];
        let color: Color = numbers(line, &fields[1..])?[0];
        if color == 0 {
            return Err(Error::parse(line, "colors start at 1"));
        }
        let slot = colors
            .get_mut(idx)
            .ok_or_else(|| Error::parse(line, format!("index {idx} out of range")))?;
        if slot.replace(color).is_some() {
            return Err(Error::parse(line, format!("index {idx} colored twice")));
        }
    }
    let colors: Vec<Color> = colors
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::parse(0, format!("index {i} has no color"))))
        .collect::<Result<_>>()?;
    let palette = colors.iter().copied().max().unwrap_or(0);
    Ok(Coloring::new(colors, palette))
}

pub fn write_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (i, color) in c.colors.iter().enumerate() {
        writeln!(out, "{i} {color}").unwrap();
    }
    out
}

fn forest_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let fields: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

/// `depth u v c1 … c2k`: the label edge `uv` and its cycle.
pub fn parse_edge_forest(g: &Graph, text: &str) -> Result<EdgeForest> {
    let mut items = Vec::new();
    for (line, fields) in forest_lines(text) {
        if fields.len() < 3 {
            return Err(Error::parse(line, "expected `depth u v cycle…`"));
        }
        let v = numbers::<usize>(line, &fields)?;
        let edge = g
            .edge_between(v[1], v[2])
            .ok_or_else(|| Error::parse(line, format!("{}-{} is not an edge", v[1], v[2])))?;
        let cycle = CycleRef::new(g, &v[3..]).map_err(|e| Error::parse(line, e.to_string()))?;
        items.push((v[0], EdgeLabel { edge, cycle }));
    }
    WitnessForest::from_depth_sequence(items).map_err(|m| Error::parse(0, m))
}

pub fn write_edge_forest(g: &Graph, forest: &EdgeForest) -> String {
    let mut out = String::new();
    for node in forest.nodes() {
        let (u, v) = g.endpoints(node.label.edge);
        write!(out, "{} {u} {v}", node.depth).unwrap();
        for x in node.label.cycle.vertices() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `depth u b1 … bk` with `b1 … bk = B(u)`: four vertices for a 4-cycle,
/// six for a 5-path.
pub fn parse_vertex_forest(g: &Graph, text: &str) -> Result<VertexForest> {
    let mut items = Vec::new();
    for (line, fields) in forest_lines(text) {
        let v = numbers::<usize>(line, &fields)?;
        let structure = |e: Error| Error::parse(line, e.to_string());
        let set = match v.len() {
            6 => BadSet::FourCycle(CycleRef::new(g, &v[2..]).map_err(structure)?),
            8 => BadSet::FivePath(PathRef::new(g, &v[2..]).map_err(structure)?),
            _ => return Err(Error::parse(line, "expected `depth u` and 4 or 6 vertices")),
        };
        items.push((v[0], VertexLabel { vertex: v[1], set }));
    }
    WitnessForest::from_depth_sequence(items).map_err(|m| Error::parse(0, m))
}

pub fn write_vertex_forest(forest: &VertexForest) -> String {
    let mut out = String::new();
    for node in forest.nodes() {
        let l = &node.label;
        write!(out, "{} {}", node.depth, l.vertex).unwrap();
        for x in l.set.traversal(l.vertex).unwrap_or_default() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `u: v1 v2 …` listing `S_α(u)` per vertex.
pub fn write_special_index(idx: &SpecialPairsIndex) -> String {
    let mut out = String::new();
    for u in 0..idx.vertex_count() {
        write!(out, "{u}:").unwrap();
        for v in idx.special(u) {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::graph::EdgeId;

    #[test]
    fn edge_list_round_trip() {
        let g = generate::gnp(15, 0.2, 4).unwrap();
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        let h = parse_edge_list("# a comment\n10 20\n20 30 # trailing\n\n").unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
        assert!(parse_edge_list("1 1\n").is_err());
        assert!(matches!(parse_edge_list("1 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn dimacs_round_trip() {
        let g = generate::hypercube(3);
        assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap(), g);
        let h = parse_dimacs("c hello\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
        assert!(parse_dimacs("p edge 3 2\ne 1 2\n").is_err());
        assert!(parse_dimacs("p edge 2 1\ne 0 1\n").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
    }

    #[test]
    fn coloring_round_trip() {
        let c = Coloring::new(vec![3, 1, 2], 3);
        assert_eq!(parse_coloring(&write_coloring(&c), 3).unwrap(), c);
        assert!(parse_coloring("0 1\n", 2).is_err());
        assert!(parse_coloring("0 1\n0 2\n", 1).is_err());
        assert!(parse_coloring("0 0\n", 1).is_err());
    }

    #[test]
    fn forest_round_trips() {
        let g = generate::cycle(6);
        let c = CycleRef::new(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        let mut f = EdgeForest::new();
        let r = f.push(EdgeLabel { edge: EdgeId(0), cycle: c.clone() }, None);
        f.push(EdgeLabel { edge: EdgeId(1), cycle: c }, Some(r));
        let text = write_edge_forest(&g, &f);
        assert_eq!(parse_edge_forest(&g, &text).unwrap(), f);

        let p6 = generate::path(6);
        let k4 = generate::complete(4);
        let mut vf = VertexForest::new();
        let path = PathRef::new(&p6, &[5, 4, 3, 2, 1, 0]).unwrap();
        vf.push(VertexLabel { vertex: 5, set: BadSet::FivePath(path) }, None);
        assert_eq!(parse_vertex_forest(&p6, &write_vertex_forest(&vf)).unwrap(), vf);
        let four = CycleRef::new(&k4, &[0, 1, 2, 3]).unwrap();
        let mut vf = VertexForest::new();
        vf.push(VertexLabel { vertex: 2, set: BadSet::FourCycle(four) }, None);
        assert_eq!(parse_vertex_forest(&k4, &write_vertex_forest(&vf)).unwrap(), vf);
        assert!(parse_vertex_forest(&k4, "0 1 0 1 2\n").is_err());
        assert!(parse_edge_forest(&g, "1 0 1 0 1 2 3 4 5\n").is_err());
    }

    #[test]
    fn special_index_text() {
        let idx = SpecialPairsIndex::build(&generate::path(3), 1.0).unwrap();
        assert_eq!(write_special_index(&idx), "0: 2\n1:\n2: 0\n");
    }
}

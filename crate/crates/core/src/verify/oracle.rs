//! Constructive and exhaustive oracles.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::resample::Coloring;
use crate::special::{default_vertex_palette, SpecialPairsIndex};
use crate::stream::Color;

use super::{is_acyclic_edge, is_acyclic_vertex};

/// What gets colored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Edge,
    Vertex,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Edge => "edge",
            Mode::Vertex => "vertex",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" | "edges" => Ok(Mode::Edge),
            "vertex" | "vertices" => Ok(Mode::Vertex),
            _ => Err(Error::InvalidParams(format!("unknown mode {s:?}"))),
        }
    }
}

fn smallest_free(forbidden: &mut Vec<Color>) -> Color {
    forbidden.sort_unstable();
    forbidden.dedup();
    let mut c = 1;
    for &f in forbidden.iter() {
        if f == c {
            c += 1;
        } else if f > c {
            break;
        }
    }
    c
}

/// Greedy edge coloring in edge order. Each edge `uv` avoids the colors of
/// colored edges at `u` and `v`, and every color that would close a
/// bichromatic 4-cycle `u v w x`: if `vw` and `xu` share a color, the color
/// of `wx` is forbidden.
pub fn greedy_strongly_proper(g: &Graph) -> Coloring {
    let mut colors: Vec<Color> = vec![0; g.edge_count()];
    let mut forbidden = Vec::new();
    for e in g.edge_ids() {
        let (u, v) = g.endpoints(e);
        forbidden.clear();
        for &(_, f) in g.incident(u).iter().chain(g.incident(v)) {
            if colors[f.0] != 0 {
                forbidden.push(colors[f.0]);
            }
        }
        for &(w, vw) in g.incident(v) {
            if w == u || colors[vw.0] == 0 {
                continue;
            }
            for &(x, xu) in g.incident(u) {
                if x == v || x == w || colors[xu.0] != colors[vw.0] {
                    continue;
                }
                if let Some(wx) = g.edge_between(w, x) {
                    if colors[wx.0] != 0 {
                        forbidden.push(colors[wx.0]);
                    }
                }
            }
        }
        colors[e.0] = smallest_free(&mut forbidden);
    }
    let used = colors.iter().copied().max().unwrap_or(0);
    let palette = (2 * g.max_degree()).saturating_sub(1).max(1) as Color;
    Coloring::new(colors, palette.max(used))
}

/// Greedy vertex coloring in vertex order, avoiding the colors of
/// neighbors and of both directions of every special pair.
pub fn greedy_specially_proper(g: &Graph, alpha: f64) -> Result<Coloring> {
    let idx = SpecialPairsIndex::build(g, alpha)?;
    let mut colors: Vec<Color> = vec![0; g.vertex_count()];
    let mut forbidden = Vec::new();
    for u in 0..g.vertex_count() {
        forbidden.clear();
        forbidden.extend(
            g.neighbors(u)
                .chain(idx.special(u).iter().copied())
                .chain(idx.special_to(u).iter().copied())
                .map(|v| colors[v])
                .filter(|&c| c != 0),
        );
        colors[u] = smallest_free(&mut forbidden);
    }
    let used = colors.iter().copied().max().unwrap_or(0);
    Ok(Coloring::new(colors, default_vertex_palette(g, alpha)?.max(used)))
}

/// Elements the brute-force search will take on.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// The least `K ≤ k_max` admitting a proper acyclic coloring, by exhaustive
/// backtracking. Colorings are enumerated up to renaming of colors.
pub fn brute_force_min_acyclic(g: &Graph, mode: Mode, k_max: Color) -> Result<Option<Color>> {
    let n = match mode {
        Mode::Edge => g.edge_count(),
        Mode::Vertex => g.vertex_count(),
    };
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::RefuseTooLarge {
            elements: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Some(0));
    }
    // Earlier elements that must differ from element i.
    let conflicts: Vec<Vec<usize>> = (0..n)
        .map(|i| match mode {
            Mode::Edge => {
                let (u, v) = g.endpoints(EdgeId(i));
                g.incident(u)
                    .iter()
                    .chain(g.incident(v))
                    .map(|&(_, f)| f.0)
                    .filter(|&j| j < i)
                    .collect()
            }
            Mode::Vertex => g.neighbors(i).filter(|&j| j < i).collect(),
        })
        .collect();
    let leaf = |colors: &[Color]| {
        let c = Coloring::new(colors.to_vec(), k_max);
        match mode {
            Mode::Edge => is_acyclic_edge(g, &c).ok,
            Mode::Vertex => is_acyclic_vertex(g, &c).ok,
        }
    };
    for k in 1..=k_max {
        let mut colors = vec![0; n];
        if search(0, 0, k, &conflicts, &mut colors, &leaf) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn search(
    i: usize,
    used: Color,
    k: Color,
    conflicts: &[Vec<usize>],
    colors: &mut [Color],
    leaf: &impl Fn(&[Color]) -> bool,
) -> bool {
    if i == colors.len() {
        return leaf(colors);
    }
    for c in 1..=k.min(used + 1) {
        if conflicts[i].iter().any(|&j| colors[j] == c) {
            continue;
        }
        colors[i] = c;
        if search(i + 1, used.max(c), k, conflicts, colors, leaf) {
            return true;
        }
    }
    colors[i] = 0;
    false
}

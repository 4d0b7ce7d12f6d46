//! Randomized acyclic vertex coloring.
//!
//! The bad-set family ℬ holds the 4-cycles none of whose ordered opposite
//! pairs is special, and all 5-paths. A set is badly colored when both of
//! its equal-parity vertex classes are monochromatic. `vertex_color`
//! resamples `sc(B(u))` for the least bad pivot `u` and its least bad set
//! `B`; `main_algorithm_vertices` repeats it until the output is also
//! α-specially proper. ℬ is never materialized.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cycle::{parity_classes_monochromatic, CycleRef, PathRef};
use crate::error::{Error, Result};
use crate::forest::WitnessForest;
use crate::graph::{Graph, Vertex};
use crate::resample::{
    self, Coloring, FinalVerdicts, MainOptions, MainOutcome, Resampling, Run, RunError,
    RunOptions, Validation,
};
use crate::special::SpecialPairsIndex;
use crate::stream::{Color, RandomStream};
use crate::verify;

pub type VertexColoring = Coloring;

/// An element of ℬ. 4-cycles precede 5-paths; within a kind the canonical
/// ordering applies.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BadSet {
    FourCycle(CycleRef),
    /// Oriented from the pivot.
    FivePath(PathRef),
}

impl BadSet {
    /// Number of vertices, 4 or 6.
    pub fn size(&self) -> usize {
        match self {
            BadSet::FourCycle(_) => 4,
            BadSet::FivePath(_) => 6,
        }
    }

    /// `B(u)`.
    pub fn traversal(&self, u: Vertex) -> Result<Vec<Vertex>> {
        match self {
            BadSet::FourCycle(c) => c.vertices_from(u),
            BadSet::FivePath(p) => Ok(p.from_endpoint(u)?.vertices().to_vec()),
        }
    }

    /// `sc(B(u))`: the first `|B| − 2` vertices of `B(u)`.
    pub fn scope(&self, u: Vertex) -> Result<Vec<Vertex>> {
        match self {
            BadSet::FourCycle(c) => c.vertex_scope(u),
            BadSet::FivePath(p) => p.scope(u),
        }
    }

    pub fn is_pivot(&self, u: Vertex) -> bool {
        match self {
            BadSet::FourCycle(c) => c.contains_vertex(u),
            BadSet::FivePath(p) => p.is_endpoint(u),
        }
    }

    pub fn is_badly_colored(&self, colors: &[Color]) -> bool {
        match self {
            BadSet::FourCycle(c) => {
                let v = c.vertices();
                colors[v[0]] == colors[v[2]] && colors[v[1]] == colors[v[3]]
            }
            BadSet::FivePath(p) => {
                let v = p.vertices();
                parity_classes_monochromatic(6, |i| colors[v[i]])
            }
        }
    }
}

impl Ord for BadSet {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (BadSet::FourCycle(a), BadSet::FourCycle(b)) => a.cmp(b),
            (BadSet::FivePath(a), BadSet::FivePath(b)) => a.cmp(b),
            (BadSet::FourCycle(_), BadSet::FivePath(_)) => Ordering::Less,
            (BadSet::FivePath(_), BadSet::FourCycle(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for BadSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A forest node label `(u, B)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLabel {
    pub vertex: Vertex,
    pub set: BadSet,
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = self.set.traversal(self.vertex).unwrap_or_default();
        write!(f, "({}, {:?})", self.vertex, seq)
    }
}

pub type VertexForest = WitnessForest<VertexLabel>;
pub type VertexRun = Run<VertexLabel>;
pub type VertexOutcome = MainOutcome<VertexLabel>;

/// Whether a 4-cycle belongs to ℬ: no ordered opposite pair `(x, y)` has
/// `y ∈ S_α(x)`.
pub fn four_cycle_in_family(idx: &SpecialPairsIndex, c: &CycleRef) -> bool {
    let v = c.vertices();
    v.len() == 4
        && !idx.is_special(v[0], v[2])
        && !idx.is_special(v[2], v[0])
        && !idx.is_special(v[1], v[3])
        && !idx.is_special(v[3], v[1])
}

/// The least badly colored set of ℬ with pivot `u`.
pub fn find_least_bad_set(
    g: &Graph,
    idx: &SpecialPairsIndex,
    colors: &[Color],
    u: Vertex,
) -> Option<BadSet> {
    least_bad_4cycle(g, idx, colors, u)
        .map(BadSet::FourCycle)
        .or_else(|| least_bad_5path(g, colors, u).map(BadSet::FivePath))
}

fn least_bad_4cycle(
    g: &Graph,
    idx: &SpecialPairsIndex,
    colors: &[Color],
    u: Vertex,
) -> Option<CycleRef> {
    let nbrs = g.incident(u);
    let mut best: Option<CycleRef> = None;
    for (i, &(x, _)) in nbrs.iter().enumerate() {
        for &(y, _) in &nbrs[i + 1..] {
            if colors[x] != colors[y] {
                continue;
            }
            for v in g.common_neighbors(x, y) {
                if v == u || colors[v] != colors[u] {
                    continue;
                }
                let c = CycleRef::from_valid(&[u, x, v, y]);
                if four_cycle_in_family(idx, &c) && best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
    }
    best
}

/// Depth-first in sorted adjacency order, so the first hit is the
/// lexicographically least path.
fn least_bad_5path(g: &Graph, colors: &[Color], u: Vertex) -> Option<PathRef> {
    fn extend(g: &Graph, colors: &[Color], path: &mut Vec<Vertex>) -> bool {
        if path.len() == 6 {
            return true;
        }
        let tip = *path.last().expect("non-empty");
        for w in g.neighbors(tip) {
            if path.contains(&w) {
                continue;
            }
            if path.len() >= 2 && colors[w] != colors[path[path.len() - 2]] {
                continue;
            }
            path.push(w);
            if extend(g, colors, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = vec![u];
    extend(g, colors, &mut path).then(|| PathRef::new(g, &path).expect("search yields paths"))
}

struct VertexProblem<'a> {
    g: &'a Graph,
    idx: &'a SpecialPairsIndex,
}

impl Resampling for VertexProblem<'_> {
    type Label = VertexLabel;

    fn element_count(&self) -> usize {
        self.g.vertex_count()
    }

    fn least_bad(&self, colors: &[Color], element: usize) -> Option<VertexLabel> {
        find_least_bad_set(self.g, self.idx, colors, element).map(|set| VertexLabel {
            vertex: element,
            set,
        })
    }

    fn anchor(&self, label: &VertexLabel) -> usize {
        label.vertex
    }

    fn scope(&self, label: &VertexLabel) -> Vec<usize> {
        label.set.scope(label.vertex).expect("label vertex is a pivot")
    }

    fn is_bad(&self, colors: &[Color], label: &VertexLabel) -> bool {
        label.set.is_badly_colored(colors)
    }
}

pub fn random_vertex_coloring(g: &Graph, stream: &mut RandomStream) -> VertexColoring {
    Coloring::new(
        (0..g.vertex_count()).map(|_| stream.draw()).collect(),
        stream.palette(),
    )
}

fn check_index(g: &Graph, idx: &SpecialPairsIndex) -> Result<()> {
    if idx.vertex_count() != g.vertex_count() {
        return Err(Error::InvalidParams(format!(
            "special-pair index covers {} vertices, graph has {}",
            idx.vertex_count(),
            g.vertex_count()
        )));
    }
    Ok(())
}

pub fn vertex_color(
    g: &Graph,
    idx: &SpecialPairsIndex,
    stream: &mut RandomStream,
    opts: RunOptions,
) -> Result<VertexRun, RunError<VertexLabel>> {
    let run = resample::run(&VertexProblem { g, idx }, stream, opts);
    if run.report.halted {
        Ok(run)
    } else {
        Err(RunError::PhaseLimitExceeded {
            cap: opts.phase_cap,
            partial: Box::new(run),
        })
    }
}

/// Repeats [`vertex_color`] until the output is α-specially proper. A
/// halting result is proper and acyclic.
pub fn main_algorithm_vertices(
    g: &Graph,
    idx: &SpecialPairsIndex,
    stream: &mut RandomStream,
    opts: MainOptions,
) -> Result<VertexOutcome, RunError<VertexLabel>> {
    let seed = stream.seed();
    let problem = VertexProblem { g, idx };
    resample::repeat_until(
        seed,
        opts,
        || resample::run(&problem, stream, opts.run),
        |c| {
            verify::is_specially_proper(g, idx, c).ok.then(|| FinalVerdicts {
                proper: verify::is_proper_vertex(g, c).ok,
                strong: true,
                acyclic: verify::is_acyclic_vertex(g, c).ok,
            })
        },
    )
}

/// Feasibility with the subset reading of the child condition: every
/// child's vertex-label lies in `sc(B(u))` of its parent, siblings and
/// roots carry distinct vertex-labels. Labels must also be members of ℬ
/// with their vertex as a pivot.
pub fn check_vertex_forest(g: &Graph, idx: &SpecialPairsIndex, forest: &VertexForest) -> Result<()> {
    check_index(g, idx)?;
    for (i, label) in forest.labels().enumerate() {
        let fail = |why: &str| Err(Error::InfeasibleForest(format!("node {i}: {why}")));
        let valid = match &label.set {
            BadSet::FourCycle(c) => {
                CycleRef::new(g, c.vertices()).is_ok_and(|v| v.len() == 4)
                    && four_cycle_in_family(idx, c)
            }
            BadSet::FivePath(p) => PathRef::new(g, p.vertices()).is_ok(),
        };
        if !valid {
            return fail("set is not a member of the bad-set family");
        }
        if !label.set.is_pivot(label.vertex) {
            return fail("vertex is not a pivot of its set");
        }
    }
    forest
        .check_feasible(
            |l| l.vertex,
            |l| l.set.scope(l.vertex).unwrap_or_default(),
        )
        .map_err(Error::InfeasibleForest)
}

pub fn vertex_validation(
    g: &Graph,
    idx: &SpecialPairsIndex,
    forest: &VertexForest,
    stream: &mut RandomStream,
) -> Result<Validation> {
    check_vertex_forest(g, idx, forest)?;
    Ok(resample::validate(&VertexProblem { g, idx }, forest, stream))
}

/// `q = 1 / (αΔ^{4/3})`.
pub fn vertex_q(alpha: f64, delta: usize) -> f64 {
    1.0 / (alpha * (delta as f64).powf(4.0 / 3.0))
}

/// `ln ‖F‖` with node weights `q²` (4-cycle) and `q⁴` (5-path).
pub fn ln_vertex_forest_weight(forest: &VertexForest, alpha: f64, delta: usize) -> f64 {
    let lnq = vertex_q(alpha, delta).ln();
    forest
        .labels()
        .map(|l| (l.set.size() - 2) as f64 * lnq)
        .sum()
}

pub fn vertex_forest_weight(forest: &VertexForest, alpha: f64, delta: usize) -> f64 {
    ln_vertex_forest_weight(forest, alpha, delta).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn opts(cap: u64) -> RunOptions {
        RunOptions {
            phase_cap: cap,
            check_progression: true,
        }
    }

    #[test]
    fn monochromatic_c4_is_bad() {
        // In plain C4 every opposite vertex is special, so nothing is in ℬ.
        let c4 = generate::cycle(4);
        let idx = SpecialPairsIndex::build(&c4, 0.1).unwrap();
        assert!(find_least_bad_set(&c4, &idx, &[1; 4], 0).is_none());

        // K3,3 with parts {0,2,4} and {1,3,5}; with a cap of one the tie
        // breaks make S(0)=S(2)={4} and S(1)=S(3)={5}, so 0-1-2-3 is in ℬ.
        let mut pairs = Vec::new();
        for a in [0, 2, 4] {
            for b in [1, 3, 5] {
                pairs.push((a, b));
            }
        }
        let g = Graph::new(6, &pairs).unwrap();
        let idx = SpecialPairsIndex::build(&g, 0.2).unwrap();
        assert_eq!(idx.cap(), 1);
        assert_eq!((idx.special(0), idx.special(1)), (&[4][..], &[5][..]));
        let found = find_least_bad_set(&g, &idx, &[1; 6], 0).unwrap();
        assert_eq!(
            found,
            BadSet::FourCycle(CycleRef::new(&g, &[0, 1, 2, 3]).unwrap())
        );
        assert_eq!(found.scope(0).unwrap(), vec![0, 1]);
    }

    #[test]
    fn p6_alternating_yields_the_path() {
        let g = generate::path(6);
        let idx = SpecialPairsIndex::build(&g, 1.0).unwrap();
        let colors = [1, 2, 1, 2, 1, 2];
        let from0 = find_least_bad_set(&g, &idx, &colors, 0).unwrap();
        assert_eq!(from0.traversal(0).unwrap(), vec![0, 1, 2, 3, 4, 5]);
        let from5 = find_least_bad_set(&g, &idx, &colors, 5).unwrap();
        assert_eq!(from5.traversal(5).unwrap(), vec![5, 4, 3, 2, 1, 0]);
        assert!(find_least_bad_set(&g, &idx, &colors, 2).is_none());
        assert_eq!(from0.scope(0).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn edgeless_graph_halts_immediately() {
        let g = Graph::new(5, &[]).unwrap();
        let idx = SpecialPairsIndex::build(&g, 1.0).unwrap();
        let run = vertex_color(&g, &idx, &mut RandomStream::new(0, 3), opts(10)).unwrap();
        assert_eq!(run.report.phases, 0);
        assert_eq!(run.report.draws, 5);
    }

    #[test]
    fn p6_with_one_color_hits_the_cap() {
        let g = generate::path(6);
        let idx = SpecialPairsIndex::build(&g, 1.0).unwrap();
        let err = vertex_color(&g, &idx, &mut RandomStream::new(0, 1), opts(40)).unwrap_err();
        assert!(err.is_phase_limit());
    }

    #[test]
    fn c6_halts_clean() {
        let g = generate::cycle(6);
        let idx = SpecialPairsIndex::build(&g, 1.0).unwrap();
        let k = crate::special::default_vertex_palette(&g, 1.0).unwrap();
        assert_eq!(k, 6);
        for seed in 0..30 {
            let run = vertex_color(&g, &idx, &mut RandomStream::new(seed, k), opts(10_000)).unwrap();
            assert_eq!(run.report.progression_violations, 0);
            for u in 0..6 {
                assert!(find_least_bad_set(&g, &idx, &run.coloring.colors, u).is_none());
            }
            check_vertex_forest(&g, &idx, &run.forest).unwrap();
            let mut replay = RandomStream::new(seed, k);
            assert!(vertex_validation(&g, &idx, &run.forest, &mut replay)
                .unwrap()
                .is_success());
        }
    }

    #[test]
    fn single_edge_two_colors() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        let idx = SpecialPairsIndex::build(&g, 1.0).unwrap();
        let out = main_algorithm_vertices(&g, &idx, &mut RandomStream::new(4, 2), MainOptions::default())
            .unwrap();
        assert_ne!(out.coloring.colors[0], out.coloring.colors[1]);
    }

    #[test]
    fn weights() {
        let g = generate::path(6);
        let p = PathRef::new(&g, &[0, 1, 2, 3, 4, 5]).unwrap();
        let mut f = VertexForest::new();
        f.push(
            VertexLabel {
                vertex: 0,
                set: BadSet::FivePath(p),
            },
            None,
        );
        let q = vertex_q(1.0, 2);
        assert!((vertex_forest_weight(&f, 1.0, 2) - q.powi(4)).abs() < 1e-15);
    }
}

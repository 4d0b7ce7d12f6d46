//! Randomized acyclic edge coloring.
//!
//! `edge_color` colors every edge uniformly at random and then, while some
//! edge lies on a badly colored even cycle of length at least six, picks
//! the least such edge `e` and the least such cycle `C` through it and
//! recolors `sc(C(e))`, recursing on the scope. `main_algorithm_edges`
//! repeats `edge_color` until the result is also strongly proper.

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::cycle::{find_least_bad_edge_cycle, is_badly_colored_edge_cycle, CycleRef};
use crate::error::{Error, Result};
use crate::forest::WitnessForest;
use crate::graph::{EdgeId, Graph};
use crate::resample::{
    self, Coloring, FinalVerdicts, MainOptions, MainOutcome, Resampling, Run, RunError,
    RunOptions, Validation,
};
use crate::stream::{Color, RandomStream};
use crate::verify;

pub type EdgeColoring = Coloring;

/// A forest node label `(e, C)`: the phase recolored `sc(C(e))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub edge: EdgeId,
    pub cycle: CycleRef,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.edge, self.cycle.vertices())
    }
}

pub type EdgeForest = WitnessForest<EdgeLabel>;
pub type EdgeRun = Run<EdgeLabel>;
pub type EdgeOutcome = MainOutcome<EdgeLabel>;

/// The palette size the analysis assumes: `2Δ − 1` (at least one color).
pub fn default_edge_palette(g: &Graph) -> Color {
    (2 * g.max_degree()).saturating_sub(1).max(1) as Color
}

struct EdgeProblem<'g> {
    g: &'g Graph,
}

impl Resampling for EdgeProblem<'_> {
    type Label = EdgeLabel;

    fn element_count(&self) -> usize {
        self.g.edge_count()
    }

    fn least_bad(&self, colors: &[Color], element: usize) -> Option<EdgeLabel> {
        let edge = EdgeId(element);
        find_least_bad_edge_cycle(self.g, colors, edge).map(|cycle| EdgeLabel { edge, cycle })
    }

    fn anchor(&self, label: &EdgeLabel) -> usize {
        label.edge.0
    }

    fn scope(&self, label: &EdgeLabel) -> Vec<usize> {
        label
            .cycle
            .edge_scope(self.g, label.edge)
            .expect("label edge lies on its cycle")
            .into_iter()
            .map(EdgeId::index)
            .collect()
    }

    fn is_bad(&self, colors: &[Color], label: &EdgeLabel) -> bool {
        is_badly_colored_edge_cycle(self.g, colors, &label.cycle)
    }
}

/// Colors every edge independently and uniformly, consuming one draw per
/// edge in edge order.
pub fn random_edge_coloring(g: &Graph, stream: &mut RandomStream) -> EdgeColoring {
    Coloring::new(
        g.edge_ids().map(|_| stream.draw()).collect(),
        stream.palette(),
    )
}

fn warn_if_short(g: &Graph, palette: Color) {
    if palette < default_edge_palette(g) {
        warn!(
            "palette {} is below 2Δ-1 = {} for Δ = {}",
            palette,
            default_edge_palette(g),
            g.max_degree()
        );
    }
}

/// One execution of the resampling algorithm. On a cap hit the partial
/// coloring and forest are returned inside the error.
pub fn edge_color(
    g: &Graph,
    stream: &mut RandomStream,
    opts: RunOptions,
) -> Result<EdgeRun, RunError<EdgeLabel>> {
    warn_if_short(g, stream.palette());
    let run = resample::run(&EdgeProblem { g }, stream, opts);
    if run.report.halted {
        Ok(run)
    } else {
        Err(RunError::PhaseLimitExceeded {
            cap: opts.phase_cap,
            partial: Box::new(run),
        })
    }
}

/// Repeats [`edge_color`] with a continuing stream until its output is
/// strongly proper. A halting result is proper and acyclic.
pub fn main_algorithm_edges(
    g: &Graph,
    stream: &mut RandomStream,
    opts: MainOptions,
) -> Result<EdgeOutcome, RunError<EdgeLabel>> {
    warn_if_short(g, stream.palette());
    let seed = stream.seed();
    let problem = EdgeProblem { g };
    resample::repeat_until(
        seed,
        opts,
        || resample::run(&problem, stream, opts.run),
        |c| {
            verify::is_strongly_proper(g, c).ok.then(|| FinalVerdicts {
                proper: verify::is_proper_edge(g, c).ok,
                strong: true,
                acyclic: verify::is_acyclic_edge(g, c).ok,
            })
        },
    )
}

/// Checks both feasibility conditions and that every label is an even
/// cycle of length at least six through its edge.
pub fn check_edge_forest(g: &Graph, forest: &EdgeForest) -> Result<()> {
    for (i, label) in forest.labels().enumerate() {
        let len = label.cycle.len();
        if len < 6 || len % 2 != 0 {
            return Err(Error::InfeasibleForest(format!(
                "node {i}: cycle length {len} is not even and at least 6"
            )));
        }
        if label.edge.0 >= g.edge_count() {
            return Err(Error::InfeasibleForest(format!("node {i}: unknown edge")));
        }
        let on_cycle = CycleRef::new(g, label.cycle.vertices()).is_ok()
            && label.cycle.edges_from(g, label.edge).is_ok();
        if !on_cycle {
            return Err(Error::InfeasibleForest(format!(
                "node {i}: edge {} is not on its cycle",
                label.edge
            )));
        }
    }
    forest
        .check_feasible(
            |l| l.edge,
            |l| l.cycle.edge_scope(g, l.edge).unwrap_or_default(),
        )
        .map_err(Error::InfeasibleForest)
}

/// Replays `forest` against `stream`: colors all edges, then for each label
/// in depth-first order requires its cycle to be badly colored and redraws
/// the scope.
pub fn edge_validation(
    g: &Graph,
    forest: &EdgeForest,
    stream: &mut RandomStream,
) -> Result<Validation> {
    check_edge_forest(g, forest)?;
    Ok(resample::validate(&EdgeProblem { g }, forest, stream))
}

/// `ln ‖F‖ = −Σ (2kᵢ − 2) ln(2Δ − 1)`.
pub fn ln_forest_weight(forest: &EdgeForest, max_degree: usize) -> f64 {
    let base = ((2 * max_degree).saturating_sub(1).max(1) as f64).ln();
    -forest
        .labels()
        .map(|l| (l.cycle.len() - 2) as f64 * base)
        .sum::<f64>()
}

pub fn forest_weight(forest: &EdgeForest, max_degree: usize) -> f64 {
    ln_forest_weight(forest, max_degree).exp()
}

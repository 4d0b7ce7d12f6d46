//! Randomized acyclic coloring.
//!
//! Edge coloring with `2Δ − 1` colors and vertex coloring with
//! `⌈αΔ^{4/3}⌉ + Δ + 1` colors by recursive resampling of badly colored
//! structures, with witness forests that can be replayed against the random
//! stream, exact verifiers, and the growth-rate numerics of the phase-count
//! generating functions.

pub mod asymptotics;
pub mod cycle;
pub mod edge;
pub mod error;
pub mod forest;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod io;
mod resample;
pub mod special;
pub mod stream;
pub mod verify;
pub mod vertex;

pub use asymptotics::{AsymptoticsResult, SeriesCoeffs};
pub use cycle::{CycleRef, PathRef};
pub use edge::{EdgeColoring, EdgeForest, EdgeLabel};
pub use error::{Error, Result};
pub use forest::{Node, NodeId, WitnessForest};
pub use graph::{EdgeId, Graph, Vertex};
pub use harness::{ExperimentConfig, ExperimentSummary};
pub use resample::{
    Coloring, FinalVerdicts, MainOptions, MainOutcome, MainReport, Run, RunError, RunOptions,
    RunReport, Validation,
};
pub use special::SpecialPairsIndex;
pub use stream::{Color, RandomStream};
pub use verify::{Mode, Verdict, Witness};
pub use vertex::{BadSet, VertexColoring, VertexForest, VertexLabel};

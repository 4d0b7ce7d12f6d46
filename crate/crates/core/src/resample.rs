//! The recursive resampling loop shared by the edge and vertex algorithms,
//! and the matching validation replay.
//!
//! The recursion of `Recolor` is run on an explicit stack of frames. The
//! bottom frame stands for the main while-loop and scans every element;
//! every other frame scans the scope of the phase that opened it. Each
//! iteration picks the least element of the current frame that anchors a
//! bad structure, redraws that structure's scope in traversal order and
//! opens a child frame.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forest::{NodeId, WitnessForest};
use crate::stream::{Color, RandomStream};

pub(crate) trait Resampling {
    type Label: Clone;

    fn element_count(&self) -> usize;

    /// The least bad structure anchored at `element`, if any.
    fn least_bad(&self, colors: &[Color], element: usize) -> Option<Self::Label>;

    fn anchor(&self, label: &Self::Label) -> usize;

    /// Elements to redraw, in traversal order.
    fn scope(&self, label: &Self::Label) -> Vec<usize>;

    fn is_bad(&self, colors: &[Color], label: &Self::Label) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    pub phase_cap: u64,
    /// Re-check after every finished phase that its anchor and every
    /// element clean when it started are clean. Quadratic; meant for tests.
    pub check_progression: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            phase_cap: 1_000_000,
            check_progression: false,
        }
    }
}

/// A total or partial assignment of colors from `1..=palette`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<Color>,
    pub palette: Color,
}

impl Coloring {
    pub fn new(colors: Vec<Color>, palette: Color) -> Self {
        Coloring { colors, palette }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors in use.
    pub fn colors_used(&self) -> usize {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    pub fn max_color(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    /// Stream position when the run started.
    pub stream_start: u64,
    /// Colors drawn by the run, the initial phase included.
    pub draws: u64,
    /// Recolor phases (the initial phase is not counted).
    pub phases: u64,
    /// Iterations of the main while-loop.
    pub root_iterations: u64,
    pub halted: bool,
    pub progression_violations: u64,
}

#[derive(Clone, Debug)]
pub struct Run<L> {
    pub coloring: Coloring,
    pub forest: WitnessForest<L>,
    pub report: RunReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Validation {
    Success,
    /// Index (0-based) of the label whose structure was not bad.
    Failure { step: usize },
}

impl Validation {
    pub fn is_success(&self) -> bool {
        matches!(self, Validation::Success)
    }
}

/// Outcome flags checked on the final coloring of a main-algorithm run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalVerdicts {
    pub proper: bool,
    /// Strongly proper (edges) or α-specially proper (vertices).
    pub strong: bool,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainReport {
    pub seed: u64,
    /// Executions of the inner coloring algorithm, the successful one included.
    pub attempts: u64,
    pub total_phases: u64,
    pub max_root_iterations: u64,
    pub halted: bool,
    pub final_run: Option<RunReport>,
    pub verdicts: Option<FinalVerdicts>,
}

impl MainReport {
    pub(crate) fn new(seed: u64) -> Self {
        MainReport {
            seed,
            attempts: 0,
            total_phases: 0,
            max_root_iterations: 0,
            halted: false,
            final_run: None,
            verdicts: None,
        }
    }

    pub(crate) fn record(&mut self, run: &RunReport) {
        self.attempts += 1;
        self.total_phases += run.phases;
        self.max_root_iterations = self.max_root_iterations.max(run.root_iterations);
        self.final_run = Some(run.clone());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainOptions {
    pub run: RunOptions,
    /// Maximum executions of the inner coloring algorithm.
    pub restart_cap: u64,
}

impl Default for MainOptions {
    fn default() -> Self {
        MainOptions {
            run: RunOptions::default(),
            restart_cap: 10_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MainOutcome<L> {
    pub coloring: Coloring,
    /// Witness forest of the final, successful execution.
    pub forest: WitnessForest<L>,
    pub report: MainReport,
}

#[derive(Debug, Error)]
pub enum RunError<L: Debug> {
    #[error("phase cap of {cap} reached before halting")]
    PhaseLimitExceeded { cap: u64, partial: Box<Run<L>> },
    #[error("restart cap of {cap} reached without a valid coloring")]
    RestartLimitExceeded { cap: u64, report: Box<MainReport> },
}

impl<L: Debug> RunError<L> {
    pub fn is_phase_limit(&self) -> bool {
        matches!(self, RunError::PhaseLimitExceeded { .. })
    }
}

/// Repeats `attempt` until it halts with a coloring accepted by `accept`.
pub(crate) fn repeat_until<L: Debug>(
    seed: u64,
    opts: MainOptions,
    mut attempt: impl FnMut() -> Run<L>,
    accept: impl Fn(&Coloring) -> Option<FinalVerdicts>,
) -> Result<MainOutcome<L>, RunError<L>> {
    let mut report = MainReport::new(seed);
    while report.attempts < opts.restart_cap {
        let run = attempt();
        report.record(&run.report);
        if !run.report.halted {
            return Err(RunError::PhaseLimitExceeded {
                cap: opts.run.phase_cap,
                partial: Box::new(run),
            });
        }
        if let Some(verdicts) = accept(&run.coloring) {
            report.halted = true;
            report.verdicts = Some(verdicts);
            return Ok(MainOutcome {
                coloring: run.coloring,
                forest: run.forest,
                report,
            });
        }
    }
    Err(RunError::RestartLimitExceeded {
        cap: opts.restart_cap,
        report: Box::new(report),
    })
}

struct Frame {
    node: Option<NodeId>,
    anchor: usize,
    /// Elements scanned by this frame, ascending.
    scan: Vec<usize>,
    clean_at_entry: Vec<usize>,
}

/// Runs the resampling algorithm. Returns the run and whether it halted
/// before the phase cap.
pub(crate) fn run<P: Resampling>(
    problem: &P,
    stream: &mut RandomStream,
    opts: RunOptions,
) -> Run<P::Label> {
    let n = problem.element_count();
    let stream_start = stream.position();
    let colors: Vec<Color> = (0..n).map(|_| stream.draw()).collect();
    let mut coloring = Coloring::new(colors, stream.palette());
    let mut forest = WitnessForest::new();
    let mut report = RunReport {
        seed: stream.seed(),
        stream_start,
        draws: 0,
        phases: 0,
        root_iterations: 0,
        halted: false,
        progression_violations: 0,
    };

    let clean = |colors: &[Color]| -> Vec<usize> {
        (0..n)
            .filter(|&i| problem.least_bad(colors, i).is_none())
            .collect()
    };

    let mut stack = vec![Frame {
        node: None,
        anchor: usize::MAX,
        scan: (0..n).collect(),
        clean_at_entry: Vec::new(),
    }];

    while let Some(top) = stack.last() {
        let found = top
            .scan
            .iter()
            .find_map(|&i| problem.least_bad(&coloring.colors, i));
        match found {
            Some(label) => {
                if report.phases >= opts.phase_cap {
                    report.draws = stream.position() - stream_start;
                    return Run {
                        coloring,
                        forest,
                        report,
                    };
                }
                report.phases += 1;
                if stack.len() == 1 {
                    report.root_iterations += 1;
                }
                let clean_at_entry = if opts.check_progression {
                    clean(&coloring.colors)
                } else {
                    Vec::new()
                };
                let scope = problem.scope(&label);
                for &i in &scope {
                    coloring.colors[i] = stream.draw();
                }
                let anchor = problem.anchor(&label);
                let node = forest.push(label, top.node);
                let mut scan = scope;
                scan.sort_unstable();
                stack.push(Frame {
                    node: Some(node),
                    anchor,
                    scan,
                    clean_at_entry,
                });
            }
            None => {
                let frame = stack.pop().expect("non-empty stack");
                if opts.check_progression && frame.node.is_some() {
                    let violated = std::iter::once(frame.anchor)
                        .chain(frame.clean_at_entry)
                        .any(|i| problem.least_bad(&coloring.colors, i).is_some());
                    if violated {
                        report.progression_violations += 1;
                    }
                }
            }
        }
    }

    report.halted = true;
    report.draws = stream.position() - stream_start;
    Run {
        coloring,
        forest,
        report,
    }
}

/// Replays the label sequence of `forest` against fresh draws from
/// `stream`. Feasibility must be checked by the caller.
pub(crate) fn validate<P: Resampling>(
    problem: &P,
    forest: &WitnessForest<P::Label>,
    stream: &mut RandomStream,
) -> Validation {
    let mut colors: Vec<Color> = (0..problem.element_count()).map(|_| stream.draw()).collect();
    for (step, label) in forest.labels().enumerate() {
        if !problem.is_bad(&colors, label) {
            return Validation::Failure { step };
        }
        for i in problem.scope(label) {
            colors[i] = stream.draw();
        }
    }
    Validation::Success
}

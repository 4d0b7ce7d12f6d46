//! Seeded Monte Carlo experiments over the coloring algorithms.
//!
//! Trial `i` draws from its own stream seeded with `child_seed(base, i)`.
//! Trials run in parallel but results are collected in trial order, so the
//! summary depends only on the configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge::{default_edge_palette, edge_color, edge_validation, main_algorithm_edges};
use crate::error::{Error, Result};
use crate::generate::GraphSpec;
use crate::graph::Graph;
use crate::io::{parse_graph, GraphFormat};
use crate::resample::{
    Coloring, FinalVerdicts, MainOptions, MainReport, RunError, RunOptions, RunReport, Validation,
};
use crate::special::{default_vertex_palette, SpecialPairsIndex};
use crate::stream::{child_seed, Color, RandomStream};
use crate::verify::{self, Mode};
use crate::vertex::{main_algorithm_vertices, vertex_color, vertex_validation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphSource {
    Generator(GraphSpec),
    File { path: PathBuf, dimacs: bool },
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::Generator(spec) => spec.build(),
            GraphSource::File { path, dimacs } => {
                let text = std::fs::read_to_string(path)?;
                let format = if *dimacs {
                    GraphFormat::Dimacs
                } else {
                    GraphFormat::EdgeList
                };
                parse_graph(&text, format)
            }
        }
    }
}

/// Which entry point each trial calls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// Restart the coloring algorithm until the strong condition holds.
    #[default]
    Main,
    /// A single execution of the resampling algorithm.
    Single,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub mode: Mode,
    #[serde(default)]
    pub algorithm: Algorithm,
    /// Palette size; `None` picks `2Δ−1` (edges) or `⌈αΔ^{4/3}⌉+Δ+1` (vertices).
    pub k: Option<Color>,
    pub alpha: f64,
    pub trials: u64,
    pub base_seed: u64,
    pub phase_cap: u64,
    pub restart_cap: u64,
    /// Replay every halting run's witness forest against its own stream.
    pub replay: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(graph: GraphSource, mode: Mode) -> Self {
        ExperimentConfig {
            graph,
            mode,
            algorithm: Algorithm::Main,
            k: None,
            alpha: 1.0,
            trials: 100,
            base_seed: 0,
            phase_cap: RunOptions::default().phase_cap,
            restart_cap: MainOptions::default().restart_cap,
            replay: false,
            out: None,
        }
    }

    fn main_options(&self) -> MainOptions {
        MainOptions {
            run: RunOptions {
                phase_cap: self.phase_cap,
                check_progression: false,
            },
            restart_cap: self.restart_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub index: u64,
    pub seed: u64,
    pub halted: bool,
    /// Executions of the coloring algorithm.
    pub attempts: u64,
    /// Recolor phases summed over all executions.
    pub phases: u64,
    pub max_root_iterations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<FinalVerdicts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap_error: Option<String>,
}

/// `P̂(phases ≥ n) ≈ exp(intercept) · c^n` by least squares on the log
/// survival function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub c: f64,
    pub intercept: f64,
    pub from: u64,
    pub to: u64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub config: ExperimentConfig,
    pub k: Color,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub max_degree: usize,
    pub trials: Vec<TrialReport>,
    pub halting: u64,
    pub cap_errors: u64,
    pub restarts: u64,
    /// Phase count → number of trials.
    pub histogram: BTreeMap<u64, u64>,
    /// `(n, P̂(phases ≥ n))` at each observed phase count.
    pub survival: Vec<(u64, f64)>,
    pub tail_fit: Option<TailFit>,
    /// Fraction of halting trials whose output passed verification.
    pub pass_rate: Option<f64>,
    /// Root-loop iterations exceeding the element count, over all trials.
    pub root_bound_violations: u64,
}

impl ExperimentSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

/// Minimum survivors for a survival point to enter the tail fit.
pub const TAIL_MIN_SAMPLES: u64 = 20;

struct Context<'a> {
    g: &'a Graph,
    idx: Option<SpecialPairsIndex>,
    k: Color,
}

enum Outcome {
    Done {
        coloring: Coloring,
        report: MainReport,
        replay: Option<Validation>,
    },
    Capped {
        report: MainReport,
        message: String,
    },
}

fn capped<L: std::fmt::Debug>(err: RunError<L>, seed: u64) -> Outcome {
    let message = err.to_string();
    let report = match err {
        RunError::PhaseLimitExceeded { partial, .. } => single_report(seed, &partial.report),
        RunError::RestartLimitExceeded { report, .. } => *report,
    };
    Outcome::Capped { report, message }
}

fn single_report(seed: u64, run: &RunReport) -> MainReport {
    MainReport {
        seed,
        attempts: 1,
        total_phases: run.phases,
        max_root_iterations: run.root_iterations,
        halted: run.halted,
        final_run: Some(run.clone()),
        verdicts: None,
    }
}

fn run_one(cfg: &ExperimentConfig, ctx: &Context, seed: u64) -> Result<Outcome> {
    let mut stream = RandomStream::new(seed, ctx.k);
    let opts = cfg.main_options();
    let replay_stream = |report: &RunReport| RandomStream::at_position(seed, ctx.k, report.stream_start);
    let g = ctx.g;
    Ok(match (cfg.mode, ctx.idx.as_ref()) {
        (Mode::Edge, _) => {
            let (coloring, forest, report) = match cfg.algorithm {
                Algorithm::Main => match main_algorithm_edges(g, &mut stream, opts) {
                    Ok(o) => (o.coloring, o.forest, o.report),
                    Err(e) => return Ok(capped(e, seed)),
                },
                Algorithm::Single => match edge_color(g, &mut stream, opts.run) {
                    Ok(r) => {
                        let report = single_report(seed, &r.report);
                        (r.coloring, r.forest, report)
                    }
                    Err(e) => return Ok(capped(e, seed)),
                },
            };
            let replay = if cfg.replay {
                let run = report.final_run.as_ref().expect("halting run has a report");
                Some(edge_validation(g, &forest, &mut replay_stream(run))?)
            } else {
                None
            };
            Outcome::Done {
                coloring,
                report,
                replay,
            }
        }
        (Mode::Vertex, Some(idx)) => {
            let (coloring, forest, report) = match cfg.algorithm {
                Algorithm::Main => match main_algorithm_vertices(g, idx, &mut stream, opts) {
                    Ok(o) => (o.coloring, o.forest, o.report),
                    Err(e) => return Ok(capped(e, seed)),
                },
                Algorithm::Single => match vertex_color(g, idx, &mut stream, opts.run) {
                    Ok(r) => {
                        let report = single_report(seed, &r.report);
                        (r.coloring, r.forest, report)
                    }
                    Err(e) => return Ok(capped(e, seed)),
                },
            };
            let replay = if cfg.replay {
                let run = report.final_run.as_ref().expect("halting run has a report");
                Some(vertex_validation(g, idx, &forest, &mut replay_stream(run))?)
            } else {
                None
            };
            Outcome::Done {
                coloring,
                report,
                replay,
            }
        }
        (Mode::Vertex, None) => unreachable!("vertex context carries an index"),
    })
}

/// Verdicts on a halting output. For the main algorithm every flag must
/// hold; a single execution only promises to leave no bad structure, so
/// its flags are recorded but not enforced.
fn verdicts(cfg: &ExperimentConfig, ctx: &Context, c: &Coloring) -> FinalVerdicts {
    match (cfg.mode, ctx.idx.as_ref()) {
        (Mode::Edge, _) => FinalVerdicts {
            proper: verify::is_proper_edge(ctx.g, c).ok,
            strong: verify::is_strongly_proper(ctx.g, c).ok,
            acyclic: verify::is_acyclic_edge(ctx.g, c).ok,
        },
        (Mode::Vertex, Some(idx)) => FinalVerdicts {
            proper: verify::is_proper_vertex(ctx.g, c).ok,
            strong: verify::is_specially_proper(ctx.g, idx, c).ok,
            acyclic: verify::is_acyclic_vertex(ctx.g, c).ok,
        },
        (Mode::Vertex, None) => unreachable!(),
    }
}

pub fn run_trials(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let g = cfg.graph.load()?;
    run_trials_on(cfg, &g)
}

/// As [`run_trials`], on an already loaded graph.
pub fn run_trials_on(cfg: &ExperimentConfig, g: &Graph) -> Result<ExperimentSummary> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("trials must be at least 1".into()));
    }
    let (idx, default_k) = match cfg.mode {
        Mode::Edge => (None, default_edge_palette(g)),
        Mode::Vertex => (
            Some(SpecialPairsIndex::build(g, cfg.alpha)?),
            default_vertex_palette(g, cfg.alpha)?,
        ),
    };
    let k = cfg.k.unwrap_or(default_k);
    if k == 0 {
        return Err(Error::InvalidParams("palette must have at least one color".into()));
    }
    let ctx = Context { g, idx, k };
    let elements = match cfg.mode {
        Mode::Edge => g.edge_count(),
        Mode::Vertex => g.vertex_count(),
    } as u64;

    let trials: Vec<TrialReport> = (0..cfg.trials)
        .into_par_iter()
        .map(|index| -> Result<TrialReport> {
            let seed = child_seed(cfg.base_seed, index);
            match run_one(cfg, &ctx, seed)? {
                Outcome::Done {
                    coloring,
                    report,
                    replay,
                } => {
                    let v = verdicts(cfg, &ctx, &coloring);
                    let enforced = cfg.algorithm == Algorithm::Main;
                    if enforced && !(v.proper && v.strong && v.acyclic) {
                        return Err(Error::VerificationFailed(format!(
                            "trial {index} (seed {seed}) returned a coloring failing {v:?}"
                        )));
                    }
                    if let Some(Validation::Failure { step }) = replay {
                        return Err(Error::VerificationFailed(format!(
                            "trial {index} (seed {seed}): replay of its own forest failed at step {step}"
                        )));
                    }
                    Ok(TrialReport {
                        index,
                        seed,
                        halted: true,
                        attempts: report.attempts,
                        phases: report.total_phases,
                        max_root_iterations: report.max_root_iterations,
                        verdicts: Some(v),
                        replay_ok: replay.map(|r| r.is_success()),
                        cap_error: None,
                    })
                }
                Outcome::Capped { report, message } => {
                    debug!("trial {index}: {message}");
                    Ok(TrialReport {
                        index,
                        seed,
                        halted: false,
                        attempts: report.attempts,
                        phases: report.total_phases,
                        max_root_iterations: report.max_root_iterations,
                        verdicts: None,
                        replay_ok: None,
                        cap_error: Some(message),
                    })
                }
            }
        })
        .collect::<Result<_>>()?;

    let halting = trials.iter().filter(|t| t.halted).count() as u64;
    let mut histogram = BTreeMap::new();
    for t in &trials {
        *histogram.entry(t.phases).or_insert(0u64) += 1;
    }
    let survival = survival_function(&histogram);
    let tail_fit = fit_tail(&histogram);
    let passed = trials
        .iter()
        .filter(|t| t.verdicts.is_some_and(|v| v.proper && v.strong && v.acyclic))
        .count() as f64;
    Ok(ExperimentSummary {
        config: cfg.clone(),
        k,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        max_degree: g.max_degree(),
        halting,
        cap_errors: cfg.trials - halting,
        restarts: trials.iter().map(|t| t.attempts.saturating_sub(1)).sum(),
        histogram,
        survival,
        tail_fit,
        pass_rate: (halting > 0).then(|| passed / halting as f64),
        root_bound_violations: trials
            .iter()
            .filter(|t| t.max_root_iterations > elements)
            .count() as u64,
        trials,
    })
}

/// Counts of trials with at least `n` phases, at each observed `n`.
fn at_least(histogram: &BTreeMap<u64, u64>) -> Vec<(u64, u64)> {
    let mut remaining: u64 = histogram.values().sum();
    let mut out = Vec::with_capacity(histogram.len());
    for (&n, &count) in histogram {
        out.push((n, remaining));
        remaining -= count;
    }
    out
}

pub fn survival_function(histogram: &BTreeMap<u64, u64>) -> Vec<(u64, f64)> {
    let total: u64 = histogram.values().sum();
    at_least(histogram)
        .into_iter()
        .map(|(n, s)| (n, s as f64 / total as f64))
        .collect()
}

/// Least squares of `ln P̂(phases ≥ n)` on `n` over the points with at
/// least [`TAIL_MIN_SAMPLES`] survivors.
pub fn fit_tail(histogram: &BTreeMap<u64, u64>) -> Option<TailFit> {
    let total: u64 = histogram.values().sum();
    let pts: Vec<(f64, f64)> = at_least(histogram)
        .into_iter()
        .filter(|&(_, s)| s >= TAIL_MIN_SAMPLES)
        .map(|(n, s)| (n as f64, (s as f64 / total as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(TailFit {
        c: slope.exp(),
        intercept: my - slope * mx,
        from: pts[0].0 as u64,
        to: pts[pts.len() - 1].0 as u64,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(spec: &str, mode: Mode) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(GraphSource::Generator(spec.parse().unwrap()), mode);
        c.trials = 20;
        c.base_seed = 11;
        c.replay = true;
        c
    }

    #[test]
    fn c6_edges_all_verified() {
        let s = run_trials(&cfg("cycle:6", Mode::Edge)).unwrap();
        assert_eq!(s.k, 3);
        assert_eq!(s.halting, 20);
        assert_eq!(s.pass_rate, Some(1.0));
        assert_eq!(s.histogram.values().sum::<u64>(), 20);
        assert!(s.trials.iter().all(|t| t.replay_ok == Some(true)));
        assert!(s.trials.windows(2).all(|w| w[0].index + 1 == w[1].index));
    }

    #[test]
    fn reproducible_bytes() {
        let c = cfg("complete:4", Mode::Edge);
        assert_eq!(run_trials(&c).unwrap().to_json(), run_trials(&c).unwrap().to_json());
        let v = cfg("cycle:6", Mode::Vertex);
        assert_eq!(run_trials(&v).unwrap().to_json(), run_trials(&v).unwrap().to_json());
    }

    #[test]
    fn caps_are_aggregated() {
        let mut c = cfg("cycle:6", Mode::Edge);
        c.k = Some(1);
        c.phase_cap = 5;
        let s = run_trials(&c).unwrap();
        assert_eq!(s.cap_errors, 20);
        assert_eq!(s.pass_rate, None);
        assert!(s.trials.iter().all(|t| t.cap_error.is_some()));
    }

    #[test]
    fn survival_and_fit() {
        let hist: BTreeMap<u64, u64> = [(0, 50), (1, 25), (2, 13), (3, 6), (4, 6)].into();
        let s = survival_function(&hist);
        assert_eq!(s[0], (0, 1.0));
        assert!(s.windows(2).all(|w| w[0].1 >= w[1].1));
        let fit = fit_tail(&hist).unwrap();
        assert_eq!(fit.points, 3);
        assert!(fit.c < 1.0);
        assert!(fit_tail(&[(3, 100)].into()).is_none());
    }

    #[test]
    fn zero_trials_rejected() {
        let mut c = cfg("cycle:6", Mode::Edge);
        c.trials = 0;
        assert!(run_trials(&c).is_err());
    }
}

//! `acyclic`: command-line front end.
//!
//! Every subcommand prints a JSON document to stdout (and to `--out` when
//! given). Exit codes: 0 success, 1 a phase or restart cap was hit,
//! 2 a verification failed, 3 bad input.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use acyclic_core::asymptotics::{
    edge_rate, edge_series, vertex_rate, vertex_series, vertex_threshold,
};
use acyclic_core::edge::{
    default_edge_palette, edge_color, edge_validation, ln_forest_weight, main_algorithm_edges,
};
use acyclic_core::generate::GraphSpec;
use acyclic_core::harness::{run_trials, Algorithm, ExperimentConfig, GraphSource};
use acyclic_core::io::{self, GraphFormat};
use acyclic_core::special::{default_vertex_palette, SpecialPairsIndex};
use acyclic_core::verify::{self, Mode};
use acyclic_core::vertex::{
    ln_vertex_forest_weight, main_algorithm_vertices, vertex_color, vertex_validation,
};
use acyclic_core::{
    Color, Coloring, Error, Graph, MainOptions, RandomStream, RunError, RunOptions,
};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "acyclic", version, about = "Randomized acyclic edge and vertex coloring")]
struct Cli {
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph, e.g. `gen cycle:6` or `gen gnp:40,0.15,1`.
    Gen {
        spec: GraphSpec,
        #[arg(long, value_enum, default_value_t = Format::Edgelist)]
        format: Format,
        /// Write the graph in `--format` to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Edge coloring with `2Δ−1` colors by default.
    ColorEdges {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Vertex coloring with `⌈αΔ^{4/3}⌉+Δ+1` colors by default.
    ColorVertices {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Check a coloring file (`index color` lines).
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
    },
    /// Greedy colorings and the exact brute-force minimum on tiny graphs.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Largest palette tried by the brute-force search; skipped if absent.
        #[arg(long)]
        k_max: Option<Color>,
    },
    /// Growth rate of the phase-count series.
    Rate {
        #[arg(long)]
        delta: u64,
        /// Vertex analysis with this α; edge analysis if absent.
        #[arg(long)]
        alpha: Option<f64>,
        /// Also compute series coefficients up to this order.
        #[arg(long)]
        series: Option<usize>,
        /// Locate the α where the vertex rate crosses 1 in `[lo, hi]`.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        threshold: Option<Vec<f64>>,
    },
    /// Seeded Monte Carlo trials with per-output verification.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        k: Option<Color>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = RunOptions::default().phase_cap)]
        phase_cap: u64,
        #[arg(long, default_value_t = MainOptions::default().restart_cap)]
        restart_cap: u64,
        /// Run the coloring algorithm once per trial instead of until the
        /// strong condition holds.
        #[arg(long)]
        single: bool,
        /// Replay each halting run's witness forest.
        #[arg(long)]
        replay: bool,
    },
    /// Replay a witness forest file against a seeded stream.
    ValidateForest {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        forest: PathBuf,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        k: Option<Color>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stream position to start from.
        #[arg(long, default_value_t = 0)]
        skip: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dimacs,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Edgelist => GraphFormat::EdgeList,
            Format::Dimacs => GraphFormat::Dimacs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Edge,
    Vertex,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Edge => Mode::Edge,
            ModeArg::Vertex => Mode::Vertex,
        }
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Graph file.
    #[arg(long, required_unless_present = "gen", conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generated graph, e.g. `complete:4`.
    #[arg(long)]
    gen: Option<GraphSpec>,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    format: Format,
}

impl GraphArgs {
    fn source(&self) -> GraphSource {
        match (&self.graph, &self.gen) {
            (Some(path), _) => GraphSource::File {
                path: path.clone(),
                dimacs: matches!(self.format, Format::Dimacs),
            },
            (None, Some(spec)) => GraphSource::Generator(spec.clone()),
            (None, None) => unreachable!("clap requires one graph source"),
        }
    }

    fn load(&self) -> Result<Graph> {
        let source = self.source();
        source.load().with_context(|| format!("loading {source:?}"))
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    k: Option<Color>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = RunOptions::default().phase_cap)]
    phase_cap: u64,
    #[arg(long, default_value_t = MainOptions::default().restart_cap)]
    restart_cap: u64,
    /// One execution of the coloring algorithm, without restarts.
    #[arg(long)]
    single: bool,
    /// Write the coloring as `index color` lines.
    #[arg(long)]
    coloring_out: Option<PathBuf>,
    /// Write the witness forest of the final execution.
    #[arg(long)]
    forest_out: Option<PathBuf>,
}

impl RunArgs {
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

/// A finished command: its JSON document and exit code.
struct Output {
    json: Value,
    code: u8,
}

impl Output {
    fn ok(json: Value) -> Self {
        Output { json, code: 0 }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cap_error<L: std::fmt::Debug>(e: &RunError<L>) -> Value {
    match e {
        RunError::PhaseLimitExceeded { cap, partial } => json!({
            "error": "phase_limit_exceeded",
            "cap": cap,
            "report": partial.report,
        }),
        RunError::RestartLimitExceeded { cap, report } => json!({
            "error": "restart_limit_exceeded",
            "cap": cap,
            "report": report,
        }),
    }
}

fn verdicts_json(g: &Graph, c: &Coloring, mode: Mode, idx: Option<&SpecialPairsIndex>) -> (Value, bool) {
    let (proper, acyclic, strong) = match mode {
        Mode::Edge => (
            verify::is_proper_edge(g, c),
            verify::is_acyclic_edge(g, c),
            ("strongly_proper", verify::is_strongly_proper(g, c)),
        ),
        Mode::Vertex => (
            verify::is_proper_vertex(g, c),
            verify::is_acyclic_vertex(g, c),
            (
                "specially_proper",
                verify::is_specially_proper(g, idx.expect("vertex mode has an index"), c),
            ),
        ),
    };
    let ok = proper.ok && acyclic.ok;
    let mut v = json!({ "proper": proper.to_json(), "acyclic": acyclic.to_json() });
    v[strong.0] = strong.1.to_json();
    (v, ok)
}

fn graph_json(g: &Graph) -> Value {
    json!({
        "vertex_count": g.vertex_count(),
        "edge_count": g.edge_count(),
        "max_degree": g.max_degree(),
    })
}

fn color_edges(graph: &GraphArgs, run: &RunArgs) -> Result<Output> {
    let g = graph.load()?;
    let k = run.k.unwrap_or_else(|| default_edge_palette(&g));
    let mut stream = RandomStream::new(run.seed, k);
    let (coloring, forest, report) = if run.single {
        match edge_color(&g, &mut stream, run.main_options().run) {
            Ok(r) => (r.coloring, r.forest, serde_json::to_value(&r.report)?),
            Err(e) => return Ok(Output { json: cap_error(&e), code: 1 }),
        }
    } else {
        match main_algorithm_edges(&g, &mut stream, run.main_options()) {
            Ok(o) => (o.coloring, o.forest, serde_json::to_value(&o.report)?),
            Err(e) => return Ok(Output { json: cap_error(&e), code: 1 }),
        }
    };
    if let Some(p) = &run.coloring_out {
        write_file(p, &io::write_coloring(&coloring))?;
    }
    if let Some(p) = &run.forest_out {
        write_file(p, &io::write_edge_forest(&g, &forest))?;
    }
    let (verdicts, ok) = verdicts_json(&g, &coloring, Mode::Edge, None);
    let code = if ok || run.single { 0 } else { 2 };
    Ok(Output {
        json: json!({
            "mode": "edge",
            "graph": graph_json(&g),
            "k": k,
            "seed": run.seed,
            "report": report,
            "colors": coloring.colors,
            "colors_used": coloring.colors_used(),
            "verdicts": verdicts,
            "forest_nodes": forest.len(),
            "ln_forest_weight": ln_forest_weight(&forest, g.max_degree()),
        }),
        code,
    })
}

fn color_vertices(graph: &GraphArgs, run: &RunArgs, alpha: f64) -> Result<Output> {
    let g = graph.load()?;
    let idx = SpecialPairsIndex::build(&g, alpha)?;
    let k = match run.k {
        Some(k) => k,
        None => default_vertex_palette(&g, alpha)?,
    };
    let mut stream = RandomStream::new(run.seed, k);
    let (coloring, forest, report) = if run.single {
        match vertex_color(&g, &idx, &mut stream, run.main_options().run) {
            Ok(r) => (r.coloring, r.forest, serde_json::to_value(&r.report)?),
            Err(e) => return Ok(Output { json: cap_error(&e), code: 1 }),
        }
    } else {
        match main_algorithm_vertices(&g, &idx, &mut stream, run.main_options()) {
            Ok(o) => (o.coloring, o.forest, serde_json::to_value(&o.report)?),
            Err(e) => return Ok(Output { json: cap_error(&e), code: 1 }),
        }
    };
    if let Some(p) = &run.coloring_out {
        write_file(p, &io::write_coloring(&coloring))?;
    }
    if let Some(p) = &run.forest_out {
        write_file(p, &io::write_vertex_forest(&forest))?;
    }
    let (verdicts, ok) = verdicts_json(&g, &coloring, Mode::Vertex, Some(&idx));
    let code = if ok || run.single { 0 } else { 2 };
    Ok(Output {
        json: json!({
            "mode": "vertex",
            "graph": graph_json(&g),
            "alpha": alpha,
            "special_cap": idx.cap(),
            "k": k,
            "seed": run.seed,
            "report": report,
            "colors": coloring.colors,
            "colors_used": coloring.colors_used(),
            "verdicts": verdicts,
            "forest_nodes": forest.len(),
            "ln_forest_weight": ln_vertex_forest_weight(&forest, alpha, g.max_degree()),
        }),
        code,
    })
}

fn verify_cmd(graph: &GraphArgs, coloring: &Path, mode: Mode, alpha: f64) -> Result<Output> {
    let g = graph.load()?;
    let len = match mode {
        Mode::Edge => g.edge_count(),
        Mode::Vertex => g.vertex_count(),
    };
    let text = fs::read_to_string(coloring).with_context(|| format!("reading {}", coloring.display()))?;
    let c = io::parse_coloring(&text, len)?;
    let idx = match mode {
        Mode::Vertex => Some(SpecialPairsIndex::build(&g, alpha)?),
        Mode::Edge => None,
    };
    let (verdicts, ok) = verdicts_json(&g, &c, mode, idx.as_ref());
    Ok(Output {
        json: json!({ "mode": mode, "graph": graph_json(&g), "verdicts": verdicts }),
        code: if ok { 0 } else { 2 },
    })
}

fn oracle_cmd(graph: &GraphArgs, mode: Mode, alpha: f64, k_max: Option<Color>) -> Result<Output> {
    let g = graph.load()?;
    let (greedy, bound, idx) = match mode {
        Mode::Edge => (verify::greedy_strongly_proper(&g), default_edge_palette(&g), None),
        Mode::Vertex => (
            verify::greedy_specially_proper(&g, alpha)?,
            default_vertex_palette(&g, alpha)?,
            Some(SpecialPairsIndex::build(&g, alpha)?),
        ),
    };
    let (verdicts, _) = verdicts_json(&g, &greedy, mode, idx.as_ref());
    let minimum = match k_max {
        Some(k) => match verify::brute_force_min_acyclic(&g, mode, k) {
            Ok(v) => json!(v),
            Err(e @ Error::RefuseTooLarge { .. }) => json!({ "refused": e.to_string() }),
            Err(e) => return Err(e.into()),
        },
        None => Value::Null,
    };
    let within = greedy.max_color() <= bound;
    Ok(Output {
        json: json!({
            "mode": mode,
            "graph": graph_json(&g),
            "greedy": {
                "colors": greedy.colors,
                "max_color": greedy.max_color(),
                "bound": bound,
                "within_bound": within,
                "verdicts": verdicts,
            },
            "brute_force_min_acyclic": minimum,
        }),
        code: 0,
    })
}

fn rate_cmd(delta: u64, alpha: Option<f64>, series: Option<usize>) -> Result<Output> {
    let result = match alpha {
        Some(a) => vertex_rate(a, delta)?,
        None => edge_rate(delta)?,
    };
    let mut v = json!({
        "delta": result.delta,
        "q": result.q,
        "tau": result.tau,
        "rho": result.rho,
        "residual": result.residual,
    });
    if let Some(a) = result.alpha {
        v["alpha"] = json!(a);
    }
    if let Some(n) = series {
        let s = match alpha {
            Some(a) => vertex_series(a, delta, n)?,
            None => edge_series(delta, n)?,
        };
        v["series"] = json!({
            "order": n,
            "ln_coeffs": s.ln_coeffs,
            "ratio": if n >= 1 { json!(s.ratio(n)) } else { Value::Null },
        });
    }
    Ok(Output::ok(v))
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    graph: &GraphArgs,
    mode: Mode,
    k: Option<Color>,
    alpha: f64,
    trials: u64,
    seed: u64,
    phase_cap: u64,
    restart_cap: u64,
    single: bool,
    replay: bool,
    out: Option<&Path>,
) -> Result<Output> {
    let mut cfg = ExperimentConfig::new(graph.source(), mode);
    cfg.k = k;
    cfg.alpha = alpha;
    cfg.trials = trials;
    cfg.base_seed = seed;
    cfg.phase_cap = phase_cap;
    cfg.restart_cap = restart_cap;
    cfg.algorithm = if single { Algorithm::Single } else { Algorithm::Main };
    cfg.replay = replay;
    cfg.out = out.map(Path::to_path_buf);
    match run_trials(&cfg) {
        Ok(s) => {
            let code = if s.cap_errors > 0 { 1 } else { 0 };
            Ok(Output {
                json: serde_json::to_value(&s)?,
                code,
            })
        }
        Err(Error::VerificationFailed(msg)) => Ok(Output {
            json: json!({ "error": "verification_failed", "message": msg }),
            code: 2,
        }),
        Err(e) => Err(e.into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn validate_forest(
    graph: &GraphArgs,
    forest: &Path,
    mode: Mode,
    k: Option<Color>,
    alpha: f64,
    seed: u64,
    skip: u64,
) -> Result<Output> {
    let g = graph.load()?;
    let text = fs::read_to_string(forest).with_context(|| format!("reading {}", forest.display()))?;
    let result = match mode {
        Mode::Edge => {
            let f = io::parse_edge_forest(&g, &text)?;
            let k = k.unwrap_or_else(|| default_edge_palette(&g));
            let mut s = RandomStream::at_position(seed, k, skip);
            edge_validation(&g, &f, &mut s)
                .map(|v| (v, f.len(), ln_forest_weight(&f, g.max_degree()), k))
        }
        Mode::Vertex => {
            let idx = SpecialPairsIndex::build(&g, alpha)?;
            let f = io::parse_vertex_forest(&g, &text)?;
            let k = match k {
                Some(k) => k,
                None => default_vertex_palette(&g, alpha)?,
            };
            let mut s = RandomStream::at_position(seed, k, skip);
            vertex_validation(&g, &idx, &f, &mut s)
                .map(|v| (v, f.len(), ln_vertex_forest_weight(&f, alpha, g.max_degree()), k))
        }
    };
    match result {
        Ok((validation, nodes, ln_weight, k)) => Ok(Output::ok(json!({
            "mode": mode,
            "k": k,
            "seed": seed,
            "skip": skip,
            "nodes": nodes,
            "validation": validation,
            "ln_weight": ln_weight,
        }))),
        Err(e @ Error::InfeasibleForest(_)) => Ok(Output {
            json: json!({ "error": "infeasible_forest", "message": e.to_string() }),
            code: 2,
        }),
        Err(e) => Err(e.into()),
    }
}

fn gen_cmd(spec: &GraphSpec, format: Format, emit: Option<&Path>) -> Result<Output> {
    let g = spec.build()?;
    if let Some(p) = emit {
        write_file(p, &io::write_graph(&g, format.into()))?;
    }
    let mut v = graph_json(&g);
    v["spec"] = json!(spec.to_string());
    v["edges"] = json!(g.edges());
    Ok(Output::ok(v))
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Gen { spec, format, emit } => gen_cmd(spec, *format, emit.as_deref()),
        Command::ColorEdges { graph, run } => color_edges(graph, run),
        Command::ColorVertices { graph, run, alpha } => color_vertices(graph, run, *alpha),
        Command::Verify { graph, coloring, mode, alpha } => {
            verify_cmd(graph, coloring, (*mode).into(), *alpha)
        }
        Command::Oracle { graph, mode, alpha, k_max } => {
            oracle_cmd(graph, (*mode).into(), *alpha, *k_max)
        }
        Command::Rate { delta, alpha, series, threshold } => {
            match threshold.as_deref() {
                Some(&[lo, hi]) => {
                    if alpha.is_some() {
                        bail!("--threshold searches over α; do not pass --alpha with it");
                    }
                    let a = vertex_threshold(*delta, lo, hi)?;
                    let rho = vertex_rate(a, *delta)?.rho;
                    Ok(Output::ok(json!({ "delta": delta, "threshold_alpha": a, "rho": rho })))
                }
                _ => rate_cmd(*delta, *alpha, *series),
            }
        }
        Command::Simulate {
            graph,
            mode,
            k,
            alpha,
            trials,
            seed,
            phase_cap,
            restart_cap,
            single,
            replay,
        } => simulate(
            graph, (*mode).into(), *k, *alpha, *trials, *seed, *phase_cap, *restart_cap, *single,
            *replay, out,
        ),
        Command::ValidateForest { graph, forest, mode, k, alpha, seed, skip } => {
            validate_forest(graph, forest, (*mode).into(), *k, *alpha, *seed, *skip)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the bad-input code; help and version are fine
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(output) => {
            let text = serde_json::to_string_pretty(&output.json).expect("JSON value serializes");
            // a closed pipe (e.g. `| head`) is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if let Some(p) = &cli.out {
                if let Err(e) = write_file(p, &format!("{text}\n")) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(output.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

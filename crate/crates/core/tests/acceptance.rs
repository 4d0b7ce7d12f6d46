//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::Instant;

use acyclic_core::asymptotics::{edge_rate, edge_series, vertex_rate, vertex_series, vertex_threshold};
use acyclic_core::cycle::{CycleRef, PathRef};
use acyclic_core::edge::{default_edge_palette, edge_validation, main_algorithm_edges, EdgeForest, EdgeLabel};
use acyclic_core::generate::{self, GraphSpec};
use acyclic_core::harness::{run_trials_on, Algorithm, ExperimentConfig, GraphSource};
use acyclic_core::special::{bad_4cycle_count_check, default_vertex_palette, SpecialPairsIndex};
use acyclic_core::stream::child_seed;
use acyclic_core::verify::{
    brute_force_min_acyclic, is_acyclic_edge, is_acyclic_vertex, is_proper_edge, is_proper_vertex, Mode,
};
use acyclic_core::vertex::{main_algorithm_vertices, vertex_validation, BadSet, VertexForest, VertexLabel};
use acyclic_core::{EdgeId, Graph, MainOptions, RandomStream};

const TRIALS_PER_GRAPH: u64 = 100;
const MONTE_CARLO_SEEDS: u64 = 100_000;
const BASE_SEED: u64 = 2024;

struct Verdict {
    pass: bool,
    detail: String,
}

fn suite() -> Vec<GraphSpec> {
    let mut specs: Vec<GraphSpec> = ["cycle:6", "cycle:8", "cycle:10", "complete:4", "complete:5"]
        .iter()
        .chain(&["complete_bipartite:3,3", "hypercube:3"])
        .map(|s| s.parse().unwrap())
        .collect();
    specs.extend((1..=5).map(|seed| GraphSpec::Gnp { n: 40, p: 0.15, seed }));
    specs.push(GraphSpec::RandomRegular { n: 30, d: 4, seed: 1 });
    specs
}

/// Root-loop bound tallies, filled by every criterion that runs the
/// algorithms.
#[derive(Default)]
struct RootLoops {
    edge_runs: u64,
    edge_violations: u64,
    vertex_runs: u64,
    vertex_violations: u64,
}

fn c1_edges(suite: &[(GraphSpec, Graph)], loops: &mut RootLoops) -> Verdict {
    let mut failures = Vec::new();
    for (spec, g) in suite {
        let k = default_edge_palette(g);
        let mut ok = 0;
        for t in 0..TRIALS_PER_GRAPH {
            let mut s = RandomStream::new(child_seed(BASE_SEED, t), k);
            match main_algorithm_edges(g, &mut s, MainOptions::default()) {
                Ok(out) => {
                    loops.edge_runs += 1;
                    if out.report.max_root_iterations > g.edge_count() as u64 {
                        loops.edge_violations += 1;
                    }
                    if is_proper_edge(g, &out.coloring).ok && is_acyclic_edge(g, &out.coloring).ok {
                        ok += 1;
                    } else {
                        failures.push(format!("{spec} trial {t}: output not proper and acyclic"));
                        break;
                    }
                }
                Err(e) => {
                    failures.push(format!("{spec}: {ok}/{TRIALS_PER_GRAPH} before trial {t} hit: {e}"));
                    break;
                }
            }
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} graphs x {TRIALS_PER_GRAPH} trials verified", suite.len())
        } else {
            failures.join("; ")
        },
    }
}

fn c2_oracle() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, g) in [
        ("C4", generate::cycle(4)),
        ("C6", generate::cycle(6)),
        ("K4", generate::complete(4)),
        ("K23", generate::complete_bipartite(2, 3)),
    ] {
        let bound = default_edge_palette(&g);
        let k = brute_force_min_acyclic(&g, Mode::Edge, bound).unwrap();
        pass &= k.is_some_and(|k| k <= bound);
        parts.push(format!("{name} {k:?}<={bound}"));
    }
    Verdict {
        pass,
        detail: parts.join(", "),
    }
}

/// Success frequency of replaying `validate` over seeds `0..n` against
/// `p`, within three binomial standard errors.
fn monte_carlo(p: f64, mut validate: impl FnMut(u64) -> bool) -> (bool, String) {
    let hits = (0..MONTE_CARLO_SEEDS).filter(|&s| validate(s)).count() as f64;
    let n = MONTE_CARLO_SEEDS as f64;
    let rate = hits / n;
    let se = (p * (1.0 - p) / n).sqrt();
    let z = (rate - p) / se;
    (z.abs() <= 3.0, format!("rate {rate:.6} vs {p:.6} (z = {z:+.2})"))
}

fn c3_edge_validation() -> Verdict {
    let g = generate::cycle(6);
    let mut forest = EdgeForest::new();
    forest.push(
        EdgeLabel {
            edge: EdgeId(0),
            cycle: CycleRef::new(&g, &[0, 1, 2, 3, 4, 5]).unwrap(),
        },
        None,
    );
    let (pass, detail) = monte_carlo(1.0 / 81.0, |s| {
        edge_validation(&g, &forest, &mut RandomStream::new(s, 3))
            .unwrap()
            .is_success()
    });
    Verdict { pass, detail }
}

fn c4_vertex_validation() -> Verdict {
    let k = 6;
    // K_{3,3} with α = 0.2: each vertex has one special partner, and the
    // cycle 0-1-2-3 avoids them, so it belongs to the family.
    let k33 = generate::complete_bipartite(3, 3);
    let k33 = Graph::new(6, &k33.edges().iter().map(|&(u, v)| (2 * u, 2 * (v - 3) + 1)).collect::<Vec<_>>()).unwrap();
    let idx = SpecialPairsIndex::build(&k33, 0.2).unwrap();
    let mut four = VertexForest::new();
    four.push(
        VertexLabel {
            vertex: 0,
            set: BadSet::FourCycle(CycleRef::new(&k33, &[0, 1, 2, 3]).unwrap()),
        },
        None,
    );
    let (p4, d4) = monte_carlo(1.0 / 36.0, |s| {
        vertex_validation(&k33, &idx, &four, &mut RandomStream::new(s, k))
            .unwrap()
            .is_success()
    });

    let p6 = generate::path(6);
    let idx6 = SpecialPairsIndex::build(&p6, 1.0).unwrap();
    let mut five = VertexForest::new();
    five.push(
        VertexLabel {
            vertex: 0,
            set: BadSet::FivePath(PathRef::new(&p6, &[0, 1, 2, 3, 4, 5]).unwrap()),
        },
        None,
    );
    let (p5, d5) = monte_carlo(1.0 / 1296.0, |s| {
        vertex_validation(&p6, &idx6, &five, &mut RandomStream::new(s, k))
            .unwrap()
            .is_success()
    });
    Verdict {
        pass: p4 && p5,
        detail: format!("4-cycle {d4}; 5-path {d5}"),
    }
}

fn c5_replay(suite: &[(GraphSpec, Graph)], loops: &mut RootLoops) -> Verdict {
    const PER_MODE: u64 = 500;
    let mut halting = 0;
    let mut replayed = 0;
    let mut errors = Vec::new();
    let count = suite.len() as u64;
    for mode in [Mode::Edge, Mode::Vertex] {
        for (i, (spec, g)) in suite.iter().enumerate() {
            let mut cfg = ExperimentConfig::new(GraphSource::Generator(spec.clone()), mode);
            cfg.algorithm = Algorithm::Single;
            cfg.trials = PER_MODE / count + u64::from((i as u64) < PER_MODE % count);
            cfg.base_seed = BASE_SEED + i as u64;
            cfg.replay = true;
            match run_trials_on(&cfg, g) {
                Ok(s) => {
                    halting += s.halting;
                    replayed += s.trials.iter().filter(|t| t.replay_ok == Some(true)).count() as u64;
                    let (runs, violations) = match mode {
                        Mode::Edge => (&mut loops.edge_runs, &mut loops.edge_violations),
                        Mode::Vertex => (&mut loops.vertex_runs, &mut loops.vertex_violations),
                    };
                    *runs += s.halting;
                    *violations += s.root_bound_violations;
                }
                Err(e) => errors.push(format!("{mode} {spec}: {e}")),
            }
        }
    }
    Verdict {
        pass: errors.is_empty() && halting >= 2 * PER_MODE && replayed == halting,
        detail: format!("{replayed}/{halting} halting runs replayed {}", errors.join("; ")),
    }
}

fn c6_edge_rates() -> Verdict {
    let lo = 5f64.sqrt() - 2.0;
    let hi = 4.0 / 13.0;
    let mut bad = Vec::new();
    let mut worst = 0f64;
    for delta in 2..=1000 {
        match edge_rate(delta) {
            Ok(r) => {
                worst = worst.max(r.residual.abs());
                if r.residual.abs() > 1e-9 || !(r.tau > lo && r.tau < hi) || r.rho >= 1.0 {
                    bad.push(delta);
                }
            }
            Err(_) => bad.push(delta),
        }
    }
    let q2 = edge_rate(2).map(|r| r.q).unwrap_or(f64::NAN);
    Verdict {
        pass: bad.is_empty() && q2 == 1.0 / 3.0,
        detail: format!("Δ in 2..=1000, {} out of range, max residual {worst:.1e}, q(2) = {q2}", bad.len()),
    }
}

fn c7_vertex_threshold() -> Verdict {
    let delta = 1_000_000_000;
    let rho = |a: f64| vertex_rate(a, delta).map(|r| r.rho).unwrap_or(f64::NAN);
    let (r64, r60) = (rho(0.64), rho(0.60));
    let target = 4f64.powf(-1.0 / 3.0);
    let crossing = vertex_threshold(delta, 0.5, 1.0);
    let near = crossing.as_ref().is_ok_and(|a| (a - target).abs() <= 1e-3);
    Verdict {
        pass: r64 < 1.0 && r60 >= 1.0 && near,
        detail: format!(
            "ρ(0.64) = {r64:.4}, ρ(0.60) = {r60:.4}, crossing at {} vs 4^(-1/3) = {target:.5}",
            crossing.map_or_else(|e| e.to_string(), |a| format!("{a:.5}"))
        ),
    }
}

fn c8_four_cycle_bound(suite: &[(GraphSpec, Graph)]) -> Verdict {
    let mut violations = Vec::new();
    let mut checked = 0;
    for (spec, g) in suite {
        for alpha in [0.7, 1.0] {
            let idx = SpecialPairsIndex::build(g, alpha).unwrap();
            match bad_4cycle_count_check(g, &idx) {
                Ok(counts) => checked += counts.len(),
                Err(e) => violations.push(format!("{spec} α={alpha}: {e}")),
            }
        }
    }
    Verdict {
        pass: violations.is_empty(),
        detail: format!("{checked} vertex checks, {} violations {}", violations.len(), violations.join("; ")),
    }
}

fn c9_root_loops(loops: &RootLoops) -> Verdict {
    Verdict {
        pass: loops.edge_violations == 0 && loops.vertex_violations == 0 && loops.edge_runs > 0 && loops.vertex_runs > 0,
        detail: format!(
            "edge {}/{} runs over m, vertex {}/{} runs over l",
            loops.edge_violations, loops.edge_runs, loops.vertex_violations, loops.vertex_runs
        ),
    }
}

fn c10_series() -> Verdict {
    let n = 500;
    let e_rho = edge_rate(3).unwrap().rho;
    let e_ratio = edge_series(3, n).unwrap().ratio(n);
    let v_rho = vertex_rate(1.0, 10).unwrap().rho;
    let v_ratio = vertex_series(1.0, 10, n).unwrap().ratio(n);
    let e_err = (e_ratio / e_rho - 1.0).abs();
    let v_err = (v_ratio / v_rho - 1.0).abs();
    Verdict {
        pass: e_err <= 0.02 && v_err <= 0.02,
        detail: format!(
            "edge {e_ratio:.5} vs {e_rho:.5} ({:.2}%), vertex {v_ratio:.5} vs {v_rho:.5} ({:.2}%)",
            100.0 * e_err,
            100.0 * v_err
        ),
    }
}

fn c11_vertices(suite: &[(GraphSpec, Graph)], loops: &mut RootLoops) -> Verdict {
    let mut failures = Vec::new();
    let mut graphs = 0;
    for (spec, g) in suite.iter().filter(|(_, g)| g.max_degree() <= 6) {
        graphs += 1;
        let idx = SpecialPairsIndex::build(g, 1.0).unwrap();
        let k = default_vertex_palette(g, 1.0).unwrap();
        for t in 0..TRIALS_PER_GRAPH {
            let mut s = RandomStream::new(child_seed(BASE_SEED, t), k);
            match main_algorithm_vertices(g, &idx, &mut s, MainOptions::default()) {
                Ok(out) => {
                    loops.vertex_runs += 1;
                    if out.report.max_root_iterations > g.vertex_count() as u64 {
                        loops.vertex_violations += 1;
                    }
                    if !(is_proper_vertex(g, &out.coloring).ok && is_acyclic_vertex(g, &out.coloring).ok) {
                        failures.push(format!("{spec} trial {t}: output not proper and acyclic"));
                        break;
                    }
                }
                Err(e) => {
                    failures.push(format!("{spec}: {t}/{TRIALS_PER_GRAPH} before a trial hit: {e}"));
                    break;
                }
            }
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{graphs} graphs with Δ <= 6 x {TRIALS_PER_GRAPH} trials verified")
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let suite: Vec<(GraphSpec, Graph)> = suite()
        .into_iter()
        .map(|s| {
            let g = s.build().expect("suite graph");
            (s, g)
        })
        .collect();
    let mut loops = RootLoops::default();
    let mut failed = 0;
    let mut line = |n: u32, title: &str, run: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = run();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{n:>2}] {title}: {} ({:.2?})", v.detail, start.elapsed());
        if !v.pass {
            failed += 1;
        }
    };
    line(1, "end-to-end edge coloring", &mut || c1_edges(&suite, &mut loops));
    line(2, "brute-force minimum within 2Δ-1", &mut c2_oracle);
    line(3, "edge validation rate on C6", &mut c3_edge_validation);
    line(4, "vertex validation rates", &mut c4_vertex_validation);
    line(5, "replay soundness", &mut || c5_replay(&suite, &mut loops));
    line(6, "edge growth rate", &mut c6_edge_rates);
    line(7, "vertex α threshold", &mut c7_vertex_threshold);
    line(8, "non-special 4-cycle bound", &mut || c8_four_cycle_bound(&suite));
    line(11, "end-to-end vertex coloring", &mut || c11_vertices(&suite, &mut loops));
    line(9, "root-loop bounds", &mut || c9_root_loops(&loops));
    line(10, "series ratio vs growth rate", &mut c10_series);
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}

//! Graph generators.
//!
//! The deterministic families panic on degenerate sizes; [`GraphSpec::build`]
//! checks parameters first and reports `InvalidParams` instead.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

fn build(n: usize, pairs: &[(Vertex, Vertex)]) -> Graph {
    Graph::new(n, pairs).expect("generator produces a simple graph")
}

/// `C_n`, `n ≥ 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &pairs)
}

/// `P_n` on `n` vertices.
pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &pairs)
}

/// `K_{1,n}` with center 0.
pub fn star(n: usize) -> Graph {
    complete_bipartite(1, n)
}

pub fn complete(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    build(n, &pairs)
}

/// `K_{a,b}`: vertices `0..a` on one side, `a..a+b` on the other.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let pairs: Vec<_> = (0..a)
        .flat_map(|i| (a..a + b).map(move |j| (i, j)))
        .collect();
    build(a + b, &pairs)
}

/// `Q_d`: bit strings of length `d`, adjacent when they differ in one bit.
pub fn hypercube(d: u32) -> Graph {
    let n = 1usize << d;
    let pairs: Vec<_> = (0..n)
        .flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b))))
        .filter(|&(v, w)| v < w)
        .collect();
    build(n, &pairs)
}

/// Erdős–Rényi `G(n, p)`, one Bernoulli trial per pair in lexicographic order.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Graph::new(n, &pairs)
}

const PAIRING_ATTEMPTS: usize = 100_000;

/// Uniform `d`-regular graph on `n` vertices by the pairing model, retrying
/// until the pairing has no loops or repeated pairs.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("n·d = {} is odd", n * d)));
    }
    if d >= n && !(d == 0 && n == 0) {
        return Err(Error::InvalidParams(format!("degree {d} needs more than {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut pairs: Vec<(Vertex, Vertex)> = points
            .chunks_exact(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            if w[0] == w[1] {
                continue 'attempt;
            }
        }
        if pairs.iter().any(|&(a, b)| a == b) {
            continue;
        }
        return Graph::new(n, &pairs);
    }
    Err(Error::InvalidParams(format!(
        "no simple pairing for n={n}, d={d} in {PAIRING_ATTEMPTS} attempts"
    )))
}

/// A generator and its parameters, written `kind:params` on the command line,
/// e.g. `cycle:6`, `complete_bipartite:3,3`, `gnp:40,0.15,1`,
/// `random_regular:30,4,7`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSpec {
    Cycle { n: usize },
    Path { n: usize },
    Star { n: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Hypercube { d: u32 },
    Gnp { n: usize, p: f64, seed: u64 },
    RandomRegular { n: usize, d: usize, seed: u64 },
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match *self {
            GraphSpec::Cycle { n } if n < 3 => {
                Err(Error::InvalidParams(format!("cycle needs n ≥ 3, got {n}")))
            }
            GraphSpec::Cycle { n } => Ok(cycle(n)),
            GraphSpec::Path { n } => Ok(path(n)),
            GraphSpec::Star { n } => Ok(star(n)),
            GraphSpec::Complete { n } => Ok(complete(n)),
            GraphSpec::CompleteBipartite { a, b } => Ok(complete_bipartite(a, b)),
            GraphSpec::Hypercube { d } if d > 20 => {
                Err(Error::InvalidParams(format!("hypercube dimension {d} is too large")))
            }
            GraphSpec::Hypercube { d } => Ok(hypercube(d)),
            GraphSpec::Gnp { n, p, seed } => gnp(n, p, seed),
            GraphSpec::RandomRegular { n, d, seed } => random_regular(n, d, seed),
        }
    }
}

/// Builds the graph named by `kind` from its numeric `params`.
pub fn generate(kind: &str, params: &[f64]) -> Result<Graph> {
    spec_from_parts(kind, params)?.build()
}

fn spec_from_parts(kind: &str, params: &[f64]) -> Result<GraphSpec> {
    let bad = || Error::InvalidParams(format!("bad parameters {params:?} for {kind}"));
    let int = |i: usize| -> Result<u64> {
        let x = *params.get(i).ok_or_else(bad)?;
        if x >= 0.0 && x.fract() == 0.0 && x < 2f64.powi(53) {
            Ok(x as u64)
        } else {
            Err(bad())
        }
    };
    let arity = |k: usize| if params.len() == k { Ok(()) } else { Err(bad()) };
    Ok(match kind {
        "cycle" => {
            arity(1)?;
            GraphSpec::Cycle { n: int(0)? as usize }
        }
        "path" => {
            arity(1)?;
            GraphSpec::Path { n: int(0)? as usize }
        }
        "star" => {
            arity(1)?;
            GraphSpec::Star { n: int(0)? as usize }
        }
        "complete" => {
            arity(1)?;
            GraphSpec::Complete { n: int(0)? as usize }
        }
        "complete_bipartite" => {
            arity(2)?;
            GraphSpec::CompleteBipartite {
                a: int(0)? as usize,
                b: int(1)? as usize,
            }
        }
        "hypercube" => {
            arity(1)?;
            GraphSpec::Hypercube { d: int(0)? as u32 }
        }
        "gnp" => {
            arity(3)?;
            GraphSpec::Gnp {
                n: int(0)? as usize,
                p: params[1],
                seed: int(2)?,
            }
        }
        "random_regular" => {
            arity(3)?;
            GraphSpec::RandomRegular {
                n: int(0)? as usize,
                d: int(1)? as usize,
                seed: int(2)?,
            }
        }
        _ => return Err(Error::InvalidParams(format!("unknown graph kind {kind:?}"))),
    })
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = rest
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParams(format!("bad number {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        spec_from_parts(kind.trim(), &params)
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Cycle { n } => write!(f, "cycle:{n}"),
            GraphSpec::Path { n } => write!(f, "path:{n}"),
            GraphSpec::Star { n } => write!(f, "star:{n}"),
            GraphSpec::Complete { n } => write!(f, "complete:{n}"),
            GraphSpec::CompleteBipartite { a, b } => write!(f, "complete_bipartite:{a},{b}"),
            GraphSpec::Hypercube { d } => write!(f, "hypercube:{d}"),
            GraphSpec::Gnp { n, p, seed } => write!(f, "gnp:{n},{p},{seed}"),
            GraphSpec::RandomRegular { n, d, seed } => write!(f, "random_regular:{n},{d},{seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let c6 = cycle(6);
        assert_eq!((c6.vertex_count(), c6.edge_count(), c6.max_degree()), (6, 6, 2));
        let k4 = complete(4);
        assert_eq!((k4.edge_count(), k4.max_degree()), (6, 3));
        let q3 = hypercube(3);
        assert_eq!((q3.vertex_count(), q3.edge_count(), q3.max_degree()), (8, 12, 3));
        let k33 = complete_bipartite(3, 3);
        assert_eq!((k33.edge_count(), k33.max_degree()), (9, 3));
        assert_eq!(path(1).edge_count(), 0);
        assert_eq!(star(4).max_degree(), 4);
    }

    #[test]
    fn seeded_kinds_are_deterministic() {
        assert_eq!(gnp(30, 0.2, 9).unwrap(), gnp(30, 0.2, 9).unwrap());
        assert_ne!(gnp(30, 0.2, 9).unwrap(), gnp(30, 0.2, 10).unwrap());
        let r = random_regular(30, 4, 1).unwrap();
        assert_eq!(r, random_regular(30, 4, 1).unwrap());
        assert!((0..30).all(|v| r.degree(v) == 4));
        assert_eq!(r.edge_count(), 60);
    }

    #[test]
    fn invalid_params() {
        assert!(random_regular(5, 3, 0).is_err());
        assert!(random_regular(4, 4, 0).is_err());
        assert!(gnp(5, 1.5, 0).is_err());
        assert!(generate("cycle", &[2.0]).is_err());
        assert!(generate("moebius", &[8.0]).is_err());
        assert!("gnp:10,0.5".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn spec_round_trip() {
        for s in ["cycle:6", "complete_bipartite:3,3", "gnp:40,0.15,1", "random_regular:30,4,7", "hypercube:3"] {
            let spec: GraphSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            spec.build().unwrap();
        }
    }
}

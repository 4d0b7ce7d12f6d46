//! α-special pairs.
//!
//! For a vertex `u`, the vertices at distance two are ranked by how many
//! neighbors they share with `u`; ties go to the larger index. The top
//! `⌈αΔ^{4/3}⌉` of them form `S_α(u)`.

use num_bigint::BigUint;
use num_traits::{Float, ToPrimitive};

use crate::cycle::{enumerate_4cycles_through, opposite_in_4cycle};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// `⌈α·Δ^{4/3}⌉`, resolved exactly.
///
/// The result is the least integer `N ≥ 0` with `N³ ≥ α³Δ⁴`. Since `α` is a
/// binary float, `α = m·2^e` exactly and the comparison is done on big
/// integers; the float estimate only seeds the search.
pub fn special_cap(alpha: f64, delta: usize) -> Result<usize> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
    }
    if delta == 0 {
        return Ok(0);
    }
    let (mantissa, exponent, _) = Float::integer_decode(alpha);
    let delta4 = BigUint::from(delta).pow(4);
    let m3 = BigUint::from(mantissa).pow(3);
    // N³ · 2^{-3e} ≥ m³ · Δ⁴  (e < 0)   or   N³ ≥ m³ · 2^{3e} · Δ⁴  (e ≥ 0)
    let (lhs_shift, rhs) = if exponent < 0 {
        (3 * (-exponent) as u64, m3 * &delta4)
    } else {
        (0, (m3 * &delta4) << (3 * exponent as u64))
    };
    let covers = |n: u64| (BigUint::from(n).pow(3) << lhs_shift) >= rhs;

    let estimate = (alpha * (delta as f64).powf(4.0 / 3.0)).ceil();
    let mut n = estimate.to_u64().unwrap_or(u64::MAX / 2);
    while n > 0 && covers(n - 1) {
        n -= 1;
    }
    while !covers(n) {
        n += 1;
    }
    Ok(n as usize)
}

/// Default vertex palette `⌈αΔ^{4/3}⌉ + Δ + 1`.
pub fn default_vertex_palette(g: &Graph, alpha: f64) -> Result<u32> {
    Ok((special_cap(alpha, g.max_degree())? + g.max_degree() + 1) as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialPairsIndex {
    alpha: f64,
    cap: usize,
    /// `S_α(u)`, sorted by vertex.
    special: Vec<Vec<Vertex>>,
    /// `N²(u) \ S_α(u)`, sorted by vertex.
    non_special: Vec<Vec<Vertex>>,
    /// `{w : u ∈ S_α(w)}`, sorted by vertex.
    special_to: Vec<Vec<Vertex>>,
}

impl SpecialPairsIndex {
    pub fn build(g: &Graph, alpha: f64) -> Result<Self> {
        let cap = special_cap(alpha, g.max_degree())?;
        let l = g.vertex_count();
        let mut special = Vec::with_capacity(l);
        let mut non_special = Vec::with_capacity(l);
        let mut special_to = vec![Vec::new(); l];
        for u in 0..l {
            let mut ranked = g.second_neighborhood(u);
            // highest first under ≺_u
            ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
            let take = cap.min(ranked.len());
            let mut s: Vec<Vertex> = ranked[..take].iter().map(|&(v, _)| v).collect();
            let mut ns: Vec<Vertex> = ranked[take..].iter().map(|&(v, _)| v).collect();
            s.sort_unstable();
            ns.sort_unstable();
            for &v in &s {
                special_to[v].push(u);
            }
            special.push(s);
            non_special.push(ns);
        }
        Ok(SpecialPairsIndex {
            alpha,
            cap,
            special,
            non_special,
            special_to,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `⌈αΔ^{4/3}⌉`.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn vertex_count(&self) -> usize {
        self.special.len()
    }

    pub fn special(&self, u: Vertex) -> &[Vertex] {
        &self.special[u]
    }

    pub fn non_special(&self, u: Vertex) -> &[Vertex] {
        &self.non_special[u]
    }

    pub fn special_to(&self, u: Vertex) -> &[Vertex] {
        &self.special_to[u]
    }

    /// Whether `v ∈ S_α(u)`.
    pub fn is_special(&self, u: Vertex, v: Vertex) -> bool {
        self.special[u].binary_search(&v).is_ok()
    }

    pub fn is_non_special(&self, u: Vertex, v: Vertex) -> bool {
        self.non_special[u].binary_search(&v).is_ok()
    }
}

/// Bound on 4-cycles through a vertex whose opposite vertex is in
/// `N²(u) \ S_α(u)`: `Δ^{8/3} / (8α)`.
pub fn four_cycle_bound(alpha: f64, delta: usize) -> f64 {
    (delta as f64).powf(8.0 / 3.0) / (8.0 * alpha)
}

/// Per vertex, the number of 4-cycles through `u` whose opposite vertex lies
/// in `N²(u) \ S_α(u)`. Fails with `BoundViolated` if any count exceeds
/// [`four_cycle_bound`].
pub fn bad_4cycle_count_check(g: &Graph, idx: &SpecialPairsIndex) -> Result<Vec<usize>> {
    let bound = four_cycle_bound(idx.alpha(), g.max_degree());
    let mut counts = Vec::with_capacity(g.vertex_count());
    for u in 0..g.vertex_count() {
        let count = enumerate_4cycles_through(g, u)
            .iter()
            .filter(|c| {
                opposite_in_4cycle(c, u).is_some_and(|v| idx.is_non_special(u, v))
            })
            .count();
        if count as f64 > bound {
            return Err(Error::BoundViolated {
                vertex: u,
                count,
                bound,
            });
        }
        counts.push(count);
    }
    Ok(counts)
}

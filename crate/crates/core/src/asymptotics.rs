//! Growth rates of the phase-count generating functions.
//!
//! Both analyses reduce to a tree recurrence `R = z·φ(R)`. The exponential
//! growth rate of its coefficients is `ρ = φ(τ)/τ = φ'(τ)`, where `τ` is the
//! positive root of `xφ'(x) − φ(x)`. `*_rate` finds `τ` by bisection and
//! `*_series` computes the coefficients directly, so the two can be checked
//! against each other.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsResult {
    pub delta: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub q: f64,
    pub tau: f64,
    pub rho: f64,
    /// Value of the characteristic function at `tau`.
    pub residual: f64,
    pub bracket: (f64, f64),
}

/// Bisection for a sign change of `f` on `[lo, hi]`. Returns the final
/// bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> Result<(f64, f64)> {
    let (flo, fhi) = (f(lo), f(hi));
    // negated so a NaN endpoint is rejected as well
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(flo.signum() * fhi.signum() < 0.0) {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    let lo_negative = flo < 0.0;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok((mid, mid));
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// `q = (Δ−1)/(2Δ−1)`.
pub fn edge_q(delta: u64) -> f64 {
    (delta as f64 - 1.0) / (2.0 * delta as f64 - 1.0)
}

/// `q²x³ + q²x² − (3+q²)x + 1 − q²`.
pub fn edge_characteristic(q: f64, x: f64) -> f64 {
    let q2 = q * q;
    ((q2 * x + q2) * x - (3.0 + q2)) * x + 1.0 - q2
}

/// `φ(x) = q⁴(1+x)⁴ / (1 − q²(1+x)²)`.
pub fn edge_phi(q: f64, x: f64) -> f64 {
    let s2 = (1.0 + x) * (1.0 + x);
    q.powi(4) * s2 * s2 / (1.0 - q * q * s2)
}

/// `ρ = (1−3τ)² / (2τ²(1−τ))`.
pub fn edge_rho(tau: f64) -> f64 {
    (1.0 - 3.0 * tau).powi(2) / (2.0 * tau * tau * (1.0 - tau))
}

/// Root of the edge characteristic polynomial in `(0, 1/q − 1)`.
pub fn edge_rate(delta: u64) -> Result<AsymptoticsResult> {
    if delta < 2 {
        return Err(Error::InvalidParams(format!("edge_rate needs Δ ≥ 2, got {delta}")));
    }
    let q = edge_q(delta);
    let bracket = (0.0, 1.0 / q - 1.0);
    let (lo, hi) = bisect(|x| edge_characteristic(q, x), bracket.0, bracket.1, BISECTION_WIDTH)?;
    let tau = 0.5 * (lo + hi);
    let rho = edge_rho(tau);
    let result = AsymptoticsResult {
        delta,
        alpha: None,
        q,
        tau,
        rho,
        residual: edge_characteristic(q, tau),
        bracket,
    };
    let tau_ok = tau > 5f64.sqrt() - 2.0 && tau < 4.0 / 13.0;
    if !(tau_ok && rho > 0.0 && rho < 1.0) {
        return Err(Error::VerificationFailed(format!(
            "edge rate out of range at Δ = {delta}: τ = {tau}, ρ = {rho}"
        )));
    }
    Ok(result)
}

/// Coefficients `R_0 = 1, R_1, …, R_N`, stored as natural logarithms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    pub order: usize,
    pub ln_coeffs: Vec<f64>,
}

impl SeriesCoeffs {
    pub fn coeff(&self, n: usize) -> f64 {
        self.ln_coeffs[n].exp()
    }

    pub fn ln_coeff(&self, n: usize) -> f64 {
        self.ln_coeffs[n]
    }

    /// `R_n / R_{n−1}`.
    pub fn ratio(&self, n: usize) -> f64 {
        (self.ln_coeffs[n] - self.ln_coeffs[n - 1]).exp()
    }
}

fn ln_sum(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln Σ_{i=lo}^{n−lo} exp(x_i + y_{n−i})`.
fn ln_conv(x: &[f64], y: &[f64], n: usize, lo: usize, buf: &mut Vec<f64>) -> f64 {
    buf.clear();
    buf.extend((lo..=n - lo.min(n)).map(|i| x[i] + y[n - i]));
    ln_sum(buf)
}

/// Incremental powers of `S = 1 + R` in log-space: `S`, `S²`, `S⁴`.
struct Powers {
    s: Vec<f64>,
    s2: Vec<f64>,
    s4: Vec<f64>,
    buf: Vec<f64>,
}

impl Powers {
    fn new() -> Self {
        Powers {
            s: Vec::new(),
            s2: Vec::new(),
            s4: Vec::new(),
            buf: Vec::new(),
        }
    }

    /// Appends `ln S_n` and extends the powers to index `n`.
    fn push(&mut self, ln_s: f64) {
        let n = self.s.len();
        self.s.push(ln_s);
        let a = ln_conv(&self.s, &self.s, n, 0, &mut self.buf);
        self.s2.push(a);
        let b = ln_conv(&self.s2, &self.s2, n, 0, &mut self.buf);
        self.s4.push(b);
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParams("series order must be at least 1".into()));
    }
    Ok(())
}

/// Coefficients of `R = z·φ(R)` for the edge `φ`. The rational form is
/// expanded through `G = 1/(1 − q²(1+R)²)`:
/// `G_0 = 1/(1−q²)`, `G_n = q²/(1−q²) · Σ_{j≥1} [S²]_j G_{n−j}`,
/// and `R_n = q⁴ [S⁴ G]_{n−1}`.
pub fn edge_series(delta: u64, order: usize) -> Result<SeriesCoeffs> {
    if delta < 2 {
        return Err(Error::InvalidParams(format!("edge_series needs Δ ≥ 2, got {delta}")));
    }
    check_order(order)?;
    let q = edge_q(delta);
    let ln_q2 = 2.0 * q.ln();
    let ln_q4 = 4.0 * q.ln();
    let ln_inv = -(1.0 - q * q).ln();
    let mut p = Powers::new();
    let mut g: Vec<f64> = Vec::with_capacity(order);
    let mut buf = Vec::new();
    let mut ln_r = vec![0.0];
    for n in 1..=order {
        let k = n - 1;
        p.push(if k == 0 { 0.0 } else { ln_r[k] });
        let gk = if k == 0 {
            ln_inv
        } else {
            buf.clear();
            buf.extend((1..=k).map(|j| p.s2[j] + g[k - j]));
            ln_q2 + ln_inv + ln_sum(&buf)
        };
        g.push(gk);
        let f = ln_conv(&p.s4, &g, k, 0, &mut buf);
        ln_r.push(ln_q4 + f);
    }
    Ok(SeriesCoeffs {
        order,
        ln_coeffs: ln_r,
    })
}

fn vertex_weights(alpha: f64, delta: u64) -> Result<(f64, f64)> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
    }
    if delta < 2 {
        return Err(Error::InvalidParams(format!("vertex analysis needs Δ ≥ 2, got {delta}")));
    }
    let a = 1.0 / ((delta as f64).cbrt() * alpha.powi(4));
    let b = 1.0 / (8.0 * alpha.powi(3));
    Ok((a, b))
}

/// `φ(x) = (1+x)⁴/(Δ^{1/3}α⁴) + (1+x)²/(8α³)`.
pub fn vertex_phi(alpha: f64, delta: u64, x: f64) -> f64 {
    let (a, b) = vertex_weights(alpha, delta).expect("valid parameters");
    let s2 = (1.0 + x) * (1.0 + x);
    a * s2 * s2 + b * s2
}

fn vertex_phi_prime(a: f64, b: f64, x: f64) -> f64 {
    let s = 1.0 + x;
    4.0 * a * s * s * s + 2.0 * b * s
}

/// Root of `xφ'(x) − φ(x)` with `ρ = φ'(τ)`. The bracket starts at `[0, 1]`
/// and doubles until the sign changes.
pub fn vertex_rate(alpha: f64, delta: u64) -> Result<AsymptoticsResult> {
    let (a, b) = vertex_weights(alpha, delta)?;
    let h = |x: f64| {
        let s2 = (1.0 + x) * (1.0 + x);
        x * vertex_phi_prime(a, b, x) - (a * s2 * s2 + b * s2)
    };
    let mut hi = 1.0;
    while h(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::NoRootInBracket { lo: 0.0, hi });
        }
    }
    let (lo, up) = bisect(h, 0.0, hi, BISECTION_WIDTH)?;
    let tau = 0.5 * (lo + up);
    Ok(AsymptoticsResult {
        delta,
        alpha: Some(alpha),
        q: 1.0 / (alpha * (delta as f64).powf(4.0 / 3.0)),
        tau,
        rho: vertex_phi_prime(a, b, tau),
        residual: h(tau),
        bracket: (0.0, hi),
    })
}

/// Coefficients of `R = z·φ(R)` for the vertex `φ`, by the finite
/// recurrence `R_n = b[S²]_{n−1} + a[S⁴]_{n−1}`.
pub fn vertex_series(alpha: f64, delta: u64, order: usize) -> Result<SeriesCoeffs> {
    let (a, b) = vertex_weights(alpha, delta)?;
    check_order(order)?;
    let (ln_a, ln_b) = (a.ln(), b.ln());
    let mut p = Powers::new();
    let mut ln_r = vec![0.0];
    for n in 1..=order {
        let k = n - 1;
        p.push(if k == 0 { 0.0 } else { ln_r[k] });
        ln_r.push(ln_sum(&[ln_b + p.s2[k], ln_a + p.s4[k]]));
    }
    Ok(SeriesCoeffs {
        order,
        ln_coeffs: ln_r,
    })
}

/// The `α` in `[lo, hi]` where the vertex `ρ` crosses 1.
pub fn vertex_threshold(delta: u64, lo: f64, hi: f64) -> Result<f64> {
    let f = |alpha: f64| vertex_rate(alpha, delta).map_or(f64::NAN, |r| r.rho - 1.0);
    let (l, h) = bisect(f, lo, hi, BISECTION_WIDTH)?;
    Ok(0.5 * (l + h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_brackets() {
        let (lo, hi) = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!(hi - lo <= 1e-12 && (lo - 2f64.sqrt()).abs() < 1e-11);
        assert!(matches!(
            bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-12),
            Err(Error::NoRootInBracket { .. })
        ));
    }

    #[test]
    fn edge_q_values() {
        assert_eq!(edge_q(2), 1.0 / 3.0);
        assert!(edge_q(2) < edge_q(3) && edge_q(1000) < 0.5);
    }

    #[test]
    fn edge_characteristic_signs() {
        for delta in 2..200 {
            let q = edge_q(delta);
            assert!(edge_characteristic(q, 0.0) > 0.0);
            assert!(edge_characteristic(q, 1.0 / q - 1.0) < 0.0);
        }
    }

    #[test]
    fn edge_rate_consistency() {
        for delta in [2, 3, 10, 1000] {
            let r = edge_rate(delta).unwrap();
            assert!(r.residual.abs() <= 1e-9);
            let phi_over_tau = edge_phi(r.q, r.tau) / r.tau;
            assert!((phi_over_tau - r.rho).abs() < 1e-8, "{delta}: {phi_over_tau} {}", r.rho);
        }
        assert!(edge_rate(1).is_err());
    }

    /// `R_1` by summing the cycle-length series directly.
    fn r1_truncated(q: f64) -> f64 {
        (3..2000).map(|k| q.powi(2 * k - 2)).sum()
    }

    #[test]
    fn edge_r1() {
        for delta in [2, 3, 7] {
            let s = edge_series(delta, 3).unwrap();
            let q = edge_q(delta);
            assert_eq!(s.coeff(0), 1.0);
            assert!((s.coeff(1) - q.powi(4) / (1.0 - q * q)).abs() < 1e-15);
            assert!((s.coeff(1) - r1_truncated(q)).abs() < 1e-15);
        }
    }

    /// Direct recurrence over explicit child counts: a node on a `2k`-cycle
    /// has `2k − 2` possibly empty subtrees and weight `q^{2k−2}`.
    fn edge_series_direct(q: f64, order: usize) -> Vec<f64> {
        let mut r = vec![1.0];
        for n in 1..=order {
            let mut total = 0.0;
            for k in 3..60 {
                let children = 2 * k - 2;
                // coefficient of z^{n−1} in (Σ R_j z^j)^{children}
                let mut pow = vec![0.0; n];
                pow[0] = 1.0;
                for _ in 0..children {
                    let mut next = vec![0.0; n];
                    for i in 0..n {
                        for j in 0..n - i {
                            next[i + j] += pow[i] * r[j];
                        }
                    }
                    pow = next;
                }
                total += q.powi(children) * pow[n - 1];
            }
            r.push(total);
        }
        r
    }

    #[test]
    fn edge_series_matches_direct_sum() {
        let q = edge_q(3);
        let direct = edge_series_direct(q, 6);
        let s = edge_series(3, 6).unwrap();
        for (n, d) in direct.iter().enumerate() {
            assert!((s.coeff(n) / d - 1.0).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn edge_series_positive_and_log_convex() {
        let s = edge_series(5, 300).unwrap();
        assert!(s.ln_coeffs.iter().all(|x| x.is_finite()));
        for n in 10..299 {
            let d2 = s.ln_coeff(n + 1) - 2.0 * s.ln_coeff(n) + s.ln_coeff(n - 1);
            assert!(d2 >= -1e-12, "n={n}");
        }
    }

    #[test]
    fn vertex_r1() {
        let (alpha, delta) = (0.9, 27);
        let s = vertex_series(alpha, delta, 2).unwrap();
        let expected = 1.0 / (8.0 * alpha.powi(3)) + 1.0 / (3.0 * alpha.powi(4));
        assert!((s.coeff(1) / expected - 1.0).abs() < 1e-12);
    }

    /// Direct recurrence with explicit 2- and 4-fold child products.
    fn vertex_series_direct(alpha: f64, delta: u64, order: usize) -> Vec<f64> {
        let (a, b) = vertex_weights(alpha, delta).unwrap();
        let mut r = vec![1.0];
        for n in 1..=order {
            let m = n - 1;
            let mut two = 0.0;
            for i in 0..=m {
                two += r[i] * r[m - i];
            }
            let mut four = 0.0;
            for i in 0..=m {
                for j in 0..=m - i {
                    for k in 0..=m - i - j {
                        four += r[i] * r[j] * r[k] * r[m - i - j - k];
                    }
                }
            }
            r.push(b * two + a * four);
        }
        r
    }

    #[test]
    fn vertex_series_matches_direct() {
        let direct = vertex_series_direct(1.0, 10, 8);
        let s = vertex_series(1.0, 10, 8).unwrap();
        for (n, d) in direct.iter().enumerate() {
            assert!((s.coeff(n) / d - 1.0).abs() < 1e-10, "n={n}");
        }
    }

    #[test]
    fn vertex_rate_matches_grid_scan() {
        let r = vertex_rate(1.0, 10).unwrap();
        assert!(r.residual.abs() <= 1e-9);
        let (a, b) = vertex_weights(1.0, 10).unwrap();
        let h = |x: f64| {
            let s2 = (1.0 + x) * (1.0 + x);
            x * vertex_phi_prime(a, b, x) - (a * s2 * s2 + b * s2)
        };
        let step = 1e-4;
        let crossing = (1..100_000)
            .map(|i| i as f64 * step)
            .find(|&x| h(x) > 0.0)
            .unwrap();
        assert!((crossing - r.tau).abs() <= step);
        let phi_over_tau = vertex_phi(1.0, 10, r.tau) / r.tau;
        assert!((phi_over_tau - r.rho).abs() < 1e-8);
    }

    #[test]
    fn vertex_tau_approaches_one() {
        let small = vertex_rate(0.7, 100).unwrap().tau;
        let large = vertex_rate(0.7, 1_000_000_000_000_000_000).unwrap().tau;
        assert!(small < large && (large - 1.0).abs() < 1e-3);
    }

    #[test]
    fn vertex_threshold_requires_sign_change() {
        assert!(vertex_threshold(1_000_000_000, 2.0, 3.0).is_err());
        let t = vertex_threshold(1_000_000_000, 0.5, 1.0).unwrap();
        let below = vertex_rate(t - 1e-6, 1_000_000_000).unwrap().rho;
        let above = vertex_rate(t + 1e-6, 1_000_000_000).unwrap().rho;
        assert!(below > 1.0 && above < 1.0);
    }
}

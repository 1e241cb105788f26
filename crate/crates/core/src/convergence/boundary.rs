//! Boundary curves of the convergence domains in the complex `z`-plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{bisect, eta0, improved_radius, transformed_improved_threshold, ThresholdMode};
use crate::error::{Error, Result};
use crate::exec::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundarySample {
    pub param: f64,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

impl BoundarySample {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCurve {
    /// Lower half-plane first in parameter order, then the mirrored upper half.
    pub samples: Vec<BoundarySample>,
    pub source: String,
    pub param_name: String,
    pub param_range: (f64, f64),
}

impl BoundaryCurve {
    fn mirrored(mut lower: Vec<BoundarySample>, source: String, param_name: &str, range: (f64, f64)) -> Self {
        let upper: Vec<BoundarySample> = lower
            .iter()
            .rev()
            .filter(|s| s.im != 0.0)
            .map(|s| BoundarySample { param: -s.param, re: s.re, im: -s.im, residual: s.residual })
            .collect();
        lower.extend(upper);
        BoundaryCurve { samples: lower, source, param_name: param_name.into(), param_range: range }
    }
}

/// The point of the Comtet boundary at parameter `η`: with `w = (p-1) + iη`,
/// `ln z = -p - w e^(iη)`, and the residual `|w e^w + (p + ln z) e^(p-1)|`.
fn comtet_point(eta: f64, p: f64) -> BoundarySample {
    let w = Complex64::new(p - 1.0, eta);
    let lz = -p - w * Complex64::new(0.0, eta).exp();
    let z = lz.exp();
    let q = p + z.ln();
    let residual = (w * w.exp() + q * (p - 1.0).exp()).norm();
    BoundarySample { param: eta, re: z.re, im: z.im, residual }
}

/// Boundary of the `p`-transformed Comtet domain, `Re W_{∓1}(-(p + ln z) e^(p-1)) = p - 1`.
///
/// `η` runs uniformly over `(-π, -η₀(p)]` (`η₀ = 0` for `p ≤ 0`); the upper half is the conjugate.
pub fn comtet_complex_boundary(n_samples: usize, p: f64, exec: Execution) -> Result<BoundaryCurve> {
    if n_samples < 2 {
        return Err(Error::Usage(format!("n_samples = {n_samples}: need at least 2")));
    }
    let top = if p > 0.0 { -eta0(1.0 - p)? } else { 0.0 };
    let etas: Vec<f64> = (0..n_samples).map(|i| -PI + (top + PI) * (i + 1) as f64 / n_samples as f64).collect();
    let lower: Vec<BoundarySample> = exec
        .map(&etas, |&e| comtet_point(e, p))
        .into_iter()
        .filter(|s| s.z().ln().im <= 0.0)
        .collect();
    let source = format!("Re W(-(p + ln z) e^(p-1)) = p - 1, p = {p}");
    Ok(BoundaryCurve::mirrored(lower, source, "eta", (-PI, top)))
}

/// `ln|z|` of the untransformed Comtet boundary at `arg z = θ ∈ [0, π)`.
pub fn comtet_boundary_log_modulus(theta: f64) -> Result<f64> {
    let theta = theta.abs();
    if theta >= PI {
        return Err(Error::Domain(format!("theta = {theta} must lie in [0, pi)")));
    }
    if theta == 0.0 {
        return Ok(1.0);
    }
    let eta = bisect(|e| e.sin() - e * e.cos() + theta, -PI, 0.0)?;
    Ok(eta.cos() + eta * eta.sin())
}

/// `|τ(z,p)| - τ*(σ(z,p))` at `ln z = r + iθ`; negative where the improved series converges.
pub fn improved_gap(r: f64, theta: f64, p: f64) -> f64 {
    let q = Complex64::new(p + r, theta);
    let sigma = q.inv();
    let tau = sigma * (p + q.ln());
    tau.norm() - improved_radius(sigma).value
}

/// Largest `r` below `start` where `improved_gap` turns positive, then refined by bisection.
fn improved_log_modulus(theta: f64, p: f64) -> Option<(f64, f64)> {
    let f = |r: f64| improved_gap(r, theta, p);
    let mut prev = 5.0;
    if !(f(prev) < 0.0) {
        return None;
    }
    let mut r = prev;
    loop {
        r = if r > 1e-4 { r * 0.98 } else if r > 0.0 { 0.0 } else { r - 0.01 };
        if r < -50.0 {
            return None;
        }
        let v = f(r);
        if v > 0.0 {
            break;
        }
        prev = r;
    }
    let root = bisect(f, r, prev).ok()?;
    Some((root, f(root).abs()))
}

/// Boundary of the `p`-transformed improved domain: `|τ| = τ*(σ)` with
/// `σ = 1/(p + ln z)`, the `±iπσ` sign chosen by `Im σ`.
///
/// `θ = arg z` runs over `[0, π)`; `θ = 0` is the real threshold `z_p`
/// (omitted when `p ≥ 1`), the lower half is the conjugate.
pub fn improved_complex_boundary(n_samples: usize, p: f64, exec: Execution) -> Result<BoundaryCurve> {
    if n_samples < 2 {
        return Err(Error::Usage(format!("n_samples = {n_samples}: need at least 2")));
    }
    let thetas: Vec<f64> = (1..n_samples).map(|i| PI * i as f64 / n_samples as f64).collect();
    let mut upper: Vec<BoundarySample> = Vec::with_capacity(n_samples);
    if p < 1.0 {
        let t = transformed_improved_threshold(p, ThresholdMode::Exact)?;
        upper.push(BoundarySample { param: 0.0, re: t.value, im: 0.0, residual: t.residual });
    }
    upper.extend(exec.map(&thetas, |&th| {
        improved_log_modulus(th, p).map(|(r, res)| {
            let z = Complex64::from_polar(r.exp(), th);
            BoundarySample { param: th, re: z.re, im: z.im, residual: res }
        })
    }).into_iter().flatten());
    let lower: Vec<BoundarySample> = upper
        .iter()
        .rev()
        .map(|s| BoundarySample { param: -s.param, re: s.re, im: -s.im, residual: s.residual })
        .collect();
    let source = format!("|tau| = tau*(sigma), sigma = 1/(p + ln z), p = {p}");
    Ok(BoundaryCurve::mirrored(lower, source, "theta", (-PI, 0.0)))
}

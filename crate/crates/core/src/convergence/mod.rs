//! Convergence thresholds, domain predicates and boundary curves for the
//! Comtet, improved and Wright series, untransformed and `p`-transformed.

mod boundary;
mod comtet;
mod improved;

pub use boundary::*;
pub use comtet::*;
pub use improved::*;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    XAlpha,
    ZP,
    Sigma1,
    SigmaC,
    AlphaC,
    MuAlpha,
    NuAlpha,
    Eta0,
    RadiusTau,
    WrightRadius,
    /// `b` in `Re W_{-1}(x) > a  <=>  x < b`.
    LemmaB,
    SigmaAlpha,
}

/// A computed boundary value with the residual of its defining equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    pub kind: ThresholdKind,
    pub value: f64,
    pub residual: f64,
    /// `η₀` when the value came from `η cot η = c`.
    pub eta0: Option<f64>,
    /// Set when the value sits on a case boundary or is degenerate.
    pub flag: Option<String>,
}

impl Threshold {
    pub fn new(kind: ThresholdKind, value: f64, residual: f64) -> Threshold {
        Threshold { kind, value, residual, eta0: None, flag: None }
    }

    fn with_eta0(mut self, eta0: Option<f64>) -> Self {
        self.eta0 = eta0;
        self
    }

    fn flagged(mut self, note: impl Into<String>) -> Self {
        self.flag = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub converges: bool,
    /// Which condition decided, e.g. `"ln sigma < 1 - lambda + Re W_-1(-e^(lambda-1))"`.
    pub governing: String,
    /// Signed distance to the boundary in the condition's own units; positive inside.
    pub margin: f64,
}

pub(crate) const BISECT_ITERS: usize = 200;
pub(crate) const ETA_EPS: f64 = 1e-12;

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}]: f = {flo}, {fhi}")));
    }
    for _ in 0..BISECT_ITERS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Golden-section search for the maximizer of a unimodal `f` on `[lo, hi]`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol * (1.0 + lo.abs().max(hi.abs())) {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// The root `η₀ ∈ (0, π)` of `η cot η = c`; exists for `c < 1`.
pub fn eta0(c: f64) -> Result<f64> {
    if !(c < 1.0) {
        return Err(Error::Bracket(format!("eta cot eta = {c} has no root in (0, pi)")));
    }
    if c == 0.0 {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    bisect(|e| e / e.tan() - c, ETA_EPS, std::f64::consts::PI - ETA_EPS)
}

/// `η csc η`.
pub(crate) fn eta_csc(e: f64) -> f64 {
    e / e.sin()
}

/// `√(1+π²)`, the radius of the Wright series in `t = ln x`.
pub fn wright_radius() -> Threshold {
    let pi = std::f64::consts::PI;
    let r = (1.0 + pi * pi).sqrt();
    let z1 = num_complex::Complex64::new(-1.0, -pi);
    Threshold::new(ThresholdKind::WrightRadius, r, (z1.norm() - r).abs())
}

/// The Wright series converges for `|t| < √(1+π²)`, i.e. `|σ| > 1/√(1+π²)` with `σ = 1/t`.
pub fn wright_sigma_converges(sigma: f64) -> bool {
    sigma.abs() > 1.0 / wright_radius().value
}

/// Real interval `(e^(-R), e^R)` of the Wright series.
pub fn wright_real_interval() -> (f64, f64) {
    let r = wright_radius().value;
    ((-r).exp(), r.exp())
}

//! Thresholds for the improved series.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::{bisect, golden_max, ConvergenceVerdict, Threshold, ThresholdKind};
use crate::error::{Error, Result};
use crate::series::SeriesVariables;

/// Singular point `(τ*, u*)` of `u_σ(τ)` nearest the origin, sign chosen by `Im σ`.
pub fn singular_point(sigma: Complex64) -> Option<(Complex64, Complex64)> {
    if sigma == Complex64::new(0.0, 0.0) || sigma == Complex64::new(-1.0, 0.0) {
        return None;
    }
    let i = Complex64::i();
    let u = if sigma.im == 0.0 && sigma.re < 0.0 {
        Complex64::new(-(-sigma.re).ln(), 0.0)
    } else if sigma.im > 0.0 {
        -sigma.ln() + i * PI
    } else {
        -sigma.ln() - i * PI
    };
    let tau = 1.0 - (-u).exp() + sigma * u;
    Some((tau, u))
}

/// `τ*(σ) = |1 + σ - σ ln σ ± iπσ|`, minus for `Im σ < 0`, plus for `Im σ > 0`;
/// `|1 + σ - σ ln|σ||` for real `σ < 0`, `1` at `σ = 0`, `0` (flagged) at `σ = -1`.
pub fn improved_radius(sigma: Complex64) -> Threshold {
    if sigma == Complex64::new(-1.0, 0.0) {
        return Threshold::new(ThresholdKind::RadiusTau, 0.0, 0.0)
            .flagged("sigma = -1: the series diverges everywhere");
    }
    if sigma == Complex64::new(0.0, 0.0) {
        return Threshold::new(ThresholdKind::RadiusTau, 1.0, 0.0);
    }
    let i = Complex64::i();
    let base = 1.0 + sigma;
    let value = if sigma.im == 0.0 && sigma.re < 0.0 {
        (base.re - sigma.re * (-sigma.re).ln()).abs()
    } else {
        let sign = if sigma.im > 0.0 { 1.0 } else { -1.0 };
        (base - sigma * sigma.ln() + sign * i * PI * sigma).norm()
    };
    let (tau, u) = singular_point(sigma).expect("regular sigma");
    let residual = (1.0 - (-u).exp() + sigma * u - tau).norm() + ((-u).exp() + sigma).norm() + (tau.norm() - value).abs();
    Threshold::new(ThresholdKind::RadiusTau, value, residual)
}

/// `|τ| < τ*(σ)` for arbitrary series variables.
pub fn improved_converges_vars(vars: &SeriesVariables) -> ConvergenceVerdict {
    let r = improved_radius(vars.sigma).value;
    ConvergenceVerdict {
        converges: vars.tau.norm() < r,
        governing: "|tau| < tau*(sigma)".into(),
        margin: r - vars.tau.norm(),
    }
}

/// `|σ(ln α - ln σ)| < τ*(σ)` for `σ, α > 0`.
pub fn improved_converges(sigma: f64, alpha: f64) -> Result<ConvergenceVerdict> {
    if !(sigma > 0.0 && alpha > 0.0) {
        return Err(Error::Domain(format!("sigma = {sigma}, alpha = {alpha}: both must be positive")));
    }
    let tau = sigma * (alpha.ln() - sigma.ln());
    Ok(improved_converges_vars(&SeriesVariables::real(sigma, tau)))
}

/// `g(σ) = √(π² + (1 + 1/σ - ln σ)²)`.
pub fn g(sigma: f64) -> f64 {
    let a = 1.0 + 1.0 / sigma - sigma.ln();
    (PI * PI + a * a).sqrt()
}

/// `ln σ + g(σ)`; its minimum over `σ > 0` is `ln α_c`.
fn h(sigma: f64) -> f64 {
    sigma.ln() + g(sigma)
}

/// `σ_c` as the minimizer of `ln σ + g(σ)`, by golden-section search.
pub fn sigma_c() -> Threshold {
    let s = golden_max(|s| -h(s), 0.1, 10.0, 1e-15);
    Threshold::new(ThresholdKind::SigmaC, s, sigma_c_equation(s).abs())
}

/// `g(σ) √((1+1/σ)² - 1) / (1+1/σ) - π`, zero at `σ_c`.
pub fn sigma_c_equation(sigma: f64) -> f64 {
    let a = 1.0 + 1.0 / sigma;
    g(sigma) * (a * a - 1.0).sqrt() / a - PI
}

/// `σ_c` as the root of its defining equation, by bisection.
pub fn sigma_c_by_root() -> Result<Threshold> {
    let s = bisect(sigma_c_equation, 0.1, 10.0)?;
    Ok(Threshold::new(ThresholdKind::SigmaC, s, sigma_c_equation(s).abs()))
}

/// `α_c = σ_c e^(g(σ_c))`.
pub fn alpha_c() -> Threshold {
    let s = sigma_c();
    let a = s.value * g(s.value).exp();
    Threshold::new(ThresholdKind::AlphaC, a, s.residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaCase {
    /// Converges for `σ < σ_α`.
    Bounded,
    /// Converges for every `σ > 0`.
    Everywhere,
    /// Diverges for `μ_α < σ < ν_α`.
    Gap,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaDomain {
    pub alpha: f64,
    pub case: AlphaCase,
    pub sigma_alpha: Option<Threshold>,
    pub x_alpha: Option<Threshold>,
    pub mu_alpha: Option<Threshold>,
    pub nu_alpha: Option<Threshold>,
    pub sigma_c: Threshold,
    pub alpha_c: Threshold,
    pub flag: Option<String>,
}

/// Root of `ln σ - g(σ) = ln α` for `0 < α < e`.
pub fn sigma_alpha(alpha: f64) -> Result<Threshold> {
    if !(alpha > 0.0 && alpha < E) {
        return Err(Error::Domain(format!("alpha = {alpha}: sigma_alpha exists only for 0 < alpha < e")));
    }
    let la = alpha.ln();
    let f = |s: f64| s.ln() - g(s) - la;
    let mut lo = 1.0;
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let s = bisect(f, lo, hi)?;
    Ok(Threshold::new(ThresholdKind::SigmaAlpha, s, f(s).abs()))
}

/// Classification of the improved series' `σ`-domain for given `α`.
pub fn alpha_domain(alpha: f64) -> Result<AlphaDomain> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive and finite")));
    }
    let sc = sigma_c();
    let ac = alpha_c();
    let mut out = AlphaDomain {
        alpha,
        case: AlphaCase::Everywhere,
        sigma_alpha: None,
        x_alpha: None,
        mu_alpha: None,
        nu_alpha: None,
        sigma_c: sc.clone(),
        alpha_c: ac.clone(),
        flag: None,
    };
    if alpha < E {
        let s = sigma_alpha(alpha)?;
        let x = (alpha / s.value).exp();
        out.case = AlphaCase::Bounded;
        out.x_alpha = Some(Threshold::new(ThresholdKind::XAlpha, x, s.residual));
        out.sigma_alpha = Some(s);
    } else if alpha > ac.value {
        let la = alpha.ln();
        let f = |s: f64| h(s) - la;
        let mut lo = sc.value;
        while f(lo) < 0.0 {
            lo *= 0.5;
        }
        let mut hi = sc.value;
        while f(hi) < 0.0 {
            hi *= 2.0;
        }
        let mu = bisect(f, lo, sc.value)?;
        let nu = bisect(f, sc.value, hi)?;
        out.case = AlphaCase::Gap;
        out.mu_alpha = Some(Threshold::new(ThresholdKind::MuAlpha, mu, f(mu).abs()));
        out.nu_alpha = Some(Threshold::new(ThresholdKind::NuAlpha, nu, f(nu).abs()));
    } else if alpha == E || alpha == ac.value {
        out.flag = Some(format!("alpha = {alpha} lies on a case boundary; treated as converging for every sigma"));
    }
    Ok(out)
}

/// `σ₁ ≈ e^((1+π²)/2) - (1+π²)/2`.
pub fn sigma1_approx() -> f64 {
    let c = (1.0 + PI * PI) / 2.0;
    c.exp() - c
}

/// `σ₁`, the root for `α = 1`.
pub fn sigma1() -> Result<Threshold> {
    let mut t = sigma_alpha(1.0)?;
    t.kind = ThresholdKind::Sigma1;
    Ok(t)
}

/// `x₁ = e^(1/σ₁)`.
pub fn x1() -> Result<f64> {
    Ok((1.0 / sigma1()?.value).exp())
}

/// `x(α) = e^(α/σ_α)` on `0 < α < e`.
pub fn x_of_alpha(alpha: f64) -> Result<f64> {
    Ok((alpha / sigma_alpha(alpha)?.value).exp())
}

/// Maximizer `(α*, x*)` of `x(α)` over `0 < α < e`.
pub fn x_of_alpha_max() -> Result<(f64, f64)> {
    let f = |a: f64| x_of_alpha(a).map(|x| x.ln()).unwrap_or(f64::NEG_INFINITY);
    let a = golden_max(f, 1e-3, E - 1e-3, 1e-14);
    Ok((a, x_of_alpha(a)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    Exact,
    Approx,
}

/// `|τ| - τ*(σ)` along the positive real axis in `q = p + ln z`.
fn transformed_gap(p: f64, q: f64) -> f64 {
    let sigma = 1.0 / q;
    let tau = sigma * (p + q.ln());
    tau.abs() - improved_radius(Complex64::new(sigma, 0.0)).value
}

/// `z_p` for the `p`-transformed improved series; the series converges for real `z > z_p`.
///
/// `Exact` bisects `|τ(z,p)| = τ*(σ(z,p))` in `ln(p + ln z)` and checks the root
/// against the similarity value `exp(1/σ_α - p)`, `α = e^p`. Both need `p < 1`:
/// for larger `p` there is no threshold of this form.
pub fn transformed_improved_threshold(p: f64, mode: ThresholdMode) -> Result<Threshold> {
    if !(p < 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p = {p}: the improved threshold needs p < 1")));
    }
    match mode {
        ThresholdMode::Approx => {
            let x = x1()?;
            let a = (-p).exp();
            Ok(Threshold::new(ThresholdKind::ZP, a * x.powf(a), 0.0).flagged("approximation"))
        }
        ThresholdMode::Exact => {
            let s = bisect(|s| transformed_gap(p, s.exp()), -700.0, 50.0)?;
            let q = s.exp();
            let z = (q - p).exp();
            let via_similarity = (1.0 / sigma_alpha(p.exp())?.value - p).exp();
            let mismatch = (z - via_similarity).abs() / z;
            if mismatch > 1e-9 {
                return Err(Error::NoConvergence(format!(
                    "p = {p}: bisection z_p = {z} disagrees with similarity value {via_similarity}"
                )));
            }
            Ok(Threshold::new(ThresholdKind::ZP, z, transformed_gap(p, q).abs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_examples() {
        let r = improved_radius(Complex64::new(1.0, 0.0));
        assert!((r.value - (4.0 + PI * PI).sqrt()).abs() < 1e-14);
        assert!(r.residual < 1e-13);
        assert_eq!(improved_radius(Complex64::new(0.0, 0.0)).value, 1.0);
        let n = improved_radius(Complex64::new(-2.0, 0.0));
        assert!((n.value - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        let d = improved_radius(Complex64::new(-1.0, 0.0));
        assert_eq!(d.value, 0.0);
        assert!(d.flag.is_some());
    }

    #[test]
    fn radius_conjugate_symmetric() {
        let s = Complex64::new(0.7, 0.4);
        let a = improved_radius(s).value;
        let b = improved_radius(s.conj()).value;
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn constants() {
        assert!((sigma1().unwrap().value - 224.790951).abs() < 1e-5);
        assert!((x1().unwrap() - 1.004458).abs() < 1e-6);
        let sc = sigma_c();
        assert!((sc.value - 1.059945).abs() < 1e-5);
        assert!((sigma_c_by_root().unwrap().value - sc.value).abs() < 1e-6);
        assert!((alpha_c().value - 41.349171).abs() < 1e-4);
        assert!((sigma1_approx() - 223.8126969).abs() < 1e-6);
        assert!(sigma1_approx() < sigma1().unwrap().value);
    }

    #[test]
    fn x_alpha_maximum() {
        let (a, x) = x_of_alpha_max().unwrap();
        assert!((x - (-PI).exp().exp()).abs() < 1e-6);
        assert!((a - 0.155186).abs() < 1e-5, "{a}");
    }

    #[test]
    fn classification() {
        let d = alpha_domain(1.0).unwrap();
        assert_eq!(d.case, AlphaCase::Bounded);
        assert!((d.sigma_alpha.unwrap().value - 224.790951).abs() < 1e-5);
        assert_eq!(alpha_domain(10.0).unwrap().case, AlphaCase::Everywhere);
        let d = alpha_domain(100.0).unwrap();
        assert_eq!(d.case, AlphaCase::Gap);
        let (mu, nu) = (d.mu_alpha.unwrap(), d.nu_alpha.unwrap());
        assert!(mu.value < nu.value);
        for s in [mu.value, nu.value] {
            assert!(((s.ln() - 100f64.ln()).abs() - g(s)).abs() < 1e-10);
        }
        assert!(alpha_domain(E).unwrap().flag.is_some());
    }

    #[test]
    fn improved_predicate_examples() {
        assert!(improved_converges(100.0, 1.0).unwrap().converges);
        assert!(!improved_converges(300.0, 1.0).unwrap().converges);
        for s in [0.1, 1.0, 10.0, 1000.0] {
            assert!(improved_converges(s, 10.0).unwrap().converges);
        }
    }

    #[test]
    fn transformed_improved() {
        let e = transformed_improved_threshold(0.0, ThresholdMode::Exact).unwrap();
        assert!((e.value - 1.004458).abs() < 1e-6);
        let a = transformed_improved_threshold(0.0, ThresholdMode::Approx).unwrap();
        assert!((a.value - e.value).abs() < 1e-15);
        assert!(transformed_improved_threshold(1.0, ThresholdMode::Exact).is_err());
    }
}

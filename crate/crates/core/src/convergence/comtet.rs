//! Thresholds for the Comtet series.

use std::f64::consts::E;

use num_complex::Complex64;

use super::{eta0, eta_csc, ConvergenceVerdict, Threshold, ThresholdKind};
use crate::error::{Error, Result};
use crate::oracle::{lambert_w, lambert_w_real, BranchIndex};
use crate::series::SeriesVariables;

/// `b` with `Re W_{-1}(x) > a  <=>  x < b` for `x < 0`.
pub fn lemma_threshold(a: f64) -> Result<Threshold> {
    if a <= -1.0 {
        return Ok(Threshold::new(ThresholdKind::LemmaB, a * a.exp(), 0.0));
    }
    let e0 = eta0(-a)?;
    let b = -a.exp() * eta_csc(e0);
    Ok(Threshold::new(ThresholdKind::LemmaB, b, (e0 / e0.tan() + a).abs()).with_eta0(Some(e0)))
}

/// `min over m in {-1, 0}` of `Re W_m(x)`; for real `x` this is the `W_{-1}` value.
fn min_re_w(x: Complex64) -> Result<f64> {
    let a = lambert_w(BranchIndex::MINUS_ONE, x)?.re;
    let b = lambert_w(BranchIndex::PRINCIPAL, x)?.re;
    Ok(a.min(b))
}

/// `ln|σ| < 1 - Re λ + min_m Re W_m(-e^(λ-1))` with `λ = τ/σ`.
pub fn comtet_converges(vars: &SeriesVariables) -> Result<ConvergenceVerdict> {
    let lambda = vars
        .lambda()
        .ok_or_else(|| Error::Domain("the Comtet criterion needs sigma != 0".into()))?;
    let rhs = 1.0 - lambda.re + min_re_w(-(lambda - 1.0).exp())?;
    let lhs = vars.sigma.norm().ln();
    Ok(ConvergenceVerdict {
        converges: lhs < rhs,
        governing: "ln|sigma| < 1 - Re lambda + min Re W_m(-e^(lambda-1))".into(),
        margin: rhs - lhs,
    })
}

/// The complex-plane criterion `Re W_m(-ln z / e) > -1`, `m = -1` for
/// `arg z <= 0` and `m = 1` above the real axis.
pub fn comtet_converges_z(z: Complex64) -> Result<ConvergenceVerdict> {
    let arg = if z.im == 0.0 { Complex64::new(z.re, 0.0).arg() } else { z.arg() };
    let branch = if arg <= 0.0 { BranchIndex::MINUS_ONE } else { BranchIndex::PLUS_ONE };
    let w = lambert_w(branch, -z.ln() / E)?;
    Ok(ConvergenceVerdict {
        converges: w.re > -1.0,
        governing: format!("Re W_{}(-ln z / e) > -1", branch.k()),
        margin: w.re + 1.0,
    })
}

/// Residual of the Comtet boundary `ln σ = 1 - λ + Re W_{-1}(-e^(λ-1))` at real `σ, λ`.
fn comtet_boundary_residual(sigma: f64, lambda: f64) -> f64 {
    match min_re_w(Complex64::new(-(lambda - 1.0).exp(), 0.0)) {
        Ok(w) => (sigma.ln() - (1.0 - lambda + w)).abs(),
        Err(_) => f64::NAN,
    }
}

/// `x_α`: the Comtet series for `Φ_α` converges exactly for `x > x_α`.
pub fn comtet_real_threshold(alpha: f64) -> Result<Threshold> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
    }
    let (x, e0) = if alpha <= 1.0 {
        ((E / alpha).powf(alpha), None)
    } else {
        let e0 = eta0(1.0 - alpha.ln())?;
        ((alpha * eta_csc(e0)).exp(), Some(e0))
    };
    let l = x.ln();
    let residual = comtet_boundary_residual(alpha / l, l.ln());
    Ok(Threshold::new(ThresholdKind::XAlpha, x, residual).with_eta0(e0))
}

/// Interval `(e^(-|α|), e^(b|α|))` on which the Comtet series surely diverges.
pub fn comtet_divergence_interval(alpha: f64) -> Result<(f64, f64)> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha = {alpha} must be finite and nonzero")));
    }
    let a = alpha.abs();
    let b = if a < (-1.0f64).exp() { lambert_w_real(BranchIndex::PRINCIPAL, 1.0 / a)? } else { 1.0 };
    Ok(((-a).exp(), (b * a).exp()))
}

/// `z_p`: the `p`-transformed Comtet series converges for real `z > z_p`.
pub fn transformed_comtet_threshold(p: f64) -> Result<Threshold> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("p = {p} must be finite")));
    }
    let (z, e0) = if p <= 0.0 {
        ((1.0 - 2.0 * p).exp(), None)
    } else {
        let e0 = eta0(1.0 - p)?;
        ((-p + eta_csc(e0)).exp(), Some(e0))
    };
    let q = p + z.ln();
    let residual = comtet_boundary_residual(1.0 / q, p + q.ln());
    Ok(Threshold::new(ThresholdKind::ZP, z, residual).with_eta0(e0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn lemma_cases() {
        assert!((lemma_threshold(-1.0).unwrap().value + (-1.0f64).exp()).abs() < 1e-16);
        assert!((lemma_threshold(-2.0).unwrap().value + 2.0 * (-2.0f64).exp()).abs() < 1e-16);
        let t = lemma_threshold(0.0).unwrap();
        assert_eq!(t.eta0, Some(FRAC_PI_2));
        assert!((t.value + FRAC_PI_2).abs() < 1e-15);
        // continuity at a = -1 from above
        let above = lemma_threshold(-1.0 + 1e-9).unwrap().value;
        assert!((above + (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn lemma_boundary_matches_oracle() {
        for a in [-0.5, 0.0, 0.7, 2.0] {
            let b = lemma_threshold(a).unwrap().value;
            let w = lambert_w(BranchIndex::MINUS_ONE, Complex64::new(b, 0.0)).unwrap();
            assert!((w.re - a).abs() < 1e-10, "a = {a}: {w}");
        }
    }

    #[test]
    fn real_threshold_examples() {
        assert!((comtet_real_threshold(1.0).unwrap().value - E).abs() < 1e-15);
        assert!((comtet_real_threshold(0.5).unwrap().value - (2.0 * E).sqrt()).abs() < 1e-14);
        let t = comtet_real_threshold(E).unwrap();
        assert!((t.value - (E * FRAC_PI_2).exp()).abs() < 1e-12 * t.value);
        assert!(t.residual < 1e-12, "{}", t.residual);
    }

    #[test]
    fn divergence_interval_examples() {
        let (a, b) = comtet_divergence_interval(1.0).unwrap();
        assert!((a - (-1.0f64).exp()).abs() < 1e-16 && (b - E).abs() < 1e-15);
        let inv_e = (-1.0f64).exp();
        let (_, b1) = comtet_divergence_interval(inv_e).unwrap();
        let (_, b2) = comtet_divergence_interval(inv_e * (1.0 - 1e-12)).unwrap();
        assert!((b1 - b2).abs() < 1e-9);
        let (_, b) = comtet_divergence_interval(0.1).unwrap();
        assert!((b.ln() / 0.1 - 1.7455280027406994).abs() < 1e-12);
    }

    #[test]
    fn predicate_examples() {
        let v = |x: f64| SeriesVariables::from_alpha(x, 1.0).unwrap();
        assert!(comtet_converges(&v(5.0)).unwrap().converges);
        assert!(!comtet_converges(&v(2.0)).unwrap().converges);
        let c = comtet_converges(&SeriesVariables::real(0.1, 0.0)).unwrap();
        assert!(c.converges);
        assert!((c.margin - (0.0 - 0.1f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn complex_predicate_agrees_on_real_axis() {
        assert!(comtet_converges_z(Complex64::new(5.0, 0.0)).unwrap().converges);
        assert!(!comtet_converges_z(Complex64::new(2.0, 0.0)).unwrap().converges);
        assert!(comtet_converges_z(Complex64::new(0.0, 30.0)).unwrap().converges);
        assert!(!comtet_converges_z(Complex64::new(-0.5, 0.5)).unwrap().converges);
    }

    #[test]
    fn transformed_threshold_examples() {
        assert!((transformed_comtet_threshold(0.0).unwrap().value - E).abs() < 1e-15);
        assert!((transformed_comtet_threshold(-1.0).unwrap().value - E.powi(3)).abs() < 1e-13);
        let t = transformed_comtet_threshold(1.0).unwrap();
        assert!((t.value - (FRAC_PI_2 - 1.0).exp()).abs() < 1e-15);
        for p in [-1.0, 0.0, 1.0, 0.4, 2.5] {
            assert!(transformed_comtet_threshold(p).unwrap().residual < 1e-12, "p = {p}");
        }
        let _ = PI;
    }
}

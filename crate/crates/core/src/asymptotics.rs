//! Darboux-type estimates of the expansion coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::convergence::improved_radius;
use crate::error::{Error, Result};
use crate::oracle::{lambert_w_real, BranchIndex};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub index: usize,
    pub value: Complex64,
    /// `θ₁ = arg(1 + σ - σ ln σ + iπσ)` for real `σ > 0`.
    pub theta1: Option<f64>,
    pub tau_star: f64,
    /// Number of singularities on the circle of convergence that contribute.
    pub singularities: usize,
}

/// `1/W(1/e)`, where the real part of `1 + σ - σ ln σ` changes sign.
pub fn theta1_split() -> f64 {
    1.0 / lambert_w_real(BranchIndex::PRINCIPAL, (-1.0f64).exp()).expect("W(1/e) is real")
}

/// `θ₁` from the piecewise arctangent formula, `σ > 0`.
pub fn theta1(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("theta1 needs sigma > 0, got {sigma}")));
    }
    let base = (PI / (1.0 - sigma.ln() + 1.0 / sigma)).atan();
    Ok(if sigma < theta1_split() { base } else { PI + base })
}

/// `θ₁` computed directly as an argument.
pub fn theta1_direct(sigma: f64) -> f64 {
    Complex64::new(1.0 + sigma - sigma * sigma.ln(), PI * sigma).arg()
}

/// Estimate of `c_m(σ)` as `m → ∞`.
///
/// Real `σ > 0` sums both conjugate singularities, real `σ < 0` and complex `σ`
/// keep one; at `σ = 0` the coefficient is `1/m` exactly.
pub fn cm_asymptotic(sigma: Complex64, m: usize) -> Result<AsymptoticEstimate> {
    if m == 0 {
        return Err(Error::Domain("coefficients start at m = 1".into()));
    }
    let tau_star = improved_radius(sigma).value;
    if sigma == Complex64::new(-1.0, 0.0) {
        return Err(Error::Domain("sigma = -1: the coefficients have no finite radius".into()));
    }
    let mf = m as f64;
    let mh = mf - 0.5;
    let m32 = mf.powf(1.5);
    let est = |value: Complex64, theta1: Option<f64>, singularities: usize| AsymptoticEstimate {
        index: m,
        value,
        theta1,
        tau_star,
        singularities,
    };
    if sigma.im == 0.0 {
        let s = sigma.re;
        if s == 0.0 {
            return Ok(est(Complex64::new(1.0 / mf, 0.0), None, 0));
        }
        if s < 0.0 {
            let a = -s;
            let base = 1.0 - a + a * a.ln();
            let v = -1.0 / ((2.0 * PI * a).sqrt() * m32 * base.powf(mh));
            return Ok(est(Complex64::new(v, 0.0), None, 1));
        }
        let th = theta1(s)?;
        let v = (2.0 / (PI * s)).sqrt() * (mh * th).sin() / (tau_star.powf(mh) * m32);
        return Ok(est(Complex64::new(v, 0.0), Some(th), 2));
    }
    let sign = if sigma.im > 0.0 { 1.0 } else { -1.0 };
    let i = Complex64::i();
    let t = 1.0 + sigma - sigma * sigma.ln() + sign * i * PI * sigma;
    // `1/(√σ t^(m-1/2))` grouped as `√(t/σ)/t^m`: the principal branch of the
    // ungrouped form flips sign once `t` and `σ` straddle the negative axis.
    let v = sign * i * (t / sigma).sqrt() / ((2.0 * PI).sqrt() * m32 * t.powi(m as i32));
    Ok(est(v, None, 1))
}

/// Estimate of the Wright coefficient `a_n`.
pub fn an_asymptotic(n: usize) -> f64 {
    assert!(n >= 1, "coefficients start at n = 1");
    let nf = n as f64;
    let k = 2.0 * nf - 1.0;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    (2.0 / PI).sqrt() * sign * (k / 2.0 * PI.atan()).sin() / (nf.powf(1.5) * (1.0 + PI * PI).powf(k / 4.0))
}

/// Estimate of `sum_{p=1}^{m-1} {p+m-1, p}` (2-associated subset numbers).
pub fn assoc_sum_asymptotic(m: usize) -> f64 {
    assert!(m >= 2, "the estimate starts at m = 2");
    let mf = m as f64;
    let log_fact: f64 = (1..m).map(|k| (k as f64).ln()).sum();
    let base = 2.0 * 2f64.ln() - 1.0;
    (log_fact - (mf - 0.5) * base.ln()).exp() / (2.0 * (PI * mf).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_exact() {
        for m in 1..10 {
            let e = cm_asymptotic(Complex64::new(0.0, 0.0), m).unwrap();
            assert_eq!(e.value.re, 1.0 / m as f64);
        }
    }

    #[test]
    fn theta1_forms_agree() {
        let split = theta1_split();
        assert!((split - 3.591_121_476_668_622).abs() < 1e-12);
        for s in [0.1, 1.0, 3.5, 3.7, 50.0] {
            assert!((theta1(s).unwrap() - theta1_direct(s)).abs() < 1e-13, "sigma = {s}");
        }
    }

    #[test]
    fn singularity_counts() {
        assert_eq!(cm_asymptotic(Complex64::new(1.0, 0.0), 5).unwrap().singularities, 2);
        assert_eq!(cm_asymptotic(Complex64::new(-2.0, 0.0), 5).unwrap().singularities, 1);
        assert_eq!(cm_asymptotic(Complex64::new(1.0, 0.5), 5).unwrap().singularities, 1);
        assert!(cm_asymptotic(Complex64::new(-1.0, 0.0), 5).is_err());
    }

    #[test]
    fn wright_envelope_ratio() {
        let r = 1.0 / (1.0 + PI * PI).sqrt();
        for n in 20..40 {
            let env = |n: usize| {
                let nf = n as f64;
                1.0 / (nf.powf(1.5) * (1.0 + PI * PI).powf((2.0 * nf - 1.0) / 4.0))
            };
            let ratio = env(n + 1) / env(n);
            assert!((ratio / r - 1.0).abs() < 0.08);
            assert!(an_asymptotic(n).abs() <= (2.0 / PI).sqrt() * env(n) * (1.0 + 1e-12));
        }
    }
}

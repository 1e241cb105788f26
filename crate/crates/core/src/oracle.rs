//! Reference values of `W_k` and the Wright omega function by Halley
//! iteration. Nothing here uses the series being tested.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use crate::real::{DoubleDouble, Real};

/// `W(1)`, the Omega constant.
pub const OMEGA: f64 = 0.567_143_290_409_783_8;

const MAX_ITER: usize = 60;
const INV_E: f64 = 1.0 / E;

/// Branch indices handled by the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BranchIndex(i32);

impl BranchIndex {
    pub const PRINCIPAL: BranchIndex = BranchIndex(0);
    pub const MINUS_ONE: BranchIndex = BranchIndex(-1);
    pub const PLUS_ONE: BranchIndex = BranchIndex(1);

    pub fn new(k: i32) -> Result<BranchIndex> {
        match k {
            -1..=1 => Ok(BranchIndex(k)),
            _ => Err(Error::Domain(format!("branch {k} is not supported (only -1, 0, 1)"))),
        }
    }

    pub fn k(self) -> i32 {
        self.0
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Negative zero in the imaginary part would put `ln z` on the lower side of
/// the cut; the oracle uses the counter-clockwise convention throughout.
fn normalize(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        c(z.re, 0.0)
    } else {
        z
    }
}

/// `-1 + p - p^2/3 + 11 p^3/72 - 43 p^4/540 + 769 p^5/17280`, the expansion of
/// `W` about the branch point in `p = ±sqrt(2(ez + 1))`.
fn branch_point_series(p: Complex64) -> Complex64 {
    let coeffs = [-1.0, 1.0, -1.0 / 3.0, 11.0 / 72.0, -43.0 / 540.0, 769.0 / 17280.0];
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * p + a)
}

fn asymptotic_seed(z: Complex64, k: i32) -> Complex64 {
    let l1 = z.ln() + c(0.0, 2.0 * PI * k as f64);
    if l1.norm() < 1e-3 {
        return l1;
    }
    l1 - l1.ln()
}

fn seeds(z: Complex64, k: i32) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(5);
    let p = (2.0 * (E * z + 1.0)).sqrt();
    if k == 0 {
        if z.norm() < 0.5 {
            out.push(z - z * z + 1.5 * z * z * z);
        }
        if (z + INV_E).norm() < 0.5 {
            out.push(branch_point_series(p));
        }
        let l = (z + 1.0).ln();
        out.push(l * (1.0 - (l + 1.0).ln() / (l + 2.0)));
        out.push(asymptotic_seed(z, 0));
    } else {
        if (z + INV_E).norm() < 0.5 {
            out.push(branch_point_series(-p));
            out.push(branch_point_series(p));
        }
        out.push(asymptotic_seed(z, k));
        let l1 = z.ln() + c(0.0, 2.0 * PI * k as f64);
        out.push(l1 - (l1).ln() + l1.ln() / l1);
    }
    out
}

/// Step size below which Halley has converged; widened near the branch point,
/// where rounding in `f` is amplified by `1/|1 + w|`.
fn step_tol(w: Complex64) -> f64 {
    4.0 * f64::EPSILON * w.norm().max(1e-300) * (1.0 + 1.0 / (w + 1.0).norm())
}

fn halley_exp_form(z: Complex64, mut w: Complex64) -> Option<Complex64> {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if !denom.is_finite() || denom.norm() == 0.0 {
            return None;
        }
        let dw = f / denom;
        w -= dw;
        if !w.is_finite() {
            return None;
        }
        if dw.norm() <= step_tol(w) {
            return Some(w);
        }
    }
    None
}

/// Halley on `w + ln w = target`, used when `e^w` would overflow or underflow.
fn halley_log_form(target: Complex64, mut w: Complex64) -> Option<Complex64> {
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - target;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let denom = g1 - g * g2 / (2.0 * g1);
        if !denom.is_finite() || denom.norm() == 0.0 {
            return None;
        }
        let dw = g / denom;
        w -= dw;
        if !w.is_finite() {
            return None;
        }
        if dw.norm() <= step_tol(w) {
            return Some(w);
        }
    }
    None
}

/// Unwinding number of `w + ln w - ln z`, which identifies the branch of `w`.
fn branch_of(w: Complex64, z: Complex64) -> i64 {
    ((w + w.ln() - z.ln()).im / (2.0 * PI)).round() as i64
}

fn on_real_m1_segment(z: Complex64) -> bool {
    z.im == 0.0 && z.re >= -INV_E && z.re < 0.0
}

fn accepts(w: Complex64, z: Complex64, k: i32) -> bool {
    if on_real_m1_segment(z) && k != 1 {
        // Both real branches satisfy the log relation with unwinding 0 here.
        let tol = 1e-9;
        return w.im.abs() <= tol * w.norm().max(1.0)
            && if k == 0 { w.re >= -1.0 - tol } else { w.re <= -1.0 + tol };
    }
    branch_of(w, z) == k as i64
}

/// `W_k(z)` for `k` in {-1, 0, 1}.
pub fn lambert_w(k: BranchIndex, z: Complex64) -> Result<Complex64> {
    let k = k.k();
    let z = normalize(z);
    if !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not finite")));
    }
    if z.norm() == 0.0 {
        return if k == 0 {
            Ok(c(0.0, 0.0))
        } else {
            Err(Error::Domain(format!("W_{k}(0) is -infinity")))
        };
    }
    let ez1 = E * z + 1.0;
    if ez1.norm() < 1e-9 && k != 1 {
        let p = (2.0 * ez1).sqrt();
        let p = if k == 0 { p } else { -p };
        let w = branch_point_series(p);
        return Ok(if z.im == 0.0 && z.re <= -INV_E + 1e-9 && ez1.re >= 0.0 { c(w.re, 0.0) } else { w });
    }
    let log_form = z.norm().ln().abs() > 200.0;
    let target = z.ln() + c(0.0, 2.0 * PI * k as f64);
    for seed in seeds(z, k) {
        let w = if log_form { halley_log_form(target, seed) } else { halley_exp_form(z, seed) };
        if let Some(w) = w {
            if accepts(w, z, k) {
                let w = if z.im == 0.0 && w.im.abs() < 1e-14 * w.norm().max(1.0) && real_on_axis(z, k) {
                    c(w.re, 0.0)
                } else {
                    w
                };
                return Ok(w);
            }
        }
    }
    Err(Error::NoConvergence(format!("W_{k}({z}): no seed converged to the requested branch")))
}

fn real_on_axis(z: Complex64, k: i32) -> bool {
    match k {
        0 => z.re >= -INV_E,
        -1 => z.re >= -INV_E && z.re < 0.0,
        _ => false,
    }
}

/// `W_k(x)` on the real segments where the branch is real: `x >= -1/e` for
/// `k = 0` and `-1/e <= x < 0` for `k = -1`.
pub fn lambert_w_real(k: BranchIndex, x: f64) -> Result<f64> {
    // A few ulps below -1/e still count as the branch point.
    let x = if x < -INV_E && x > -INV_E * (1.0 + 4.0 * f64::EPSILON) { -INV_E } else { x };
    match k.k() {
        0 if x >= -INV_E => {}
        -1 if (-INV_E..0.0).contains(&x) => {}
        0 => return Err(Error::Domain(format!("W_0({x}) is not real: need x >= -1/e"))),
        -1 => return Err(Error::Domain(format!("W_-1({x}) is not real: need -1/e <= x < 0"))),
        kk => return Err(Error::Domain(format!("W_{kk} is never real"))),
    }
    if x == -INV_E {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let w = lambert_w(k, c(x, 0.0))?;
    Ok(w.re)
}

/// Wright omega: the solution of `ω + ln ω = z` with the principal logarithm.
pub fn wright_omega(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("z = {z} is not finite")));
    }
    if z.re <= -1.0 && (z.im.abs() - PI).abs() < 1e-15 * PI {
        return Err(Error::Domain(format!(
            "z = {z} lies on a ray xi ± i pi with xi <= -1 where omega is undefined"
        )));
    }
    let mut seeds = Vec::with_capacity(3);
    if z.re < -20.0 && z.im.abs() < PI {
        seeds.push(z.exp());
    } else if z.norm() < 30.0 {
        let k = ((z.im - PI) / (2.0 * PI)).ceil() as i32;
        if let Ok(b) = BranchIndex::new(k) {
            if let Ok(w) = lambert_w(b, z.exp()) {
                seeds.push(w);
            }
        }
    }
    seeds.push(z - z.ln());
    seeds.push(c(OMEGA, 0.0) + z * 0.36);
    for seed in seeds {
        if z.re < -20.0 && z.im.abs() < PI {
            // ω ≈ e^z; the relation ω = e^(z - ω) converges immediately.
            let mut w = seed;
            for _ in 0..MAX_ITER {
                let next = (z - w).exp();
                if (next - w).norm() <= f64::EPSILON * next.norm() {
                    w = next;
                    break;
                }
                w = next;
            }
            return Ok(w);
        }
        if let Some(w) = halley_log_form(z, seed) {
            if (w + w.ln() - z).norm() <= 1e-12 * z.norm().max(1.0) {
                return Ok(w);
            }
        }
    }
    Err(Error::NoConvergence(format!("omega({z}) did not converge")))
}

/// Wright omega on the real line, where it equals `W_0(e^t)`; never overflows.
pub fn wright_omega_real(t: f64) -> f64 {
    if t < -40.0 {
        let mut w = t.exp();
        for _ in 0..4 {
            w = (t - w).exp();
        }
        return w;
    }
    let mut w = if t > 1.0 {
        t - t.ln()
    } else if t < -1.0 {
        t.exp()
    } else {
        OMEGA + 0.36 * t
    };
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - t;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let dw = g / (g1 - g * g2 / (2.0 * g1));
        w -= dw;
        if dw.abs() <= 2.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}

/// `|e^(-ψ) - ψ - t|` with `ψ = W(e^t) - t`; zero up to rounding.
pub fn psi_residual(t: f64) -> f64 {
    let psi = wright_omega_real(t) - t;
    ((-psi).exp() - psi - t).abs()
}

/// The Omega constant in double-double precision (Newton on `w = e^(-w)`).
pub fn omega_dd() -> DoubleDouble {
    let mut w = DoubleDouble::from_f64(OMEGA);
    for _ in 0..3 {
        let e = (-w).exp();
        w = w - (w - e) / (DoubleDouble::one() + e);
    }
    w
}

/// Residual `|w e^w - z|` used by tests and reports.
pub fn defining_residual(w: Complex64, z: Complex64) -> f64 {
    (w * w.exp() - z).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w0(x: f64) -> f64 {
        lambert_w_real(BranchIndex::PRINCIPAL, x).unwrap()
    }

    #[test]
    fn principal_branch_named_values() {
        assert_eq!(w0(0.0), 0.0);
        assert!((w0(E) - 1.0).abs() < 1e-15);
        assert!((w0(1.0) - OMEGA).abs() < 1e-15);
        assert_eq!(w0(-INV_E), -1.0);
    }

    #[test]
    fn minus_one_branch_named_values() {
        let m1 = |x| lambert_w_real(BranchIndex::MINUS_ONE, x).unwrap();
        assert!((m1(-0.1) - (-3.577152063957297)).abs() < 1e-13);
        assert_eq!(m1(-INV_E), -1.0);
        assert!(matches!(lambert_w_real(BranchIndex::MINUS_ONE, 0.5), Err(Error::Domain(_))));
        assert!(matches!(lambert_w_real(BranchIndex::MINUS_ONE, -0.5), Err(Error::Domain(_))));
        assert!(matches!(lambert_w_real(BranchIndex::PRINCIPAL, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn unsupported_branch_is_rejected() {
        assert!(BranchIndex::new(2).is_err());
    }

    #[test]
    fn cut_values_are_conjugates() {
        let a = lambert_w(BranchIndex::PRINCIPAL, c(-0.5, 0.0)).unwrap();
        let b = lambert_w(BranchIndex::MINUS_ONE, c(-0.5, 0.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-14);
        assert!((a - c(-0.7940236323446893, 0.7701117505103791)).norm() < 1e-14);
    }

    #[test]
    fn large_and_tiny_arguments() {
        let z = c(1e250, 0.0);
        let w = lambert_w(BranchIndex::PRINCIPAL, z).unwrap();
        assert!((w + w.ln() - z.ln()).norm() < 1e-12 * w.norm());
        let z = c(-1e-250, 1e-250);
        let w = lambert_w(BranchIndex::PLUS_ONE, z).unwrap();
        assert!((w + w.ln() - z.ln() - c(0.0, 2.0 * PI)).norm() < 1e-12 * w.norm());
    }

    #[test]
    fn wright_omega_examples() {
        let w = wright_omega(c(0.0, 0.0)).unwrap();
        assert!((w - OMEGA).norm() < 1e-15);
        let w = wright_omega(c(1.0, 0.0)).unwrap();
        assert!((w + w.ln() - 1.0).norm() < 1e-15);
        for &x in &[0.5, 2.0, 5.0] {
            let z = x + f64::ln(x);
            assert!((wright_omega(c(z, 0.0)).unwrap() - x).norm() < 1e-14 * x);
        }
        assert!(wright_omega(c(-2.0, PI)).is_err());
        assert!(wright_omega(c(-1.0, -PI)).is_err());
        assert!(wright_omega(c(-0.5, PI)).is_ok());
    }

    #[test]
    fn real_omega_matches_principal_branch() {
        for &t in &[-50.0, -3.0, -0.2, 0.0, 0.7, 4.0, 800.0] {
            let w = wright_omega_real(t);
            assert!((w + w.ln() - t).abs() <= 1e-14 * t.abs().max(1.0), "t = {t}");
            if t.abs() < 30.0 {
                assert!((w - w0(t.exp())).abs() <= 1e-14 * w.max(1.0));
            }
        }
    }

    #[test]
    fn psi_residual_vanishes() {
        for t in [0.0, 1.0, -2.0] {
            assert!(psi_residual(t) <= 1e-14, "t = {t}");
        }
    }

    #[test]
    fn omega_double_double() {
        let w = omega_dd();
        let r = w * w.exp() - DoubleDouble::one();
        assert!(r.abs().to_f64() < 1e-30);
        assert!((w.to_f64() - OMEGA).abs() < 1e-16);
    }
}

//! Coefficients of `W(e^t) = ω₀ + sum a_n t^n` and its partial sums.

use num_complex::Complex64;
use serde::Serialize;

use crate::combinatorics::{factorial, tables};
use crate::oracle::{omega_dd, OMEGA};
use crate::real::{CompensatedSum, DoubleDouble, Precision, Real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WrightMethod {
    /// Second-order Eulerian numbers.
    Eulerian,
    /// Associated Stirling numbers of the first kind `d(m, k)`.
    AssocStirling1,
    /// 2-associated Stirling subset numbers.
    AssocStirling2,
    /// The `c_n` recurrence from `dψ/dt = -1/(1 + t + ψ)`.
    Recurrence,
}

impl WrightMethod {
    pub const ALL: [WrightMethod; 4] = [
        WrightMethod::Eulerian,
        WrightMethod::AssocStirling1,
        WrightMethod::AssocStirling2,
        WrightMethod::Recurrence,
    ];
}

fn alt<S: Scalar>(acc: S, term: S, negative: bool) -> S {
    if negative {
        acc - term
    } else {
        acc + term
    }
}

/// `a_n` by one closed form. `w` is the expansion value, `ω₀` for `W(e^t)`.
pub fn wright_series_a<S: Scalar>(n: usize, method: WrightMethod, w: &S) -> S {
    assert!(n >= 1, "coefficients start at n = 1");
    if method == WrightMethod::Recurrence {
        return wright_coeffs_recurrence(n, w).pop().expect("n >= 1");
    }
    let t = tables();
    let one = S::one();
    let opw = one.clone() + w.clone();
    let inv = one.clone() / opw.clone();
    let nfact = S::from_bigint(&factorial(n));
    match method {
        WrightMethod::Eulerian => {
            let mut sum = S::zero();
            for k in 0..n {
                let term = S::from_bigint(&t.eulerian2(n - 1, k)) * w.powi((k + 1) as u32);
                sum = alt(sum, term, k % 2 == 1);
            }
            sum / (nfact * opw.powi((2 * n - 1) as u32))
        }
        WrightMethod::AssocStirling1 => {
            let mut sum = S::zero();
            for k in 0..n {
                let term = S::from_bigint(&t.assoc_stirling1_d(n + k - 1, k)) * inv.powi((n + k) as u32);
                sum = alt(sum, term, (n + k - 1) % 2 == 1);
            }
            w.clone() * sum / nfact
        }
        WrightMethod::AssocStirling2 => {
            let mut sum = S::zero();
            for k in 0..n {
                let term = S::from_bigint(&t.stirling2_assoc2(n + k - 1, k))
                    * w.powi(k as u32)
                    * inv.powi((n + k) as u32);
                sum = alt(sum, term, k % 2 == 0);
            }
            // This form expands W(e^t) - ω₀ - t, so the linear coefficient gains 1.
            let a = sum / nfact;
            if n == 1 {
                a + one
            } else {
                a
            }
        }
        WrightMethod::Recurrence => unreachable!(),
    }
}

/// `a_1..=a_N` by the recurrence; `O(N^2)` field operations.
pub fn wright_coeffs_recurrence<S: Scalar>(n_max: usize, w: &S) -> Vec<S> {
    let inv = S::one() / (S::one() + w.clone());
    let mut c: Vec<S> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let cn = if n == 1 {
            -inv.clone()
        } else {
            let mut acc = S::from_i64((n - 1) as i64) * c[n - 2].clone();
            for k in 1..n {
                acc = acc + S::from_i64(k as i64) * c[k - 1].clone() * c[n - k - 1].clone();
            }
            -(inv.clone() * acc) / S::from_i64(n as i64)
        };
        c.push(cn);
    }
    if let Some(first) = c.first_mut() {
        *first = S::one() + first.clone();
    }
    c
}

/// `ω₀ + sum_{n<=N} a_n t^n` in precision `R`, coefficients by the recurrence.
pub fn wright_partial_sum<R: Real>(t: R, n: usize, omega: R) -> R {
    let a = wright_coeffs_recurrence(n, &omega);
    let mut acc = CompensatedSum::<R>::default();
    acc.add(omega);
    let mut pow = t;
    for an in a {
        acc.add(an * pow);
        pow = pow * t;
    }
    acc.total()
}

/// Partial sum of `W(x) = ω₀ + sum a_n (ln x)^n`.
pub fn wright_series_eval(x: f64, n: usize) -> crate::Result<f64> {
    wright_series_eval_with(x, n, Precision::Standard)
}

pub fn wright_series_eval_with(x: f64, n: usize, precision: Precision) -> crate::Result<f64> {
    if !(x > 0.0) {
        return Err(crate::Error::Domain(format!("x = {x}: the Wright series needs x > 0")));
    }
    Ok(wright_series_eval_t(x.ln(), n, precision))
}

/// Partial sum at `t = ln x` directly.
pub fn wright_series_eval_t(t: f64, n: usize, precision: Precision) -> f64 {
    match precision {
        Precision::Standard => wright_partial_sum(t, n, OMEGA),
        Precision::Elevated => wright_partial_sum(DoubleDouble::from_f64(t), n, omega_dd()).to_f64(),
    }
}

/// Partial sum at complex `t`, standard precision.
pub fn wright_series_eval_complex(t: Complex64, n: usize) -> Complex64 {
    let a = wright_coeffs_recurrence(n, &OMEGA);
    let mut acc = crate::real::ComplexSum::<f64>::default();
    acc.add(Complex64::new(OMEGA, 0.0));
    let mut pow = t;
    for an in a {
        acc.add(pow * an);
        pow *= t;
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Rational;
    use num_bigint::BigInt;

    #[test]
    fn first_coefficient() {
        let expect = OMEGA / (1.0 + OMEGA);
        for m in WrightMethod::ALL {
            assert!((wright_series_a(1, m, &OMEGA) - expect).abs() < 1e-16, "{m:?}");
        }
    }

    #[test]
    fn closed_forms_agree_exactly_at_rational_w() {
        let w = Rational::new(BigInt::from(2), BigInt::from(3));
        for n in 1..=15 {
            let a = wright_series_a(n, WrightMethod::Eulerian, &w);
            for m in WrightMethod::ALL {
                assert_eq!(wright_series_a(n, m, &w), a, "n = {n}, {m:?}");
            }
        }
    }

    #[test]
    fn zero_argument_gives_omega() {
        assert_eq!(wright_series_eval(1.0, 5).unwrap(), OMEGA);
        assert!(wright_series_eval(0.0, 5).is_err());
    }
}

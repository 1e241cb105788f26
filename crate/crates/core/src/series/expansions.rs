//! Coefficients of the three `τ`-power series for `u` and their partial sums.
//!
//! Each coefficient is an integer polynomial in `σ` or `ζ = 1/(1+σ)`; it is
//! evaluated exactly at the binary value of `σ`. Partial sums are likewise
//! formed exactly at the binary `(σ, τ)` and rounded once.

use num_bigint::BigInt;
use num_integer::Integer;
use num_complex::{Complex, Complex64};
use num_traits::{One, Pow, Zero};

use crate::combinatorics::{binomial, factorial, tables, Rational};
use crate::error::{Error, Result};
use crate::exact::{gauss_pow, GaussInt, homogeneous, homogeneous_real_y, round_complex, GaussDyadic, ZetaParts};
use crate::real::{Real, Scalar};

/// Exact `k_m = (1/m!) sum_{j=0}^{N-m} [m+j, j+1] (-σ)^j`, the coefficient of
/// `τ^m` in the Comtet double sum truncated at total order `N`.
fn comtet_parts(sigma: Complex64, n: usize) -> Vec<(GaussInt, BigInt)> {
    let s = GaussDyadic::from_complex(sigma);
    let minus = -s.num.clone();
    let t = tables();
    (1..=n)
        .map(|m| {
            let top = n - m;
            let b: Vec<BigInt> = (0..=top).map(|j| t.stirling_cycle(m + j, j + 1)).collect();
            let num = homogeneous_real_y(&b, &minus, &s.denom());
            let den = (BigInt::one() << (s.shift as usize * top)) * factorial(m);
            (num, den)
        })
        .collect()
}

/// Comtet coefficients `k_m`, `m = 1..=N`, each rounded once.
pub fn comtet_coeffs<R: Real>(sigma: Complex64, n: usize) -> Vec<Complex<R>> {
    comtet_parts(sigma, n).iter().map(|(num, den)| round_complex(num, den)).collect()
}

/// Integer coefficients `(-1)^(p+m-1) {p+m-1, p}` of `ζ^(p+m)`, `p = 0..m`.
fn stirling_zeta_row(m: usize) -> Vec<BigInt> {
    let t = tables();
    (0..m)
        .map(|p| {
            let s = t.stirling2_assoc2(p + m - 1, p);
            if (p + m - 1) % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Integer coefficients `(-1)^(m+k) <<m-1, k>>`, `k = 0..=m-2`.
fn eulerian_row(m: usize) -> Vec<BigInt> {
    let t = tables();
    (0..=m - 2)
        .map(|k| {
            let e = t.eulerian2(m - 1, k);
            if (m + k) % 2 == 0 {
                e
            } else {
                -e
            }
        })
        .collect()
}

fn improved_parts(sigma: Complex64, m_max: usize) -> Result<Vec<(GaussInt, BigInt)>> {
    let z = ZetaParts::new(sigma)?;
    let d = Complex::new(z.den.clone(), BigInt::zero());
    Ok((1..=m_max)
        .map(|m| {
            let h = homogeneous(&stirling_zeta_row(m), &z.num, &d);
            let num = gauss_pow(&z.num, m as u32) * h;
            let den = Pow::pow(&z.den, (2 * m - 1) as u32) * factorial(m);
            (num, den)
        })
        .collect())
}

fn eulerian_parts(sigma: Complex64, m_max: usize) -> Result<Vec<(GaussInt, BigInt)>> {
    let z = ZetaParts::new(sigma)?;
    let one_minus = z.one_minus_num();
    Ok((1..=m_max)
        .map(|m| {
            if m == 1 {
                return (z.num.clone(), z.den.clone());
            }
            let h = homogeneous(&eulerian_row(m), &z.num, &one_minus);
            let num = gauss_pow(&z.num, (m + 1) as u32) * h;
            let den = Pow::pow(&z.den, (2 * m - 1) as u32) * factorial(m);
            (num, den)
        })
        .collect())
}

/// `c_m(σ)` for `m = 1..=M` through the 2-associated Stirling form in `ζ`.
pub fn improved_coeffs<R: Real>(sigma: Complex64, m_max: usize) -> Result<Vec<Complex<R>>> {
    Ok(improved_parts(sigma, m_max)?.iter().map(|(num, den)| round_complex(num, den)).collect())
}

/// `c_m(σ)` for `m = 1..=M` through the Eulerian form in `ζ` and `1 - ζ`,
/// without expanding the `(1-ζ)` powers.
pub fn eulerian_coeffs<R: Real>(sigma: Complex64, m_max: usize) -> Result<Vec<Complex<R>>> {
    Ok(eulerian_parts(sigma, m_max)?.iter().map(|(num, den)| round_complex(num, den)).collect())
}

/// `sum_m (num_m / den_m) τ^m` evaluated exactly at the binary `τ` and rounded once.
///
/// Truncating the Comtet double sum at total order `N` leaves terms of size
/// up to `1e26` (x = 5, N = 200) that cancel across `m`; summing them in
/// floating point loses the result entirely.
/// Every `den_m` must divide `common`.
fn exact_tau_sum<R: Real>(parts: &[(GaussInt, BigInt)], common: &BigInt, tau: Complex64) -> Complex<R> {
    let t = GaussDyadic::from_complex(tau);
    let n = parts.len();
    let mut acc: GaussInt = Complex::zero();
    let mut tpow: GaussInt = Complex::one();
    for (m, (num, den)) in parts.iter().enumerate() {
        tpow = &tpow * &t.num;
        let (q, r) = common.div_rem(den);
        debug_assert!(r.is_zero());
        let mult = q << (t.shift as usize * (n - m - 1));
        let term = num * &tpow;
        acc += Complex::new(&term.re * &mult, &term.im * &mult);
    }
    round_complex(&acc, &(common << (t.shift as usize * n)))
}

/// Exactly rounded partial sum of the Comtet series at total order `N`.
pub fn comtet_sum<R: Real>(sigma: Complex64, tau: Complex64, n: usize) -> Complex<R> {
    let shift = GaussDyadic::from_complex(sigma).shift as usize;
    let common = factorial(n) << (shift * n.saturating_sub(1));
    exact_tau_sum(&comtet_parts(sigma, n), &common, tau)
}

/// Exactly rounded partial sum `sum_{m<=M} c_m τ^m`, 2-associated form.
pub fn improved_sum<R: Real>(sigma: Complex64, tau: Complex64, m_max: usize) -> Result<Complex<R>> {
    let parts = improved_parts(sigma, m_max)?;
    let common = parts.last().map_or_else(BigInt::one, |(_, d)| d.clone());
    Ok(exact_tau_sum(&parts, &common, tau))
}

/// Exactly rounded partial sum `sum_{m<=M} c_m τ^m`, Eulerian form.
pub fn eulerian_sum<R: Real>(sigma: Complex64, tau: Complex64, m_max: usize) -> Result<Complex<R>> {
    let parts = eulerian_parts(sigma, m_max)?;
    let common = parts.last().map_or_else(BigInt::one, |(_, d)| d.clone());
    Ok(exact_tau_sum(&parts, &common, tau))
}

/// Exact `c_m(σ)` from the Eulerian closed form
/// `c_m = 1/(m! (1+σ)^(2m-1)) sum_k <<m-1,k>> (-1)^(m-k) σ^(m-k-2)`, `c_1 = 1/(1+σ)`.
pub fn coeff_cm_exact<S: Scalar>(sigma: &S, m: usize) -> Result<S> {
    assert!(m >= 1, "coefficients start at m = 1");
    let ops = S::one() + sigma.clone();
    if ops.is_zero() {
        return Err(Error::Singular("sigma = -1".into()));
    }
    if m == 1 {
        return Ok(S::one() / ops);
    }
    let t = tables();
    let mut sum = S::zero();
    for k in 0..=m - 2 {
        let term = S::from_bigint(&t.eulerian2(m - 1, k)) * sigma.powi((m - k - 2) as u32);
        sum = if (m - k) % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(sum / (S::from_bigint(&factorial(m)) * ops.powi((2 * m - 1) as u32)))
}

/// `c_m(σ)` from the inner sum of the 2-associated Stirling series in `ζ`.
pub fn coeff_cm_stirling<S: Scalar>(sigma: &S, m: usize) -> Result<S> {
    assert!(m >= 1, "coefficients start at m = 1");
    let ops = S::one() + sigma.clone();
    if ops.is_zero() {
        return Err(Error::Singular("sigma = -1".into()));
    }
    let zeta = S::one() / ops;
    let mut sum = S::zero();
    for (p, c) in stirling_zeta_row(m).iter().enumerate() {
        sum = sum + S::from_bigint(c) * zeta.powi((p + m) as u32);
    }
    Ok(sum / S::from_bigint(&factorial(m)))
}

/// Monomial coefficients of the `τ^m / m!` factor in the 2-associated `ζ`
/// form: entry `j` multiplies `ζ^j`.
pub fn zeta_monomials_stirling(m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); 2 * m];
    for (p, c) in stirling_zeta_row(m).into_iter().enumerate() {
        out[p + m] += c;
    }
    out
}

/// Same expansion for the Eulerian `ζ` form, with `(1-ζ)^j` multiplied out.
pub fn zeta_monomials_eulerian(m: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); 2 * m];
    if m == 1 {
        out[1] = BigInt::one();
        return out;
    }
    for (k, e) in eulerian_row(m).into_iter().enumerate() {
        let j = m - k - 2;
        for i in 0..=j {
            let b = binomial(j as i64, i as i64);
            let term = &e * b;
            if i % 2 == 0 {
                out[m + k + 1 + i] += term;
            } else {
                out[m + k + 1 + i] -= term;
            }
        }
    }
    out
}

/// Rational `σ` variant of [`comtet_coeffs`], used by exact tests.
pub fn comtet_coeff_exact(sigma: &Rational, m: usize, n: usize) -> Rational {
    let t = tables();
    let mut acc = Rational::zero();
    let minus = -sigma.clone();
    for j in 0..=(n - m) {
        acc += Rational::from_integer(t.stirling_cycle(m + j, j + 1)) * Scalar::powi(&minus, j as u32);
    }
    acc / Rational::from_integer(factorial(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn closed_form_low_orders() {
        let s = r(3, 7);
        assert_eq!(coeff_cm_exact(&s, 1).unwrap(), r(1, 1) / (r(1, 1) + &s));
        let expect = r(1, 1) / (r(2, 1) * Scalar::powi(&(r(1, 1) + &s), 3));
        assert_eq!(coeff_cm_exact(&s, 2).unwrap(), expect);
        assert_eq!(coeff_cm_stirling(&s, 2).unwrap(), expect);
        for m in 1..=12 {
            assert_eq!(coeff_cm_exact(&r(0, 1), m).unwrap(), r(1, m as i64));
        }
        assert!(coeff_cm_exact(&r(-1, 1), 3).is_err());
    }

    #[test]
    fn floating_coefficients_round_exact_values() {
        let c: Vec<Complex<f64>> = improved_coeffs(Complex64::new(0.5, 0.0), 20).unwrap();
        let e: Vec<Complex<f64>> = eulerian_coeffs(Complex64::new(0.5, 0.0), 20).unwrap();
        for m in 1..=20 {
            let exact = coeff_cm_exact(&r(1, 2), m).unwrap();
            let x = <f64 as Scalar>::from_rational(&exact);
            assert_eq!(c[m - 1].re, x);
            assert_eq!(e[m - 1].re, x);
            assert_eq!(c[m - 1].im, 0.0);
        }
    }

    #[test]
    fn comtet_first_order_is_tau() {
        let c: Vec<Complex<f64>> = comtet_coeffs(Complex64::new(0.5, 0.0), 1);
        assert_eq!(c, vec![Complex::new(1.0, 0.0)]);
        assert_eq!(comtet_coeff_exact(&r(1, 2), 1, 1), r(1, 1));
    }

    #[test]
    fn zeta_forms_agree_and_skip_second_order() {
        for m in 1..=10 {
            let a = zeta_monomials_stirling(m);
            let b = zeta_monomials_eulerian(m);
            assert_eq!(a, b, "m = {m}");
            if a.len() > 2 {
                assert!(a[2].is_zero());
            }
        }
    }
}

//! Exact evaluation of integer polynomials at binary floating-point
//! arguments.
//!
//! Every finite `f64` is a dyadic rational, so a coefficient such as
//! `c_m(σ)` can be computed exactly at the `σ` actually passed in and rounded
//! once. Complex arguments become Gaussian dyadics `(a + ib) / 2^e`.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::real::Real;

pub type GaussInt = Complex<BigInt>;

/// `x = mantissa * 2^exponent` exactly.
pub fn f64_to_dyadic(x: f64) -> (BigInt, i32) {
    assert!(x.is_finite(), "non-finite value {x}");
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
    let tz = mant.trailing_zeros();
    (BigInt::from(sign) * BigInt::from(mant >> tz), exp + tz as i32)
}

pub fn f64_to_rational(x: f64) -> BigRational {
    let (m, e) = f64_to_dyadic(x);
    if e >= 0 {
        BigRational::from_integer(m << e as usize)
    } else {
        BigRational::new(m, BigInt::one() << (-e) as usize)
    }
}

/// A complex number `(re + i im) / 2^shift` with integer parts.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussDyadic {
    pub num: GaussInt,
    pub shift: u32,
}

impl GaussDyadic {
    pub fn from_complex(z: Complex64) -> GaussDyadic {
        let (a, ea) = f64_to_dyadic(z.re);
        let (b, eb) = f64_to_dyadic(z.im);
        let shift = 0.max(-ea).max(-eb) as u32;
        let scale = |m: BigInt, e: i32| -> BigInt {
            if m.is_zero() {
                m
            } else {
                m << (e + shift as i32) as usize
            }
        };
        GaussDyadic { num: Complex::new(scale(a, ea), scale(b, eb)), shift }
    }

    pub fn denom(&self) -> BigInt {
        BigInt::one() << self.shift as usize
    }
}

/// `ζ = 1/(1+σ)` as `N / D` with Gaussian integer `N` and positive integer `D`.
pub struct ZetaParts {
    pub num: GaussInt,
    pub den: BigInt,
}

impl ZetaParts {
    pub fn new(sigma: Complex64) -> Result<ZetaParts> {
        let s = GaussDyadic::from_complex(sigma);
        let two_e = s.denom();
        let a = &two_e + &s.num.re;
        let b = s.num.im.clone();
        let den = &a * &a + &b * &b;
        if den.is_zero() {
            return Err(Error::Singular("sigma = -1 makes zeta = 1/(1+sigma) undefined".into()));
        }
        Ok(ZetaParts { num: Complex::new(&two_e * a, -(two_e * b)), den })
    }

    /// `1 - ζ` over the same denominator.
    pub fn one_minus_num(&self) -> GaussInt {
        Complex::new(&self.den - &self.num.re, -self.num.im.clone())
    }
}

fn scale(z: &GaussInt, k: &BigInt) -> GaussInt {
    Complex::new(&z.re * k, &z.im * k)
}

/// `sum_j coeffs[j] x^j y^(K-j)` with `K = coeffs.len() - 1`.
pub fn homogeneous(coeffs: &[BigInt], x: &GaussInt, y: &GaussInt) -> GaussInt {
    let Some((last, rest)) = coeffs.split_last() else {
        return Complex::zero();
    };
    let mut acc = Complex::new(last.clone(), BigInt::zero());
    let mut ypow: GaussInt = Complex::one();
    for c in rest.iter().rev() {
        ypow = &ypow * y;
        acc = &acc * x + scale(&ypow, c);
    }
    acc
}

/// Same as [`homogeneous`] with a real second variable.
pub fn homogeneous_real_y(coeffs: &[BigInt], x: &GaussInt, y: &BigInt) -> GaussInt {
    let Some((last, rest)) = coeffs.split_last() else {
        return Complex::zero();
    };
    let mut acc = Complex::new(last.clone(), BigInt::zero());
    let mut ypow = BigInt::one();
    for c in rest.iter().rev() {
        ypow *= y;
        acc = &acc * x + Complex::new(&ypow * c, BigInt::zero());
    }
    acc
}

pub fn gauss_pow(z: &GaussInt, n: u32) -> GaussInt {
    let mut acc: GaussInt = Complex::one();
    let mut base = z.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Rounds `num / den` once, component-wise.
pub fn round_complex<R: Real>(num: &GaussInt, den: &BigInt) -> Complex<R> {
    let part = |x: &BigInt| {
        if x.is_zero() {
            R::zero()
        } else {
            // Unreduced: a gcd of these sizes costs far more than the rounding.
            R::from_rational(&BigRational::new_raw(x.clone(), den.clone()))
        }
    };
    Complex::new(part(&num.re), part(&num.im))
}

//! Scalar abstraction shared by the coefficient formulas.
//!
//! Three scalar kinds are supported: `f64` (standard precision), [`DoubleDouble`]
//! (elevated precision, an unevaluated sum of two `f64`s giving about 32
//! significant digits) and exact [`BigRational`]. Formulas that only need field
//! operations are written once against [`Scalar`]; summation over complex
//! values uses [`Real`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::Error;

/// Field operations needed by the coefficient formulas.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_bigint(n: &BigInt) -> Self;
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn powi(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// Floating scalars: adds ordering, rounding to `f64` and the transcendental
/// functions used by the series evaluators.
pub trait Real: Scalar + Copy + PartialOrd + Num + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn exp(self) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon() -> f64;
}

impl Scalar for f64 {
    fn from_bigint(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON / 2.0
    }
}

impl Scalar for BigRational {
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const LN2_DD: DoubleDouble = DoubleDouble {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        DoubleDouble { hi: h, lo: l }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Self::renorm(p, e + self.lo * b)
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        DoubleDouble { hi: self.hi * s, lo: self.lo * s }
    }

    fn trunc(self) -> Self {
        let hi = self.hi.trunc();
        if hi == self.hi {
            Self::renorm(hi, self.lo.trunc())
        } else {
            DoubleDouble { hi, lo: 0.0 }
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleDouble({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hi + self.lo)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        Self::renorm(s, e + f)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        Self::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q, e) = quick_two_sum(q1, q2);
        DoubleDouble { hi: q, lo: e } + DoubleDouble::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        self - b * (self / b).trunc()
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, b: Self) {
        *self = *self - b;
    }
}

impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, b: Self) {
        *self = *self * b;
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        DoubleDouble { hi: 0.0, lo: 0.0 }
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        DoubleDouble { hi: 1.0, lo: 0.0 }
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(DoubleDouble::from_f64)
    }
}

impl Scalar for DoubleDouble {
    fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }
    fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return DoubleDouble { hi, lo: 0.0 };
        }
        // Remainder in integers; `r` may be unreduced and is never reduced here.
        let (m, e) = crate::exact::f64_to_dyadic(hi);
        let (num, den) = (r.numer(), r.denom());
        let rest = if e >= 0 {
            BigRational::new_raw(num - (m << e as usize) * den, den.clone())
        } else {
            BigRational::new_raw((num << (-e) as usize) - m * den, den << (-e) as usize)
        };
        let lo = rest.to_f64().unwrap_or(0.0);
        Self::renorm(hi, lo)
    }
}

impl Real for DoubleDouble {
    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return DoubleDouble::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Zero::zero();
        }
        // x = k ln2 + r, then exp(r) = (exp(r / 64))^64.
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - LN2_DD.mul_f64(k)).ldexp(-6);
        let mut term = DoubleDouble::one();
        let mut sum = DoubleDouble::one();
        for i in 1..=20 {
            term = term * r / DoubleDouble::from_f64(i as f64);
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..6 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }
    fn epsilon() -> f64 {
        4.93e-32
    }
}

/// Working precision of series partial sums and coefficient recurrences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// IEEE double, about 16 significant digits.
    #[default]
    Standard,
    /// Double-double, about 32 significant digits.
    Elevated,
}

/// Environment variable that overrides the elevated-mode precision in bits.
pub const PRECISION_BITS_ENV: &str = "W_SERIES_PRECISION_BITS";

impl Precision {
    pub fn bits(self) -> u32 {
        match self {
            Precision::Standard => 53,
            Precision::Elevated => 106,
        }
    }

    /// Maps a requested bit count onto the representations available.
    pub fn from_bits(bits: u32) -> Result<Self, Error> {
        match bits {
            1..=53 => Ok(Precision::Standard),
            54..=106 => Ok(Precision::Elevated),
            _ => Err(Error::Usage(format!(
                "{PRECISION_BITS_ENV}={bits} is outside the supported range 1..=106"
            ))),
        }
    }

    /// Elevated mode, honouring the environment override when present.
    pub fn elevated_from_env() -> Result<Self, Error> {
        match std::env::var(PRECISION_BITS_ENV) {
            Ok(v) => {
                let bits: u32 = v.trim().parse().map_err(|_| {
                    Error::Usage(format!("{PRECISION_BITS_ENV} must be an integer, got {v:?}"))
                })?;
                Self::from_bits(bits)
            }
            Err(_) => Ok(Precision::Elevated),
        }
    }
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<R: Real> {
    sum: R,
    comp: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        CompensatedSum { sum: R::zero(), comp: R::zero() }
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn add(&mut self, x: R) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> R {
        self.sum + self.comp
    }
}

/// Component-wise compensated summation of complex terms.
#[derive(Clone, Copy, Debug)]
pub struct ComplexSum<R: Real> {
    re: CompensatedSum<R>,
    im: CompensatedSum<R>,
}

impl<R: Real> Default for ComplexSum<R> {
    fn default() -> Self {
        ComplexSum { re: CompensatedSum::default(), im: CompensatedSum::default() }
    }
}

impl<R: Real> ComplexSum<R> {
    pub fn add(&mut self, z: Complex<R>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> Complex<R> {
        Complex::new(self.re.total(), self.im.total())
    }
}

pub fn complex_to_f64<R: Real>(z: Complex<R>) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn complex_from_f64<R: Real>(z: num_complex::Complex64) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    #[test]
    fn double_double_division_recovers_thirds() {
        let third = dd(1.0) / dd(3.0);
        let back = third * dd(3.0);
        assert!((back - dd(1.0)).abs().to_f64() < 1e-31);
    }

    #[test]
    fn double_double_exp_matches_rational_reference() {
        // e = 2.71828182845904523536028747135266249775724709369995...
        let e = dd(1.0).exp();
        let err = e - DoubleDouble::new(std::f64::consts::E, 1.4456468917292502e-16);
        assert!(err.abs().to_f64() < 1e-30, "{e:?}");
        let x = dd(-3.25).exp() * dd(3.25).exp();
        assert!((x - dd(1.0)).abs().to_f64() < 1e-29);
    }

    #[test]
    fn rational_conversion_keeps_low_word() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(10));
        let x = DoubleDouble::from_rational(&r);
        let err = x * dd(10.0) - dd(1.0);
        assert!(err.abs().to_f64() < 1e-31);
        assert!(x.lo() != 0.0);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut s = CompensatedSum::<f64>::default();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.total() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn precision_bits_mapping() {
        assert_eq!(Precision::from_bits(53).unwrap(), Precision::Standard);
        assert_eq!(Precision::from_bits(64).unwrap(), Precision::Elevated);
        assert!(Precision::from_bits(200).is_err());
    }

    #[test]
    fn powi_by_squaring() {
        let r = BigRational::new(BigInt::from(2), BigInt::from(3));
        assert_eq!(
            Scalar::powi(&r, 5),
            BigRational::new(BigInt::from(32), BigInt::from(243))
        );
        assert_eq!(Scalar::powi(&dd(2.0), 10).to_f64(), 1024.0);
    }
}

//! Exact combinatorial numbers behind the series coefficients and the
//! identities relating them.
//!
//! Four triangles are tabulated in arbitrary precision:
//!
//! * Stirling cycle numbers `[n, k]` (unsigned, first kind),
//! * 2-associated Stirling subset numbers `{n, k}>=2` (blocks of size at least two),
//! * second-order Eulerian numbers `<<n, k>>`,
//! * associated Stirling numbers of the first kind `d(m, k)`, the coefficients of
//!   `[ln(1+v) - v]^k`.
//!
//! Tables are built once up to a row cap and never mutated afterwards; rows
//! past the cap come from a shared extended triangle built on first use.

use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::real::{DoubleDouble, Real, Scalar};

pub type ExactInt = BigInt;
pub type Rational = BigRational;

pub const DEFAULT_ROW_CAP: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    StirlingCycle,
    Stirling2Assoc2,
    Eulerian2,
    AssocStirling1D,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::StirlingCycle,
        Family::Stirling2Assoc2,
        Family::Eulerian2,
        Family::AssocStirling1D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::StirlingCycle => "stirling-cycle",
            Family::Stirling2Assoc2 => "stirling2-assoc2",
            Family::Eulerian2 => "eulerian2",
            Family::AssocStirling1D => "assoc-stirling1-d",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == s)
    }
}

/// Lower-triangular table; entries outside `0 <= k <= n` read as zero.
#[derive(Clone, Debug)]
pub struct Triangle {
    rows: Vec<Vec<BigInt>>,
}

impl Triangle {
    pub fn build(family: Family, max_row: usize) -> Triangle {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_row + 1);
        for n in 0..=max_row {
            let mut row = vec![BigInt::zero(); n + 1];
            if n == 0 {
                row[0] = BigInt::one();
                rows.push(row);
                continue;
            }
            let prev = &rows[n - 1];
            let at = |r: &Vec<BigInt>, k: isize| -> BigInt {
                if k < 0 || k as usize >= r.len() {
                    BigInt::zero()
                } else {
                    r[k as usize].clone()
                }
            };
            for k in 0..=n {
                let ki = k as isize;
                row[k] = match family {
                    // [n,k] = (n-1)[n-1,k] + [n-1,k-1]
                    Family::StirlingCycle => at(prev, ki) * (n - 1) + at(prev, ki - 1),
                    // S(n,k) = k S(n-1,k) + (n-1) S(n-2,k-1)
                    Family::Stirling2Assoc2 => {
                        let two_back = if n >= 2 { at(&rows[n - 2], ki - 1) } else { BigInt::zero() };
                        at(prev, ki) * k + two_back * (n - 1)
                    }
                    // E(n,k) = (k+1) E(n-1,k) + (2n-1-k) E(n-1,k-1)
                    Family::Eulerian2 => {
                        let left = if k >= 1 { at(prev, ki - 1) * (2 * n - 1 - k) } else { BigInt::zero() };
                        at(prev, ki) * (k + 1) + left
                    }
                    // d(m,k) = (m-1) (d(m-1,k) + d(m-2,k-1))
                    Family::AssocStirling1D => {
                        let two_back = if n >= 2 { at(&rows[n - 2], ki - 1) } else { BigInt::zero() };
                        (at(prev, ki) + two_back) * (n - 1)
                    }
                };
            }
            rows.push(row);
        }
        Triangle { rows }
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&BigInt> {
        self.rows.get(n).and_then(|r| r.get(k))
    }

    pub fn row(&self, n: usize) -> Option<&[BigInt]> {
        self.rows.get(n).map(|r| r.as_slice())
    }
}

/// Immutable memo tables for all four families.
#[derive(Clone, Debug)]
pub struct Tables {
    cap: usize,
    cycle: Triangle,
    assoc2: Triangle,
    eulerian2: Triangle,
    d: Triangle,
}

impl Tables {
    pub fn new(cap: usize) -> Tables {
        Tables {
            cap,
            cycle: Triangle::build(Family::StirlingCycle, cap),
            assoc2: Triangle::build(Family::Stirling2Assoc2, cap),
            eulerian2: Triangle::build(Family::Eulerian2, cap),
            d: Triangle::build(Family::AssocStirling1D, cap),
        }
    }

    /// Copy of the tables with one entry replaced. Used to exercise the
    /// failure paths of the identity suites.
    pub fn with_entry(&self, family: Family, n: usize, k: usize, value: BigInt) -> Tables {
        let mut t = self.clone();
        let tri = t.triangle_mut(family);
        if let Some(slot) = tri.rows.get_mut(n).and_then(|r| r.get_mut(k)) {
            *slot = value;
        }
        t
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn triangle(&self, family: Family) -> &Triangle {
        match family {
            Family::StirlingCycle => &self.cycle,
            Family::Stirling2Assoc2 => &self.assoc2,
            Family::Eulerian2 => &self.eulerian2,
            Family::AssocStirling1D => &self.d,
        }
    }

    fn triangle_mut(&mut self, family: Family) -> &mut Triangle {
        match family {
            Family::StirlingCycle => &mut self.cycle,
            Family::Stirling2Assoc2 => &mut self.assoc2,
            Family::Eulerian2 => &mut self.eulerian2,
            Family::AssocStirling1D => &mut self.d,
        }
    }

    pub fn get(&self, family: Family, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        if n <= self.cap {
            return self.triangle(family).get(n, k).cloned().unwrap_or_else(BigInt::zero);
        }
        extended(family, n).get(n, k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn stirling_cycle(&self, n: usize, k: usize) -> BigInt {
        self.get(Family::StirlingCycle, n, k)
    }

    pub fn stirling2_assoc2(&self, n: usize, k: usize) -> BigInt {
        self.get(Family::Stirling2Assoc2, n, k)
    }

    pub fn eulerian2(&self, n: usize, k: usize) -> BigInt {
        self.get(Family::Eulerian2, n, k)
    }

    pub fn assoc_stirling1_d(&self, m: usize, k: usize) -> BigInt {
        self.get(Family::AssocStirling1D, m, k)
    }
}

/// Triangle covering row `n`, shared across callers and regrown by doubling.
fn extended(family: Family, n: usize) -> Arc<Triangle> {
    static CACHE: Mutex<[Option<Arc<Triangle>>; 4]> = Mutex::new([None, None, None, None]);
    let slot = Family::ALL.iter().position(|&f| f == family).expect("known family");
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    match &cache[slot] {
        Some(t) if t.max_row() >= n => t.clone(),
        _ => {
            let t = Arc::new(Triangle::build(family, n.max(2 * DEFAULT_ROW_CAP)));
            cache[slot] = Some(t.clone());
            t
        }
    }
}

/// Process-wide tables with [`DEFAULT_ROW_CAP`] rows.
pub fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| Tables::new(DEFAULT_ROW_CAP))
}

pub fn stirling_cycle(n: usize, k: usize) -> ExactInt {
    tables().stirling_cycle(n, k)
}

pub fn stirling2_assoc2(n: usize, k: usize) -> ExactInt {
    tables().stirling2_assoc2(n, k)
}

pub fn eulerian2(n: usize, k: usize) -> ExactInt {
    tables().eulerian2(n, k)
}

pub fn assoc_stirling1_d(m: usize, k: usize) -> ExactInt {
    tables().assoc_stirling1_d(m, k)
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient with the usual extension to negative upper index:
/// zero for `b < 0`, and `(-1)^b C(b-a-1, b)` for `a < 0`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    if a < 0 {
        let c = binomial(b - a - 1, b);
        return if b % 2 == 0 { c } else { -c };
    }
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    acc
}

/// `q_m(r) = sum_k <<m-1, k>> (-1)^k r^(k+1)`, the numerator of the m-th
/// derivative of `W(e^s)` written in terms of `r = W(e^s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerianPolynomial {
    degree: usize,
    /// `coeffs[j]` multiplies `r^j`.
    coeffs: Vec<BigInt>,
}

impl EulerianPolynomial {
    pub fn new(m: usize) -> EulerianPolynomial {
        Self::from_tables(tables(), m)
    }

    pub fn from_tables(t: &Tables, m: usize) -> EulerianPolynomial {
        assert!(m >= 1, "q_m is defined for m >= 1");
        let mut coeffs = vec![BigInt::zero(); m + 1];
        for k in 0..m {
            let e = t.eulerian2(m - 1, k);
            coeffs[k + 1] = if k % 2 == 0 { e } else { -e };
        }
        EulerianPolynomial { degree: m, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval<S: Scalar>(&self, r: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * r.clone() + S::from_bigint(c))
    }
}

fn rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

fn pow_signed(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Scalar::powi(x, e as u32)
    } else {
        Scalar::powi(&x.recip(), (-e) as u32)
    }
}

fn sign(even: bool) -> i64 {
    if even {
        1
    } else {
        -1
    }
}

fn mismatch(identity: &str, index: String, lhs: impl std::fmt::Display, rhs: impl std::fmt::Display) -> Error {
    Error::Identity(format!("{identity} at {index}: lhs = {lhs}, rhs = {rhs}"))
}

impl Tables {
    /// Both Carlitz-Riordan forms at row `n`: the lambda form at `lam` and the
    /// mu form at `mu = lam / (1 - lam)`.
    pub fn check_carlitz_riordan(&self, n: usize, lam: &Rational) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("Carlitz-Riordan identities need n >= 1".into()));
        }
        if lam.is_one() {
            return Err(Error::Domain("mu = lambda/(1-lambda) is undefined at lambda = 1".into()));
        }
        let one = Rational::one();
        let ni = n as i64;

        let mut lhs = Rational::zero();
        for k in 0..=n {
            let e = self.eulerian2(n, k);
            if e.is_zero() {
                continue;
            }
            lhs += rat(&e) * pow_signed(&(&one + lam), ni - k as i64 - 1) * Scalar::powi(lam, k as u32);
        }
        let mut rhs = Rational::zero();
        for k in 1..=n {
            rhs += rat(&self.stirling2_assoc2(n + k, k)) * Scalar::powi(lam, (k - 1) as u32);
        }
        if lhs != rhs {
            return Err(mismatch("Carlitz-Riordan (lambda form)", format!("n={n}, lambda={lam}"), lhs, rhs));
        }

        let mu = lam / (&one - lam);
        let mut lhs = Rational::zero();
        for k in 0..=n {
            lhs += rat(&self.eulerian2(n, k)) * Scalar::powi(&mu, k as u32);
        }
        let mut rhs = Rational::zero();
        for k in 1..=n {
            rhs += rat(&self.stirling2_assoc2(n + k, k))
                * Scalar::powi(&mu, (k - 1) as u32)
                * Scalar::powi(&(&one - &mu), (n - k) as u32);
        }
        if lhs != rhs {
            return Err(mismatch("Carlitz-Riordan (mu form)", format!("n={n}, mu={mu}"), lhs, rhs));
        }
        Ok(())
    }

    /// The binomial-transform pair expressing `{n+q, q}>=2` through `<<n, p>>`
    /// and `<<n, q>>` through `{n+p+1, p+1}>=2`.
    pub fn check_binomial_transform_pair(&self, n: usize, q: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("binomial-transform pair needs n >= 1".into()));
        }
        let (ni, qi) = (n as i64, q as i64);
        let lhs = self.stirling2_assoc2(n + q, q);
        let rhs: BigInt = (0..=n)
            .map(|p| binomial(ni - p as i64 - 1, qi - p as i64 - 1) * self.eulerian2(n, p))
            .sum();
        if lhs != rhs {
            return Err(mismatch("2-associated from Eulerian", format!("n={n}, q={q}"), lhs, rhs));
        }
        let lhs = self.eulerian2(n, q);
        let rhs: BigInt = (0..=n)
            .map(|p| {
                let s = sign((qi - p as i64).rem_euclid(2) == 0);
                binomial(ni - p as i64 - 1, qi - p as i64) * self.stirling2_assoc2(n + p + 1, p + 1) * s
            })
            .sum();
        if lhs != rhs {
            return Err(mismatch("Eulerian from 2-associated", format!("n={n}, q={q}"), lhs, rhs));
        }
        Ok(())
    }

    /// `sum_{p=0}^{m-1} (-1)^(p+m-1) {p+m-1, p}>=2`, which equals `(m-1)!`.
    pub fn alternating_sum_2assoc(&self, m: usize) -> BigInt {
        assert!(m >= 1, "alternating sum needs m >= 1");
        (0..m)
            .map(|p| {
                let s = self.stirling2_assoc2(p + m - 1, p);
                if (p + m - 1) % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .sum()
    }

    pub fn check_alternating_sum_2assoc(&self, m: usize) -> Result<()> {
        let lhs = self.alternating_sum_2assoc(m);
        let rhs = factorial(m - 1);
        if lhs != rhs {
            return Err(mismatch("alternating 2-associated sum", format!("m={m}"), lhs, rhs));
        }
        Ok(())
    }

    /// Left and right sides of the three identities linking the Eulerian,
    /// `d(m,k)` and 2-associated coefficient forms at expansion value `w`.
    ///
    /// The last two identities compare coefficients of `W(e^t) - t`, so at
    /// `n = 1` their left sides carry the extra `1 + w` coming from the `t` term.
    pub fn euler_d_2assoc_sides<S: Scalar>(&self, n: usize, w: &S) -> [(S, S); 3] {
        assert!(n >= 1);
        let one = S::one();
        let opw = one.clone() + w.clone();
        let inv = one.clone() / opw.clone();
        let front = Scalar::powi(&inv, (n - 1) as u32);

        let mut euler = S::zero();
        let mut d_sum = S::zero();
        let mut assoc = S::zero();
        for k in 0..n {
            let e = S::from_bigint(&self.eulerian2(n - 1, k)) * Scalar::powi(w, k as u32);
            euler = if k % 2 == 0 { euler + e } else { euler - e };

            let d = S::from_bigint(&self.assoc_stirling1_d(n + k - 1, k)) * Scalar::powi(&inv, k as u32);
            d_sum = if (n + k - 1) % 2 == 0 { d_sum + d } else { d_sum - d };

            let s = S::from_bigint(&self.stirling2_assoc2(n + k - 1, k))
                * Scalar::powi(&(w.clone() * inv.clone()), k as u32);
            assoc = if k % 2 == 0 { assoc + s } else { assoc - s };
        }
        let shift = if n == 1 { opw } else { S::zero() };
        let a = (front.clone() * euler.clone(), d_sum.clone());
        let b = (-(front * euler * w.clone()) + shift.clone(), assoc.clone());
        let c = (-(w.clone() * d_sum) + shift, assoc);
        [a, b, c]
    }

    pub fn check_euler_d_2assoc(&self, n: usize, w: &Rational) -> Result<()> {
        if n == 0 {
            return Err(Error::Domain("identities need n >= 1".into()));
        }
        if *w == -Rational::one() {
            return Err(Error::Domain("w = -1 makes 1 + w vanish".into()));
        }
        for (i, (l, r)) in self.euler_d_2assoc_sides(n, w).iter().enumerate() {
            if l != r {
                return Err(mismatch(&format!("Euler/d/2-assoc identity ({})", ["a", "b", "c"][i]), format!("n={n}, w={w}"), l, r));
            }
        }
        Ok(())
    }

    /// Floating check at an irrational expansion value such as the Omega constant.
    pub fn check_euler_d_2assoc_numeric(&self, n: usize, w: f64, tol: f64) -> Result<()> {
        // Alternating sums cancel heavily past n ~ 8; double-double keeps the
        // comparison at the f64 resolution of the result.
        let wd = DoubleDouble::from_f64(w);
        for (i, (l, r)) in self.euler_d_2assoc_sides(n, &wd).iter().enumerate() {
            let (l, r) = (l.to_f64(), r.to_f64());
            let scale = l.abs().max(r.abs()).max(1.0);
            if (l - r).abs() > tol * scale {
                return Err(mismatch(&format!("Euler/d/2-assoc identity ({})", ["a", "b", "c"][i]), format!("n={n}, w={w}"), l, r));
            }
        }
        Ok(())
    }
}

pub fn check_carlitz_riordan(n: usize, lam: &Rational) -> Result<()> {
    tables().check_carlitz_riordan(n, lam)
}

pub fn check_binomial_transform_pair(n: usize, q: usize) -> Result<()> {
    tables().check_binomial_transform_pair(n, q)
}

pub fn alternating_sum_2assoc(m: usize) -> ExactInt {
    tables().alternating_sum_2assoc(m)
}

pub fn check_euler_d_2assoc(n: usize, w: &Rational) -> Result<()> {
    tables().check_euler_d_2assoc(n, w)
}

/// One line of an identity-suite report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rational arguments used for the Carlitz-Riordan suite.
pub fn carlitz_riordan_arguments() -> Vec<Rational> {
    [(1, 2), (-1, 2), (2, 1), (5, 3), (-3, 1), (1, 3)]
        .iter()
        .map(|&(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
        .collect()
}

/// Runs every identity suite up to depth `max_n` (capped per suite at the
/// depths used in the acceptance run: 15, 12, 20, 15).
pub fn run_identity_suites(t: &Tables, max_n: usize, omega0: f64) -> Vec<SuiteResult> {
    let mut out = Vec::new();
    let collect = |suite: &'static str, checks: Vec<Result<()>>| {
        let cases = checks.len();
        let failures = checks.into_iter().filter_map(|r| r.err().map(|e| e.to_string())).collect();
        SuiteResult { suite, cases, failures }
    };

    let args = carlitz_riordan_arguments();
    let cr: Vec<_> = (1..=max_n.min(15))
        .flat_map(|n| args.iter().map(move |l| (n, l)))
        .map(|(n, l)| t.check_carlitz_riordan(n, l))
        .collect();
    out.push(collect("carlitz-riordan", cr));

    let bt: Vec<_> = (1..=max_n.min(12))
        .flat_map(|n| (0..=max_n.min(12)).map(move |q| (n, q)))
        .map(|(n, q)| t.check_binomial_transform_pair(n, q))
        .collect();
    out.push(collect("binomial-transform-pair", bt));

    let alt: Vec<_> = (1..=max_n.min(20)).map(|m| t.check_alternating_sum_2assoc(m)).collect();
    out.push(collect("alternating-2assoc-sum", alt));

    let ws = [Rational::new(BigInt::from(2), BigInt::from(3)), Rational::new(BigInt::from(5), BigInt::from(7))];
    let ed: Vec<_> = (1..=max_n.min(15))
        .flat_map(|n| ws.iter().map(move |w| (n, w)))
        .map(|(n, w)| t.check_euler_d_2assoc(n, w))
        .collect();
    out.push(collect("euler-d-2assoc (rational w)", ed));

    let edn: Vec<_> = (1..=max_n.min(15))
        .map(|n| t.check_euler_d_2assoc_numeric(n, omega0, 1e-12))
        .collect();
    out.push(collect("euler-d-2assoc (omega0)", edn));
    out
}

/// Sign helper used by tests and callers that need `(-1)^k` as a [`BigInt`].
pub fn minus_one_pow(k: usize) -> BigInt {
    if k % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn is_negative(x: &BigInt) -> bool {
    x.is_negative()
}

//! Series for `W` built on the correction term `u`, which solves the
//! fundamental relation `1 - e^(-u) + σu - τ = 0`.
//!
//! Three expansions of `u` in powers of `τ` are provided: the Comtet double
//! sum in `σ` and `τ`, the improved series with 2-associated Stirling
//! coefficients in `ζ = 1/(1+σ)`, and the same series written with
//! second-order Eulerian numbers. The Wright series expands `W(e^t)` about
//! `t = 0` and lives in [`wright`].

pub mod expansions;
pub mod wright;

use num_complex::{Complex, Complex64};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{complex_to_f64, DoubleDouble, Precision, Real};

pub use expansions::{coeff_cm_exact, coeff_cm_stirling};
pub use wright::{wright_series_a, wright_series_eval, WrightMethod};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Comtet,
    ImprovedStirling,
    ImprovedEulerian,
    WrightLn,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Comtet => "comtet",
            Variant::ImprovedStirling => "improved",
            Variant::ImprovedEulerian => "eulerian",
            Variant::WrightLn => "wright-ln",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Parameter {
    Alpha(f64),
    P(Complex64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesSpec {
    pub variant: Variant,
    pub truncation: usize,
    pub parameter: Parameter,
    pub precision: Precision,
}

impl SeriesSpec {
    pub fn new(variant: Variant, truncation: usize) -> SeriesSpec {
        SeriesSpec { variant, truncation, parameter: Parameter::Alpha(1.0), precision: Precision::Standard }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.parameter = Parameter::Alpha(alpha);
        self
    }

    pub fn with_p(mut self, p: Complex64) -> Self {
        self.parameter = Parameter::P(p);
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::Usage("truncation order must be at least 1".into()));
        }
        Ok(())
    }

    /// Approximation of `W(z)` by this series: `Φ_α(x)/α` at `x = (αz)^α`
    /// for [`Parameter::Alpha`] (real `z` only) and the transformed series for
    /// [`Parameter::P`].
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        match self.parameter {
            Parameter::Alpha(alpha) => {
                if z.im != 0.0 {
                    return Err(Error::Domain("the alpha form is defined for real x only".into()));
                }
                let x = (alpha * z.re).powf(alpha);
                Ok(Complex64::new(phi_alpha(x, alpha, self)? / alpha, 0.0))
            }
            Parameter::P(p) => transformed_w(z, p, self),
        }
    }
}

/// `1/q`, exactly `1/q.re` for real `q` so that real and complex paths agree bitwise.
fn recip(q: Complex64) -> Complex64 {
    if q.im == 0.0 {
        Complex64::new(1.0 / q.re, 0.0)
    } else {
        q.inv()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesVariables {
    pub sigma: Complex64,
    pub tau: Complex64,
}

impl SeriesVariables {
    pub fn new(sigma: Complex64, tau: Complex64) -> SeriesVariables {
        SeriesVariables { sigma, tau }
    }

    pub fn real(sigma: f64, tau: f64) -> SeriesVariables {
        SeriesVariables::new(Complex64::new(sigma, 0.0), Complex64::new(tau, 0.0))
    }

    /// `σ = α / ln x`, `τ = α ln ln x / ln x`.
    pub fn from_alpha(x: f64, alpha: f64) -> Result<SeriesVariables> {
        if !(x > 1.0) {
            return Err(Error::Domain(format!("x = {x}: sigma and tau need x > 1")));
        }
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha = {alpha} must be positive")));
        }
        let l = x.ln();
        let sigma = alpha / l;
        Ok(SeriesVariables::real(sigma, sigma * l.ln()))
    }

    /// `σ = 1/(p + ln z)`, `τ = (p + ln(p + ln z)) / (p + ln z)`.
    pub fn from_p(z: Complex64, p: Complex64) -> Result<SeriesVariables> {
        let q = p + z.ln();
        if q.norm() == 0.0 {
            return Err(Error::Singular(format!("z = {z} is the singular point e^(-p) for p = {p}")));
        }
        let sigma = recip(q);
        Ok(SeriesVariables::new(sigma, sigma * (p + q.ln())))
    }

    pub fn zeta(&self) -> Option<Complex64> {
        let d = 1.0 + self.sigma;
        (d.norm() != 0.0).then(|| recip(d))
    }

    pub fn lambda(&self) -> Option<Complex64> {
        (self.sigma.norm() != 0.0).then(|| self.tau / self.sigma)
    }

    /// `1 - e^(-u) + σu - τ`.
    pub fn residual(&self, u: Complex64) -> Complex64 {
        1.0 - (-u).exp() + self.sigma * u - self.tau
    }
}

fn u_with<R: Real>(vars: &SeriesVariables, variant: Variant, n: usize) -> Result<Complex<R>> {
    match variant {
        Variant::Comtet => {
            if vars.sigma.norm() == 0.0 {
                return Err(Error::Domain("the Comtet series needs sigma != 0".into()));
            }
            Ok(expansions::comtet_sum::<R>(vars.sigma, vars.tau, n))
        }
        Variant::ImprovedStirling => expansions::improved_sum::<R>(vars.sigma, vars.tau, n),
        Variant::ImprovedEulerian => expansions::eulerian_sum::<R>(vars.sigma, vars.tau, n),
        Variant::WrightLn => Err(Error::Usage("the Wright series does not expand u".into())),
    }
}

/// Partial sum of `u` for the chosen variant.
pub fn u_value(vars: &SeriesVariables, variant: Variant, n: usize, precision: Precision) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::Usage("truncation order must be at least 1".into()));
    }
    match precision {
        Precision::Standard => u_with::<f64>(vars, variant, n),
        Precision::Elevated => u_with::<DoubleDouble>(vars, variant, n).map(complex_to_f64),
    }
}

/// Comtet double sum truncated at total order `n <= N`.
pub fn comtet_u(vars: &SeriesVariables, n: usize) -> Result<Complex64> {
    u_value(vars, Variant::Comtet, n, Precision::Standard)
}

/// Improved series (2-associated Stirling form) truncated at `m <= M`.
pub fn improved_u(vars: &SeriesVariables, m: usize) -> Result<Complex64> {
    u_value(vars, Variant::ImprovedStirling, m, Precision::Standard)
}

/// Improved series in its Eulerian form, truncated at `m <= M`.
pub fn eulerian_u(vars: &SeriesVariables, m: usize) -> Result<Complex64> {
    u_value(vars, Variant::ImprovedEulerian, m, Precision::Standard)
}

/// `Φ_α(x) = ln x - α ln ln x + α u`; equals `W(x)` at `α = 1`.
pub fn phi_alpha(x: f64, alpha: f64, spec: &SeriesSpec) -> Result<f64> {
    spec.validate()?;
    let vars = SeriesVariables::from_alpha(x, alpha)?;
    let l = x.ln();
    if spec.variant == Variant::WrightLn {
        // Φ_α(x) = α W(x^(1/α) / α)
        let t = l / alpha - alpha.ln();
        return Ok(alpha * wright::wright_series_eval_t(t, spec.truncation, spec.precision));
    }
    let u = u_value(&vars, spec.variant, spec.truncation, spec.precision)?;
    Ok(l - alpha * l.ln() + alpha * u.re)
}

/// `W ≈ ln z - ln(p + ln z) + u` with the `p`-dependent `σ, τ`.
pub fn transformed_w(z: Complex64, p: Complex64, spec: &SeriesSpec) -> Result<Complex64> {
    spec.validate()?;
    if spec.variant == Variant::WrightLn {
        if p.norm() != 0.0 {
            return Err(Error::Usage("the Wright series takes no p parameter".into()));
        }
        return Ok(wright::wright_series_eval_complex(z.ln(), spec.truncation));
    }
    let vars = SeriesVariables::from_p(z, p)?;
    let lz = z.ln();
    let u = u_value(&vars, spec.variant, spec.truncation, spec.precision)?;
    Ok((lz - (p + lz).ln()) + u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchForm {
    /// `L - ln L + ln L / L` with `L = ln z - 2πi`.
    Untransformed,
    /// The same leading terms after the shift `p = iπ`; real on `[-1/e, 0)`.
    Transformed,
}

/// Leading-order approximants of `W_{-1}(z)` for `-1/e <= z < 0`.
pub fn branch_m1_approx(z: f64, form: BranchForm) -> Result<Complex64> {
    let inv_e = (-1.0f64).exp();
    if !(z < 0.0 && z >= -inv_e * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::Domain(format!("z = {z}: need -1/e <= z < 0")));
    }
    Ok(match form {
        BranchForm::Untransformed => {
            let l = Complex64::new(z, 0.0).ln() - Complex64::new(0.0, 2.0 * std::f64::consts::PI);
            let ll = l.ln();
            l - ll + ll / l
        }
        BranchForm::Transformed => {
            let l = (-z).ln();
            let ll = (-l).ln();
            Complex64::new(l - ll + ll / l, 0.0)
        }
    })
}

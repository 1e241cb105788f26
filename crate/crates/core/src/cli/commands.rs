use std::f64::consts::E;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use serde_json::json;

use super::{complex_of, AccuracyArgs, BoundaryArgs, BranchTableArgs, Cell, CoeffsArgs, CurveArg, EvalArgs, Grid,
    IdentitiesArgs, MethodArg, Report, SeriesArg, SweepArg};
use crate::combinatorics::{run_identity_suites, tables, Family};
use crate::convergence::{self as conv, BoundaryCurve, BoundarySample, ThresholdMode};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::{defining_residual, lambert_w, lambert_w_real, omega_dd, BranchIndex, OMEGA};
use crate::real::{DoubleDouble, Precision, Real};
use crate::series::expansions::{comtet_coeffs, eulerian_coeffs, improved_coeffs};
use crate::series::wright::{wright_coeffs_recurrence, wright_series_a, WrightMethod};
use crate::series::{branch_m1_approx, BranchForm, SeriesSpec, SeriesVariables, Variant};

fn precision_meta(p: Precision) -> serde_json::Value {
    json!({ "precision": p, "precision_bits": p.bits() })
}

pub(super) fn eval(a: &EvalArgs) -> Result<Report> {
    let variant: Variant = a.series.series.into();
    let precision = a.series.precision.resolve()?;
    let n = a.series.n;
    let p = complex_of(a.p_re, a.p_im);
    let (z, spec) = match (a.x, complex_of(a.z_re, a.z_im)) {
        (Some(x), None) => {
            let base = SeriesSpec::new(variant, n).with_precision(precision);
            match p {
                Some(p) => (Complex64::new(x, 0.0), base.with_p(p)),
                None if variant == Variant::WrightLn && a.alpha.is_none() => {
                    (Complex64::new(x, 0.0), base.with_p(Complex64::default()))
                }
                None => (Complex64::new(x, 0.0), base.with_alpha(a.alpha.unwrap_or(1.0))),
            }
        }
        (None, Some(z)) => {
            let base = SeriesSpec::new(variant, n).with_precision(precision);
            match a.alpha {
                Some(alpha) => (z, base.with_alpha(alpha)),
                None => (z, base.with_p(p.unwrap_or_default())),
            }
        }
        _ => return Err(Error::Usage("give --x or --z-re/--z-im".into())),
    };
    let w = spec.evaluate(z)?;
    let oracle = lambert_w(BranchIndex::PRINCIPAL, z)?;
    let abs = (w - oracle).norm();
    let rel = abs / oracle.norm();
    let relation = match (variant, spec.parameter) {
        (Variant::WrightLn, _) => f64::NAN,
        (_, crate::series::Parameter::Alpha(alpha)) => {
            let x = (alpha * z.re).powf(alpha);
            let l = x.ln();
            let vars = SeriesVariables::from_alpha(x, alpha)?;
            let u = (alpha * w.re - l + alpha * l.ln()) / alpha;
            vars.residual(Complex64::new(u, 0.0)).norm()
        }
        (_, crate::series::Parameter::P(p)) => {
            let vars = SeriesVariables::from_p(z, p)?;
            let lz = z.ln();
            vars.residual(w - (lz - (p + lz).ln())).norm()
        }
    };
    let defining = defining_residual(w, z);
    let mut meta = json!({ "command": "eval", "series": variant.name(), "N": n, "parameter": spec.parameter });
    meta.as_object_mut().unwrap().extend(precision_meta(precision).as_object().unwrap().clone());
    let mut r = Report::new(
        vec!["z_re", "z_im", "series_re", "series_im", "oracle_re", "oracle_im", "abs_error", "rel_error",
            "relation_residual", "defining_residual"],
        meta,
    );
    r.rows.push(
        [z.re, z.im, w.re, w.im, oracle.re, oracle.im, abs, rel, relation, defining].into_iter().map(Cell::Num).collect(),
    );
    r.text = vec![
        format!("series            {} (N = {n}, {:?})", variant.name(), precision),
        format!("z                 {z}"),
        format!("series value      {:.17e} {:+.17e}i", w.re, w.im),
        format!("oracle W(z)       {:.17e} {:+.17e}i", oracle.re, oracle.im),
        format!("absolute error    {abs:.3e}"),
        format!("relative error    {rel:.3e}"),
        format!("relation residual {relation:.3e}"),
        format!("defining residual {defining:.3e}"),
    ];
    Ok(r)
}

fn wright_method(m: MethodArg) -> WrightMethod {
    match m {
        MethodArg::Eulerian => WrightMethod::Eulerian,
        MethodArg::D => WrightMethod::AssocStirling1,
        MethodArg::TwoAssoc => WrightMethod::AssocStirling2,
        MethodArg::Recurrence => WrightMethod::Recurrence,
    }
}

fn wright_coeffs<R: Real>(n: usize, method: WrightMethod, w: R) -> Vec<f64> {
    match method {
        WrightMethod::Recurrence => wright_coeffs_recurrence(n, &w).into_iter().map(|a| a.to_f64()).collect(),
        m => (1..=n).map(|k| wright_series_a(k, m, &w).to_f64()).collect(),
    }
}

pub(super) fn coeffs(a: &CoeffsArgs) -> Result<Report> {
    let variant: Variant = a.series.series.into();
    let precision = a.series.precision.resolve()?;
    let n = a.series.n;
    if n == 0 {
        return Err(Error::Usage("--N must be at least 1".into()));
    }
    let sigma = Complex64::new(a.sigma, a.sigma_im);
    let values: Vec<Complex64> = match variant {
        Variant::Comtet => comtet_coeffs::<f64>(sigma, n),
        Variant::ImprovedStirling => improved_coeffs::<f64>(sigma, n)?,
        Variant::ImprovedEulerian => eulerian_coeffs::<f64>(sigma, n)?,
        Variant::WrightLn => {
            let m = wright_method(a.method);
            let v = match precision {
                Precision::Standard => wright_coeffs(n, m, OMEGA),
                Precision::Elevated => wright_coeffs::<DoubleDouble>(n, m, omega_dd()),
            };
            v.into_iter().map(|x| Complex::new(x, 0.0)).collect()
        }
    };
    let mut meta = json!({ "command": "coeffs", "series": variant.name(), "N": n, "sigma": sigma });
    meta.as_object_mut().unwrap().extend(precision_meta(precision).as_object().unwrap().clone());
    let mut r = Report::new(vec!["index", "re", "im"], meta);
    for (i, c) in values.iter().enumerate() {
        r.rows.push(vec![Cell::Int(i as i64 + 1), Cell::Num(c.re), Cell::Num(c.im)]);
        r.text.push(format!("{:>4} {:.17e} {:+.17e}i", i + 1, c.re, c.im));
    }
    Ok(r)
}

fn threshold_curve<F>(grid: Grid, f: F) -> (Vec<BoundarySample>, Vec<String>)
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync + Send,
{
    let pts = grid.points();
    let results = Execution::default().map(&pts, |&x| (x, f(x)));
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    for (x, r) in results {
        match r {
            Ok((value, residual)) => samples.push(BoundarySample { param: x, re: value, im: 0.0, residual }),
            Err(e) => skipped.push(format!("{x}: {e}")),
        }
    }
    (samples, skipped)
}

pub(super) fn boundary(a: &BoundaryArgs) -> Result<Report> {
    let exec = Execution::default();
    let grid_or = |d: &str| a.grid.unwrap_or_else(|| d.parse().expect("default grid"));
    let (samples, source, skipped): (Vec<BoundarySample>, String, Vec<String>) = match a.curve {
        CurveArg::ComtetComplex | CurveArg::ImprovedComplex => {
            let c: BoundaryCurve = if a.curve == CurveArg::ComtetComplex {
                conv::comtet_complex_boundary(a.samples, a.p_re, exec)?
            } else {
                conv::improved_complex_boundary(a.samples, a.p_re, exec)?
            };
            (c.samples, c.source, Vec::new())
        }
        CurveArg::ComtetAlpha => {
            let (s, k) = threshold_curve(grid_or("0.1:4:80"), |al| {
                conv::comtet_real_threshold(al).map(|t| (t.value, t.residual))
            });
            (s, "x_alpha of the Comtet series".into(), k)
        }
        CurveArg::DivergenceLower => {
            let (s, k) = threshold_curve(grid_or("0.1:4:80"), |al| {
                conv::comtet_divergence_interval(al).map(|(lo, _)| (lo, 0.0))
            });
            (s, "lower end of the sure-divergence interval, e^(-|alpha|)".into(), k)
        }
        CurveArg::DivergenceUpper => {
            let (s, k) = threshold_curve(grid_or("0.1:4:80"), |al| {
                let (_, hi) = conv::comtet_divergence_interval(al)?;
                let b = hi.ln() / al.abs();
                let res = if al.abs() < (-1.0f64).exp() { (b * b.exp() - 1.0 / al.abs()).abs() } else { 0.0 };
                Ok((hi, res))
            });
            (s, "upper end of the sure-divergence interval, e^(b|alpha|)".into(), k)
        }
        CurveArg::ImprovedAlpha => {
            let (s, k) = threshold_curve(grid_or("0.05:2.7:80"), |al| {
                let t = conv::sigma_alpha(al)?;
                Ok(((al / t.value).exp(), t.residual))
            });
            (s, "x_alpha of the improved series, e^(alpha/sigma_alpha)".into(), k)
        }
        CurveArg::TransformedComtet => {
            let (s, k) = threshold_curve(grid_or("-1:1:41"), |p| {
                conv::transformed_comtet_threshold(p).map(|t| (t.value, t.residual))
            });
            (s, "z_p of the transformed Comtet series".into(), k)
        }
        CurveArg::TransformedImproved | CurveArg::TransformedImprovedApprox => {
            let mode =
                if a.curve == CurveArg::TransformedImproved { ThresholdMode::Exact } else { ThresholdMode::Approx };
            let (s, k) = threshold_curve(grid_or("-1:0.95:40"), |p| {
                conv::transformed_improved_threshold(p, mode).map(|t| (t.value, t.residual))
            });
            (s, format!("z_p of the transformed improved series ({mode:?})"), k)
        }
    };
    let meta = json!({
        "command": "boundary",
        "curve": format!("{:?}", a.curve),
        "source": source,
        "samples": samples.len(),
        "skipped": skipped,
    });
    if samples.is_empty() {
        return Err(Error::Domain(format!("no grid point lies in the domain of this curve: {}", skipped.join("; "))));
    }
    let mut r = Report::new(vec!["param", "re_z", "im_z", "residual"], meta);
    for s in &samples {
        r.rows.push(vec![Cell::Num(s.param), Cell::Num(s.re), Cell::Num(s.im), Cell::Num(s.residual)]);
        r.text.push(format!("{:.10} {:.10} {:+.10} {:.2e}", s.param, s.re, s.im, s.residual));
    }
    Ok(r)
}

pub(super) fn accuracy(a: &AccuracyArgs) -> Result<Report> {
    let variant: Variant = a.series.into();
    let precision = a.precision.resolve()?;
    if a.n.is_empty() || a.n.contains(&0) {
        return Err(Error::Usage("--N needs positive truncation orders".into()));
    }
    if a.series == SeriesArg::WrightLn && (a.sweep == SweepArg::P || a.p_re != 0.0 || a.p_im != 0.0) {
        return Err(Error::Usage("the Wright series takes no p parameter".into()));
    }
    let grid = a.grid.unwrap_or_else(|| match a.sweep {
        SweepArg::Z => Grid { start: 1.0, stop: 30.0, count: 59 },
        SweepArg::P => Grid { start: -1.0, stop: 1.0, count: 41 },
    });
    let pts = grid.points();
    let jobs: Vec<(f64, f64, usize)> = pts
        .iter()
        .flat_map(|&g| a.n.iter().map(move |&n| match a.sweep {
            SweepArg::Z => (g, a.p_re, n),
            SweepArg::P => (a.z_re, g, n),
        }))
        .collect();
    let p_im = a.p_im;
    let rows = Execution::default().map(&jobs, |&(z, p, n)| {
        let spec = SeriesSpec::new(variant, n).with_precision(precision).with_p(Complex64::new(p, p_im));
        let zc = Complex64::new(z, 0.0);
        let exact = lambert_w(BranchIndex::PRINCIPAL, zc);
        match (spec.evaluate(zc), exact) {
            (Ok(w), Ok(ex)) => ((w / ex).re, (w - ex).norm().log10()),
            _ => (f64::NAN, f64::NAN),
        }
    });
    let mut meta = json!({
        "command": "accuracy",
        "series": variant.name(),
        "sweep": format!("{:?}", a.sweep).to_lowercase(),
        "N": a.n,
        "p_im": p_im,
    });
    meta.as_object_mut().unwrap().extend(precision_meta(precision).as_object().unwrap().clone());
    let mut r = Report::new(vec!["z", "p", "n_terms", "ratio", "log10_abs_error"], meta);
    for (&(z, p, n), &(ratio, err)) in jobs.iter().zip(&rows) {
        r.rows.push(vec![Cell::Num(z), Cell::Num(p), Cell::Int(n as i64), Cell::Num(ratio), Cell::Num(err)]);
        r.text.push(format!("z = {z:.6} p = {p:.6} N = {n:>3} ratio = {ratio:.12} log10|err| = {err:.3}"));
    }
    Ok(r)
}

fn fmt_complex4(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.4}", z.re)
    } else {
        format!("{:.4}{}{:.4}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
    }
}

pub(super) fn branch_table(a: &BranchTableArgs) -> Result<Report> {
    let inv_e = (-1.0f64).exp();
    let zs: Vec<(String, f64)> = match a.grid {
        Some(g) => {
            let pts = g.points();
            if pts.iter().any(|&z| !(z >= -inv_e && z < 0.0)) {
                return Err(Error::Usage(format!("branch-table grid must lie in [-1/e, 0), got {g:?}")));
            }
            pts.into_iter().map(|z| (format!("{z}"), z)).collect()
        }
        None => vec![
            ("-0.01".into(), -0.01),
            ("-0.1".into(), -0.1),
            ("-0.2".into(), -0.2),
            ("-0.3".into(), -0.3),
            ("-1/e".into(), -inv_e),
        ],
    };
    let meta = json!({ "command": "branch-table", "p": "i pi", "rows": zs.len() });
    let mut r = Report::new(
        vec!["z", "oracle", "hat", "untransformed_re", "untransformed_im", "hat_abs_error", "untransformed_abs_error"],
        meta,
    );
    r.text.push(format!("{:>8} | {:>10} | {:>10} | {:>18}", "z", "W_-1(z)", "hat W_-1", "W^(1)_-1(z)"));
    for (label, z) in zs {
        let w = lambert_w_real(BranchIndex::MINUS_ONE, z)?;
        let hat = branch_m1_approx(z, BranchForm::Transformed)?.re;
        let w1 = branch_m1_approx(z, BranchForm::Untransformed)?;
        r.rows.push(vec![
            Cell::Num(z),
            Cell::Num(w),
            Cell::Num(hat),
            Cell::Num(w1.re),
            Cell::Num(w1.im),
            Cell::Num((hat - w).abs()),
            Cell::Num((w1 - w).norm()),
        ]);
        r.text.push(format!(
            "{label:>8} | {:>10} | {:>10} | {:>18}",
            format!("{w:.4}"),
            format!("{hat:.4}"),
            fmt_complex4(w1)
        ));
    }
    Ok(r)
}

fn parse_corruption(spec: &str) -> Result<(Family, usize, usize, BigInt)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Usage(format!("--corrupt {spec:?} must be family:n:k:value"));
    if parts.len() != 4 {
        return Err(bad());
    }
    let family = Family::parse(parts[0]).ok_or_else(bad)?;
    let n = parts[1].parse().map_err(|_| bad())?;
    let k = parts[2].parse().map_err(|_| bad())?;
    let v = parts[3].parse().map_err(|_| bad())?;
    Ok((family, n, k, v))
}

pub(super) fn identities(a: &IdentitiesArgs) -> Result<Report> {
    if a.max_n == 0 {
        return Err(Error::Usage("--max-n must be at least 1".into()));
    }
    let corrupted = match &a.corrupt {
        Some(s) => {
            let (f, n, k, v) = parse_corruption(s)?;
            Some(tables().with_entry(f, n, k, v))
        }
        None => None,
    };
    let t = corrupted.as_ref().unwrap_or_else(|| tables());
    let results = run_identity_suites(t, a.max_n, OMEGA);
    let failed: Vec<&str> = results.iter().filter(|s| !s.passed()).map(|s| s.suite).collect();
    let meta = json!({ "command": "identities", "max_n": a.max_n, "failed": failed });
    let mut r = Report::new(vec!["suite", "cases", "failures", "status"], meta);
    for s in &results {
        let status = if s.passed() { "pass" } else { "FAIL" };
        r.rows.push(vec![
            Cell::Str(s.suite.into()),
            Cell::Int(s.cases as i64),
            Cell::Int(s.failures.len() as i64),
            Cell::Str(status.into()),
        ]);
        r.text.push(format!("{:<30} {:>5} cases {:>4} failures  {status}", s.suite, s.cases, s.failures.len()));
        for f in s.failures.iter().take(5) {
            r.text.push(format!("    {f}"));
        }
    }
    if !failed.is_empty() {
        r.exit_code = 1;
        r.text.push(format!("identity failure in: {}", failed.join(", ")));
    }
    Ok(r)
}

pub(super) fn constants() -> Result<Report> {
    let s1 = conv::sigma1()?;
    let sc = conv::sigma_c();
    let sc_root = conv::sigma_c_by_root()?;
    let ac = conv::alpha_c();
    let (a_star, x_star) = conv::x_of_alpha_max()?;
    let wr = conv::wright_radius();
    let rows: Vec<(&'static str, f64, f64)> = vec![
        ("omega0", OMEGA, defining_residual(Complex64::new(OMEGA, 0.0), Complex64::new(1.0, 0.0))),
        ("sigma1", s1.value, s1.residual),
        ("x1", (1.0 / s1.value).exp(), s1.residual),
        ("sigma1_approx", conv::sigma1_approx(), 0.0),
        ("sigma_c", sc.value, sc.residual),
        ("sigma_c_root", sc_root.value, sc_root.residual),
        ("alpha_c", ac.value, ac.residual),
        ("alpha_star", a_star, 0.0),
        ("x_star", x_star, 0.0),
        ("x_star_closed_form", (-std::f64::consts::PI).exp().exp(), 0.0),
        ("comtet_x1", E, 0.0),
        ("wright_radius", wr.value, wr.residual),
        ("theta1_split", crate::asymptotics::theta1_split(), 0.0),
    ];
    let mut r = Report::new(vec!["name", "value", "residual"], json!({ "command": "constants" }));
    for (name, v, res) in rows {
        r.rows.push(vec![Cell::Str(name.into()), Cell::Num(v), Cell::Num(res)]);
        r.text.push(format!("{name:<20} {v:.12}   (residual {res:.1e})"));
    }
    Ok(r)
}

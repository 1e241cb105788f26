use std::f64::consts::{E, PI};

use lambert_series::asymptotics::cm_asymptotic;
use lambert_series::convergence::{
    comtet_converges, comtet_converges_z, comtet_real_threshold, improved_converges, sigma1,
    transformed_comtet_threshold, wright_radius, wright_sigma_converges, x1,
};
use lambert_series::oracle::{lambert_w, wright_omega_real, BranchIndex};
use lambert_series::real::Precision;
use lambert_series::series::expansions::improved_coeffs;
use lambert_series::series::wright::wright_series_eval_t;
use lambert_series::series::{SeriesSpec, SeriesVariables, Variant};
use lambert_series::Complex64;

fn w0(z: Complex64) -> Complex64 {
    lambert_w(BranchIndex::PRINCIPAL, z).unwrap()
}

fn err(spec: SeriesSpec, z: Complex64) -> f64 {
    (spec.evaluate(z).unwrap() - w0(z)).norm()
}

#[test]
fn comtet_and_improved_agree_where_both_converge() {
    let mut count = 0;
    for i in 0..25 {
        let x = 8.0 + 2.0 * i as f64;
        let z = Complex64::new(x, 0.0);
        let a = SeriesSpec::new(Variant::Comtet, 60).evaluate(z).unwrap();
        let b = SeriesSpec::new(Variant::ImprovedStirling, 60).evaluate(z).unwrap();
        assert!((a - b).norm() < 1e-10, "x = {x}: {a} vs {b}");
        count += 1;
    }
    for i in 0..25 {
        let z = Complex64::from_polar(30.0 + 4.0 * i as f64, -2.0 + 4.0 * i as f64 / 24.0);
        let p = Complex64::new(0.0, 0.0);
        let a = SeriesSpec::new(Variant::Comtet, 60).with_p(p).evaluate(z).unwrap();
        let b = SeriesSpec::new(Variant::ImprovedStirling, 60).with_p(p).evaluate(z).unwrap();
        assert!((a - b).norm() < 1e-10, "z = {z}: {a} vs {b}");
        count += 1;
    }
    assert_eq!(count, 50);
}

/// Inside (1.1x) the series reaches the oracle; outside (0.9x) its error does
/// not shrink over N = 20, 40, 60.
fn assert_threshold_behaviour(name: &str, inside: impl Fn(usize) -> f64, outside: impl Fn(usize) -> f64) {
    let e_in = inside(400);
    assert!(e_in <= 1e-6, "{name}: inside error {e_in:e}");
    let e_out: Vec<f64> = [20, 40, 60].into_iter().map(outside).collect();
    assert!(e_out.windows(2).all(|w| w[1] >= w[0]), "{name}: outside errors {e_out:?}");
}

#[test]
fn comtet_alpha_threshold_separates_behaviour() {
    for alpha in [0.5, 1.0, E] {
        let x_a = comtet_real_threshold(alpha).unwrap().value;
        let inside = SeriesVariables::from_alpha(1.1 * x_a, alpha).unwrap();
        let outside = SeriesVariables::from_alpha(0.9 * x_a, alpha).unwrap();
        assert!(comtet_converges(&inside).unwrap().converges, "alpha = {alpha}");
        assert!(!comtet_converges(&outside).unwrap().converges, "alpha = {alpha}");
        // W(z) with (alpha z)^alpha = x
        let z = |x: f64| Complex64::new(x.powf(1.0 / alpha) / alpha, 0.0);
        let spec = |n| SeriesSpec::new(Variant::Comtet, n).with_alpha(alpha);
        assert_threshold_behaviour(
            &format!("x_alpha, alpha = {alpha}"),
            |n| err(spec(n), z(1.1 * x_a)),
            |n| err(spec(n), z(0.9 * x_a)),
        );
    }
}

#[test]
fn comtet_p_threshold_separates_behaviour() {
    for p in [-1.0, 0.0, 1.0] {
        let zp = transformed_comtet_threshold(p).unwrap().value;
        let pc = Complex64::new(p, 0.0);
        let inside = SeriesVariables::from_p(Complex64::new(1.1 * zp, 0.0), pc).unwrap();
        let outside = SeriesVariables::from_p(Complex64::new(0.9 * zp, 0.0), pc).unwrap();
        assert!(comtet_converges(&inside).unwrap().converges, "p = {p}");
        assert!(!comtet_converges(&outside).unwrap().converges, "p = {p}");
        let spec = |n| SeriesSpec::new(Variant::Comtet, n).with_p(pc);
        assert_threshold_behaviour(
            &format!("z_p, p = {p}"),
            |n| err(spec(n), Complex64::new(1.1 * zp, 0.0)),
            |n| err(spec(n), Complex64::new(0.9 * zp, 0.0)),
        );
    }
    assert!(comtet_converges_z(Complex64::new(1.1 * E, 0.0)).unwrap().converges);
    assert!(!comtet_converges_z(Complex64::new(0.9 * E, 0.0)).unwrap().converges);
}

#[test]
fn improved_sigma1_separates_behaviour() {
    let s1 = sigma1().unwrap().value;
    assert!(improved_converges(0.9 * s1, 1.0).unwrap().converges);
    assert!(!improved_converges(1.1 * s1, 1.0).unwrap().converges);
    // In x = e^(1/sigma): 1.1 x1 is inside, 0.9 x1 < 1 is outside the real domain of the series.
    let x1 = x1().unwrap();
    let spec = |n| SeriesSpec::new(Variant::ImprovedStirling, n);
    let e_in = err(spec(200), Complex64::new(1.1 * x1, 0.0));
    assert!(e_in <= 1e-6, "inside error {e_in:e}");
    assert!(spec(20).evaluate(Complex64::new(0.9 * x1, 0.0)).is_err());
}

#[test]
fn wright_radius_separates_behaviour() {
    let r = wright_radius().value;
    let e = |t: f64, n: usize| (wright_series_eval_t(t, n, Precision::Standard) - wright_omega_real(t)).abs();
    assert_threshold_behaviour("wright radius", |n| e(0.9 * r, n), |n| e(1.1 * r, n));
    assert!(wright_sigma_converges(1.1 / r));
    assert!(!wright_sigma_converges(0.9 / r));
}

#[test]
fn wright_sigma_predicate() {
    assert!(!wright_sigma_converges(0.25));
    assert!(wright_sigma_converges(1.0 / 3.0));
    assert!(wright_sigma_converges(0.5));
}

#[test]
fn complex_sigma_asymptotic_ratio() {
    let m = 60;
    for sigma in [
        Complex64::new(1.0, 0.5),
        Complex64::new(0.3, -0.2),
        Complex64::new(-2.0, 0.3),
        Complex64::from_polar(3.0, 2.0),
        Complex64::from_polar(10.0, -1.0),
    ] {
        let exact = improved_coeffs::<f64>(sigma, m).unwrap()[m - 1];
        let est = cm_asymptotic(sigma, m).unwrap().value;
        let ratio = exact / est;
        assert!((ratio - 1.0).norm() < 0.05, "sigma = {sigma}: ratio {ratio}");
    }
}

#[test]
fn real_sigma_asymptotic_singularity_count() {
    let pos = cm_asymptotic(Complex64::new(2.0, 0.0), 30).unwrap();
    assert_eq!(pos.singularities, 2);
    let th = pos.theta1.unwrap();
    assert!(th > 0.0 && th < PI);
}

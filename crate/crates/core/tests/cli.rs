use std::f64::consts::E;

use clap::Parser;
use lambert_series::cli::{execute, Cli};
use lambert_series::oracle::wright_omega_real;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let cli = Cli::try_parse_from(std::iter::once("lambert-series").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = execute(&cli, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|c| c.parse::<f64>().unwrap()).collect()).collect();
    (headers, rows)
}

fn eval_csv(args: &[&str]) -> Vec<f64> {
    let mut a = vec!["eval", "--format", "csv"];
    a.extend_from_slice(args);
    let r = run(&a);
    assert_eq!(r.code, 0, "{}", r.err);
    csv_rows(&r.out).1.remove(0)
}

#[test]
fn eval_examples() {
    let row = eval_csv(&["--series", "comtet", "--x", "10", "--N", "40"]);
    assert!(row[6] <= 1e-10, "{row:?}");
    let row = eval_csv(&["--series", "improved", "--x", "1.5", "--N", "60"]);
    assert!(row[6] <= 1e-6, "{row:?}");
    let row = eval_csv(&["--series", "wright-ln", "--x", "1", "--N", "5"]);
    assert_eq!(row[2], wright_omega_real(0.0));
    assert_eq!(row[3], 0.0);
}

#[test]
fn eval_schema_is_fixed() {
    let r = run(&["eval", "--series", "comtet", "--x", "10", "--format", "csv"]);
    assert_eq!(
        r.out.lines().next().unwrap(),
        "z_re,z_im,series_re,series_im,oracle_re,oracle_im,abs_error,rel_error,relation_residual,defining_residual"
    );
    assert!(r.err.contains("\"precision\":\"standard\""), "{}", r.err);
}

#[test]
fn domain_errors_exit_two_and_name_the_condition() {
    let r = run(&["eval", "--series", "comtet", "--x", "0.5"]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("x > 1"), "{}", r.err);
    assert_eq!(run(&["boundary", "--curve", "improved-alpha", "--grid", "3:4:3"]).code, 2);
    assert_eq!(run(&["branch-table", "--grid", "0.1:0.2:3"]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lambert_series::cli::run(["lambert-series", "eval", "--grid", "1:2"]), 2);
    assert_eq!(lambert_series::cli::run(["lambert-series", "boundary", "--curve", "nope"]), 2);
    assert_eq!(lambert_series::cli::run(["lambert-series", "accuracy", "--grid", "1:2:0"]), 2);
}

#[test]
fn boundary_csv_round_trips() {
    let r = run(&["boundary", "--curve", "comtet-complex", "--samples", "20"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(!r.out.contains('\r'));
    let (headers, rows) = csv_rows(&r.out);
    assert_eq!(headers, ["param", "re_z", "im_z", "residual"]);
    assert_eq!(rows.len(), 39);
    // Re-emitting at 17 significant digits reproduces the text exactly.
    for (line, row) in r.out.lines().skip(1).zip(&rows) {
        let again: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        assert_eq!(line, again.join(","));
    }
    let tip = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((tip[1] - E).abs() < 1e-12 && tip[2] == 0.0);
}

#[test]
fn improved_boundary_tip_is_x1() {
    let r = run(&["boundary", "--curve", "improved-complex", "--samples", "20"]);
    let (_, rows) = csv_rows(&r.out);
    let tip = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((tip[1] - 1.004458).abs() < 1e-4, "{tip:?}");
}

#[test]
fn threshold_curves_share_the_schema() {
    for curve in ["comtet-alpha", "divergence-lower", "divergence-upper", "improved-alpha", "transformed-comtet"] {
        let r = run(&["boundary", "--curve", curve, "--grid", "0.2:0.8:4"]);
        assert_eq!(r.code, 0, "{curve}: {}", r.err);
        let (headers, rows) = csv_rows(&r.out);
        assert_eq!(headers, ["param", "re_z", "im_z", "residual"], "{curve}");
        assert_eq!(rows.len(), 4, "{curve}");
    }
}

#[test]
fn comtet_accuracy_sweep_shape() {
    let r = run(&["accuracy", "--series", "comtet", "--N", "40", "--grid", "1.5:8:40"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let (headers, rows) = csv_rows(&r.out);
    assert_eq!(headers, ["z", "p", "n_terms", "ratio", "log10_abs_error"]);
    for row in rows {
        let dev = (row[3] - 1.0).abs();
        if row[0] < E * 0.95 {
            assert!(dev > 1e-3, "{row:?}");
        }
        if row[0] > E * 1.5 {
            assert!(dev < 1e-6, "{row:?}");
        }
    }
}

#[test]
fn improved_sweep_converges_down_to_1_1() {
    let r = run(&["accuracy", "--series", "improved", "--N", "60", "--grid", "1.1:3:5"]);
    let (_, rows) = csv_rows(&r.out);
    assert!(rows.iter().all(|row| (row[3] - 1.0).abs() < 1e-6), "{rows:?}");
}

#[test]
fn p_sweep_has_one_row_per_point_and_order() {
    let r = run(&["accuracy", "--series", "comtet", "--sweep", "p", "--grid", "-1:0.9:7", "--z-re", "5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let (_, rows) = csv_rows(&r.out);
    assert_eq!(rows.len(), 21);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[2], [10.0, 20.0, 40.0][i % 3]);
        assert_eq!(row[0], 5.0);
    }
}

#[test]
fn branch_table_rows() {
    let r = run(&["branch-table"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("-6.4728"), "{}", r.out);
    assert!(r.out.contains("-2.5426"), "{}", r.out);
    assert!(r.out.contains("0.04815") || r.out.contains("0.0482"), "{}", r.out);
    let r = run(&["branch-table", "--grid", "-0.36:-0.01:5"]);
    let (headers, rows) = csv_rows(&r.out);
    assert_eq!(headers.len(), 7);
    assert_eq!(rows.len(), 5);
}

#[test]
fn identities_pass_and_fail() {
    let r = run(&["identities"]);
    assert_eq!(r.code, 0, "{}", r.out);
    let small = run(&["identities", "--max-n", "5"]);
    assert_eq!(small.code, 0);
    assert!(!small.out.contains("fail "));
    let bad = run(&["identities", "--max-n", "8", "--corrupt", "eulerian2:5:2:0"]);
    assert_eq!(bad.code, 1);
    assert!(bad.out.contains("FAIL"), "{}", bad.out);
}

#[test]
fn json_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let r = run(&["coeffs", "--series", "improved", "--N", "6", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    // c_1 = 1 / (1 + sigma)
    assert_eq!(rows[0]["re"].as_f64().unwrap(), 0.5);
    assert_eq!(doc["metadata"]["command"], "coeffs");
}

#[test]
fn constants_report() {
    let r = run(&["constants", "--format", "csv"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("name,value,residual\n"));
    assert!(r.out.contains("sigma1"), "{}", r.out);
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cohdist::error::Error;
use cohdist::io::{write_state, StateFile};
use cohdist::linalg::ComplexMatrix;
use cohdist::states::{bell_state, intro_example_state, product_plus_state, DensityMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn cohdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_file(dir: &TempDir, name: &str, file: &StateFile) -> PathBuf {
    let p = dir.path().join(name);
    write_state(&p, file).unwrap();
    p
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// `[c_total, c_a, acc_a, c_b, acc_b, remaining]` of the named measure.
fn parts(report: &Value, measure: &str) -> Vec<f64> {
    let r = report["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["measure"] == measure)
        .unwrap_or_else(|| panic!("no {measure} report"));
    ["c_total", "c_a", "acc_a", "c_b", "acc_b", "remaining"]
        .iter()
        .map(|k| r[k].as_f64().unwrap())
        .collect()
}

fn assert_close(got: &[f64], want: &[f64], tol: f64) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() <= tol, "got {got:?}, want {want:?}");
    }
}

fn analyze_json(dir: &TempDir, state: &Path, extra: &[&str]) -> Value {
    let json = dir.path().join("report.json");
    let mut args = vec!["analyze", path_str(state), "--json", path_str(&json)];
    args.extend_from_slice(extra);
    let o = cohdist(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    read_json(&json)
}

#[test]
fn analyze_intro_example() {
    let dir = TempDir::new().unwrap();
    let state = write_file(&dir, "intro.json", &StateFile::from_bipartite(&intro_example_state()));
    let report = analyze_json(&dir, &state, &["--measure", "both"]);
    let expected = [1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
    assert_close(&parts(&report, "l1"), &expected, 1e-9);
    assert_close(&parts(&report, "relative_entropy"), &expected, 1e-9);
    assert!((report["discord"]["discord_left"].as_f64().unwrap()).abs() < 1e-9);
    assert!((report["discord"]["discord_right"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let o = cohdist(&["analyze", path_str(&state)]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("l1 ")));
    assert!(text.lines().any(|l| l.starts_with("relative_entropy ")));
}

#[test]
fn analyze_bell_state_is_all_remaining() {
    let dir = TempDir::new().unwrap();
    let state = write_file(&dir, "bell.json", &StateFile::from_bipartite(&bell_state()));
    let report = analyze_json(&dir, &state, &[]);
    for measure in ["l1", "relative_entropy"] {
        let p = parts(&report, measure);
        assert!((p[0] - 1.0).abs() < 1e-9 && (p[5] - 1.0).abs() < 1e-9, "{measure}: {p:?}");
    }
    assert!((report["negativity"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn analyze_incoherent_product_is_zero() {
    let dir = TempDir::new().unwrap();
    let rho = ComplexMatrix::from_real_diagonal(&[0.1, 0.2, 0.3, 0.15, 0.05, 0.2]);
    let state = write_file(&dir, "diag.json", &StateFile::from_matrix(vec![2, 3], &rho));
    let report = analyze_json(&dir, &state, &[]);
    for measure in ["l1", "relative_entropy"] {
        assert_close(&parts(&report, measure), &[0.0; 6], 1e-12);
    }
}

#[test]
fn log_base_e_scales_entropic_values_only() {
    let dir = TempDir::new().unwrap();
    let state = write_file(&dir, "bell.json", &StateFile::from_bipartite(&bell_state()));
    let report = analyze_json(&dir, &state, &["--log-base", "e"]);
    let ln2 = std::f64::consts::LN_2;
    assert!((parts(&report, "relative_entropy")[0] - ln2).abs() < 1e-9);
    assert!((parts(&report, "l1")[0] - 1.0).abs() < 1e-9);
    assert!((report["discord"]["mutual_info"].as_f64().unwrap() - 2.0 * ln2).abs() < 1e-9);
    assert_eq!(report["log_base"], "e");
}

#[test]
fn gen_round_trips_through_analyze() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("bell.json");
    let o = cohdist(&["gen", "bell", "--out", path_str(&out)]);
    assert!(o.status.success());
    let report = analyze_json(&dir, &out, &[]);
    assert!((report["negativity"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let out = dir.path().join("plus.json");
    assert!(cohdist(&["gen", "product-plus", "--out", path_str(&out)]).status.success());
    let written: StateFile = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written, StateFile::from_bipartite(&product_plus_state()));
    let p = parts(&analyze_json(&dir, &out, &[]), "l1");
    assert_close(&p, &[3.0, 1.0, 0.0, 1.0, 0.0, 1.0], 1e-9);
}

#[test]
fn gen_ising_ground_endpoints() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("ising.json");
    let o = cohdist(&["gen", "ising-ground", "--j", "0", "--lambda", "1", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let p = parts(&analyze_json(&dir, &out, &[]), "l1");
    assert!((p[0] - 1.0).abs() < 0.01 && (p[5] - 1.0).abs() < 0.01, "{p:?}");
}

#[test]
fn gen_schmidt_from_coefficients() {
    let dir = TempDir::new().unwrap();
    // rank-1 coefficient matrix |ψ⟩⟨ψ| with ψ = (√0.3, √0.7)
    let (a, b) = (0.3f64.sqrt(), 0.7f64.sqrt());
    let c = ComplexMatrix::from_row_major(
        [0.3, a * b, a * b, 0.7].iter().map(|x| num_complex::Complex64::new(*x, 0.0)).collect(),
    )
    .unwrap();
    let coeffs = write_file(&dir, "c.json", &StateFile::from_matrix(vec![2], &c));
    let out = dir.path().join("schmidt.json");
    let o = cohdist(&["gen", "schmidt", "--coefficients", path_str(&coeffs), "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let p = parts(&analyze_json(&dir, &out, &[]), "l1");
    assert!(p[1].abs() < 1e-12 && p[3].abs() < 1e-12 && p[2].abs() < 1e-12 && p[4].abs() < 1e-12);
    assert!((p[5] - 2.0 * a * b).abs() < 1e-9);
}

#[test]
fn assist_maximally_mixed_and_pure() {
    let dir = TempDir::new().unwrap();
    let mm = write_file(&dir, "mm.json", &StateFile::from_single(&DensityMatrix::maximally_mixed(2)));
    let out = dir.path().join("assist.json");
    let o = cohdist(&["assist", path_str(&mm), "--restarts", "4", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &read_json(&out)[0];
    assert_eq!(r["measure"], "relative_entropy");
    assert!(r["best_value"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert!((r["upper_bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let total: f64 = r["ensemble"].as_array().unwrap().iter().map(|m| m["probability"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);

    let pure = write_file(&dir, "pure.json", &StateFile::from_bipartite(&bell_state()));
    let out = dir.path().join("pure_assist.json");
    let o = cohdist(&["assist", path_str(&pure), "--measure", "both", "--out", path_str(&out)]);
    assert!(o.status.success());
    for r in read_json(&out).as_array().unwrap() {
        assert_eq!(r["best_value"].as_f64().unwrap(), 0.0);
        assert_eq!(r["restarts_used"].as_u64().unwrap(), 0);
    }
}

#[test]
fn sweep_writes_csv_to_stdout() {
    let o = cohdist(&["sweep-ising", "--steps", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("j_over_lambda,l1_total,"));
    assert!(lines[3].starts_with("1.00000000000e1,"));
}

#[test]
fn invalid_trace_is_a_validation_error() {
    let dir = TempDir::new().unwrap();
    let bad = ComplexMatrix::from_real_diagonal(&[0.5, 0.2, 0.1, 0.1]);
    let state = write_file(&dir, "bad.json", &StateFile::from_matrix(vec![2, 2], &bad));
    let o = cohdist(&["analyze", path_str(&state)]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("trace"), "{err}");
}

#[test]
fn malformed_and_missing_files_exit_1() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("junk.json");
    std::fs::write(&p, "{\"dims\": [2, 2], \"matrix\": 7}").unwrap();
    assert_eq!(cohdist(&["analyze", path_str(&p)]).status.code(), Some(1));
    assert_eq!(cohdist(&["analyze", "/nonexistent/state.json"]).status.code(), Some(1));
}

#[test]
fn bad_arguments_exit_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    assert_eq!(cohdist(&["gen", "werner", "--out", path_str(&out)]).status.code(), Some(2));
    assert_eq!(cohdist(&["sweep-ising", "--jmin", "5", "--jmax", "1"]).status.code(), Some(2));
    assert_eq!(cohdist(&["sweep-ising", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(cohdist(&["analyze"]).status.code(), Some(2));
    let mm = write_file(&dir, "mm.json", &StateFile::from_single(&DensityMatrix::maximally_mixed(2)));
    assert_eq!(cohdist(&["assist", path_str(&mm), "--restarts", "0"]).status.code(), Some(2));
}

#[test]
fn numerical_faults_map_to_exit_3() {
    use cohdist::cli::exit_code;
    assert_eq!(exit_code(&Error::PartitionViolation { residual: 1e-3 }), 3);
    assert_eq!(exit_code(&Error::RankMismatch { state_rank: 2, spec_rank: 3 }), 3);
}

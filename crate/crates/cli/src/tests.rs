use super::run;
use serde_json::Value;
use std::path::PathBuf;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(format!("{name}.json")).display().to_string()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("schur-relent").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = invoke(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn maximally_mixed_single_copy_error_is_log2_squared() {
    let m = corpus("qubit_mixed");
    let doc = json(&["estimate", "--rho", &m, "--sigma", &m, "--n", "1"]);
    let ln2 = std::f64::consts::LN_2;
    assert!((doc["mse"].as_f64().unwrap() - ln2 * ln2).abs() < 1e-12);
    assert_eq!(doc["D"].as_f64().unwrap(), 0.0);
}

#[test]
fn normality_distance_shrinks() {
    let (a, b) = (corpus("qubit_diag_a"), corpus("qubit_diag_b"));
    let (code, out, _) = invoke(&["--format", "csv", "normality", "--rho", &a, "--sigma", &b, "--n-range", "6:24:6"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["n", "ks", "log_term_second_moment", "log_term_bound"]);
    let ks: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ks.len(), 4);
    assert!(ks.windows(2).all(|w| w[1] < w[0]), "{ks:?}");
}

#[test]
fn verify_passes_on_bundled_corpus() {
    let (code, out, err) = invoke(&["--format", "csv", "verify"]);
    assert_eq!(code, 0, "{out}{err}");
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["check", "passed", "detail"]);
    assert!(rows.len() >= 20);
    assert!(rows.iter().all(|r| r[1] == "true"));
}

#[test]
fn verify_accepts_extra_pair() {
    let (a, b) = (corpus("qutrit_rot_a"), corpus("qutrit_skewed"));
    let (code, _, err) = invoke(&["verify", "--rho", &a, "--sigma", &b]);
    assert_eq!(code, 0, "{err}");
}

#[test]
fn generated_states_are_deterministic_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name).display().to_string();
    for name in ["a.json", "b.json"] {
        let p = path(name);
        let args = [
            "--seed",
            "11",
            "--out",
            &p,
            "generate-states",
            "--kind",
            "random_pure_depolarized",
            "--d",
            "3",
            "--p",
            "0.4",
        ];
        assert_eq!(invoke(&args).0, 0);
    }
    let a = std::fs::read(path("a.json")).unwrap();
    assert_eq!(a, std::fs::read(path("b.json")).unwrap());
    let state = schur_relent::states::parse_state_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(state.dim(), 3);
    let div = json(&["divergence", "--rho", &path("a.json"), "--sigma", &corpus("qutrit_skewed")]);
    assert!(div["D"].as_f64().unwrap() > 0.0);
}

#[test]
fn diagonal_half_half_is_maximally_mixed() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.json").display().to_string();
    assert_eq!(invoke(&["--out", &p, "generate-states", "--kind", "diagonal", "--spectrum", "0.5,0.5"]).0, 0);
    let doc = json(&["divergence", "--rho", &p, "--sigma", &corpus("qubit_mixed"), "--alpha", "0.5"]);
    assert!(doc["D"].as_f64().unwrap().abs() < 1e-14);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (corpus("qubit_rot_a"), corpus("qubit_rot_b"));
    let args =
        ["--seed", "5", "--format", "csv", "estimate", "--rho", &a, "--sigma", &b, "--n", "6", "--samples", "200"];
    let first = invoke(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first, invoke(&args));
    let (header, rows) = csv_rows(&first.1);
    assert_eq!(header, ["draw_index", "x", "x_star"]);
    assert_eq!(rows.len(), 200);
    let other = invoke(&[
        "--seed",
        "6",
        "--format",
        "csv",
        "estimate",
        "--rho",
        &a,
        "--sigma",
        &b,
        "--n",
        "6",
        "--samples",
        "200",
    ]);
    assert_ne!(first.1, other.1);
}

#[test]
fn distribution_csv_columns_and_mass() {
    let (a, b) = (corpus("qutrit_rot_a"), corpus("qutrit_rot_b"));
    let (code, out, _) = invoke(&["--format", "csv", "distribution", "--rho", &a, "--sigma", &b, "--n", "4"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["lambda", "mu", "p", "q_unit", "multiplicity", "x", "x_star"]);
    let mass: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((mass - 1.0).abs() < 1e-12);
}

#[test]
fn brute_and_cycle_backends_agree_through_cli() {
    let (a, b) = (corpus("qubit_rot_a"), corpus("qubit_diag_b"));
    let get = |backend| json(&["distribution", "--rho", &a, "--sigma", &b, "--n", "5", "--backend", backend]);
    let (x, y) = (get("brute"), get("cycle_poly"));
    let (xa, ya) = (x["atoms"].as_array().unwrap(), y["atoms"].as_array().unwrap());
    assert_eq!(xa.len(), ya.len());
    for (p, q) in xa.iter().zip(ya) {
        assert!((p["p"].as_f64().unwrap() - q["p"].as_f64().unwrap()).abs() < 1e-12);
    }
}

#[test]
fn dims_rows_satisfy_schur_weyl() {
    let doc = json(&["dims", "--n", "6", "--d", "3"]);
    assert_eq!(doc["schur_weyl_identity"].as_bool(), Some(true), "{doc}");
}

#[test]
fn tail_and_scan_report_expected_columns() {
    let (a, b) = (corpus("qubit_diag_a"), corpus("qubit_diag_b"));
    let (code, out, _) =
        invoke(&["--format", "csv", "tail", "--rho", &a, "--sigma", &b, "--n", "8", "--epsilon", "0.2"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header[..6], ["n", "epsilon", "delta_plus", "delta_minus", "bound_plus", "bound_minus"]);
    let r: Vec<f64> = rows[0][2..6].iter().map(|v| v.parse().unwrap()).collect();
    assert!(r[0] <= r[2] && r[1] <= r[3]);
    let (code, out, _) = invoke(&["--format", "csv", "complexity-scan", "--d", "2", "--c", "5"]);
    assert_eq!(code, 0);
    let (header, rows) = csv_rows(&out);
    assert!(header.contains(&"within_bound".to_string()));
    assert_eq!(rows.len(), 2);
}

#[test]
fn errors_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"spectrum": [0.7, 0.7]}"#).unwrap();
    let bad = bad.display().to_string();
    let m = corpus("qubit_mixed");
    let cases: Vec<Vec<&str>> = vec![
        vec!["estimate", "--rho", &bad, "--sigma", &m, "--n", "2"],
        vec!["estimate", "--rho", "/nonexistent/x.json", "--sigma", &m, "--n", "2"],
        vec!["dims", "--n-range", "5:1", "--d", "2"],
        vec!["divergence", "--rho", &m, "--sigma", &m, "--alpha", "abc"],
        vec!["frobnicate"],
        vec!["distribution", "--rho", &m, "--sigma", &m, "--n", "9", "--backend", "brute"],
    ];
    for args in cases {
        let (code, out, err) = invoke(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty());
        let doc: Value = serde_json::from_str(&err).unwrap_or_else(|e| panic!("{args:?}: {e}: {err}"));
        assert!(doc["error"]["kind"].is_string() && doc["error"]["message"].is_string());
    }
}

#[test]
fn help_goes_to_stdout() {
    let (code, out, err) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("complexity-scan") && err.is_empty());
}

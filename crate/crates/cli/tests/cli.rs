use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bloch-volterra");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const POLE: &str = r#"{"kind":"binomial_power","w":[1.0,0.0],"s":1.0,"i":0}"#;
const DECAY_ODE: &str =
    r#"{"n":1,"gvec":[{"kind":"poly","coeffs":[[0.1,0]]}],"rhs":{"coeffs":[[0,0]],"tail_hint":0},"init":[[1,0]],"alpha":1}"#;

#[test]
fn criterion_json_has_branch_and_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", POLE);
    let out = run(&["criterion", "--g", &g, "--alpha", "2", "--beta", "1", "--n", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["branch"], "power");
    assert!(v["bounded_verdict"].is_boolean());
    assert!(v["argmax"].as_array().unwrap().len() == 2);
}

#[test]
fn bad_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", POLE);
    let out = run(&["criterion", "--g", &g, "--alpha", "2", "--beta", "1", "--n", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["criterion", "--g", &g, "--alpha", "-1", "--beta", "1", "--n", "2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let bad = write(dir.path(), "bad.json", "{not json");
    let out = run(&["norm", "--g", &bad, "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["norm", "--g", &g, "--alpha", "1", "--grid-rcap", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_suite_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("v.csv");
    let out = run(&["verify", "--suite", "leibniz", "--format", "csv", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,assertion,passed,measured,limit"));
    assert!(lines.all(|l| l.starts_with("leibniz,") && l.contains(",true,")));
}

#[test]
fn verify_alias_is_deterministic() {
    let a = run(&["verify", "--suite", "lemma21", "--seed", "7"]);
    let b = run(&["verify", "--suite", "derivative-norm", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_ode_csv_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", DECAY_ODE);
    let out = run(&["solve-ode", "--problem", &p, "--format", "csv", "--degree-cap", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut fact = 1.0;
    for (d, line) in text.lines().skip(1).enumerate() {
        if d > 0 {
            fact *= d as f64;
        }
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        let exact = (-0.1f64).powi(d as i32) / fact;
        assert!((cols[1] - exact).abs() < 1e-14, "degree {d}");
        assert!((cols[3] - exact).abs() < 1e-14, "degree {d}");
        assert_eq!(cols[2], 0.0);
    }
}

#[test]
fn solve_ode_divergence_exit_3_with_recurrence() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"n":1,"gvec":[{"kind":"poly","coeffs":[[20,0]]}],"rhs":{"coeffs":[[0,0]],"tail_hint":0},"init":[[1,0]],"alpha":1}"#,
    );
    let out = run(&["solve-ode", "--problem", &p]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["neumann"].is_null());
    assert!(!v["divergence_log"].as_array().unwrap().is_empty());
    assert!(v["recurrence"].is_object());
}

#[test]
fn probe_csv_two_column_complex() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(dir.path(), "op.json", r#"{"kind":"volterra","g":{"kind":"poly","coeffs":[[0,0],[1,0]]}}"#);
    let out = run(&["probe", "--op", &op, "--alpha", "1", "--beta", "1", "--w", "0.5,0.9", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "w_re,w_im,ratio,reliable");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.5,0,"));
}

#[test]
fn norm_of_identity_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "z.json", r#"{"kind":"poly","coeffs":[[0,0],[1,0]]}"#);
    for extra in [&[][..], &["--degree-cap", "8"][..], &["--n", "2"][..]] {
        let mut args = vec!["norm", "--g", g.as_str(), "--alpha", "1"];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-9, "{extra:?}");
    }
}

use std::f64::consts::PI;
use std::process::{Command, Output};

fn hkt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkt")).args(args).env_remove("HKT_WORKERS").output().expect("run hkt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn values(csv: &str) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect()
}

#[test]
fn twisted_kernel_at_origin() {
    let o = hkt(&["eval", "p_lambda", "--n", "1", "--t", "1", "--lambda", "1", "--at", "0", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("y,v,value\n"));
    let v = values(&text)[0];
    let expected = 1.0 / (4.0 * PI * 1f64.sinh());
    assert!((v - expected).abs() < 1e-15 * expected, "{v}");
}

#[test]
fn signed_weight_ignores_xi() {
    let base = ["eval", "w_plus", "--t", "1", "--eta", "0.3", "--at", "0.2", "0.1", "0.4", "-0.3"];
    let a = hkt(&[&base[..], &["--xi", "5"]].concat());
    let b = hkt(&[&base[..], &["--xi", "0"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn minus_weight_is_mirrored_plus_weight() {
    let minus = hkt(&["eval", "w_minus", "--t", "0.75", "--eta", "0.5", "--at", "0", "0", "0.3", "0.2"]);
    let plus = hkt(&["eval", "w_plus", "--t", "0.75", "--eta", "-0.5", "--at", "0", "0", "0.3", "0.2"]);
    let (m, p) = (values(&stdout(&minus))[0], values(&stdout(&plus))[0]);
    assert!((m - p).abs() < 1e-10 * p.abs());
}

#[test]
fn tensor_grid_covers_every_node() {
    let o = hkt(&["eval", "k", "--t", "1", "--axis", "0", "1", "2", "--axis", "0", "0", "1", "--axis", "-1", "1", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("x,u,xi,value\n"));
    let v = values(&text);
    assert_eq!(v.len(), 6);
    // k_1 at the identity, then symmetry in ξ
    assert!((v[1] - 0.02084042188594314533).abs() < 1e-12);
    assert_eq!(v[0], v[2]);
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let args = ["eval", "origin_profile", "--t", "1", "--axis", "-2", "2", "9"];
    let direct = hkt(&args);
    let o = hkt(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["scan", "--steps", "1"],
        vec!["verify", "nope"],
        vec!["eval", "k"],
        vec!["eval", "k", "--axis", "0", "1", "0", "--axis", "0", "0", "1", "--axis", "0", "0", "1"],
        vec!["eval", "p_lambda", "--at", "0", "0"],
        vec!["eval", "p_lambda", "--lambda", "1", "--at", "0", "0", "1"],
        vec!["eval", "origin_profile", "--n", "2", "--at", "0"],
        vec!["eval", "w_plus", "--t", "-1", "--at", "0", "0", "0", "0"],
    ] {
        let o = hkt(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("usage error"), "{args:?}");
    }
}

#[test]
fn worker_cap_must_be_positive() {
    let o = Command::new(env!("CARGO_BIN_EXE_hkt")).args(["verify", "group"]).env("HKT_WORKERS", "0").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_hkt")).args(["verify", "group"]).env("HKT_WORKERS", "1").output().unwrap();
    assert!(o.status.success());
}

#[test]
fn verify_report_is_deterministic_json() {
    let a = hkt(&["verify", "group"]);
    let b = hkt(&["verify", "group"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["suite"], "group");
    assert_eq!(doc["pass"], true);
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        for key in ["identity_name", "anchor", "params", "residual", "tolerance", "pass"] {
            assert!(r.get(key).is_some(), "{key}");
        }
        assert!(r.get("wall_time_s").is_none());
        assert!(r["residual"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap());
    }
    let timed = hkt(&["verify", "group", "--timings"]);
    let doc: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(doc["reports"][0]["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn failing_tolerance_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.toml");
    std::fs::write(&cfg, "[tolerances]\ngroup_associativity = -1.0\n").unwrap();
    let o = hkt(&["verify", "group", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["pass"], false);

    std::fs::write(&cfg, "[tolerances]\ngroup_asociativity = 1e-3\n").unwrap();
    let o = hkt(&["verify", "group", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn appendix_suite_passes() {
    let o = hkt(&["verify", "appendix"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn scan_flags_sign_changes_for_both_conventions() {
    let o = hkt(&["scan", "--t", "1", "--beta-max", "8", "--steps", "400", "--exponent", "printed"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("beta,value,normalized_value\n"));
    assert_eq!(text.lines().count(), 401);
    // normalized_value = value / (c √π log(2 + β²)) with one c per exponent
    let scale: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            cols[1] / (cols[2] * (2.0 + cols[0] * cols[0]).ln())
        })
        .collect();
    assert!(scale.iter().all(|s| (s - scale[0]).abs() < 1e-13 * scale[0]));
    let summary = String::from_utf8(o.stderr).unwrap();
    assert!(summary.contains("halved convention: 5 sign change(s)"), "{summary}");
    assert!(summary.contains("full convention: 7 sign change(s)"), "{summary}");

    let corrected = hkt(&["scan", "--t", "1", "--beta-max", "8", "--steps", "400"]);
    let summary = String::from_utf8(corrected.stderr).unwrap();
    assert!(summary.contains("halved convention: 1 sign change(s)"), "{summary}");
}

#[test]
fn scan_output_is_deterministic() {
    let a = hkt(&["scan", "--steps", "50", "--convention", "full"]);
    let b = hkt(&["scan", "--steps", "50", "--convention", "full"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

use std::path::Path;

use serde_json::Value;

use crate::settings::Settings;
use crate::{run, Failure};

fn uinf(out: &Path, args: &[&str]) -> u8 {
    let mut all = vec!["uinf", "--out", out.to_str().unwrap()];
    all.extend_from_slice(args);
    run(all)
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn passing_check_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(uinf(dir.path(), &["algebra", "su2"]), 0);
    let r = read_json(&dir.path().join("algebra_su2.json"));
    assert_eq!(r["passed"], true);
    assert_eq!(r["basis"], "standard");
    assert!((r["closure_constant"].as_f64().unwrap() + (3.0 / (4.0 * std::f64::consts::PI)).sqrt()).abs() < 1e-12);
    assert_eq!(r["meta"]["seed"], 0);
}

#[test]
fn invalid_input_exits_two_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    for args in [
        &["identities", "--trials", "0"][..],
        &["identities", "--dims", "1"],
        &["reduce", "ym", "--b", "-0.1"],
        &["reduce", "ym", "--e", "1", "--q", "1"],
        &["reduce", "scan-b", "--b-list", "0.1,0.2"],
        &["monopole", "solve", "--n", "3"],
        &["algebra", "bracket", "--f", "missing.json", "--g", "missing.json"],
        &["no-such-command"],
    ] {
        assert_eq!(uinf(&out, args), 2, "{args:?}");
    }
    assert!(!out.exists());
}

#[test]
fn config_file_is_merged_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# identity run\ndims = 3\ntrials = 7\nseed = 5\n").unwrap();
    let out = dir.path().join("out");
    assert_eq!(uinf(&out, &["--config", cfg.to_str().unwrap(), "identities", "--trials", "9"]), 0);
    let r = read_json(&out.join("identities.json"));
    assert_eq!(r["meta"]["seed"], 5);
    let reports = r["reports"].as_array().unwrap();
    assert!(reports.iter().all(|s| s["report"]["trials"] == 9));
    assert!(reports.iter().any(|s| s["report"]["identity"] == "delta3_expansion" && s["report"]["dims"] == 3));
    assert!(reports.iter().all(|s| s["report"]["dims"] != 5));

    std::fs::write(&cfg, "trails = 7\n").unwrap();
    assert_eq!(uinf(&out, &["--config", cfg.to_str().unwrap(), "identities"]), 2);
    match Settings::load(Some(&cfg)) {
        Err(Failure::Config(m)) => assert!(m.contains("unknown config key trails"), "{m}"),
        _ => panic!("misspelled key accepted"),
    }
}

#[test]
fn bracket_round_trips_field_files() {
    let dir = tempfile::tempdir().unwrap();
    // Standard generators: {T1, T2} = c T3 with T3 = Y_10.
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let t1 = format!(
        r#"{{"l_max": 1, "real": true, "coeffs": [{{"l": 1, "m": -1, "re": {r}, "im": 0}}, {{"l": 1, "m": 1, "re": -{r}, "im": 0}}]}}"#
    );
    let t2 = format!(
        r#"{{"l_max": 1, "real": true, "coeffs": [{{"l": 1, "m": -1, "re": 0, "im": {r}}}, {{"l": 1, "m": 1, "re": 0, "im": {r}}}]}}"#
    );
    let (f, g) = (dir.path().join("f.json"), dir.path().join("g.json"));
    std::fs::write(&f, t1).unwrap();
    std::fs::write(&g, t2).unwrap();
    let out = dir.path().join("out");
    assert_eq!(uinf(&out, &["algebra", "bracket", "--f", f.to_str().unwrap(), "--g", g.to_str().unwrap()]), 0);
    let b = read_json(&out.join("algebra_bracket_field.json"));
    let c = b["coeffs"].as_array().unwrap();
    let expected = -(3.0 / (4.0 * std::f64::consts::PI)).sqrt();
    for e in c {
        let target = if (e["l"].as_u64(), e["m"].as_i64()) == (Some(1), Some(0)) { expected } else { 0.0 };
        assert!((e["re"].as_f64().unwrap() - target).abs() < 1e-15 && e["im"].as_f64().unwrap().abs() < 1e-15);
    }
    assert!(c.iter().any(|e| e["l"] == 1 && e["m"] == 0));
}

#[test]
fn failing_tail_check_exits_one_but_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(uinf(dir.path(), &["monopole", "perturb"]), 1);
    let r = read_json(&dir.path().join("monopole_perturb.json"));
    assert_eq!(r["origin_passed"], true);
    assert_eq!(r["tail_passed"], false);
    let csv = std::fs::read_to_string(dir.path().join("monopole_perturbation.csv")).unwrap();
    assert!(csv.starts_with("xi,K,H,K1,H1\n"));
}

#[test]
fn scan_outputs_have_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(uinf(dir.path(), &["reduce", "scan-b", "--b-list", "0.4,0.2,0.1,0.05"]), 0);
    for model in ["scalar", "ym"] {
        let csv = std::fs::read_to_string(dir.path().join(format!("reduce_scan_b_{model}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("b,q,covariant_group,residual_group_1,residual_group_0,ratio,fit_exponent"));
        assert_eq!(lines.count(), 4);
    }
    assert_eq!(uinf(dir.path(), &["monopole", "scan-evb", "--n", "1000"]), 0);
    let csv = std::fs::read_to_string(dir.path().join("monopole_scan_evb.csv")).unwrap();
    assert!(csv.starts_with("evb,epsilon,E0_integral,correction_integral,dE_over_E0,cutoff\n"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(["uinf", "--help"]), 0);
}

mod common;

use common::*;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::Command;
use ymh::cli::{Report, Scenario, Summary};
use ymh::evolve::gate::random_grid_state;
use ymh::fields::AnsatzProfiles;
use ymh::geometry::Background;
use ymh::io::{read_snapshot, read_table, write_snapshot, write_table};
use rand::SeedableRng;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn ymh(out: &Path, args: &[&str]) -> (i32, String, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_ymh")).arg("--out").arg(out).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8_lossy(&o.stdout).into(), String::from_utf8_lossy(&o.stderr).into())
}

fn report(out: &Path, name: &str) -> Report {
    serde_json::from_str(&fs::read_to_string(out.join(name).join("report.json")).unwrap()).unwrap()
}

fn value(r: &Report, check: &str, quantity: &str) -> f64 {
    r.records.iter().find(|x| x.check == check && x.quantity == quantity).unwrap().value
}

#[test]
fn bundled_duffing_scenario() {
    let out = tempfile::tempdir().unwrap();
    let (code, stdout, _) = ymh(out.path(), &["run", scenario("duffing.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let r = report(out.path(), "duffing");
    assert!(r.passed && value(&r, "energy_drift", "relative_drift") < 1e-8);
    let dir = out.path().join("duffing");
    assert!(dir.join("series.csv").exists());
    let snaps: Vec<_> = fs::read_dir(dir.join("snapshots")).unwrap().collect();
    assert_eq!(snaps.len(), 2);
}

#[test]
fn bundled_cone_identity_scenario() {
    let out = tempfile::tempdir().unwrap();
    let (code, _, err) = ymh(out.path(), &["run", scenario("cone-identity.json").to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let r = report(out.path(), "cone-identity");
    assert!(value(&r, "cone_identity", "residual") < 1e-3);
    for rec in &r.records {
        if rec.pass.is_some() {
            assert!(rec.tolerance.is_some(), "{rec:?}");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let out = tempfile::tempdir().unwrap();
    let path = scenario("duffing.json");
    let read = |d: &Path| (fs::read(d.join("duffing/report.json")).unwrap(), fs::read(d.join("duffing/series.csv")).unwrap());
    ymh(&out.path().join("a"), &["run", path.to_str().unwrap()]);
    ymh(&out.path().join("b"), &["run", path.to_str().unwrap()]);
    assert_eq!(read(&out.path().join("a")), read(&out.path().join("b")));
}

#[test]
fn malformed_configs_exit_with_two() {
    let out = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("duffing.json")).unwrap();
    let cases = [
        (text.replace("\"lambda\"", "\"lamda\""), "lamda"),
        (text.replace("\"version\": 1", "\"version\": 9"), "version"),
        (text.replacen('{', "{,", 1), "line 1"),
        (text.replace("\"cfl\": 0.25", "\"cfl\": 0.5"), "cfl"),
    ];
    for (k, (body, needle)) in cases.iter().enumerate() {
        let p = out.path().join(format!("bad{k}.json"));
        fs::write(&p, body).unwrap();
        let (code, _, err) = ymh(out.path(), &["run", p.to_str().unwrap()]);
        assert_eq!(code, 2, "case {k}: {err}");
        assert!(err.contains(needle), "case {k}: {err}");
    }
    let (code, _, _) = ymh(out.path(), &["run", "/nonexistent.json"]);
    assert_eq!(code, 2);
}

#[test]
fn numerical_blow_up_exits_with_three() {
    let out = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("duffing.json")).unwrap().replace("\"value\": 1.0", "\"value\": 1e120");
    let p = out.path().join("blow.json");
    fs::write(&p, text).unwrap();
    let (code, _, err) = ymh(out.path(), &["run", p.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("non-finite"));
}

#[test]
fn verify_of_an_empty_suite() {
    let out = tempfile::tempdir().unwrap();
    let suite = tempfile::tempdir().unwrap();
    let (code, stdout, _) = ymh(out.path(), &["verify", suite.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let s: Summary = serde_json::from_str(&stdout).unwrap();
    assert!(s.scenarios.is_empty());
    assert!(out.path().join("summary.json").exists());
}

#[test]
fn verify_names_the_failing_check() {
    let out = tempfile::tempdir().unwrap();
    let suite = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("duffing.json")).unwrap();
    fs::write(suite.path().join("a.json"), &text).unwrap();
    fs::write(suite.path().join("b.json"), text.replace("\"duffing\"", "\"strict\"").replace("1e-8", "1e-14")).unwrap();
    let (code, stdout, _) = ymh(out.path(), &["verify", suite.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let s: Summary = serde_json::from_str(&stdout).unwrap();
    assert_eq!(s.scenarios.len(), 2);
    assert!(s.scenarios[0].failures.is_empty() && s.scenarios[0].exit == 0);
    assert_eq!(s.scenarios[1].failures, vec!["energy_drift/relative_drift".to_string()]);
}

#[test]
fn fit_command_reads_series_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let rows: Vec<Vec<f64>> = (0..40).map(|k| vec![0.1 * k as f64, 2.0 * (-1.5 * 0.1 * k as f64).exp()]).collect();
    write_table(fs::File::create(&p).unwrap(), &serde_json::json!({}), &["x".into(), "y".into()], &rows).unwrap();
    let (code, stdout, err) = ymh(dir.path(), &["fit", p.to_str().unwrap(), "--window", "0,3"]);
    assert_eq!(code, 0, "{err}");
    let f: ymh::diagnostics::DecayFit = serde_json::from_str(&stdout).unwrap();
    assert!((f.exponent + 1.5).abs() < 1e-9);
    let (code, _, _) = ymh(dir.path(), &["fit", p.to_str().unwrap(), "--window", "0"]);
    assert_eq!(code, 2);
    let (code, _, _) = ymh(dir.path(), &["fit", p.to_str().unwrap(), "--window", "0,3", "--y", "z"]);
    assert_eq!(code, 2);
}

#[test]
fn threads_flag_is_accepted() {
    let out = tempfile::tempdir().unwrap();
    let (code, _, _) = ymh(out.path(), &["--threads", "2", "run", scenario("duffing.json").to_str().unwrap()]);
    assert_eq!(code, 0);
}

#[test]
fn bundled_scenarios_parse() {
    for f in ["duffing.json", "cone-identity.json"] {
        let s = Scenario::load(&scenario(f)).unwrap();
        assert_eq!(s.version, ymh::cli::SCENARIO_VERSION);
    }
}

#[test]
fn snapshot_round_trip() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    for bg in [Background::Minkowski, Background::Cylinder] {
        let s = random_grid_state(bg, AnsatzProfiles::hedgehog(), &mut rng).unwrap();
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &s).unwrap();
        let back = read_snapshot(BufReader::new(&buf[..])).unwrap();
        assert_eq!(back, s);
    }
    let s = scalar_bump().build(Background::Cylinder, scalar(), 32, std::f64::consts::PI, 1.0).unwrap();
    let mut buf = Vec::new();
    write_snapshot(&mut buf, &s).unwrap();
    assert_eq!(read_snapshot(BufReader::new(&buf[..])).unwrap(), s);
}

#[test]
fn table_errors_carry_line_numbers() {
    let bad = [
        ("x,y\n1,2\n", 1),
        ("# {\"a\":1}\nx,y\n1,2\n3,oops\n", 4),
        ("# {\"a\":1}\nx,y\n1,2\n3\n", 4),
        ("# not json\nx,y\n", 1),
    ];
    for (text, line) in bad {
        match read_table(BufReader::new(text.as_bytes())) {
            Err(ymh::Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other:?}"),
        }
    }
    let t = read_table(BufReader::new("# {\"a\":1}\nx,y\n1,2\n".as_bytes())).unwrap();
    assert_eq!(t.rows, vec![vec![1.0, 2.0]]);
}

#[test]
fn snapshots_with_broken_invariants_are_rejected() {
    let s = scalar_bump().build(Background::Cylinder, AnsatzProfiles::hedgehog(), 32, std::f64::consts::PI, 1.0);
    assert!(s.is_err());
    let h = hedgehog_bump(0.35).build(Background::Cylinder, AnsatzProfiles::hedgehog(), 32, std::f64::consts::PI, 1.0).unwrap();
    let mut buf = Vec::new();
    write_snapshot(&mut buf, &h).unwrap();
    let text = String::from_utf8(buf).unwrap();
    // Break w = 1 on the axis.
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[2].split(',').map(String::from).collect();
    cells[1] = "0.5".into();
    lines[2] = cells.join(",");
    let broken = lines.join("\n") + "\n";
    assert!(matches!(read_snapshot(BufReader::new(broken.as_bytes())), Err(ymh::Error::Invariant(_))));
}

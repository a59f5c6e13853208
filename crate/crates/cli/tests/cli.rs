use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn cet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cet"))
        .args(args)
        .env_remove("CET_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn joint_entropy_anchor() {
    let out = stdout(&cet(&["entropy", "--method", "fcb", path(&data("example2_joint.json"))]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["method"], "fcb");
    assert!((v["bits"].as_f64().unwrap() - 2.8317).abs() < 1e-3);
}

#[test]
fn joint_command_matches_stored_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("joint.json");
    let o = cet(&[
        "joint",
        path(&data("example2_x.json")),
        path(&data("example2_y.json")),
        "-o",
        out.to_str().unwrap(),
    ]);
    stdout(&o);
    let stored = std::fs::read_to_string(data("example2_joint.json")).unwrap();
    assert_eq!(std::fs::read_to_string(out).unwrap(), stored);
}

#[test]
fn total_conflict_is_a_domain_error() {
    let o = cet(&["combine", path(&data("conflict_a.json")), path(&data("conflict_b.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TotalConflict"));
}

#[test]
fn cpbt_iterate_settles() {
    let out = stdout(&cet(&[
        "cpbt-iterate",
        "--p",
        "3",
        "--steps",
        "50",
        "--precision",
        "full",
        path(&data("example1.json")),
    ]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("step,focal,re,im,abs,com"));
    let rows: Vec<Vec<String>> = lines.map(split_csv).collect();
    assert_eq!(rows.len(), 150);
    assert_eq!(rows.iter().filter(|r| r[0] == "50").count(), 3);
    let com = |step: &str, focal: &str| -> f64 {
        rows.iter().find(|r| r[0] == step && r[1] == focal).unwrap()[5].parse().unwrap()
    };
    // the pair sheds 2/3 of itself per step; its singletons split the rest evenly
    let limit_x1 = (0.55f64.powi(2) + 0.05f64.powi(2)).sqrt();
    let limit_x2 = (0.45f64.powi(2) + 0.05f64.powi(2)).sqrt();
    let want = limit_x1 / (limit_x1 + limit_x2);
    for step in ["49", "50"] {
        assert!((com(step, "{x1}") - want).abs() < 1e-6);
        assert!(com(step, "{x1,x2}") < 1e-6);
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(line.as_bytes());
    r.records().next().unwrap().unwrap().iter().map(str::to_string).collect()
}

#[test]
fn emitted_cbbas_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, inputs) in [
        ("fcbba", vec!["example2_x.json"]),
        ("negate", vec!["example1.json"]),
        ("cpbt", vec!["example3_m2.json"]),
        ("combine", vec!["example2_x.json", "example2_x.json"]),
    ] {
        let first = dir.path().join(format!("{cmd}-1.json"));
        let mut args: Vec<String> = vec![cmd.into()];
        args.extend(inputs.iter().map(|i| path(&data(i)).to_string()));
        args.extend(["-o".into(), first.to_str().unwrap().into()]);
        stdout(&cet(&args.iter().map(String::as_str).collect::<Vec<_>>()));

        let text = std::fs::read_to_string(&first).unwrap();
        let doc = cet_core::io::CbbaDocument::from_json(&text).unwrap();
        let c: cet_core::Cbba64 = doc.to_cbba(Default::default()).unwrap();
        let again = cet_core::io::CbbaDocument::from_cbba(&c);
        let mut again = again;
        again.conflict = doc.conflict;
        assert_eq!(again.to_json() + "\n", text, "{cmd}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    let csv = data("breast_cancer.csv");
    let args = [
        "sweep",
        "--data",
        path(&csv),
        "--label",
        "diagnosis",
        "--ratios",
        "0.2,0.6",
        "--method",
        "fcb,complex-deng",
        "--seed",
        "7",
    ];
    let a = stdout(&cet(&args));
    assert_eq!(a, stdout(&cet(&args)));
    let rows: Vec<&str> = a.lines().collect();
    assert_eq!(rows[0], "ratio,method,accuracy,n_train,n_test");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("0.2,fcb,"));

    let o = cet(&["sweep", "--data", path(&csv), "--label", "diagnosis", "--method", "deng"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("InvalidConfig"));
}

#[test]
fn fusion_trace_accepts() {
    let out = stdout(&cet(&["fuse", path(&data("fusion_evidence.json"))]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["outcome"]["kind"], "accepted");
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["verdict"], "accepted");
    assert!(steps[..steps.len() - 1].iter().all(|s| s["verdict"] != "accepted"));

    let never = stdout(&cet(&["fuse", "--sigma", "1.01", path(&data("fusion_evidence.json"))]));
    let v: Value = serde_json::from_str(&never).unwrap();
    assert_eq!(v["outcome"]["kind"], "exhausted");
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"frame": ["a", "b"], "masses": [{"set": ["a"], "re": 0.7, "im": 0.0}]}"#).unwrap();
    let o = cet(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("SumViolation"));

    let o = Command::new(env!("CARGO_BIN_EXE_cet"))
        .args(["validate", bad.to_str().unwrap()])
        .env("CET_TOLERANCE", "0.5")
        .output()
        .unwrap();
    assert!(o.status.success());

    let o = cet(&["entropy", "--allow-invalid", bad.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["entropy"][..],
        &["frobnicate"],
        &["entropy", "--method", "nope", "x.json"],
        &["cpbt-iterate", "x.json", "--p", "fast"],
        &["combine", "x.json", "y.json", "--wat"],
    ] {
        let o = cet(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn slow_speed_is_rejected() {
    let o = cet(&["cpbt-iterate", "--p", "2", path(&data("example1.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("InvalidSpeed"));
}

#[test]
fn entropy_sweep_grid() {
    let out = stdout(&cet(&["entropy-sweep", "--steps", "5", "--method", "fcb,deng"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y,fcb,deng");
    assert_eq!(lines.len(), 26);
    assert!(lines.contains(&"1,0,1.58496,1.58496"));
}

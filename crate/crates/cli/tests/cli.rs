use std::fs;
use std::process::{Command, Output};

use hardy_lab::operators::{evaluate_section, Expr};
use hardy_lab::sections::read_csv;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = run(&[
            "verify",
            "all",
            "--window",
            "12",
            "--seed",
            "3",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 8);
}

#[test]
fn exit_codes_follow_suite_outcomes() {
    let ok = run(&["verify", "commutator", "--window", "8"]);
    assert_eq!(ok.status.code(), Some(0));
    // Forcing exact arithmetic skips the irrational symbol, so the suite fails.
    let forced = run(&["verify", "decomposition", "--window", "8", "--exact"]);
    assert_eq!(forced.status.code(), Some(1));
    let unknown = run(&["verify", "no_such_suite"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn op_build_csv_round_trips() {
    let expr = r#"{"compose":[{"op":"volterra","symbol":"cesaro"},{"op":"shift","n":2}]}"#;
    let o = run(&["op", "build", "--expr", expr, "--window", "7"]);
    assert!(o.status.success());
    let got = read_csv(&stdout(&o), 7, 7).unwrap();
    let e: Expr = serde_json::from_str(expr).unwrap();
    let want = evaluate_section::<f64>(&e, 7, 7, None).unwrap();
    assert_eq!(got.entries(), want.entries());
}

#[test]
fn exact_build_prints_rationals() {
    let o = run(&[
        "op",
        "build",
        "--expr",
        r#"{"op":"sg","symbol":"one_plus_half_z"}"#,
        "--window",
        "3",
        "--exact",
    ]);
    assert_eq!(stdout(&o), "m,l,re,im\n1,1,1,0\n2,1,1/4,0\n2,2,1,0\n");
}

#[test]
fn config_file_supplies_the_expression() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let csv = dir.path().join("m.csv");
    let out = dir.path().join("m.json");
    fs::write(
        &cfg,
        r#"{"expression":{"op":"moment_hankel","measure":"lebesgue"},"window":4}"#,
    )
    .unwrap();
    let o = run(&[
        "op",
        "build",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = read_csv(&fs::read_to_string(&csv).unwrap(), 4, 4).unwrap();
    assert_eq!(m.get(3, 3).re, 1.0 / 7.0);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(summary["certified_entries"], 16);
}

#[test]
fn op_apply_integrates_exactly() {
    let o = run(&[
        "op",
        "apply",
        "--expr",
        r#"{"op":"volterra","symbol":"z2"}"#,
        "--vector",
        r#"[1, 0, "1/2"]"#,
        "--window",
        "6",
        "--exact",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // ∫ (1 + u²/2)·2u du = z² + z⁴/4
    assert_eq!(
        v["image"],
        serde_json::json!(["0", "0", "1", "0", "1/4", "0"])
    );
}

#[test]
fn asym_writes_metrics_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("asym.csv");
    let o = run(&[
        "asym",
        "toeplitz",
        "--expr",
        r#"{"op":"sg","symbol":"one_plus_half_z"}"#,
        "--candidate",
        r#"{"op":"mult","symbol":"one_plus_half_z"}"#,
        "--n-grid",
        "4:32:x2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,uniform,strong,weak\n4,"));
    assert_eq!(text.lines().count(), 5);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], "converges_uniform");
}

#[test]
fn ess_defect_of_volterra_is_the_product() {
    let o = run(&[
        "ess",
        "defect",
        "--expr",
        r#"{"op":"volterra","symbol":"z"}"#,
        "--kind",
        "left_commutator",
        "--window",
        "5",
        "--exact",
    ]);
    // S V_z − V_z S = V_z V_z, whose entry (l+2, l) is 1/((l+1)(l+2)).
    assert_eq!(stdout(&o), "m,l,re,im\n2,0,1/2,0\n3,1,1/6,0\n4,2,1/12,0\n");
}

#[test]
fn classify_without_probes_is_theorem_only() {
    let o = run(&[
        "ess",
        "classify",
        "--symbol",
        "cesaro",
        "--family",
        "volterra",
        "--no-numeric",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["UAT"]["value"], false);
    assert_eq!(v["essHank"]["provenance"], "theorem");
}

#[test]
fn scenario_exit_code_and_bundle() {
    let o = run(&["scenario", "sg-polynomial", "--window", "64"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!(
        v["classification"]["lower_bound"]["min_norm"]
            .as_f64()
            .unwrap()
            >= 0.98
    );
    assert_eq!(run(&["scenario", "nope"]).status.code(), Some(2));
}

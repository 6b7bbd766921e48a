use std::path::Path;
use std::process::{Command, Output};

fn cas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cas")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_writes_obj_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("ex1");
    let out = cas(&[
        "generate",
        "--theta",
        "0.7853981633974483",
        "--alpha",
        "const:1",
        "--nu",
        "5",
        "--nv",
        "9",
        "--out",
        s(&stem),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("ex1.obj") && stdout.contains("ex1.csv"), "{stdout}");

    let obj = std::fs::read_to_string(stem.with_extension("obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 45);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 4 * 8);
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("u,v,x1,x2,x3,angle,K,H"), "{header}");
    assert_eq!(lines.count(), 45);
}

#[test]
fn product_space_mesh_is_projected_for_obj_only() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("h");
    let out = cas(&["generate", "--space", "h2r", "--theta", "0.5", "--nu", "4", "--nv", "6", "--out", s(&stem)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let obj = std::fs::read_to_string(stem.with_extension("obj")).unwrap();
    let v = obj.lines().find(|l| l.starts_with("v ")).unwrap();
    assert_eq!(v.split_whitespace().count(), 4, "{v}");
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "u,v,x1,x2,x3,t,angle,K");
}

#[test]
fn verify_prints_a_passing_report() {
    let out = cas(&["verify", "--theta", "1.0", "--alpha", "cos", "--nu", "16", "--nv", "32"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    for name in [
        "constant_angle",
        "structural_r_vv",
        "ode_lambda_u",
        "lambda_recovery",
        "gauss_curvature",
        "oracle_jet_agreement",
    ] {
        assert!(names.contains(&name), "{name} missing from {names:?}");
    }
}

#[test]
fn verify_failure_exits_one_and_writes_csv_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv");
    let out = cas(&[
        "verify",
        "--theta",
        "0.8",
        "--alpha",
        "linear",
        "--perturb",
        "0.01",
        "--nu",
        "8",
        "--nv",
        "16",
        "--report",
        s(&report),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("name,max_residual,tol,pass,n_samples,worst_u,worst_v,error\n"), "{csv}");
    assert!(csv.lines().any(|l| l.starts_with("constant_angle,") && l.contains(",false,")), "{csv}");
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"space": "s2r", "theta": 0.3, "nu": 6, "nv": 10, "curve": "small:0.8"}"#).unwrap();
    let out = cas(&["verify", "--config", s(&cfg), "--theta", "1.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["chart"]["theta"], 1.2);
    assert_eq!(report["chart"]["space"], "s2r");
    assert_eq!(report["chart"]["grid"]["nu"], 6);
}

#[test]
fn errors_are_single_lines_with_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("m");
    let cases: [(&[&str], i32, &str); 4] = [
        (&["verify", "--theta", "-0.1"], 2, "error: theta: "),
        (&["verify", "--theta", "0.8", "--alpha", "spiral"], 2, "error: alpha: "),
        (&["verify", "--theta", "0.8", "--nu", "1"], 2, "error: "),
        (
            &["generate", "--theta", "0.8", "--u-range", "-1.5:-1.4999", "--alpha", "const:1.5", "--out", s(&stem)],
            3,
            "error: grid: ",
        ),
    ];
    for (args, code, prefix) in cases {
        let out = cas(args);
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(out.status.code(), Some(code), "{args:?}: {err}");
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
}

#[test]
fn single_example_on_a_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = cas(&["examples", "3", "--out-dir", s(dir.path()), "--nu", "8", "--nv", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["ex3.obj", "ex3.csv", "examples_report.json"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("examples_report.json")).unwrap()).unwrap();
    assert_eq!(report["examples"][0]["example"], 3);
    assert_eq!(report["pass"], true);
    assert_eq!(cas(&["examples", "7"]).status.code(), Some(2));
}

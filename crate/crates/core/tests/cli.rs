use std::path::Path;
use std::process::{Command, Output};

fn grt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grt")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn generate_writes_obj_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.obj");
    let out = grt(&["generate", "--f", "z", "--g", "z", "--ell", "t^2+t+1", "--u1", "-1:1", "--u2", "-1:1", "--n", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("vertices: 256 (256 valid)"));
    assert!(text.contains("faces: 450"));
    assert!(text.contains("regular: 100.00%"));
    assert!(text.contains("min |det V|"));
    let obj = std::fs::read_to_string(&path).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 256);
    assert_eq!(obj.lines().filter(|l| l.starts_with("vn ")).count(), 256);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 450);
}

#[test]
fn golden_obj_is_reproduced_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.obj");
    let out = grt(&["generate", "--preset", "fig1", "--n", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig1_8x8.obj");
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(golden).unwrap());
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["generate", "--preset", "fig2", "--n", "12", "--format", "ply"][..],
        &["generate", "--f", "z^2", "--g", "exp(z)", "--ell", "t^2+1", "--n", "9", "--format", "json"],
        &["rotate", "--a", "2", "--b", "-1", "--ell", "sinh(t)", "--n", "10"],
        &["verify", "--preset", "fig1", "--n", "12"],
    ] {
        let (a, b) = (grt(args), grt(args));
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn singular_point_gives_one_invalid_vertex() {
    let out = grt(&["generate", "--f", "z", "--g", "z^2", "--ell", "t^2+t+1", "--u1", "-1:1", "--u2", "-1:1", "--n", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("vertices: 25 (24 valid)"));
    let obj = stdout(&out);
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 24);
}

#[test]
fn parse_errors_exit_2_with_offset() {
    let out = grt(&["generate", "--f", "2*+z", "--g", "z", "--ell", "t"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("byte 2"), "{err}");
    assert!(err.contains("    ^"), "{err}");

    let out = grt(&["verify", "--f", "2*+z", "--g", "z", "--ell", "t^2+t+1"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty(), "no report on parse failure");

    assert_eq!(code(&grt(&["info", "--ell", "t + i"])), 2);
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        &["generate", "--f", "z", "--g", "z"][..],
        &["generate", "--preset", "fig1", "--ell", "t"],
        &["generate", "--preset", "fig9"],
        &["generate", "--preset", "fig1", "--u1", "1:-1"],
        &["generate", "--preset", "fig1", "--n", "1"],
        &["rotate", "--a", "1", "--ell", "t"],
        &["rotate", "--a", "1", "--b", "0", "--ell", "t", "--f", "z"],
        &["rotate", "--preset", "fig1"],
        &["verify", "--preset", "fig1", "--checks", "nonsense"],
        &["frobnicate"],
    ] {
        assert_eq!(code(&grt(args)), 2, "{args:?}");
    }
}

#[test]
fn empty_mesh_exits_3() {
    let out = grt(&["generate", "--f", "z", "--g", "1", "--ell", "t", "--n", "4"]);
    assert_eq!(code(&out), 3);
    assert_eq!(code(&grt(&["verify", "--f", "z", "--g", "1", "--ell", "t", "--n", "4"])), 3);
}

#[test]
fn io_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing/dir/x.obj");
    let out = grt(&["generate", "--preset", "fig1", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 4);
}

#[test]
fn verify_reports_json_and_exit_status() {
    let out = grt(&["verify", "--f", "z", "--g", "z", "--ell", "t"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let checks = report["checks"].as_array().unwrap();
    let relation = checks.iter().find(|c| c["name"] == "weingarten_relation").unwrap();
    assert!(relation["note"].as_str().unwrap().contains("Appell"));
    for c in checks {
        assert!(c["count"].as_u64().unwrap() > 0);
        assert!(c["worst_point"].as_array().unwrap().len() == 2);
    }

    // An impossible tolerance turns the same run into a verification failure.
    let out = grt(&["verify", "--f", "z", "--g", "z", "--ell", "t", "--n", "16", "--tol-fd", "1e-15"]);
    assert_eq!(code(&out), 5);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn verify_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = grt(&["verify", "--preset", "fig3", "--n", "12", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["spec"]["rotation"], serde_json::json!([1.0, 0.0]));
    assert!(report["checks"].as_array().unwrap().iter().any(|c| c["name"] == "rotation_match"));
    assert!(stdout(&out).contains("rotation_match"));
}

#[test]
fn rotate_reports_the_sphere() {
    let out = grt(&["rotate", "--a", "0", "--b", "1", "--ell", "t^2+t+1", "--n", "16", "--cross-check", "--out", "/dev/null"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("sphere of radius |ell(b)| = 3"), "{text}");
    assert!(text.contains("cross-check"));
    assert!(text.contains("pass"));
}

#[test]
fn rotate_presets_and_negative_constants() {
    for args in [
        &["rotate", "--preset", "fig3", "--n", "8"][..],
        &["rotate", "--preset", "fig6", "--n", "8"],
        &["rotate", "--a", "2", "--b", "-1", "--ell", "cos(t)", "--n", "8", "--cross-check"],
    ] {
        let out = grt(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).contains("sphere"));
    }
}

#[test]
fn info_labels_special_profiles() {
    let out = grt(&["info", "--ell", "t"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("ell'(t)  = 1"));
    assert!(text.contains("label: Appell"));

    let text = stdout(&grt(&["info", "--ell", "exp(t)"]));
    assert!(text.contains("label: TR-surface"), "{text}");

    let out = grt(&["info", "--ell", "t^2", "--mu", "0.5:3", "--json"]);
    let info: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(info["c_constant"], true);
    assert!((info["c_min"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(info.get("label").is_none());
    assert_eq!(info["ell_prime"], "2*t");

    let text = stdout(&grt(&["info", "--ell", "t^2+t+1", "--f", "z"]));
    assert!(text.contains("C is not constant"));
}

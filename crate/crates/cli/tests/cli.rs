use std::path::Path;
use std::process::{Command, Output};

fn blochosc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochosc")).args(args).current_dir(dir).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const LARMOR: &str = r#"
[[scenario]]
name = "larmor"
methods = ["direct", "invariant", "closed-form"]
field = { kind = "constant", b0 = [1.0, 0.0, 0.0] }
time = { t0 = 0.0, t1 = 1.0, dt = 1e-3 }
output = { path = "lm", stride = 10 }
"#;

#[test]
fn simulate_writes_one_csv_per_method_with_stride() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", LARMOR);
    let out = blochosc(&["simulate", "--config", "s.toml", "--out", "res"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for m in ["direct", "invariant", "closed-form"] {
        let text = std::fs::read_to_string(dir.path().join(format!("res/lm_{m}.csv"))).unwrap();
        // 1001 nodes, every 10th kept: 101 rows plus the header
        assert_eq!(text.lines().count(), 102, "{m}");
        let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(last[0], 1.0);
    }
    let inv = std::fs::read_to_string(dir.path().join("res/lm_invariant.csv")).unwrap();
    assert!(inv.starts_with("t,Mx,My,Mz,Mix,Miy,Miz,bloch_residual,norm_sq\n"));
}

#[test]
fn overrides_change_the_grid() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", LARMOR);
    let out = blochosc(&["simulate", "--config", "s.toml", "--out", "o", "--dt", "0.01", "--t-end", "2"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("o/lm_direct.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 21);
}

#[test]
fn degenerate_field_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = LARMOR.replace("[1.0, 0.0, 0.0]", "[0.0, 0.0, 1.0]").replace("\"direct\", \"invariant\", \"closed-form\"", "\"invariant\"");
    write(dir.path(), "s.toml", &cfg);
    let out = blochosc(&["simulate", "--config", "s.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("B+ = 0") && err.contains("t = 0"), "{err}");
}

#[test]
fn config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "typo.toml", &LARMOR.replace("stride", "strides"));
    let out = blochosc(&["simulate", "--config", "typo.toml"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("strides") && err.contains("line"), "{err}");

    write(dir.path(), "single.toml", &LARMOR.replace("\"direct\", \"invariant\", \"closed-form\"", "\"direct\""));
    let out = blochosc(&["compare", "--config", "single.toml"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least two methods"));

    let out = blochosc(&["simulate"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    let out = blochosc(&["simulate", "--config", "missing.toml"], dir.path());
    assert_eq!(out.status.code(), Some(3));

    write(dir.path(), "s.toml", LARMOR);
    let out = blochosc(&["simulate", "--config", "s.toml", "--dt", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));

    let out = blochosc(&["simulate", "--no-such-flag"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let out = blochosc(&["--help"], dir.path());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compare_writes_sorted_reports() {
    let dir = tempfile::tempdir().unwrap();
    let two = format!(
        "{LARMOR}\n{}",
        LARMOR.replace("\"larmor\"", "\"alpha\"").replace("\"lm\"", "\"al\"")
    );
    write(dir.path(), "s.toml", &two);
    let out = blochosc(&["compare", "--config", "s.toml", "--out", "r"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/compare_report.json")).unwrap()).unwrap();
    assert_eq!(json[0]["scenario"], "alpha");
    assert_eq!(json[1]["scenario"], "larmor");
    assert_eq!(json[0]["pass"], true);
    let txt = std::fs::read_to_string(dir.path().join("r/compare_report.txt")).unwrap();
    assert!(txt.find("scenario alpha").unwrap() < txt.find("scenario larmor").unwrap());
}

#[test]
fn algebra_check_and_verify_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = blochosc(&["algebra-check"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS  [K1, K2] = -i K3"));
    assert!(!text.contains("FAIL"));

    let out = blochosc(&["verify", "--out", "v"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(dir.path().join("v/compare_report.json").exists());
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "s.toml", &LARMOR.replace("\"direct\"", "\"direct\", \"riccati\""));
    for out in ["a", "b"] {
        assert!(blochosc(&["simulate", "--config", "s.toml", "--out", out], dir.path()).status.success());
    }
    for m in ["direct", "invariant", "riccati", "closed-form"] {
        let a = std::fs::read(dir.path().join(format!("a/lm_{m}.csv"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b/lm_{m}.csv"))).unwrap();
        assert_eq!(a, b, "{m}");
    }
}

use std::path::Path;
use std::process::{Command, Output};

fn prad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prad"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn report(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn passing_campaign_exits_zero_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fb.json");
    let o = prad(&["verify-fb", "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rep = report(&out);
    assert_eq!(rep["kind"], "fb");
    assert_eq!(rep["checks"].as_array().unwrap().len(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 pass"));
}

#[test]
fn report_goes_to_stdout_without_out() {
    let o = prad(&["verify-specfun"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rep["campaign"], "specfun");
}

#[test]
fn csv_format() {
    let o = prad(&["verify-fb", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("row,id,"));
    assert_eq!(text.lines().filter(|l| l.starts_with("check,")).count(), 3);
}

#[test]
fn indeterminate_campaign_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "steep.json",
        r#"{"name":"steep","kind":"integral-table","config":{"class":"A3","m":8}}"#,
    );
    let o = prad(&["verify-integrals", "--config", &cfg]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("Indeterminate"));
}

#[test]
fn failing_campaign_exits_one() {
    // A tolerance no Floquet-Bloch round trip can meet.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "strict.json",
        r#"{"name":"strict","kind":"fb","tolerances":{"fb":1e-30}}"#,
    );
    let o = prad(&["verify-fb", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Fail fb/"));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "fb.json", r#"{"name":"x","kind":"fb"}"#);
    let o = prad(&["verify-specfun", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("describes a fb campaign"));

    assert_eq!(prad(&["all", "--config", &cfg]).status.code(), Some(1));
    assert_eq!(prad(&["verify-fb", "--r-min", "10"]).status.code(), Some(1));
    assert_eq!(
        prad(&["verify-kernels", "--r-min", "100", "--r-max", "500"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        prad(&["verify-fb", "--config", "/nonexistent/x.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(prad(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(prad(&["--help"]).status.code(), Some(0));
}

#[test]
fn seed_is_recorded_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = prad(&["verify-fb", "--seed", "42", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let mut rep = report(&out);
        assert_eq!(rep["environment"]["seed"], 42);
        rep["environment"]["timestamp"] = 0.into();
        rep
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn r_grid_override_reaches_the_report() {
    let o = prad(&[
        "verify-kernels",
        "--r-min",
        "100",
        "--r-max",
        "10000",
        "--r-points",
        "5",
        "--jobs",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rep: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = rep["environment"]["r_grid"].as_array().unwrap();
    assert_eq!(r.len(), 5);
    assert_eq!(r[0], 100.0);
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qso")).args(args).env_remove("QSO_PRECISION").output().expect("run qso")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn irreps_lists_dimensions() {
    let o = qso(&["irreps", "--n", "4", "--max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("(1,0): 4"));
    assert!(s.contains("(1/2,-1/2): 2"));
    assert_eq!(s.lines().count(), 6);
}

#[test]
fn irreps_json_and_patterns() {
    let o = qso(&["irreps", "--n", "5", "--max", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dims: Vec<u64> = v.as_array().unwrap().iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert!(dims.contains(&10) && dims.contains(&5) && dims.contains(&1));

    let o = qso(&["irreps", "--n", "3", "--max", "1", "--patterns"]);
    assert!(stdout(&o).contains("2: -1"));
}

#[test]
fn casimir_prints_body_and_normal_form() {
    let o = qso(&["casimir", "--n", "3", "--order", "2", "--normal-form"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("u^-2 I+(2,1)^2 + I+(3,1) I-(3,1) + u^2 I+(3,2)^2"));
    assert!(s.contains("normal form:"));

    let o = qso(&["casimir", "--n", "4", "--top", "-"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["casimir", "--n", "3", "--top", "+"][..],
        &["casimir", "--n", "4", "--order", "3"],
        &["verify", "--n", "3", "--weights", "1,2"],
        &["verify", "--n", "4", "--weights", "1,-2"],
        &["verify", "--n", "3", "--weights", "1", "--q", "-1"],
        &["spectrum", "--n", "1"],
        &["normalize", "I(3,1"],
        &["frobnicate"],
    ] {
        assert_eq!(qso(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn normalize_argument_and_stdin() {
    let o = qso(&["normalize", "I(2,1) I(3,2)"]);
    assert_eq!(stdout(&o).trim(), "I+(2,1) I+(3,2)");

    let mut child = Command::new(env!("CARGO_BIN_EXE_qso"))
        .args(["normalize", "--n", "3"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"I(3,2) I(2,1)\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("I+(2,1) I+(3,2)") && s.contains("I+(3,1)"), "{s}");
}

#[test]
fn verify_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = qso(&[
        "verify",
        "--n",
        "4",
        "--weights",
        "1,-1;1/2,1/2",
        "--q",
        "1.2,0.85",
        "--jobs",
        "2",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["verdict"]["pass"], true);
    assert_eq!(v["job"]["weights"].as_array().unwrap().len(), 2);
    assert!(!v["relations"].as_array().unwrap().is_empty());
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 2 * 2 * 4);
}

#[test]
fn verify_symbolic_text() {
    let o = qso(&["verify", "--n", "3", "--weights", "1", "--q", "1.2", "--symbolic"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));
}

#[test]
fn spectrum_csv_columns_and_precision() {
    let o = qso(&["spectrum", "--n", "3", "--weights", "1", "--q", "1.2", "--format", "csv", "--precision", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,weights,casimir,q0,chi_exact,chi_numeric_re,chi_numeric_im,measured_re,measured_im,rel_err"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("3,(1),C(2),1.2,"), "{row}");
    // chi = -(q + 1/q) at q0 = 1.2
    assert!(row.contains("-2.033e0"), "{row}");

    let o = Command::new(env!("CARGO_BIN_EXE_qso"))
        .args(["spectrum", "--n", "3", "--weights", "1", "--q", "1.2", "--format", "csv"])
        .env("QSO_PRECISION", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).contains("-2.03e0"));
}

#[test]
fn casimir_output_reparses() {
    for args in [&["casimir", "--n", "5", "--order", "4"][..], &["casimir", "--n", "6", "--top", "+"]] {
        let o = qso(args);
        let text = stdout(&o);
        let p: qso::pbw::NCPoly = text.trim().parse().unwrap();
        assert_eq!(p.to_string(), text.trim());
    }
}

#[test]
fn report_is_identical_across_worker_counts() {
    let run = |jobs: &str| {
        stdout(&qso(&["verify", "--n", "5", "--max", "1", "--q", "1.2,2", "--jobs", jobs, "--format", "json"]))
    };
    let one = run("1");
    assert!(one.contains("\"pass\": true"));
    assert_eq!(one, run("4"));
}

#[test]
fn help_documents_flags() {
    let o = qso(&["verify", "--help"]);
    let s = stdout(&o);
    for flag in [
        "--weights",
        "--max",
        "--q",
        "--order",
        "--top",
        "--jobs",
        "--symbolic",
        "--seed",
        "--precision",
        "--format",
        "--output",
    ] {
        assert!(s.contains(flag), "{flag}");
    }
    assert!(s.contains("QSO_PRECISION"));
}

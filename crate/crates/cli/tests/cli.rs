use std::path::Path;
use std::process::{Command, Output};

fn qdescent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdescent")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn paper_example_has_no_descent() {
    let o = qdescent(&["--json", "paper-example", "--lambda", "t", "--delta", "t^3"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["cor_splits"], true);
    assert_eq!(v["report"]["phi_descends"], true);
    assert_eq!(v["report"]["s_constants"], serde_json::json!(["1", "t"]));
    assert_eq!(v["report"]["verdict"]["obstruction"]["kind"], "square_class");
    assert_eq!(v["report"]["verdict"]["obstruction"]["residual"], "t+1");
}

#[test]
fn paper_example_from_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.scn", "field q=2 sep delta=t^3\npaper-example --lambda t\n");
    assert_eq!(code(&qdescent(&["run", &f])), 1);
}

#[test]
fn roundtrip_descent_certificate_verifies_in_fresh_process() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.scn", "field q=2 sep delta=t^3\nquat a=1 + (t^2+t)*eta b=t\ndescend\n");
    let cert = dir.path().join("c.json");
    let o = qdescent(&["run", &f, "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = qdescent(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("verified: true"));

    let report = dir.path().join("r.json");
    let o = qdescent(&["--json", "descend", "--sep", &f]);
    std::fs::write(&report, o.stdout).unwrap();
    assert_eq!(code(&qdescent(&["verify-cert", report.to_str().unwrap()])), 0);
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.scn", "field q=2 sep delta=t^3\nquat a=1 + (t^2+t)*eta b=t\ndescend\n");
    let cert = dir.path().join("c.json");
    assert_eq!(code(&qdescent(&["run", &f, "--cert-out", cert.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&cert).unwrap().replace("\"t^5+1\"", "\"t^5\"");
    std::fs::write(&cert, text).unwrap();
    let o = qdescent(&["verify-cert", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let junk = write(dir.path(), "j.json", "{not json");
    assert_eq!(code(&qdescent(&["verify-cert", &junk])), 3);
}

#[test]
fn inseparable_descent_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.scn", "field q=2 insep\nquat a=s^3 b=s^2\nquat a=s b=s^2+1\n");
    let cert = dir.path().join("c.json");
    assert_eq!(code(&qdescent(&["descend", "--insep", &f, "--cert-out", cert.to_str().unwrap()])), 0);
    assert_eq!(code(&qdescent(&["verify-cert", cert.to_str().unwrap()])), 0);
    assert_eq!(code(&qdescent(&["descend", "--sep", &f])), 3);
    let g = write(dir.path(), "n.scn", "field q=2 insep\nquat a=s b=s\n");
    assert_eq!(code(&qdescent(&["descend", &g])), 1);
}

#[test]
fn exhausted_bound_is_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.scn", "field q=2 sep delta=t^3\nquat a=(t^3+t^2)*eta b=t+1\ndescend\n");
    let o = qdescent(&["--height-bound", "0", "run", &f]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("quaternion witness"));
    assert_eq!(code(&qdescent(&["run", &f])), 0);
}

#[test]
fn syntax_error_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.scn", "field q=2\nquat a= b=t\nsplit\n");
    let o = qdescent(&["run", &f]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 2, column 8"), "{}", stderr(&o));
}

#[test]
fn delta_in_wp_is_a_semantic_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.scn", "field q=2 sep delta=t^2+t\nquat a=1 b=t\ndescend\n");
    let o = qdescent(&["run", &f]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("semantic error at line 1"), "{}", stderr(&o));
    assert!(stderr(&o).contains("delta in wp(F)"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&qdescent(&["frobnicate"])), 3);
    assert_eq!(code(&qdescent(&["run", "/nonexistent/file.scn"])), 3);
    assert_eq!(code(&qdescent(&["paper-example", "--lambda", "t^2", "--delta", "t^3"])), 3);
    assert_eq!(code(&qdescent(&["paper-example", "--lambda", "t", "--delta", "t", "--q", "3"])), 3);
}

#[test]
fn symbol_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s.scn", "field q=2\nquat a=t b=t+1\nsplit\n");
    let o = qdescent(&["--json", "run", &f]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["symbols"][0]["invariants"], serde_json::json!(["t+1#0", "inf#0"]));
    assert_eq!(v["symbols"][0]["support"], serde_json::json!(["t+1#0", "inf#0"]));

    let f = write(dir.path(), "i.scn", "field q=2\nquat a=t b=t+1\nquat a=t^2 b=t+1\niso\n");
    assert_eq!(code(&qdescent(&["run", &f])), 0);
    let f = write(dir.path(), "c.scn", "field q=2 sep delta=t^3\nquat a=t + eta b=t\ncor\n");
    assert_eq!(code(&qdescent(&["run", &f])), 1);
}

#[test]
fn form_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.scn", "field q=2\npfister t, t+1\npfister t^3, t+1\npf\n");
    let o = qdescent(&["--json", "run", &f]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["isometric"], "yes");
    assert_eq!(v["forms"][0]["qset_dim"], 2);
    let f = write(dir.path(), "w.scn", "field q=2\npfister t\niwitt\n");
    let v: serde_json::Value = serde_json::from_str(&stdout(&qdescent(&["--json", "run", &f]))).unwrap();
    assert_eq!(v["forms"][0]["index"], 0);
    let f = write(dir.path(), "phi.scn", "field q=2 insep\nquat a=s^3 b=s^2\nquat a=s b=s^2+1\nphi\n");
    let v: serde_json::Value = serde_json::from_str(&stdout(&qdescent(&["--json", "run", &f]))).unwrap();
    assert_eq!(v["dim"], 4);
    assert_eq!(v["is_field"], false);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "d.scn",
        "field q=4 sep delta=t^3\nquat a=1 + (t^2+t)*eta b=t\nquat a=t b=t^2+1\ndescend\n",
    );
    let first = qdescent(&["--json", "run", &f]);
    for seed in ["1", "99"] {
        let again = qdescent(&["--json", "--seed", seed, "run", &f]);
        assert_eq!(again.stdout, first.stdout);
        assert_eq!(code(&again), code(&first));
    }
}

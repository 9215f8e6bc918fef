//! End-to-end tests of the binary: byte-exact outputs, exit codes, and
//! determinism across runs.

use std::io::Write;
use std::process::{Command, Output};

fn czv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_czv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn zeta_golden_values() {
    let out = czv(&["zeta", "--cone", "chen:2", "--colour", "0,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "3/8\n");

    let out = czv(&["zeta", "--cone", "chen:1", "--colour", "0"]);
    assert_eq!(stdout(&out), "-1/2\n");

    let out = czv(&["zeta", "--cone", "chen:1", "--colour=-1"]);
    assert_eq!(stdout(&out), "-1/12\n");
}

#[test]
fn univariate_scheme_agrees_with_multivariate() {
    let multi = czv(&["zeta", "--cone", "chen:2", "--colour", "0,0"]);
    for direction in ["-2,-1", "-3,-1", "-5,-2", "-7,-3", "-4,-1"] {
        let uni = czv(&[
            "zeta",
            "--cone",
            "chen:2",
            "--colour",
            "0,0",
            "--scheme",
            "univariate",
            &format!("--direction={direction}"),
        ]);
        assert!(uni.status.success(), "direction {direction}");
        assert_eq!(stdout(&uni), stdout(&multi), "direction {direction}");
    }
}

#[test]
fn mzv_values() {
    let out = czv(&["mzv", "0,0"]);
    assert_eq!(stdout(&out), "3/8\n");
    let out = czv(&["mzv", "--", "-1"]);
    assert_eq!(stdout(&out), "-1/12\n");
    let out = czv(&["mzv", "--json", "0"]);
    assert_eq!(stdout(&out), "{\"arguments\":[0],\"value\":\"-1/2\"}\n");
}

#[test]
fn germ_and_integral_render_exactly() {
    let out = czv(&["germ", "--cone", "chen:1", "--order", "3"]);
    assert_eq!(
        stdout(&out),
        "(-1/2 + -1/12*\u{3b5}1 + 1/720*\u{3b5}1^3) + (-1)/(\u{3b5}1)\n"
    );
    let out = czv(&["integral", "--cone", "{\"generators\":[[\"1\",\"0\"],[\"1\",\"2\"]]}"]);
    assert_eq!(stdout(&out), "(2)/(\u{3b5}1)(\u{3b5}1+2\u{3b5}2)\n");
}

#[test]
fn cone_file_source() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"generators\":[[\"1\",\"0\"],[\"1\",\"2\"]]}}").unwrap();
    let path = f.path().to_str().unwrap();
    let out = czv(&["integral", "--cone", path]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "(2)/(\u{3b5}1)(\u{3b5}1+2\u{3b5}2)\n");
}

#[test]
fn reduced_coproduct_of_chen2_lists_both_terms() {
    let out = czv(&["coproduct", "--cone", "chen:2", "--reduced", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(terms.iter().all(|t| t["coeff"] == "1"));
}

#[test]
fn subdivision_piece_count_matches_index() {
    let out = czv(&[
        "subdivide",
        "--cone",
        "{\"generators\":[[\"1\",\"0\"],[\"1\",\"5\"]]}",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pieces"].as_array().unwrap().len(), 5);
}

#[test]
fn transverse_cone_halves_the_lattice() {
    let out = czv(&[
        "transverse",
        "--cone",
        "chen:2",
        "--face",
        "{\"generators\":[[\"1\",\"1\"]]}",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["generators"][0][0], "1/2");
    assert_eq!(v["generators"][0][1], "-1/2");
}

#[test]
fn check_suite_reports_json() {
    let out = czv(&["check", "--suite", "golden", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports[0]["suite"], "golden");
    for case in reports[0]["cases"].as_array().unwrap() {
        assert_eq!(case["pass"], true, "{case}");
        assert!(case["input"].is_string());
        assert!(case["got"].is_string());
    }
}

#[test]
fn compare_schemes_passes_on_chen2() {
    let out = czv(&["compare", "--cone", "chen:2", "--direction=-2,-1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("PASS"));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = ["germ", "--cone", "chen:2", "--order", "4", "--json"];
    let a = czv(&args);
    let b = czv(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn exit_codes_by_failure_class() {
    // invalid input
    let out = czv(&["zeta", "--cone", "chen:0", "--colour", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = czv(&["zeta", "--cone", "{\"generators\":[[bad", "--colour", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = czv(&["mzv", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // unsupported cone: a full line is not strongly convex
    let out = czv(&["germ", "--cone", "{\"generators\":[[\"1\"],[\"-1\"]]}"]);
    assert_eq!(out.status.code(), Some(3));
    // invalid direction for the Chen family
    let out = czv(&[
        "zeta",
        "--cone",
        "chen:2",
        "--colour",
        "0,0",
        "--scheme",
        "univariate",
        "--direction=-1,-2",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // a direction a form vanishes on
    let out = czv(&[
        "germ",
        "--cone",
        "chen:1",
        "--colour",
        "0",
    ]);
    assert!(out.status.success());
    // errors go to stderr, nothing to stdout
    let out = czv(&["zeta", "--cone", "chen:0", "--colour", "0"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn closed_pipe_is_benign() {
    use std::io::Read;
    use std::process::Stdio;

    // Drop the read end before the child finishes computing, so its write
    // lands on a closed pipe. The suite takes long enough that the child is
    // still working when the reader goes away.
    let mut child = Command::new(env!("CARGO_BIN_EXE_czv"))
        .args(["check", "--suite", "golden", "--json"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    drop(child.stdout.take());
    let status = child.wait().expect("child exits");
    let mut err = String::new();
    child
        .stderr
        .take()
        .expect("stderr piped")
        .read_to_string(&mut err)
        .expect("utf-8 stderr");
    assert!(status.success(), "stderr: {err}");
    assert!(err.is_empty(), "stderr: {err}");
}

use std::fs;
use std::path::Path;

use rainbow_cycles::cli::run;
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn rbc(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["rbc"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

const PENTAGON: &str = "5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
const K24: &str = "6\n0 2\n0 3\n0 4\n0 5\n1 2\n1 3\n1 4\n1 5\n";
const GLUED: &str = "8\n0 1\n1 2\n2 3\n3 4\n4 0\n0 5\n5 6\n6 7\n7 1\n";

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn density_of_a_pentagon() {
    let o = rbc(&["density", "--input", "-"], PENTAGON);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(json(&o.stdout)["value"], "1/1");
}

#[test]
fn m2_of_a_pentagon() {
    let o = rbc(&["m2", "--input", "-"], PENTAGON);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o.stdout)["value"], "4/3");
}

#[test]
fn cycles_in_json_and_csv() {
    let o = rbc(&["cycles", "--input", "-", "--ell", "4"], K24);
    assert_eq!(json(&o.stdout)["count"], 6);
    let o = rbc(
        &["cycles", "--input", "-", "--ell", "5", "--format", "csv"],
        PENTAGON,
    );
    assert_eq!(o.stdout, "cycle\n0 1 2 3 4\n");
}

#[test]
fn components_listing() {
    let o = rbc(&["components", "--input", "-", "--ell", "5"], GLUED);
    assert_eq!(o.code, 0);
    let v = json(&o.stdout);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["member_cycles"].as_array().unwrap().len(), 2);
}

#[test]
fn force_check_on_k24() {
    let o = rbc(&["force-check", "--input", "-", "--ell", "4"], K24);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o.stdout), json(r#"{"forces_rainbow": true}"#));
}

#[test]
fn colour_then_verify_round_trip() {
    let o = rbc(&["colour", "--input", "-", "--ell", "5"], GLUED);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let cert = json(&o.stdout);
    assert_eq!(cert["proper"], true);
    assert_eq!(cert["rainbow"], Value::Null);
    let v = rbc(&["verify", "--input", "-"], &o.stdout);
    assert_eq!(v.code, 0, "{}", v.stderr);
    assert_eq!(v.stdout, o.stdout);
}

#[test]
fn colour_c4_path() {
    let o = rbc(
        &["colour", "--input", "-", "--ell", "4"],
        "6\n0 1\n1 2\n2 3\n3 0\n0 4\n4 5\n5 1\n",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn verify_rejects_a_rainbow_certificate() {
    let cert = r#"{"n":5,"ell":5,"edges":[[0,1,0],[0,4,4],[1,2,1],[2,3,2],[3,4,3]],"proper":true,"rainbow":[0,1,2,3,4]}"#;
    let o = rbc(&["verify", "--input", "-"], cert);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o.stdout)["rainbow"], json("[0,1,2,3,4]"));
}

#[test]
fn verify_rejects_a_false_verdict() {
    let cert = r#"{"n":5,"ell":5,"edges":[[0,1,0],[0,4,4],[1,2,1],[2,3,2],[3,4,3]],"proper":true,"rainbow":null}"#;
    assert_eq!(rbc(&["verify", "--input", "-"], cert).code, 1);
}

#[test]
fn dense_input_is_a_domain_error_with_witness() {
    let o = rbc(&["colour", "--input", "-", "--ell", "5"], K24);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("4/3"), "{}", o.stderr);
    assert!(o.stderr.contains("witness"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(rbc(&["frobnicate"], "").code, 2);
    assert_eq!(rbc(&["density"], "").code, 2);
    assert_eq!(rbc(&["density", "--input", "-", "--bogus"], "").code, 2);
    assert_eq!(rbc(&["scan-k24", "--n", "10"], "").code, 2);
    assert_eq!(rbc(&["gnp", "--n", "10", "--seed", "1"], "").code, 2);
}

#[test]
fn malformed_input_is_a_domain_error() {
    assert_eq!(rbc(&["density", "--input", "-"], "3\n0 7\n").code, 1);
    assert_eq!(
        rbc(&["density", "--input", "/nonexistent/graph.txt"], "").code,
        1
    );
}

#[test]
fn gnp_is_reproducible() {
    let a = rbc(&["gnp", "--n", "30", "--p", "0.2", "--seed", "9"], "");
    let b = rbc(&["gnp", "--n", "30", "--p", "0.2", "--seed", "9"], "");
    let c = rbc(&["gnp", "--n", "30", "--p", "0.2", "--seed", "10"], "");
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(a.stdout.starts_with("30\n"));
    let d = rbc(
        &["gnp", "--n", "30", "--c", "1", "--ell", "5", "--seed", "9"],
        "",
    );
    assert_eq!(d.code, 0, "{}", d.stderr);
}

#[test]
fn scans_write_csv_and_json() {
    let o = rbc(
        &[
            "scan-k24", "--n", "30", "--c-grid", "0.5,2", "--trials", "3", "--seed", "4",
        ],
        "",
    );
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().count(), 7);
    assert!(o.stderr.contains("n=30 c=2"));
    let o = rbc(
        &[
            "scan-obstruction",
            "--ell",
            "5",
            "--n",
            "30",
            "--c-grid",
            "1",
            "--trials",
            "2",
            "--seed",
            "4",
            "--format",
            "json",
        ],
        "",
    );
    assert_eq!(o.code, 0);
    assert_eq!(json(&o.stdout).as_array().unwrap().len(), 2);
    let o = rbc(
        &[
            "scan-colour",
            "--ell",
            "5",
            "--n",
            "30",
            "--c-grid",
            "0.5,1",
            "--trials",
            "3",
            "--seed",
            "4",
        ],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(!o.stdout.contains("dead_end"));
}

#[test]
fn output_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let o = rbc(
        &[
            "density",
            "--input",
            "-",
            "--output",
            path.to_str().unwrap(),
        ],
        PENTAGON,
    );
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    assert_eq!(
        json(&fs::read_to_string(Path::new(&path)).unwrap())["value"],
        "1/1"
    );
}

//! Black-box tests of the `holant` binary: verbs, report lines, exit codes.

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn holant(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_holant"));
    cmd.args(args);
    cmd
}

fn run(args: &[&str]) -> Output {
    holant(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(content: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().expect("temp file");
    f.write_all(content.as_bytes()).expect("write");
    f
}

const VC_K3_GRID: &str = "\
sig eq2 [1, 0, 1]
sig or2 [0, 1, 1]
vertex a eq2
vertex b eq2
vertex c eq2
vertex ab or2
vertex bc or2
vertex ca or2
edge a:0 ab:0
edge b:0 ab:1
edge b:1 bc:0
edge c:0 bc:1
edge c:1 ca:0
edge a:1 ca:1
";

const HARD_GRID: &str = "\
sig eo [3, 0, 1, 0, 3]
vertex u eo
vertex v eo
edge u:0 v:0
edge u:1 v:1
edge u:2 v:2
edge u:3 v:3
";

#[test]
fn classify_hard_signature() {
    let f = tmp("sig f [3, 0, 1, 0, 3]\n");
    let out = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("verdict: hard"));
    assert!(text.contains("rule: compressed-matrix-nonsingular"));
    assert!(text.contains("Eulerian orientations"));
}

#[test]
fn classify_tractable_signature() {
    let f = tmp("sig f [1, 0, 0, 1]\n");
    let out = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: tractable"));
    assert!(text.contains("case: affine-transformable"));
    assert!(text.contains("verified: true"));
}

#[test]
fn classify_empty_file_is_usage_error() {
    let f = tmp("# nothing here\n");
    let out = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_parse_error() {
    let f = tmp("sig f [1, oops]\n");
    let out = run(&["classify", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn eval_vertex_cover_grid() {
    let f = tmp(VC_K3_GRID);
    let out = run(&["eval", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("value: 4"));
}

#[test]
fn eval_vanishing_grid() {
    // Sym_4^3([1,i]; [1,0]) on both endpoints of a quadruple edge.
    let f = tmp(
        "sig f [24, 18*z(4), -12, -6*z(4), 0]\n\
         vertex u f\nvertex v f\n\
         edge u:0 v:0\nedge u:1 v:1\nedge u:2 v:2\nedge u:3 v:3\n",
    );
    let out = run(&["eval", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("value: 0"));
    assert!(text.contains("method: vanishing"));
}

#[test]
fn eval_methods_agree() {
    let f = tmp(VC_K3_GRID);
    let path = f.path().to_str().unwrap().to_owned();
    let auto = stdout(&run(&["eval", &path]));
    let brute = stdout(&run(&["eval", &path, "--method", "brute"]));
    let a2 = stdout(&run(&["eval", &path, "--method", "arity2"]));
    let pick = |s: &str| {
        s.lines()
            .find(|l| l.starts_with("value:"))
            .expect("value line")
            .to_owned()
    };
    assert_eq!(pick(&auto), pick(&brute));
    assert_eq!(pick(&auto), pick(&a2));
}

#[test]
fn eval_over_bound_refused() {
    let f = tmp(HARD_GRID);
    let out = run(&["eval", f.path().to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(3));

    let out = holant(&["eval", f.path().to_str().unwrap()])
        .env("HOLANT_BRUTE_BOUND", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3));

    // Flag takes precedence over the environment.
    let out = holant(&["eval", f.path().to_str().unwrap(), "--bound", "10"])
        .env("HOLANT_BRUTE_BOUND", "2")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("value: 24"));
}

#[test]
fn transform_output_is_a_valid_input() {
    let f = tmp("sig f [3, 0, 1, 0, 3]\n");
    let path = f.path().to_str().unwrap().to_owned();
    let out = run(&["transform", &path, "zinv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, "sig f [0, 0, 2, 0, 0]\n");

    // Round-trip: the printed file feeds back through another transform.
    let g = tmp(&text);
    let back = run(&["transform", g.path().to_str().unwrap(), "z"]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(stdout(&back), "sig f [3, 0, 1, 0, 3]\n");
}

#[test]
fn transform_rejects_bad_matrix() {
    let f = tmp("sig f [1, 0, 1]\n");
    let out = run(&["transform", f.path().to_str().unwrap(), "[[1, 0], [0]]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gadget_examples() {
    let out = run(&["gadget", "tetrahedron", "t=1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("signature: [10, 4, 2, 1, 1]"));
    assert!(text.contains("match: true"));
    assert!(text.contains("det-compressed: 4"));

    let text = stdout(&run(&["gadget", "chain", "x=1", "s=3"]));
    assert!(text.contains("signature: [3, 1, 0]"));
    assert!(text.contains("match: true"));

    let text = stdout(&run(&["gadget", "approx", "k=2"]));
    assert!(text.contains("a: 1/4"));
    assert!(text.contains("match: true"));

    let out = run(&["gadget", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selfcheck_is_deterministic_and_passes() {
    let a = run(&["selfcheck", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("selfcheck: pass"));
    let b = run(&["selfcheck", "--seed", "42"]);
    assert_eq!(stdout(&a), stdout(&b));

    // A different seed still passes.
    let c = run(&["selfcheck", "--seed", "97"]);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn missing_file_is_usage_error() {
    let out = run(&["classify", "/nonexistent/path.sig"]);
    assert_eq!(out.status.code(), Some(1));
}

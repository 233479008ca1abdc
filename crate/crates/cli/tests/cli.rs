use std::io::Write;
use std::process::{Command, Output, Stdio};

use qvspi::cuts::IntervalSet;
use serde_json::Value;

fn qvspi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvspi")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn structured(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let o = qvspi(&full);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (v, o.status.code().unwrap())
}

fn file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn density_sentence_is_true() {
    let o = qvspi(&["decide", "ALL x. x > 0 -> EX y. (pi*y < 1 /\\ ~(pi*(x+y) < 1))"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("true"));
}

#[test]
fn false_sentence_exits_one() {
    let o = qvspi(&["decide", "EX x. pi*x = 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn both_strategies_are_selectable() {
    for s in ["fm", "vs"] {
        let o = qvspi(&["decide", "--strategy", s, "EX y. 3*y < 1 /\\ 1 < pi*y"]);
        assert_eq!(o.status.code(), Some(0), "{s}");
    }
}

#[test]
fn existential_witness_satisfies_the_matrix() {
    let (v, code) = structured(&["decide", "EX x. x > 0 /\\ pi*x < 1"]);
    assert_eq!(code, 0);
    let w = &v["witnesses"][0];
    assert_eq!(w["role"], "witness");
    let q = w["value"].as_str().unwrap();
    let check = qvspi(&["eval", "x > 0 /\\ pi*x < 1", "-a", &format!("x={q}")]);
    assert_eq!(stdout(&check).trim(), "true");
}

#[test]
fn universal_counterexample_is_reported() {
    let (v, code) = structured(&["decide", "ALL x. pi*x < 1"]);
    assert_eq!(code, 1);
    assert_eq!(v["witnesses"][0]["role"], "counterexample");
    let q = v["witnesses"][0]["value"].as_str().unwrap();
    let check = qvspi(&["eval", "pi*x < 1", "-a", &format!("x={q}")]);
    assert_eq!(stdout(&check).trim(), "false");
}

#[test]
fn decompose_gives_one_open_component() {
    let (v, code) = structured(&["decompose", "pi*x < 1 /\\ x > 0"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "decompose");
    let comps = v["result"].as_array().unwrap();
    assert_eq!(comps.len(), 1);
    assert_eq!(comps[0]["lo_in"], false);
    assert_eq!(comps[0]["hi_in"], false);
    for key in ["command", "input", "result", "witnesses", "timings_ms"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn structured_interval_sets_round_trip() {
    let (v, _) = structured(&["decompose", "x < 0 \\/ (1 <= x /\\ pi*x <= 7) \\/ x = 5"]);
    let set: IntervalSet = serde_json::from_value(v["result"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&set).unwrap(), v["result"]);
    assert!(set.is_canonical());
    assert_eq!(set.components().len(), 3);
}

#[test]
fn structured_output_is_deterministic() {
    let run = || {
        let (mut v, _) = structured(&["decide", "EX x. EX y. x < y /\\ pi*y < 1 /\\ 0 < x"]);
        v.as_object_mut().unwrap().remove("timings_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    let o = qvspi(&["decide", "EX x. x <* 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('^'));
    let o = qvspi(&["decide", "x < 1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("free variables"));
    let o = qvspi(&["eval", "x < y", "-a", "x=1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qvspi(&["limit", "--function", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn precision_flags_are_validated() {
    assert_eq!(qvspi(&["--precision-start", "8", "decide", "EX x. x < 1"]).status.code(), Some(2));
    assert_eq!(qvspi(&["--precision-growth", "1", "decide", "EX x. x < 1"]).status.code(), Some(2));
    let o = qvspi(&["--precision-start", "16", "--precision-growth", "3", "decide", "EX x. 113 < 355*x /\\ pi*x < 1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn eval_classify_and_valuational() {
    assert_eq!(stdout(&qvspi(&["eval", "x < y", "-a", "x=1", "-a", "y=pi"])).trim(), "true");
    assert_eq!(stdout(&qvspi(&["eval", "EX z. x < z /\\ z < y", "-a", "x=1/pi", "-a", "y=1/pi"])).trim(), "false");
    assert_eq!(stdout(&qvspi(&["classify-cut", "1/pi"])).trim(), "irrational");
    assert_eq!(stdout(&qvspi(&["classify-cut", "(pi^2 - 1)/(pi - 1) - pi"])).trim(), "rational");
    assert_eq!(stdout(&qvspi(&["valuational", "pi^2 - 3"])).trim(), "non-valuational");
}

#[test]
fn eliminate_removes_quantifiers() {
    let (v, code) = structured(&["eliminate", "EX y. x < y /\\ pi*y < 1"]);
    assert_eq!(code, 0);
    let printed = v["result"].as_str().unwrap();
    assert!(!printed.contains("EX") && !printed.contains('y'), "{printed}");
}

const FUNCTION: &str = r#"[
  {"lo": "-inf", "hi": "1/pi", "lo_in": false, "hi_in": false, "slope": "2", "intercept": "1"},
  {"lo": "1/pi", "hi": "+inf", "lo_in": false, "hi_in": false, "slope": "0", "intercept": "5"}
]"#;

#[test]
fn limits_of_a_function_file() {
    let f = file(FUNCTION);
    let path = f.path().to_str().unwrap();
    let o = qvspi(&["limit", "--function", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("no external limits\n"));
    let (v, _) = structured(&["limit", "--function", path, "--at", "+inf"]);
    assert_eq!(v["result"]["limit"], serde_json::to_value(qvspi::PiScalar::from_int(5)).unwrap());
    let o = qvspi(&["limit", "--function", path, "--at", "1/pi", "--side", "left"]);
    assert_eq!(stdout(&o).trim(), "(pi + 2)/(pi)");
}

#[test]
fn skolem_candidates_are_refuted() {
    let candidates = file(
        r#"[
          [{"lo": "-inf", "hi": "+inf", "lo_in": false, "hi_in": false, "slope": "0", "intercept": "1/4"}],
          [{"lo": "0", "hi": "+inf", "lo_in": false, "hi_in": false, "slope": "-1", "intercept": "1/3"}]
        ]"#,
    );
    let (v, code) = structured(&["skolem-check", "1/pi", "--candidates", candidates.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let xs: Vec<&str> = v["witnesses"].as_array().unwrap().iter().map(|w| w["x"].as_str().unwrap()).collect();
    assert_eq!(xs, ["1/15", "1/67"]);
    let o = qvspi(&["skolem-check", "1/2", "--candidates", candidates.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn class_codes_for_sample_file() {
    let samples = file("0\n1/4  # same class as 0\n1\n7\n\n-2\n");
    let (v, code) = structured(&["ei-code", "pi*x < 1 <-> pi*y < 1", "--samples", samples.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["consistent"], true);
    let m = v["result"]["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 5);
    assert_eq!(m[0], serde_json::json!([true, true, false, false, true]));
    let o = qvspi(&["ei-code", "x < y \\/ x = y", "--samples", samples.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compile_prints_verified_primitive_form() {
    let o = qvspi(&["compile", "pi*x + 1/2 < y"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("P1("), "{out}");
    assert!(!out.lines().next().unwrap().contains("pi"), "{out}");
    assert!(out.trim_end().ends_with("verified: true"));
}

#[test]
fn selftest_sizes() {
    let (v, code) = structured(&["selftest", "--iterations", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["suites"].as_array().unwrap().len(), 0);
    let (v, code) = structured(&["--seed", "7", "selftest", "--iterations", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["suites"].as_array().unwrap().len(), 10);
    assert_eq!(v["result"]["pass"], true);
}

#[test]
fn repl_keeps_bindings() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qvspi"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"let a = x > 0\nlet b = $a /\\ pi*x < 1\ndecide EX x. $b\ndecide ALL x. $b\nbogus\nquit\ndecide EX x. x < 0\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[..3], ["a bound", "b bound", "true"]);
    assert!(lines.contains(&"false"));
    assert!(lines.iter().any(|l| l.starts_with("error: unknown command")));
    assert_eq!(lines.iter().filter(|l| **l == "true").count(), 1, "nothing runs after quit: {text}");
    assert_eq!(out.status.code(), Some(0));
}

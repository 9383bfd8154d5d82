use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lammult(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lammult"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const ANCHOR: &str = "(((\\x1 x2 x3 x4. x1) a b) c d)";

#[test]
fn eval_on_every_machine() {
    for m in ["pe", "ea", "stg"] {
        let o = lammult(&["eval", "-", "--machine", m], ANCHOR);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "a\n");
    }
}

#[test]
fn eval_reports_exhaustion() {
    let o = lammult(
        &["eval", "-", "--fuel", "10"],
        "((\\x. (x x)) (\\x. (x x)))",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fuel exhausted after 10 steps"));
}

#[test]
fn trace_emits_json_lines() {
    let o = lammult(&["trace", "-", "--machine", "ea"], ANCHOR);
    assert!(o.status.success());
    let rules: Vec<String> = stdout(&o)
        .lines()
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["rule"]
                .as_str()
                .unwrap()
                .to_owned()
        })
        .collect();
    assert_eq!(rules, ["E-APP", "E-APP", "E-FUN", "A-LT", "A-LT", "A-EQ"]);
}

#[test]
fn compare_exit_codes() {
    let o = lammult(&["compare", "-"], ANCHOR);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "agree");
    let o = lammult(
        &["compare", "-", "--fuel", "5"],
        "((\\x. (x x)) (\\x. (x x)))",
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stages_report() {
    let o = lammult(&["stages", "-"], "((\\x y. x) a)");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "agree_residual_dropped");
    assert_eq!(v["stages"].as_array().unwrap().len(), 6);
}

#[test]
fn fuzz_summary_is_deterministic() {
    let args = [
        "fuzz",
        "--count",
        "300",
        "--max-size",
        "20",
        "--seed",
        "9",
        "--open",
    ];
    let a = lammult(&args, "");
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&lammult(&args, "")));
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["total"], 300);
    assert_eq!(v["mismatched"], 0);
}

#[test]
fn bad_input_is_a_usage_error() {
    let o = lammult(&["eval", "-"], "(f)");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("arity-zero"));
    let o = lammult(&["fuzz", "--count", "0"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = lammult(&["eval", "-", "--fuel", "0"], "a");
    assert!(!o.status.success());
}

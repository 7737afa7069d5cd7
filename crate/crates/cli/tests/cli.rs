use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn roundelim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roundelim")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = roundelim(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    });
    (v, out.status.code().unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.
fn golden(name: &str, args: &[&str]) {
    let out = roundelim(args);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs:\n--- got\n{}\n--- want\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&want)
    );
}

#[test]
fn golden_outputs() {
    golden("spectrum_n4_d2.json", &["spectrum", "--n", "4", "--d", "2", "--json"]);
    golden("theta_n8_d2.json", &["theta", "--n", "8", "--d", "2"]);
    golden("eq2_n8_all.json", &["protocol", "eq2", "--n", "8", "--sweep", "all"]);
    golden("eq2_n16_random.json", &["protocol", "eq2", "--n", "16", "--sweep", "random", "--samples", "50", "--seed", "7"]);
    golden("list_ns_n4.json", &["protocol", "list-ns", "--n", "4", "--d", "2", "--sweep", "all"]);
    golden("lp_n8.json", &["lp-theta-prime", "--n", "8"]);
    golden("bounds_n6_k3.csv", &["bounds", "--N", "6", "--k", "3", "--csv", "--seed", "3"]);
    golden("sweep_grover_random.json", &["sweep", "grover", "--max-n", "12", "--seed", "11"]);
    golden("kremer_eq2.json", &["kremer", "--fixture", "eq2"]);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "grover", "--max-n", "12", "--seed", "11"];
    let one = roundelim(&[&args[..], &["--threads", "1"]].concat());
    let many = roundelim(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn spectrum_n4_d2() {
    let (v, code) = json(&["spectrum", "--n", "4", "--d", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["results"]["lambda_min"], "-2");
    assert_eq!(v["results"]["lambda_max"], "6");
}

#[test]
fn eq2_n8_sends_seven_qubits() {
    let (v, code) = json(&["protocol", "eq2", "--n", "8", "--sweep", "all"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["qubits_sent"], 7);
    assert_eq!(v["results"]["rounds"], 2);
    assert_eq!(v["results"]["runs"], v["results"]["passed"]);
}

#[test]
fn lp_theta_prime_n8_at_most_16() {
    let (v, code) = json(&["lp-theta-prime", "--n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["certified"], true);
    let value = v["results"]["solution"]["value"].as_str().unwrap();
    let (num, den) = value.split_once('/').unwrap_or((value, "1"));
    assert!(num.parse::<i64>().unwrap() <= 16 * den.parse::<i64>().unwrap());
}

#[test]
fn single_pair_run() {
    let (v, code) = json(&["protocol", "eq2", "--n", "8", "--x", "00", "--y", "03"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["passed"], 1);
}

#[test]
fn domain_errors_exit_2() {
    let (v, code) = json(&["spectrum", "--n", "3", "--d", "5"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "domain");
    assert_eq!(v["pass"], false);
}

#[test]
fn promise_violation_exits_2() {
    let (v, code) = json(&["protocol", "eq2", "--n", "8", "--x", "00", "--y", "ff"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "promise");
}

#[test]
fn usage_error_exits_2() {
    let out = roundelim(&["theta", "--n", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn failed_invariant_exits_1() {
    // the whole cube has diameter n and more than sum_{k ≤ n/2} C(n,k) points
    let (v, code) = json(&["bounds", "--N", "4", "--k", "2", "--n", "4", "--r", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
    assert_eq!(v["results"]["kleitman"]["largest_found"], 16);
}

#[test]
fn timing_goes_to_stderr() {
    let out = roundelim(&["root", "--n", "20", "--d", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(!stdout.contains("pass ("));
    assert!(stderr.contains("root: pass"));
}

#[test]
fn csv_has_header_and_rows() {
    let out = roundelim(&["sweep", "theta", "--max-n", "8", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,n,rep_dimension,theta"));
    assert_eq!(lines.next(), Some("2,6,16,6.0"));
    assert_eq!(lines.count(), 1);
}

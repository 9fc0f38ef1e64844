//! End-to-end tests of the command-line interface.

use std::process::{Command, Output};

fn qselbits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qselbits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exact_smallest() {
    let out = qselbits(&["exact", "--smallest", "-n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "43/9 ≈ 4.777777777778\n");
}

#[test]
fn exact_integer_prints_plain() {
    let out = qselbits(&["exact", "-m", "1", "-n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn exact_average_routes_to_averaged_formula() {
    let out = qselbits(&["exact", "--average", "-n", "3", "--digits", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "136/27 ≈ 5.037037\n");
}

#[test]
fn exact_rejects_bad_rank_with_exit_2() {
    let out = qselbits(&["exact", "-m", "0", "-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qselbits(&["exact", "-m", "6", "-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // smallest and -m together is a usage error (clap group)
    let out = qselbits(&["exact", "--smallest", "-m", "1", "-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // no target selection at all
    let out = qselbits(&["exact", "-n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_csv_has_header_and_rows() {
    let out = qselbits(&["table", "--max-n", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,m,mu_rational,mu_decimal");
    assert_eq!(lines.len(), 4, "{text}");
}

#[test]
fn table_json_parses_and_is_symmetric() {
    let out = qselbits(&["table", "--max-n", "6", "--format", "json"]);
    assert!(out.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 21);
    let get = |m: u64, n: u64| -> String {
        rows.iter()
            .find(|r| r["m"] == m && r["n"] == n)
            .unwrap()["mu_rational"]
            .as_str()
            .unwrap()
            .to_string()
    };
    for n in 1..=6u64 {
        for m in 1..=n {
            assert_eq!(get(m, n), get(n + 1 - m, n), "(m,n)=({m},{n})");
        }
    }
}

#[test]
fn table_runs_are_byte_identical() {
    let a = qselbits(&["table", "--max-n", "5"]);
    let b = qselbits(&["table", "--max-n", "5"]);
    assert_eq!(a.stdout, b.stdout);
}

fn parse_constant(line: &str) -> f64 {
    line.split('=')
        .nth(1)
        .unwrap()
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn asympt_constants() {
    let out = qselbits(&["asympt", "--constant", "c"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let c = parse_constant(text.lines().next().unwrap());
    assert!((c - 5.27938).abs() < 5e-5, "{text}");
    assert!(text.contains("k_max = 10"), "{text}");

    let out = qselbits(&["asympt", "--constant", "avg"]);
    let text = stdout(&out);
    let s = parse_constant(text.lines().next().unwrap());
    assert!((s - 8.20731).abs() < 5e-5, "{text}");

    let out = qselbits(&["asympt", "--constant", "c", "-n", "1024", "--k-max", "40"]);
    let text = stdout(&out);
    assert!(text.contains("expansion(n=1024)"), "{text}");
    assert!(text.contains("|exact - expansion|"), "{text}");
}

#[test]
fn simulate_emits_json_report() {
    let out = qselbits(&["simulate", "-m", "1", "-n", "4", "--trials", "2000", "--seed", "9"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["m"], 1);
    assert_eq!(v["n"], 4);
    assert_eq!(v["trials"], 2000);
    assert_eq!(v["seed"], 9);
    assert!(v["bit_mean"].as_f64().unwrap() > 0.0);
    // deterministic given the seed
    let again = qselbits(&["simulate", "-m", "1", "-n", "4", "--trials", "2000", "--seed", "9"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn simulate_rejects_invalid_rank() {
    let out = qselbits(&["simulate", "-m", "9", "-n", "4", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_quick_passes_and_corrupt_fails() {
    let out = qselbits(&["validate", "--level", "quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("OK:"));

    let out = qselbits(&["validate", "--level", "quick", "--corrupt-c3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn validate_json_report() {
    let out = qselbits(&["validate", "--level", "quick", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["level"], "quick");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

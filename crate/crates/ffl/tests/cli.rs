use std::process::Command;

use ffl::cli::{run, EXIT_BUDGET, EXIT_OK, EXIT_PRECONDITION};
use serde_json::Value;

fn ok(args: &[&str]) -> String {
    let mut full = vec!["ffl"];
    full.extend_from_slice(args);
    let out = run(full);
    assert_eq!(out.code, EXIT_OK, "{args:?}: {}", out.stderr);
    out.stdout
}

fn code(args: &[&str]) -> i32 {
    let mut full = vec!["ffl"];
    full.extend_from_slice(args);
    run(full).code
}

fn rows(csv_text: &str) -> Vec<Vec<String>> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn documented_examples() {
    let primes = ok(&["primes", "--q", "2", "--deg", "3"]);
    assert_eq!(rows(&primes).len(), 2);
    assert!(ok(&["moment2", "--q", "2", "--mod", "[0,0,1]", "--method", "moebius"]).contains("3/2 + -1*sqrt(2)"));
    let phi = ok(&["arith", "phi", "--q", "2", "--poly", "[0,0,0,1]"]);
    assert_eq!(rows(&phi)[0][2], "4");
}

#[test]
fn moment_methods_agree() {
    let get = |m: &str| {
        let out = ok(&["moment2", "--q", "3", "--mod", "[0,0,1]", "--method", m]);
        rows(&out)[0].clone()
    };
    let exact = get("moebius");
    let formula = get("formula");
    assert_eq!(exact[2], formula[2]);
    let chars: f64 = get("chars")[3].parse().unwrap();
    let value: f64 = exact[3].parse().unwrap();
    assert!((chars - value).abs() < 1e-12 * value.abs());

    let m4 = |m: &str| -> f64 {
        let out = ok(&["moment4", "--q", "2", "--mod", "[1,0,1,1]", "--method", m]);
        rows(&out)[0][3].parse().unwrap()
    };
    assert!((m4("chars") - m4("moebius")).abs() < 1e-12);
}

#[test]
fn worker_count_leaves_output_unchanged() {
    let base = ok(&["--workers", "1", "moment4", "--q", "3", "--mod", "[1,2,0,1,1]", "--method", "report"]);
    for w in ["2", "3", "7"] {
        assert_eq!(ok(&["--workers", w, "moment4", "--q", "3", "--mod", "[1,2,0,1,1]", "--method", "report"]), base);
    }
    let fe = ok(&["--workers", "1", "fe-check", "--q", "2", "--mod", "[1,1,0,0,1,1]"]);
    assert_eq!(ok(&["--workers", "5", "fe-check", "--q", "2", "--mod", "[1,1,0,0,1,1]"]), fe);
}

#[test]
fn json_document() {
    let out = ok(&["--json", "chars", "--q", "3", "--mod", "[0,1]"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "chars");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["trivial"], Value::Bool(true));
    assert_eq!(rows[1]["parity"], "odd");
    let cols: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, ["index", "kvec", "trivial", "primitive", "parity", "conductor"]);
}

#[test]
fn root_numbers_are_unimodular() {
    let out = ok(&["fe-check", "--q", "3", "--mod", "[2,0,1,1]"]);
    let table = rows(&out);
    assert!(!table.is_empty());
    for r in table {
        let abs: f64 = r[4].parse().unwrap();
        let residual: f64 = r[5].parse().unwrap();
        assert!((abs - 1.0).abs() < 1e-12 && residual < 1e-12);
    }
}

#[test]
fn probe_rows() {
    let out = ok(&["probe", "two-omega", "--q", "2", "--x", "1"]);
    let r = &rows(&out)[0];
    assert_eq!(r[0], "two_omega_sum");
    assert_eq!(r[3], "3");
    assert_eq!(r[5], "1");
    let sel = ok(&["probe", "selberg", "--q", "2", "--x", "[0,0,0,0,1]", "--y", "3", "--z", "1"]);
    assert_eq!(rows(&sel)[0][0], "selberg_sifted_count");
    let skipped = ok(&["probe", "bt", "--q", "2", "--x", "[0,1]", "--y", "3"]);
    assert_eq!(rows(&skipped)[0][8], "true");
}

#[test]
fn factor_round_trip() {
    let out = ok(&["factor", "--q", "2", "--poly", "T^6+T^5+T^4+T^3+T^2+T"]);
    let exps: Vec<(String, u32)> = rows(&out).into_iter().map(|r| (r[2].clone(), r[3].parse().unwrap())).collect();
    assert_eq!(exps, [("T".to_string(), 1), ("T+1".to_string(), 1), ("T^2+T+1".to_string(), 2)]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["primes", "--q", "6", "--deg", "2"]), EXIT_PRECONDITION);
    assert_eq!(code(&["arith", "mu", "--q", "2", "--poly", "[0,3]"]), EXIT_PRECONDITION);
    assert_eq!(code(&["moment2", "--q", "2", "--mod", "[1,1]", "--method", "formula"]), EXIT_PRECONDITION);
    assert_eq!(code(&["--max-table", "8", "chars", "--q", "2", "--mod", "[0,0,0,0,1]"]), EXIT_BUDGET);
    assert_eq!(code(&["nope"]), EXIT_PRECONDITION);
    assert_eq!(code(&["--help"]), EXIT_OK);
}

#[test]
fn binary_honours_environment() {
    let bin = env!("CARGO_BIN_EXE_ffl");
    let run_with = |workers: &str| {
        Command::new(bin)
            .args(["moment2", "--q", "2", "--mod", "[0,0,0,0,1]"])
            .env("FFL_WORKERS", workers)
            .output()
            .unwrap()
    };
    let a = run_with("1");
    let b = run_with("4");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let budget = Command::new(bin)
        .args(["chars", "--q", "2", "--mod", "[0,0,0,0,1]"])
        .env("FFL_MAX_TABLE", "4")
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(EXIT_BUDGET));
    assert!(String::from_utf8_lossy(&budget.stderr).contains("budget"));
}

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn superalg(args: &[&str]) -> Output {
    superalg_env(args, &[])
}

fn superalg_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_superalg"));
    cmd.args(args).env_remove("SUPERALG_OUT_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn totals(v: &Value) -> Vec<u64> {
    v["totals"].as_array().unwrap().iter().map(|t| t["dim"].as_u64().unwrap()).collect()
}

#[test]
fn dims_of_r_have_width_between_two_and_four() {
    let v = json(&superalg(&["dims", "--example", "R", "--D", "12"]));
    assert_eq!(v["schema_version"], 1);
    let dims = totals(&v);
    assert_eq!(dims[0], 2);
    assert!(dims[1..].iter().all(|d| (2..=4).contains(d)), "{dims:?}");
}

#[test]
fn dims_of_jor_r_vanish_at_multiples_of_three() {
    let v = json(&superalg(&["dims", "--example", "JorR", "--D", "12"]));
    let dims = totals(&v);
    for (i, d) in dims.iter().enumerate() {
        if (i + 1) % 3 == 0 {
            assert_eq!(*d, 0, "degree {}", i + 1);
        }
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&superalg(&["dims", "--example", "R", "--D", "0"])), 2);
    assert_eq!(code(&superalg(&["dims", "--example", "Nope"])), 2);
    assert_eq!(code(&superalg(&["dims", "--example", "R", "--field", "F4"])), 2);
    assert_eq!(code(&superalg(&["dims", "--example", "R", "--field", "F3"])), 2);
    assert_eq!(code(&superalg(&["dims"])), 2);
    assert_eq!(code(&superalg(&["verify", "--example", "R", "--suite", "bogus"])), 2);
    assert_eq!(code(&superalg(&["verify", "--example", "M11", "--suite", "jordan"])), 2);
    assert_eq!(code(&superalg(&["growth", "--example", "R", "--D", "8", "--window", "1,8"])), 2);
    assert_eq!(code(&superalg(&["frobnicate"])), 2);
}

#[test]
fn small_truncation_is_a_reliability_failure() {
    let o = superalg(&["dims", "--example", "R", "--N", "6", "--D", "12"]);
    assert_eq!(code(&o), 4);
    // The table is still written.
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["reliable_degree"].as_u64().unwrap() < 12);
}

#[test]
fn series_of_empty_algebra_is_one_plus_t() {
    let v = json(&superalg(&["series", "--example", "Empty"]));
    let terms = v["jordan"]["direct"]["terms"].as_array().unwrap();
    let got: Vec<(Value, i64)> = terms.iter().map(|t| (t["exp"].clone(), t["coeff"].as_i64().unwrap())).collect();
    assert_eq!(got, vec![(serde_json::json!([0]), 1), (serde_json::json!([1]), 1)]);
}

#[test]
fn series_transfer_of_r_has_no_diff() {
    let v = json(&superalg(&["series", "--example", "R", "--N", "16", "--D", "6", "--bivariate"]));
    assert_eq!(v["jordan"]["transfer"]["holds"], true);
    assert!(v["jordan"]["transfer"]["diff"].as_array().unwrap().is_empty());
    assert!(v["jordan"]["bivariate"]["diff"].as_array().unwrap().is_empty());
}

#[test]
fn verify_kantor_double_and_recursions() {
    let v = json(&superalg(&["verify", "--example", "KanH2", "--suite", "jordan", "--seed", "7"]));
    let ids = v["identities"].as_array().unwrap();
    assert!(!ids.is_empty());
    assert!(ids.iter().all(|r| r["verdict"] == "holds_on_sample"));
    let v = json(&superalg(&["verify", "--suite", "recursion"]));
    assert!(v["recursions"].as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn corrupted_table_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("h1.json");
    let o = superalg(&["catalog", "table", "--example", "H1", "--out", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&superalg(&["verify", "--table", good.to_str().unwrap()])), 0);

    let mut t: Value = serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    // {x1, y1} = 1 becomes 2 on one side only, breaking super-anticommutativity.
    let entry = t["bracket"].as_array_mut().unwrap().iter_mut().find(|e| e["a"] == 1 && e["b"] == 2).unwrap();
    entry["value"] = serde_json::json!([[0, "2"]]);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&t).unwrap()).unwrap();
    for suite in ["lie", "all"] {
        let o = superalg(&["verify", "--table", bad.to_str().unwrap(), "--suite", suite]);
        assert_eq!(code(&o), 3, "suite {suite}");
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["identities"].as_array().unwrap().iter().any(|r| r["verdict"] == "counterexample"));
    }

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"schema_version\": 1, \"name\": ").unwrap();
    assert_eq!(code(&superalg(&["verify", "--table", broken.to_str().unwrap()])), 2);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["verify", "--example", "JorQ", "--N", "12", "--D", "6", "--suite", "jordan", "--seed", "11"];
    let one = superalg_env(&args, &[("RAYON_NUM_THREADS", "1")]);
    let four = superalg_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    let again = superalg_env(&args, &[("RAYON_NUM_THREADS", "4")]);
    assert_eq!(code(&one), 0, "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);

    let a = superalg(&["dims", "--example", "Q", "--N", "18", "--D", "6", "--format", "csv"]);
    let b = superalg_env(&["dims", "--example", "Q", "--N", "18", "--D", "6", "--format", "csv"], &[("RAYON_NUM_THREADS", "1")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = superalg_env(
        &["dims", "--example", "H1", "--format", "text"],
        &[("SUPERALG_OUT_DIR", dir.path().to_str().unwrap())],
    );
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let path = dir.path().join("dims-H1-Q.txt");
    assert!(Path::new(&path).exists());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("H1 over Q"));
}

#[test]
fn catalog_lists_every_example() {
    let v = json(&superalg(&["catalog", "list"]));
    assert_eq!(v["schema_version"], 1);
    let names: Vec<&str> = v["examples"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for name in ["R", "AR", "Q", "AQ", "PQ", "H1", "H2", "KanH1", "KanH2", "JorR", "JorQ", "M11"] {
        assert!(names.contains(&name), "{name}");
    }
    let csv = superalg(&["catalog", "list", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), names.len() + 1);
}

#[test]
fn growth_bounds_hold_for_r() {
    let v = json(&superalg(&["growth", "--example", "R", "--N", "16", "--D", "6", "--window", "2,6"]));
    assert!(v["jordan"]["inequalities"].as_array().unwrap().iter().all(|r| r["holds"] == true));
    assert_eq!(v["gamma"][0], 0);
    assert_eq!(v["slope"]["window"], serde_json::json!([2, 6]));
}

#[test]
fn prime_field_runs() {
    let q = json(&superalg(&["dims", "--example", "R", "--N", "16", "--D", "8"]));
    let p = json(&superalg(&["dims", "--example", "R", "--N", "16", "--D", "8", "--field", "F32003"]));
    assert_eq!(p["field"], "F32003");
    assert_eq!(totals(&q), totals(&p));
}

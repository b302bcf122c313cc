use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_speedrobust"));
    cmd.args(args).env_remove("SPEEDROBUST_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}: {text}"));
    (out.status.code().unwrap(), value)
}

fn leaf(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(a) if a.is_empty() => "[]".into(),
        Value::Object(o) if o.is_empty() => "{}".into(),
        other => other.to_string(),
    }
}

fn leaves(v: &Value, prefix: &str, out: &mut BTreeMap<String, String>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| leaves(x, &join(&i.to_string()), out)),
        Value::Object(o) if !o.is_empty() => o.iter().for_each(|(k, x)| leaves(x, &join(k), out)),
        other => {
            out.insert(prefix.to_string(), leaf(other));
        }
    }
}

fn csv_leaves(text: &str) -> BTreeMap<String, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let mut out = BTreeMap::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.unwrap();
        if header == ["path", "value"] {
            out.insert(row[0].to_string(), row[1].to_string());
        } else {
            for (col, cell) in header.iter().zip(row.iter()) {
                out.insert(format!("{i}.{col}"), cell.to_string());
            }
        }
    }
    out
}

#[test]
fn bricks_bags_for_45_jobs() {
    let (code, v) = json(&["bags", "--mode", "bricks", "--n", "45", "--m", "9", "--b", "9", "--rho", "8/5"]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"], serde_json::json!([8, 8, 6, 6, 4, 4, 4, 3, 3]));
    assert_eq!(v["total_size"], 46);

    let (code, v) = json(&["bags", "--mode", "bricks", "--n", "45", "--m", "9", "--rho", "159/100"]);
    assert_eq!(code, 1);
    assert_eq!(v["successful"], false);
}

#[test]
fn other_bag_modes() {
    let (code, v) = json(&["bags", "--mode", "sand", "--m", "2", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["sizes"], serde_json::json!(["4/3", "2/3"]));
    assert_eq!(v["rho"], "4/3");

    let (code, v) = json(&["bags", "--mode", "pebbles", "--n", "4", "--m", "2", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["rho"], "11/6");
    assert_eq!(v["sizes"], serde_json::json!(["3", "1"]));

    let (code, v) = json(&["bags", "--mode", "pebbles", "--jobs", "1,1,1", "--m", "2", "--rho", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["packed_all"], false);

    let (_, v) = json(&["bags", "--n", "120", "--m", "2"]);
    assert_eq!(v["branch"], "bricks");
    let (_, v) = json(&["bags", "--n", "122", "--m", "2"]);
    assert_eq!(v["branch"], "pebbles");
}

#[test]
fn jobs_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("jobs.json");
    std::fs::write(&path, r#"["3/2", 1, "1/2", 1]"#).unwrap();
    let arg = format!("@{}", path.display());
    let (code, v) = json(&["bags", "--mode", "pebbles", "--jobs", &arg, "--m", "2", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["packed_all"], true);
    assert_eq!(v["q"], "3/4");
}

#[test]
fn f_table_csv() {
    let out = run(&["tables", "--which", "f", "--zmax", "60", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: BTreeMap<u64, String> =
        reader.records().map(|r| r.unwrap()).map(|r| (r[2].parse().unwrap(), r[1].to_string())).collect();
    assert_eq!(rows.len(), 59);
    assert_eq!(rows[&6], "-2/5");
    assert_eq!(rows[&21], "-11/20");
    assert_eq!(rows[&58], "-11/19");
    assert_eq!(rows[&2], "2");
}

#[test]
fn surplus_tables() {
    let (_, v) = json(&["tables", "--which", "surplus-breakpoints"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 22);
    assert_eq!(rows[0]["lambda"], "11/3");
    assert_eq!(rows[7]["lambda_approx"], "22.622");
    assert_eq!(rows[7]["surplus_approx"], "0.393");

    let (_, v) = json(&["tables", "--which", "surplus-int", "--lambda-max", "13"]);
    assert_eq!(v[12]["approx"], "0.220");

    let (code, v) = json(&["surplus", "--lambda", "11/3"]);
    assert_eq!(code, 0);
    assert_eq!(v["surplus"], "1/6");
}

#[test]
fn assign_methods() {
    let (code, v) = json(&["assign", "--method", "greedy", "--bags", "4/3,2/3", "--speeds", "3/2,1/2", "--rho", "4/3"]);
    assert_eq!(code, 0);
    // capacities tie at 2/3 after the first bag; the lower index wins
    assert_eq!(v["assignment"], serde_json::json!([0, 0]));
    assert_eq!(v["makespan"], "4/3");

    let (code, v) = json(&["assign", "--method", "greedy", "--bags", "1,1", "--speeds", "2", "--rho", "1/2"]);
    assert_eq!(code, 1);
    assert!(v["failure"].is_object());

    let (code, v) = json(&["assign", "--method", "optimal", "--bags", "2,2", "--speeds", "3,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["makespan"], "4/3");

    let (code, v) =
        json(&["assign", "--method", "integral", "--bags", "8,8,6,6,4,4,4,3,3", "--speeds", "9,9,9,9,9", "--rho", "8/5", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(v["trace"].as_array().unwrap().len(), 9);

    let out = run(&["assign", "--method", "integral", "--bags", "3/2", "--speeds", "1", "--rho", "8/5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probe_sand_bags() {
    let (code, v) = json(&["probe", "--m", "2", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "4/3");
    let out = run(&["probe", "--m", "2", "--b", "2", "--bags", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn full_range_sweep_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["verify-range", "--m-max", "144", "--lambda-max", "60", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checked"], 626400);
    assert_eq!(v["failures"], serde_json::json!([]));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved, v);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn failing_sweep_exits_one() {
    let (code, v) = json(&["verify-range", "--m-max", "9", "--lambda-max", "5", "--rho", "159/100", "--quiet"]);
    assert_eq!(code, 1);
    assert!(v["failures"].as_array().unwrap().iter().any(|f| f["instance"]["n"] == "45" && f["instance"]["m"] == "9"));
}

#[test]
fn robust_verification_is_deterministic() {
    let args = ["verify-robust", "--n", "30", "--m", "7", "--exhaustive-limit", "100", "--samples", "500", "--seed", "4"];
    let (c1, mut a) = json(&args);
    let (c2, mut b) = json(&args);
    assert_eq!((c1, c2), (0, 0));
    a["elapsed_ms"] = Value::Null;
    b["elapsed_ms"] = Value::Null;
    assert_eq!(a, b);
    assert_eq!(a["checked"], 500);
    let (code, v) = json(&["verify-robust", "--n", "45", "--m", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["grid"]["profiles"], "all 25331");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["bags", "--bogus"][..],
        &["bags", "--mode", "bricks", "--n", "45", "--m", "9", "--rho", "1.6"],
        &["bags", "--mode", "bricks", "--n", "x", "--m", "9"],
        &["bags", "--mode", "bricks", "--m", "9"],
        &["tables", "--which", "g"],
        &["surplus", "--lambda", "0"],
        &["frobnicate"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn worker_settings() {
    let args = ["verify-range", "--m-max", "10", "--lambda-max", "10", "--quiet"];
    assert_eq!(run_env(&args, &[("SPEEDROBUST_WORKERS", "1")]).status.code(), Some(0));
    assert_eq!(run(&["--workers", "3", "verify-range", "--m-max", "5", "--quiet"]).status.code(), Some(0));
    assert_eq!(run(&["--workers", "0", "verify-range", "--m-max", "5"]).status.code(), Some(2));
    assert_eq!(run_env(&args, &[("SPEEDROBUST_WORKERS", "many")]).status.code(), Some(2));
}

#[test]
fn csv_and_json_carry_the_same_data() {
    let commands: Vec<Vec<&str>> = vec![
        vec!["bags", "--mode", "bricks", "--n", "45", "--m", "9"],
        vec!["bags", "--mode", "sand", "--m", "3", "--b", "4"],
        vec!["bags", "--mode", "pebbles", "--n", "10", "--m", "3"],
        vec!["bags", "--n", "500", "--m", "4"],
        vec!["assign", "--method", "integral", "--bags", "8,8,6", "--speeds", "10,5", "--rho", "8/5", "--trace"],
        vec!["assign", "--method", "greedy", "--bags", "1,1", "--speeds", "2", "--rho", "1/2"],
        vec!["assign", "--method", "optimal", "--bags", "5,3,3", "--speeds", "2,1"],
        vec!["probe", "--m", "3", "--b", "3"],
        vec!["tables", "--which", "f", "--zmax", "12"],
        vec!["tables", "--which", "surplus-int", "--lambda-max", "10"],
        vec!["tables", "--which", "surplus-breakpoints", "--lambda-max", "20"],
        vec!["verify-range", "--m-max", "9", "--lambda-max", "5", "--rho", "159/100", "--quiet"],
        vec!["verify-robust", "--n", "12", "--m", "4"],
        vec!["surplus", "--lambda", "127/20"],
    ];
    for args in commands {
        let j = run(&args);
        let mut csv_args = args.clone();
        csv_args.extend(["--format", "csv"]);
        let c = run(&csv_args);
        assert_eq!(j.status.code(), c.status.code(), "{args:?}");
        let mut value: Value = serde_json::from_slice(&j.stdout).unwrap();
        if value.get("elapsed_ms").is_some() {
            value["elapsed_ms"] = Value::from(0);
        }
        let mut expected = BTreeMap::new();
        leaves(&value, "", &mut expected);
        let mut got = csv_leaves(&String::from_utf8(c.stdout).unwrap());
        if got.contains_key("elapsed_ms") {
            got.insert("elapsed_ms".into(), "0".into());
        }
        assert_eq!(got, expected, "{args:?}");
    }
}

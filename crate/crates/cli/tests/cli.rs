use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecbalance"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

const TOY: &str = "z,a,y,x1,pi\n1,1,5,0.1,0.6\n1,1,7,0.2,0.6\n1,0,3,0.3,0.6\n1,0,1,0.4,0.6\n0,0,2,0.5,0.4\n0,0,4,0.6,0.4\n";

fn toy_dir() -> TempDir {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("toy.csv"), TOY).unwrap();
    dir
}

#[test]
fn toy_att_with_supplied_propensities() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &["estimate", "--input", "toy.csv", "--pi-column", "pi", "--csv", "est.csv", "--json", "est.json"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = data_rows(&fs::read_to_string(dir.path().join("est.csv")).unwrap());
    assert_eq!(rows.len(), 3);
    let att = rows.iter().find(|r| r[0] == "ATT").unwrap();
    assert!((att[1].parse::<f64>().unwrap() - 3.5).abs() < 1e-12);

    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("est.json")).unwrap()).unwrap();
    assert_eq!(json["metadata"]["tool"], "ecbalance");
    assert_eq!(json["metadata"]["config"]["input"]["pi_column"], "pi");
    assert!(json["propensity"].is_null());
    assert_eq!(json["estimates"].as_array().unwrap().len(), 3);
}

#[test]
fn estimand_selection_limits_the_report() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &["estimate", "--input", "toy.csv", "--pi-column", "pi", "--estimand", "ato", "--csv", "ato.csv"],
    );
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(dir.path().join("ato.csv")).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "ATO");
}

#[test]
fn separated_covariate_exits_with_model_code() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("y,a,z,x\n");
    for i in 0..10 {
        text.push_str(&format!("{i},{},1,{}\n", i % 2, 1.0 + f64::from(i)));
        text.push_str(&format!("{i},0,0,{}\n", -1.0 - f64::from(i)));
    }
    fs::write(dir.path().join("sep.csv"), text).unwrap();
    let out = run(dir.path(), &["estimate", "--input", "sep.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("separation"));
}

#[test]
fn data_and_io_errors_map_to_exit_codes() {
    let dir = toy_dir();
    let out = run(dir.path(), &["estimate", "--input", "missing.csv"]);
    assert_eq!(out.status.code(), Some(4));

    fs::write(dir.path().join("bad.csv"), "y,a,z,x\n1,1,1,0\n1,0,1,1\n1,0,0,2\n1,2,0,3\n").unwrap();
    let out = run(dir.path(), &["estimate", "--input", "bad.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 4"));

    let out = run(dir.path(), &["estimate", "--input", "toy.csv", "--estimand", "atec", "--pi-column", "pi"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn estimate_writes_propensity_histogram() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &["estimate", "--input", "toy.csv", "--pi-column", "pi", "--histogram", "hist.csv"],
    );
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(dir.path().join("hist.csv")).unwrap());
    assert_eq!(rows.len(), 20);
    let rct: usize = rows.iter().map(|r| r[2].parse::<usize>().unwrap()).sum();
    let ec: usize = rows.iter().map(|r| r[3].parse::<usize>().unwrap()).sum();
    assert_eq!((rct, ec), (4, 2));
}

#[test]
fn diagnose_reports_balance_and_densities() {
    let dir = toy_dir();
    let out = run(
        dir.path(),
        &[
            "diagnose", "--input", "toy.csv", "--pi-column", "pi", "--balance", "bal.csv", "--density", "dens.csv",
            "--density-method", "hist", "--bins", "4",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("bal.csv")).unwrap();
    assert!(text.starts_with("# tool: ecbalance"));
    assert_eq!(data_rows(&text).len(), 4);
    let dens = data_rows(&fs::read_to_string(dir.path().join("dens.csv")).unwrap());
    // 4 estimands x 2 groups x 4 bins.
    assert_eq!(dens.len(), 32);

    fs::write(dir.path().join("noec.csv"), "y,a,z,x,pi\n1,1,1,0,0.5\n2,0,1,1,0.5\n").unwrap();
    let out = run(dir.path(), &["diagnose", "--input", "noec.csv", "--pi-column", "pi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no subjects"));
}

#[test]
fn oracle_and_simulate_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = run(
        dir.path(),
        &["oracle", "--settings", "1-2", "--ecs", "4", "--n-mc", "100000", "--out", "oracle.csv"],
    );
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(dir.path().join("oracle.csv")).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][2], "0.0");

    let out = run(
        dir.path(),
        &[
            "simulate", "--settings", "1-2", "--ecs", "4", "--b", "5", "--oracle", "oracle.csv", "--out", "m.csv",
            "--figure-data", "fig.csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let metrics = data_rows(&fs::read_to_string(dir.path().join("m.csv")).unwrap());
    assert_eq!(metrics.len(), 6);
    assert!(!data_rows(&fs::read_to_string(dir.path().join("fig.csv")).unwrap()).is_empty());

    let out = run(
        dir.path(),
        &["simulate", "--settings", "3", "--ecs", "4", "--b", "5", "--oracle", "oracle.csv", "--out", "x.csv"],
    );
    assert_eq!(out.status.code(), Some(2));

    let out = run(dir.path(), &["oracle", "--settings", "19", "--n-mc", "1000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_thread_setting_is_rejected() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ecbalance"))
        .current_dir(dir.path())
        .env("ECBALANCE_THREADS", "zero")
        .args(["oracle", "--settings", "1", "--ecs", "1", "--n-mc", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectral-ep")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--model", "boundary", "--n", "2", "--z", "0,1", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    let reports = v["reports"].as_array().unwrap();
    assert!(reports.len() > 50);
    for r in reports {
        assert!(r["residual"].as_f64().unwrap() <= r["tolerance"].as_f64().unwrap(), "{r}");
        assert!(r["id"].is_string() && r["relation"].is_string());
    }
}

#[test]
fn negative_n_is_a_usage_error() {
    assert_eq!(run(&["verify", "--n", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--z", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--scheme", "RES99"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--scheme", "RES3", "--model", "interior"]).status.code(), Some(2));
}

#[test]
fn mutated_susy_suite_fails() {
    let out = run(&["verify", "--suite", "susy", "--mutate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
    assert_eq!(run(&["verify", "--suite", "susy"]).status.code(), Some(0));
}

#[test]
fn res3_sweep_rows() {
    let out = run(&["sweep", "--scheme", "RES3", "--testfn", "gaussian", "--eps-grid", "0.3,0.7", "--coupling-c", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        ["scheme", "epsilon", "A", "x_prime", "value_re", "value_im", "target_re", "target_im", "abs_error"]
    );
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert!(r[8].parse::<f64>().unwrap() < 5e-6);
    }
}

#[test]
fn sweep_is_deterministic_and_ordered() {
    let args = ["sweep", "--model", "interior", "--scheme", "RES12", "--eps-grid", "0.1,0.4,0.2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let (_, rows) = csv_rows(&a);
    let eps: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(eps, [0.4, 0.2, 0.1]);
    let errs: Vec<f64> = rows.iter().map(|r| r[8].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn psi1_sweep_has_a_floor() {
    let out = run(&["sweep", "--model", "interior", "--scheme", "RES12", "--testfn", "psi1"]);
    let (_, rows) = csv_rows(&out);
    let errs: Vec<f64> = rows.iter().map(|r| r[8].parse().unwrap()).collect();
    assert!(errs.iter().all(|&e| e > 0.3), "{errs:?}");
    assert_eq!(
        run(&["sweep", "--model", "interior", "--scheme", "RES12", "--testfn", "psi1", "--tol", "1e-3"]).status.code(),
        Some(1)
    );
}

#[test]
fn index_reports() {
    let v = json(&run(&["indexes", "--n", "3"]));
    assert_eq!((v["n1"].as_u64(), v["n2"].as_u64(), v["n3"].as_u64()), (Some(2), Some(3), Some(3)));
    assert_eq!(v["k_plane_pole_order"], 7);
    let v = json(&run(&["indexes", "--n", "1"]));
    assert_eq!((v["n1"].as_u64(), v["n2"].as_u64(), v["n3"].as_u64()), (Some(1), Some(1), Some(1)));
    assert_eq!(v["k_plane_pole_order"], 3);
    let v = json(&run(&["indexes", "--model", "interior"]));
    assert_eq!((v["n1"].as_u64(), v["n2"].as_u64(), v["n3"].as_u64()), (Some(1), Some(1), Some(2)));
    assert!(v["k_plane_pole_order"].is_null());
}

#[test]
fn susy_and_green_commands() {
    let v = json(&run(&["susy", "--n", "2", "--chain", "normalizable", "--len", "1"]));
    assert_eq!(v["target_n"], 1);
    assert_eq!(v["n1_unchanged"], true);
    assert_eq!(run(&["susy", "--n", "2", "--chain", "normalizable", "--len", "2"]).status.code(), Some(2));
    let v = json(&run(&["green", "--n", "0", "--x", "1", "--x-prime", "0", "--energy", "1,0"]));
    let (re, im) = (v["value"][0].as_f64().unwrap(), v["value"][1].as_f64().unwrap());
    assert!((re + 1f64.sin() / 2.0).abs() < 1e-14 && (im - 1f64.cos() / 2.0).abs() < 1e-14);
    assert_eq!(run(&["green", "--n", "1", "--x", "1", "--x-prime", "0", "--energy", "0,0"]).status.code(), Some(1));
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("spectral-ep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("idx.json");
    let out = run(&["indexes", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n2"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn calogero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_calogero"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Coefficient list of a polynomial NuScalar as integers.
fn poly(v: &Value) -> Vec<i64> {
    assert_eq!(v["den"], serde_json::json!(["1"]));
    v["num"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().parse().unwrap()).collect()
}

#[test]
fn two_mode_gram_matrix() {
    let v = json_of(&calogero(&["gram", "--modes", "2", "--particles", "2", "--nu", "symbolic"]));
    let index: Vec<Vec<u64>> = serde_json::from_value(v["basis"]["index_strings"].clone()).unwrap();
    assert_eq!(index, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
    let (a, b, d) = (vec![2, 3], vec![0, -1], vec![1, 1]);
    let e = |r: usize, c: usize| poly(&v["entries"][r][c]);
    assert_eq!(e(0, 0), a);
    assert_eq!(e(3, 3), a);
    assert_eq!(e(0, 3), b);
    assert_eq!(e(0, 1), b);
    assert_eq!(e(1, 2), d);
    assert_eq!(e(1, 1), d);
}

#[test]
fn free_gram_is_diagonal() {
    let v = json_of(&calogero(&["gram", "--modes", "3", "--particles", "2", "--nu", "0", "--basis", "multiset"]));
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    for (r, row) in entries.iter().enumerate() {
        for (c, x) in row.as_array().unwrap().iter().enumerate() {
            let num = poly(x);
            assert_eq!(num.is_empty(), r != c, "({r},{c})");
        }
    }
}

#[test]
fn guard_violation_exits_2() {
    let out = calogero(&["gram", "--modes", "6", "--particles", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1679616"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["spectrum", "--modes", "3", "--particles", "1", "--nu", "0.5"][..],
        &["verify", "--modes", "2", "--degree", "1", "--relations", "foo"],
        &["fit", "--modes", "2", "--target", "K13", "--degree", "1"],
        &["scan", "--modes", "2", "--particles", "1", "--nu-min", "1", "--nu-max", "0"],
        &["single", "--which", "alpha", "--nu", "-1/2"],
    ] {
        assert_eq!(calogero(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn one_particle_spectrum() {
    let v = json_of(&calogero(&["spectrum", "--modes", "3", "--particles", "1", "--nu", "1"]));
    let eig: Vec<f64> = serde_json::from_value(v["eigenvalues"].clone()).unwrap();
    for (got, want) in eig.iter().zip([1.0, 4.0, 4.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_eq!(v["rank"], 3);
    assert_eq!(v["positivity"], true);
}

#[test]
fn critical_point_report() {
    let v = json_of(&calogero(&["critical", "--modes", "3", "--max-particles", "3"]));
    assert_eq!(v["passed"], true);
    let eig: Vec<&str> = v["levels"].as_array().unwrap().iter().map(|l| l["eigenvalue"].as_str().unwrap()).collect();
    assert_eq!(eig, ["1", "2", "6"]);
}

#[test]
fn scan_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = calogero(&[
        "scan", "--modes", "3", "--particles", "2", "--nu-min", "-1/2", "--nu-max", "1/2", "--step", "1/8",
        "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nu,min_eigenvalue,rank,multiset_dim,positive"));
    let rows: Vec<(String, bool)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[4] == "true")
        })
        .collect();
    assert_eq!(rows.len(), 9);
    for (nu, positive) in rows {
        let above = !matches!(nu.as_str(), "-1/2" | "-3/8");
        assert_eq!(positive, above, "nu={nu}");
    }
}

#[test]
fn single_mode_alpha() {
    let v = json_of(&calogero(&["single", "--which", "alpha", "--terms", "2", "--nu", "symbolic"]));
    assert_eq!(v["kind"], "alpha");
    let vals = v["values"].as_array().unwrap();
    assert_eq!(vals[0], serde_json::json!({"num": ["1"], "den": ["1", "2"]}));
    assert_eq!(vals[1], serde_json::json!({"num": ["0", "3", "2"], "den": ["1", "4", "4"]}));
}

#[test]
fn bose_map_coefficients_are_decimal_strings() {
    let v = json_of(&calogero(&["single", "--which", "c", "--terms", "3", "--nu", "1/2", "--precision", "96"]));
    assert_eq!(v["precision_bits"], 96);
    let c0: f64 = v["values"][0].as_str().unwrap().parse().unwrap();
    // c_0 = √φ(1) = √2 at ν = 1/2
    assert!((c0 - 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn exchange_fit_degree_one() {
    let v = json_of(&calogero(&["fit", "--modes", "3", "--target", "K12", "--degree", "1", "--nu", "symbolic"]));
    assert_eq!(v["target"], "K12");
    assert_eq!(v["full_rank"], true);
    let words = v["expr"]["words"].as_array().unwrap();
    // identity plus the four words of b12† b12
    assert_eq!(words.len(), 5);
    let coef = |c: [u64; 3], a: [u64; 3]| {
        words
            .iter()
            .find(|w| w["create"] == serde_json::json!(c) && w["annihilate"] == serde_json::json!(a))
            .map(|w| w["coef"].clone())
            .unwrap()
    };
    assert_eq!(coef([1, 0, 0], [1, 0, 0]), serde_json::json!({"num": ["-1"], "den": ["1", "3"]}));
    assert_eq!(coef([1, 0, 0], [0, 1, 0]), serde_json::json!({"num": ["1"], "den": ["1", "3"]}));
}

#[test]
fn verify_all_relations() {
    let v = json_of(&calogero(&["verify", "--modes", "4", "--degree", "4", "--relations", "all", "--nu", "1/2"]));
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 11);
    let mapping = v["reports"].as_array().unwrap().iter().find(|r| r["relation"] == "mapping-preconditions").unwrap();
    assert_eq!(mapping["positivity"], true);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str, cmd: &[&str]| {
        let path = dir.path().join(name);
        let mut args = cmd.to_vec();
        args.extend(["--threads", threads, "--output", path.to_str().unwrap()]);
        assert!(calogero(&args).status.success());
        fs::read(path).unwrap()
    };
    for cmd in [
        &["gram", "--modes", "3", "--particles", "3", "--nu", "symbolic"][..],
        &["scan", "--modes", "3", "--particles", "2", "--step", "1/16"],
        &["verify", "--modes", "3", "--degree", "3", "--nu", "2"],
        &["fit", "--modes", "3", "--target", "N", "--degree", "2"],
    ] {
        assert_eq!(run("1", "one", cmd), run("4", "four", cmd), "{cmd:?}");
    }
}

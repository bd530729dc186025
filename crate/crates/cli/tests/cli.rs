use std::path::Path;
use std::process::{Command, Output};

use junctions_core::crystal::{habit_plate, variants, PlateId};
use junctions_core::{twin_params, Mat3, Vec3};
use serde_json::{json, Value};

fn junctions(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_junctions")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = junctions(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn table1_rows() {
    let rows = csv_rows(&stdout(&["table1"]));
    assert_eq!(rows.len(), 11);
    let row = |p: &str| rows.iter().find(|r| r[0] == p).unwrap().clone();
    let r4 = row("(4,-)");
    assert_eq!(r4[3], "V_II");
    assert!((num(&r4[5]) - 0.0023).abs() < 5e-5 && (num(&r4[6]) - 0.0024).abs() < 5e-5);
    assert!((num(&r4[7]) - 0.0037).abs() < 5e-5 && (num(&r4[8]) - 0.0039).abs() < 5e-5);
    assert_eq!(r4[9], "true");
    for p in ["(2,+)", "(2,-)"] {
        let r = row(p);
        assert_eq!((r[3].as_str(), r[4].as_str(), r[5].as_str()), ("none", "0", ""));
    }
    for (p, want) in [("(1,-)", 3.84), ("(2,+)", 3.28), ("(3,+)", 0.69), ("(3,-)", 3.70), ("(4,-)", 0.57)] {
        assert!((num(&row(p)[1]) - want).abs() <= 0.15, "{p}");
    }
}

#[test]
fn eta_xi_curve_has_one_row_per_grid_point() {
    let rows = csv_rows(&stdout(&["curves", "eta_xi", "--lambda-range", "1.01:1.41:0.01"]));
    assert_eq!(rows.len(), 41);
    let lambdas: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    assert!(lambdas.windows(2).all(|w| w[0] < w[1]));
    // Every column is small at the λ = 1 end and larger somewhere inside.
    for c in 1..5 {
        let col: Vec<f64> = rows.iter().map(|r| num(&r[c]).abs()).collect();
        assert!(col[0] < 0.015 && col.iter().any(|&x| x > 5.0 * col[0]));
    }
    for r in &rows {
        for s in r {
            let digits = s.trim_start_matches('-').split('e').next().unwrap().chars().filter(char::is_ascii_digit);
            assert!(digits.skip_while(|&c| c == '0').count() <= 12, "{s}");
        }
    }
}

#[test]
fn case_curves_are_ordered_and_nonvanishing() {
    let curl = csv_rows(&stdout(&["curves", "curl", "--lambda-range", "1.01:1.41:0.05"]));
    for r in &curl {
        let v: Vec<f64> = r[1..].iter().map(|s| num(s)).collect();
        assert!(v[1] < v[0] && v[3] < v[2] && v[1] < v[2] && v[3] < v[0]);
    }
    let f = csv_rows(&stdout(&["curves", "rigidity_f", "--lambda-range", "1.01:1.41:0.05"]));
    assert!(f.iter().all(|r| r[1..].iter().all(|s| num(s).abs() > 1e-12)));
}

#[test]
fn scan_at_1_2_finds_eight_stable_junctions() {
    let v: Value = serde_json::from_str(&stdout(&["scan", "--lambda", "1.2"])).unwrap();
    let rep = &v["reports"][0];
    assert_eq!(rep["summary"]["vii"], 8);
    assert_eq!(rep["summary"]["stable"], 8);
    let stable: Vec<&Value> = rep["junctions"].as_array().unwrap().iter().filter(|j| j["stable"] == true).collect();
    assert!(stable.iter().all(|j| j["vii"] == true && j["case"].is_string()));
}

#[test]
fn scan_matches_table_shear_sets() {
    let v: Value = serde_json::from_str(&stdout(&["scan", "--lambda", "1.0331", "--partners", "3+,4-"])).unwrap();
    let rows = csv_rows(&stdout(&["table1", "--partners", "3+,4-"]));
    for j in v["reports"][0]["junctions"].as_array().unwrap().iter().filter(|j| j["vii"] == true) {
        let row = rows.iter().find(|r| r[0] == j["partner"].as_str().unwrap()).unwrap();
        let (a, b) = (j["t1"].as_f64().unwrap().abs(), j["t2"].as_f64().unwrap().abs());
        let (lo, hi) = (a.min(b), a.max(b));
        // λ = 1.0331 sits just below the table's λ window.
        assert!((lo - num(&row[5])).abs() < 1e-4 && (hi - num(&row[7])).abs() < 1e-3);
    }
}

#[test]
fn empty_partner_list_gives_an_empty_report() {
    let out = junctions(&["scan", "--partners", ""]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["junctions"], json!([]));
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        vec!["scan", "--lambda", "1.5"],
        vec!["curves", "eta_xi", "--lambda-range", "1.2:1.1:0.01"],
        vec!["curves", "eta_xi", "--lambda-range", "1.1:1.2:-0.01"],
        vec!["scan", "--base", "7,+"],
        vec!["scan", "--tol-override", "rank_tol=abc"],
        vec!["curves", "curl", "--base", "2,+"],
        vec!["table1", "--format", "xml"],
    ] {
        let out = junctions(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&out)["exit_code"], 2);
    }
}

fn matrix(m: &Mat3) -> Value {
    json!(m.0)
}

fn write_input(dir: &Path, name: &str, value: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(value).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn twowell_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let l = 1.0331;
    let v = variants(l, 1.0 / l).unwrap();
    let plate = |s: &str| habit_plate(l, 1.0 / l, s.parse::<PlateId>().unwrap()).unwrap();
    let (p1, p4) = (plate("1+"), plate("4-"));

    let same = json!({
        "u1": matrix(&v[0].u), "u2": matrix(&v[3].u), "f1": matrix(&p1.gradient()), "f2": matrix(&p1.gradient()),
        "n1": p1.unit_normal().0, "n2": p4.unit_normal().0,
    });
    let out: Value = serde_json::from_str(&stdout(&["twowell", "--input", &write_input(dir.path(), "same.json", &same)])).unwrap();
    assert_eq!(out["feasible"], true);
    assert!(out["d"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap().abs() < 1e-12));

    let plates = json!({
        "u1": matrix(&v[0].u), "u2": matrix(&v[3].u), "f1": matrix(&p1.gradient()), "f2": matrix(&p4.gradient()),
        "n1": p1.unit_normal().0, "n2": p4.unit_normal().0,
    });
    let out: Value = serde_json::from_str(&stdout(&["twowell", "--input", &write_input(dir.path(), "plates.json", &plates)])).unwrap();
    assert_eq!((out["hypothesis_ok"].clone(), out["feasible"].clone()), (json!(true), json!(false)));

    // A synthetic pair on the laminate line with normals in span{m, u*}.
    let (u1, u2) = (v[0].u, v[1].u);
    let tp = twin_params(&u1, &u2).unwrap();
    let (f1, f2) = (u1 + tp.b.outer(&tp.m) * 0.2, u1 + tp.b.outer(&tp.m) * 0.7);
    let us = tp.u_star.normalized();
    let (n1, n2) = ((tp.m + us * 0.3).normalized(), (tp.m * -0.4 + us).normalized());
    let synth = json!({ "u1": matrix(&u1), "u2": matrix(&u2), "f1": matrix(&f1), "f2": matrix(&f2), "n1": n1.0, "n2": n2.0 });
    let out: Value = serde_json::from_str(&stdout(&["twowell", "--input", &write_input(dir.path(), "synth.json", &synth)])).unwrap();
    assert_eq!(out["feasible"], true);
    let d: Vec<f64> = out["d"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let k = tp.u_star.cross(&n1.cross(&n2).normalized());
    assert!((f1 - f2 - Vec3([d[0], d[1], d[2]]).outer(&k)).norm() < 1e-10);
}

#[test]
fn twowell_errors() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"u1\": [[1,0,0],[0,1,0],[0,0,1]],\n  \"u2\": oops\n}").unwrap();
    let out = junctions(&["twowell", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_json(&out);
    assert_eq!(e["kind"], "parse");
    assert!(e["message"].as_str().unwrap().contains("line 3"));

    // Both normals and u* in one plane: the hypothesis fails.
    let (e1, e2) = (1.2, 0.9);
    let (u1, u2) = (Mat3::diag(e1, e2, 1.0), Mat3::diag(e2, e1, 1.0));
    let planar = json!({
        "u1": matrix(&u1), "u2": matrix(&u2), "f1": matrix(&u1), "f2": matrix(&u2),
        "n1": Vec3::new(1.0, 1.0, 0.0).normalized().0, "n2": Vec3::new(0.9, 1.2, 0.0).normalized().0,
    });
    let out = junctions(&["twowell", "--input", &write_input(dir.path(), "planar.json", &planar)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["kind"], "hypothesis_failed");
}

#[test]
fn output_is_identical_across_thread_counts_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (k, threads) in ["1", "4", "4"].iter().enumerate() {
        let path = dir.path().join(format!("sep{k}.csv"));
        let out = junctions(&[
            "curves", "separation", "--lambda-range", "1.02:1.4:0.02", "--threads", threads, "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success() && out.stdout.is_empty());
        files.push(std::fs::read(path).unwrap());
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
    let a = stdout(&["scan", "--lambda-range", "1.1:1.3:0.1", "--threads", "1", "--format", "csv"]);
    let b = stdout(&["scan", "--lambda-range", "1.1:1.3:0.1", "--threads", "3", "--format", "csv"]);
    assert_eq!(a, b);
    assert!(a.ends_with('\n'));
}

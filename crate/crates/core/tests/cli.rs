mod common;

use std::path::Path;
use std::process::{Command, Output};

use bbpert::io::{read_pade_csv, read_series, RunManifest};
use bbpert::Scalar;
use common::matches_printed;
use serde_json::Value;

fn bbpert(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbpert"))
        .current_dir(dir)
        .env_remove("BBPERT_CACHE_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = bbpert(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(dir: &Path, args: &[&str]) -> String {
    let out = bbpert(dir, args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn quartic_series_file_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["series", "--K", "2", "--J", "50", "--precision", "80", "--out", "k2.json"]);
    let path = dir.path().join("k2.json");
    let s = read_series(&path).unwrap();
    assert_eq!(s.len(), 51);
    assert!(matches_printed(&s.terms[26].energy, "-0.389768610", -7));
    let m = RunManifest::read(&RunManifest::path_for(&path)).unwrap();
    m.verify(&path).unwrap();
    assert_eq!((m.p, m.precision, m.max_order), (1, 80, 50));
    assert!(m.command_line.iter().any(|a| a == "series"));

    std::fs::write(&path, std::fs::read_to_string(&path).unwrap().replace("\"p\": 1", "\"p\": 1 ")).unwrap();
    assert!(m.verify(&path).is_err());
}

#[test]
fn harmonic_series_has_zero_tail() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["series", "--K", "1", "--J", "5", "--out", "k1.json"]);
    let s = read_series(&dir.path().join("k1.json")).unwrap();
    assert!(s.terms[1..].iter().all(|t| t.energy.is_zero()));
}

#[test]
fn sextic_b_series_term_fifteen() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["series", "--K", "3", "--p", "2", "--J", "30", "--out", "k3.json"]);
    let s = read_series(&dir.path().join("k3.json")).unwrap();
    assert!(matches_printed(&s.terms[15].energy, "-0.2344066313", -6));
}

#[test]
fn cache_hit_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--cache-dir", "cache", "series", "--K", "3", "--J", "12", "--out", "a.json"]);
    assert_eq!(std::fs::read_dir(d.join("cache")).unwrap().count(), 1);
    ok(d, &["--cache-dir", "cache", "series", "--K", "3", "--J", "12", "--out", "b.json"]);
    ok(d, &["series", "--K", "3", "--J", "12", "--out", "c.json"]);
    let a = std::fs::read(d.join("a.json")).unwrap();
    assert_eq!(a, std::fs::read(d.join("b.json")).unwrap());
    assert_eq!(a, std::fs::read(d.join("c.json")).unwrap());
    ok(d, &["--cache-dir", "cache", "series", "--K", "3", "--J", "13", "--out", "e.json"]);
    assert_eq!(std::fs::read_dir(d.join("cache")).unwrap().count(), 2);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bbpert"))
        .current_dir(dir.path())
        .env("BBPERT_CACHE_DIR", dir.path().join("envcache"))
        .args(["series", "--K", "2", "--J", "3", "--out", "x.json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path().join("envcache")).unwrap().count(), 1);
}

#[test]
fn pade_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["series", "--K", "4", "--J", "12", "--out", "k4.json"]);
    let csv = ok(d, &["--format", "csv", "pade", "--series", "k4.json", "--n-max", "6"]);
    let rows = read_pade_csv(&csv, 80).unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[5].0, "6");
    assert!(matches_printed(&rows[5].1, "1.225839331", 0));

    let zero = ok(d, &["--format", "csv", "pade", "--series", "k4.json", "--n-max", "0"]);
    let rows = read_pade_csv(&zero, 80).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].0, "0");

    let err = fails(d, &["pade", "--series", "k4.json", "--n-max", "7"]);
    assert!(err.contains("largest feasible N is 6"), "{err}");
}

#[test]
fn pade_with_exact_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--precision", "40", "series", "--K", "2", "--J", "6", "--out", "k2.json"]);
    let csv = ok(d, &["--format", "csv", "pade", "--series", "k2.json", "--n-max", "3", "--with-oracle"]);
    let rows = read_pade_csv(&csv, 40).unwrap();
    assert_eq!(rows.last().unwrap().0, "Exact");
    assert!(matches_printed(&rows.last().unwrap().1, "1.060362090484183", 0));
    let json: Value = serde_json::from_str(&ok(d, &["pade", "--series", "k2.json", "--n-max", "2"])).unwrap();
    assert_eq!(json["rows"][1]["N"], 2);
    assert!(json["exact"].is_null());
}

#[test]
fn truncate_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--precision", "40", "series", "--K", "2", "--J", "30", "--out", "k2.json"]);
    let r: Value = serde_json::from_str(&ok(d, &["truncate", "--series", "k2.json", "--search-bound", "28"])).unwrap();
    assert_eq!(r["argmin_index"], 26);
    assert_eq!(r["search_bound"], 28);
    let best = Scalar::parse(r["best_estimate"].as_str().unwrap(), 40).unwrap();
    assert!(matches_printed(&best, "1.06036215", 0));
    let csv = ok(d, &["--format", "csv", "truncate", "--series", "k2.json"]);
    assert!(csv.starts_with("M,partial_sum\n0,1.1447142425"));
}

#[test]
fn figure_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["--precision", "40", "series", "--K", "2", "--J", "10", "--out", "k2.json"]);
    ok(d, &["--precision", "40", "series", "--K", "1", "--J", "4", "--out", "k1.json"]);
    let csv = ok(d, &["--format", "csv", "figure", "--series", "k2.json", "k1.json", "--label", "K=2", "--label", "K=1"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "label,j,log10_abs_Ej_over_E0");
    assert!(lines[2].starts_with("K=2,1,-1.049"));
    assert!(lines.contains(&"K=1,0,0"));
    assert!(lines.contains(&"K=1,3,terminated"));

    ok(d, &["--format", "svg", "figure", "--series", "k2.json", "--out", "fig.svg"]);
    let svg = std::fs::read_to_string(d.join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains(">k2</text>"));

    let err = fails(d, &["figure", "--series", "k2.json", "--label", "a", "--label", "b"]);
    assert!(err.contains("labels"));
}

#[test]
fn compare_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["series", "--K", "1", "--J", "6", "--out", "k1.json"]);
    let r: Value = serde_json::from_str(&ok(d, &["compare", "--series", "k1.json"])).unwrap();
    for key in [&r["truncation"]["value"], &r["pade"]["value"], &r["oracle"]["eigenvalue"]] {
        assert_eq!(key, "1");
    }
    assert_eq!(r["pade"]["abs_error"], "0");

    ok(d, &["series", "--K", "3", "--p", "2", "--J", "30", "--out", "k3.json"]);
    let r: Value = serde_json::from_str(&ok(d, &["compare", "--series", "k3.json", "--search-bound", "20"])).unwrap();
    assert_eq!(r["truncation"]["index"], 15);
    let err = Scalar::parse(r["truncation"]["abs_error"].as_str().unwrap(), 80).unwrap().to_f64();
    assert!((err - 9.25e-7).abs() < 1e-8, "{err}");
}

#[test]
fn quartic_best_pade_is_close_to_reference() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["series", "--K", "2", "--J", "46", "--out", "k2.json"]);
    let r: Value = serde_json::from_str(&ok(d, &["compare", "--series", "k2.json"])).unwrap();
    assert_eq!(r["pade"]["index"], 23);
    let err = Scalar::parse(r["pade"]["abs_error"].as_str().unwrap(), 80).unwrap();
    assert!(err < Scalar::pow10(-13, 80));
}

#[test]
fn oracle_json() {
    let dir = tempfile::tempdir().unwrap();
    let r: Value = serde_json::from_str(&ok(dir.path(), &["--precision", "40", "oracle", "--K", "3"])).unwrap();
    assert_eq!(r["K"], 3);
    assert_eq!(r["converged"], true);
    assert!(r["eigenvalue"].as_str().unwrap().starts_with("1.1448024537970"));
    let r: Value =
        serde_json::from_str(&ok(dir.path(), &["--precision", "40", "oracle", "--K", "2", "--lambda", "8"])).unwrap();
    assert!(r["eigenvalue"].as_str().unwrap().starts_with("2.1207241809683"));
    let err = fails(dir.path(), &["--precision", "40", "oracle", "--K", "4", "--basis", "6", "--window", "2"]);
    assert!(err.contains("not converged"));
}

#[test]
fn errors_exit_nonzero_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(fails(d, &["series", "--K", "2", "--J", "3", "--s", "1", "--out", "x.json"]).contains("s=0"));
    assert!(fails(d, &["series", "--K", "3", "--p", "3", "--J", "3", "--out", "x.json"]).contains("order 0"));
    assert!(fails(d, &["truncate", "--series", "missing.json"]).contains("I/O"));
    assert!(!d.join("x.json").exists());
}

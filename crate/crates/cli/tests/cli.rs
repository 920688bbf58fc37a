use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pseudopower"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn linear(n: usize) -> String {
    format!(
        "seed = 3\n[potential]\nkind = \"linear\"\nslope = 1.0\nm = 0.5\nomega = 1.0\n\
         [grid]\na = 1.0\nb = 1.0\nnx = {n}\nny = {n}\n[expansion]\nn_max = 5\n"
    )
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    bin()
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn powers_writes_twenty_files_of_full_grid_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &linear(21));
    let out = dir.path().join("out");
    let res = run("powers", &cfg, &out, &["--n-max", "4"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(files.len(), 20);
    for f in &files {
        let text = fs::read_to_string(f).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,y,re,im_i,im_k,im_ik"));
        assert_eq!(lines.count(), 21 * 21);
    }
    assert!(out.join("power_succeeding_n4_k.csv").exists());
}

#[test]
fn runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &linear(101));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(run("verify", &cfg, out, &["--n-max", "3"]).status.success());
        assert!(run("powers", &cfg, out, &["--n-max", "1"]).status.success());
    }
    for name in ["verify.json", "power_main_n1_k.csv", "power_succeeding_n0_1.csv"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn free_case_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let body = "[potential]\nkind = \"zero\"\n[grid]\na = 1\nb = 1\nnx = 81\nny = 81\n";
    let cfg = write_config(dir.path(), "free.toml", body);
    let out = dir.path().join("out");
    let res = run("verify", &cfg, &out, &[]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stdout));
    let report = json(&out.join("verify.json"));
    assert_eq!(report["pass"], Value::Bool(true));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["check_name"] == "free_collapse"));
    for c in checks {
        for key in ["check_name", "tolerance", "measured", "order_estimate", "pass"] {
            assert!(c.get(key).is_some(), "{key} missing");
        }
    }
    // Operator identities hold to rounding in the free case.
    for name in ["inverse_round_trip", "fiber_order", "origin_value", "successor_pairs"] {
        let c = checks.iter().find(|c| c["check_name"] == name).unwrap();
        assert!(c["measured"].as_f64().unwrap() <= 1e-10, "{name}");
    }
}

#[test]
fn approx_decay_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &linear(101));
    let out = dir.path().join("out");
    assert!(run("approx", &cfg, &out, &[]).status.success());
    let report = json(&out.join("approx.json"));
    let fits = report["fits"].as_array().unwrap();
    let errs: Vec<f64> = fits.iter().map(|f| f["sup_error"].as_f64().unwrap()).collect();
    assert_eq!(fits.len(), 4);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    for f in fits {
        for key in ["degree", "l2_error", "sup_error", "condition"] {
            assert!(f.get(key).is_some());
        }
    }
}

#[test]
fn expand_reads_a_field_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), "c.toml", &linear(81));
    assert!(run("powers", &cfg, &out, &["--n-max", "2"]).status.success());
    let target = out.join("power_main_n2_k.csv");
    let body = format!("{}[target]\nkind = \"file\"\npath = \"{}\"\n", linear(81), target.display());
    let cfg = write_config(dir.path(), "t.toml", &body);
    let res = run("expand", &cfg, &out, &[]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let report = json(&out.join("expansion.json"));
    let cs = report["coefficients"].as_array().unwrap();
    assert_eq!(cs.len(), 6);
    for (n, c) in cs.iter().enumerate() {
        let expect_k = if n == 2 { 1.0 } else { 0.0 };
        assert!((c["im_k"].as_f64().unwrap() - expect_k).abs() < 1e-3, "{c}");
        assert!(c["re"].as_f64().unwrap().abs() < 1e-3, "{c}");
    }
}

#[test]
fn errors_are_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let even = write_config(dir.path(), "even.toml", &linear(40));
    let res = run("verify", &even, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
    let record: Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(record["error"], "ValidationError");
    assert_eq!(record["field"], "grid.nx");

    let unknown = write_config(dir.path(), "kind.toml", &linear(21).replace("linear", "gaussian"));
    let res = run("powers", &unknown, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
    let record: Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(record["error"], "ParseError");
    assert_eq!(record["line"], 3);

    let missing = dir.path().join("absent.toml");
    let res = run("kernels", &missing, &out, &[]);
    assert_eq!(res.status.code(), Some(2));
    let record: Value = serde_json::from_slice(&res.stderr).unwrap();
    assert_eq!(record["error"], "IoError");
}

#[test]
fn kernels_cover_the_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &linear(21));
    let out = dir.path().join("out");
    assert!(run("kernels", &cfg, &out, &[]).status.success());
    let text = fs::read_to_string(out.join("dressed_recip_f.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,t,re,im"));
    // Rows with |t| ≤ |x| on a 21-point grid: Σ (2|j - 10| + 1).
    assert_eq!(lines.count(), (0..21).map(|j: i32| 2 * (j - 10).abs() + 1).sum::<i32>() as usize);
    assert_eq!(fs::read_dir(&out).unwrap().count(), 7);
}

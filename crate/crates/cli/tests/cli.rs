use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fadinglab::capacity::loss_special_case;
use fadinglab::channel_models::{pdf_kappa_mu_shadowed, FadingModel, ShadowedParams};
use fadinglab::textfmt::sci12;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fadinglab"))
        .args(args)
        .env_remove("FADINGLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn rayleigh_pdf_grid() {
    let out = stdout(&["pdf", "--model", "rayleigh", "--gbar", "1", "--grid", "0:5:0.1"]);
    assert!(out.starts_with("gamma,density\n"));
    assert!(out.ends_with('\n') && !out.contains('\r'));
    let r = rows(&out);
    assert_eq!(r.len(), 51);
    assert_eq!(r[0], ["0.000000000000e+00", "1.000000000000e+00"]);
}

#[test]
fn pdf_matches_library_exactly() {
    let out = stdout(&["pdf", "--model", "kms", "--kappa", "1.5", "--mu", "1.2", "--m", "2.3", "--grid", "0:4:0.25"]);
    let p = ShadowedParams::new(1.5, 1.2, 2.3, 1.0).unwrap();
    for (i, row) in rows(&out).iter().enumerate() {
        let g = i as f64 * 0.25;
        assert_eq!(row[0], sci12(g));
        assert_eq!(row[1], sci12(pdf_kappa_mu_shadowed(&p, g).unwrap()));
    }
}

#[test]
fn loss_values() {
    let r = rows(&stdout(&["loss", "--model", "rayleigh"]));
    assert_eq!(r[0][1], sci12(loss_special_case(&FadingModel::Rayleigh { gamma_bar: 1.0 }).unwrap().loss_bits));
    let l: f64 = r[0][1].parse().unwrap();
    assert!((l - 0.8327).abs() < 5e-4);
    let l: f64 = rows(&stdout(&["loss", "--model", "osg"]))[0][1].parse().unwrap();
    assert!((l - 1.8327).abs() < 5e-4);
    let a: f64 = rows(&stdout(&["loss", "--model", "kms", "--kappa", "5", "--mu", "2", "--m", "2"]))[0][1].parse().unwrap();
    let b: f64 = rows(&stdout(&["loss", "--model", "nakagami", "--m", "2"]))[0][1].parse().unwrap();
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn json_output() {
    let out = stdout(&["loss", "--model", "emu", "--eta", "0.5", "--mu", "1.2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"][0]["model"], "emu");
    assert!(v["rows"][0]["loss_bits"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["pdf", "--model", "hoyt", "--q", "1.5"]).status.code(), Some(2));
    assert_eq!(run(&["pdf", "--model", "nakagami"]).status.code(), Some(2));
    assert_eq!(run(&["pdf", "--model", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["pdf", "--model", "rayleigh", "--grid", "0:1"]).status.code(), Some(2));
    assert_eq!(
        run(&["sample", "--model", "kmu", "--kappa", "1", "--mu", "1.5", "--engine", "physical", "--samples", "10"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["capacity", "--model", "rayleigh", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "9"]).status.code(), Some(2));
}

#[test]
fn gbar_db_is_converted_at_the_boundary() {
    let a = stdout(&["pdf", "--model", "rayleigh", "--gbar-db", "10", "--grid", "1:1:1"]);
    let b = stdout(&["pdf", "--model", "rayleigh", "--gbar", "10", "--grid", "1:1:1"]);
    assert_eq!(a, b);
    let c = rows(&stdout(&["capacity", "--model", "rayleigh", "--gbar-db", "30"]));
    assert_eq!(c[0][1], sci12(1000.0));
}

#[test]
fn sample_files_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("draws.csv");
    let out = run(&[
        "sample", "--model", "kms", "--kappa", "1.5", "--mu", "1.2", "--m", "2.3", "--samples", "20000", "--seed", "5",
        "--gbar-db", "10", "--gof", "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 20_001);
    let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("draws.json")).unwrap()).unwrap();
    assert_eq!(side["seed"], 5);
    assert_eq!(side["count"], 20_000);
    assert_eq!(side["gamma_bar"].as_f64().unwrap(), 10.0);
    assert!((side["gamma_bar_db"].as_f64().unwrap() - 10.0).abs() < 1e-12);
    let err = String::from_utf8(out.stderr).unwrap();
    let p: f64 = err.split("p=").nth(1).unwrap().trim().parse().unwrap();
    assert!(p > 0.01, "{err}");
}

#[test]
fn seed_from_environment() {
    let args = ["sample", "--model", "rayleigh", "--samples", "50"];
    let with_env = Command::new(env!("CARGO_BIN_EXE_fadinglab")).args(args).env("FADINGLAB_SEED", "77").output().unwrap();
    let with_flag = stdout(&["sample", "--model", "rayleigh", "--samples", "50", "--seed", "77"]);
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), with_flag);
    assert_ne!(with_flag, stdout(&args));
}

#[test]
fn physical_engines_run_at_integer_mu() {
    for engine in ["common", "iid", "physical"] {
        let out = stdout(&["sample", "--model", "rician", "--K", "10", "--engine", engine, "--samples", "100"]);
        assert_eq!(out.lines().count(), 101);
    }
}

#[test]
fn verify_report() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "fadinglab.verify/1");
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    for c in checks {
        assert!(c["name"].is_string() && c["passed"].is_boolean() && c["detail"].is_string());
        assert!(c["observed"].is_number() && c["tolerance"].is_number());
    }

    let out = run(&["verify", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["passed"] == false));
}

fn read_column(path: &Path, col: usize) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    rows(&text).iter().map(|r| r[col].parse().unwrap()).collect()
}

#[test]
fn figure_files() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["1", "3", "8"] {
        assert!(run(&["figure", id, "--out", dir.path().to_str().unwrap()]).status.success());
    }
    for label in ["awgn", "rician_k10", "nakagami_m1p5", "rayleigh", "hoyt_q0p2", "osg"] {
        let p = dir.path().join(format!("fig1_{label}.csv"));
        assert_eq!(read_column(&p, 0).len(), 31);
    }
    // Figure 8 is symmetric about η = 1.
    let loss = read_column(&dir.path().join("fig8_mu1p5.csv"), 1);
    assert_eq!(loss.len(), 121);
    for i in 0..121 {
        assert!((loss[i] - loss[120 - i]).abs() < 1e-9);
    }
    // Figure 3 curves at κ = 0 decrease with μ.
    let at_zero: Vec<f64> = ["0p5", "0p7", "1", "1p5", "3", "20"]
        .iter()
        .map(|mu| read_column(&dir.path().join(format!("fig3_mu{mu}.csv")), 1)[0])
        .collect();
    assert!(at_zero.windows(2).all(|w| w[0] > w[1]), "{at_zero:?}");
}

use std::path::PathBuf;
use std::process::{Command, Output};

use metaplectic_core::decision::Decision;
use metaplectic_core::grid::SupportReport;
use metaplectic_core::symplectic::{standard_j, MatrixJson, SymplecticMatrix};
use serde_json::Value;

fn metaplectic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metaplectic")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("metaplectic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn decide_stft_holds_both_ways() {
    let out = metaplectic(&["decide", "--catalog", "stft"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout_json(&out);
    assert_eq!(v["sesquilinear"]["holds"], true);
    assert_eq!(v["quadratic"]["holds"], true);
    assert!(v["sesquilinear"]["conj_mismatch"].is_null());
    let keys: Vec<&String> = v["sesquilinear"].as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        ["kind", "holds", "off_block_norm", "conj_mismatch", "tolerance", "borderline", "deciding_product"]
    );
}

#[test]
fn rihaczek_splits_the_verdicts() {
    let out = metaplectic(&["decide", "--catalog", "tau_wigner", "--tau", "0"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["sesquilinear"]["holds"], false);
    assert_eq!(v["quadratic"]["holds"], true);
}

#[test]
fn decide_output_round_trips() {
    let out = metaplectic(&["decide", "--catalog", "tau_wigner", "--tau", "0.3", "--d", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let decision: Decision = serde_json::from_str(&text).unwrap();
    let again: Decision = serde_json::from_str(&serde_json::to_string(&decision).unwrap()).unwrap();
    assert_eq!(again, decision);
    assert_eq!(decision.sesquilinear.tolerance, 1e-8);
}

#[test]
fn input_validation_exit_codes() {
    let bad = scratch("shear.json");
    std::fs::write(&bad, r#"{"half_dim": 2, "entries": [[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).unwrap();
    let out = metaplectic(&["decide", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!stderr(&out).contains('{'));
    assert!(out.stdout.is_empty());

    let garbage = scratch("garbage.json");
    std::fs::write(&garbage, "[1, 2").unwrap();
    assert_eq!(code(&metaplectic(&["decide", "--input", garbage.to_str().unwrap()])), 3);
    assert_eq!(code(&metaplectic(&["decide", "--catalog", "wavelet"])), 3);
    assert_eq!(code(&metaplectic(&["decide", "--catalog", "tau_wigner"])), 3);
    assert_eq!(code(&metaplectic(&["decide"])), 3);
    assert_eq!(code(&metaplectic(&["decide", "--catalog", "stft", "--bogus"])), 3);
    assert_eq!(code(&metaplectic(&["wigner", "--catalog", "stft", "--grid", "100"])), 3);
}

#[test]
fn input_file_matches_catalog() {
    let path = scratch("fourier.json");
    let json = serde_json::to_string(&standard_j(2).to_json()).unwrap();
    std::fs::write(&path, json).unwrap();
    let from_file = stdout_json(&metaplectic(&["decide", "--input", path.to_str().unwrap()]));
    let from_catalog = stdout_json(&metaplectic(&["decide", "--catalog", "fourier"]));
    assert_eq!(from_file, from_catalog);
}

#[test]
fn decompose_modes() {
    let out = metaplectic(&["decompose", "--catalog", "stft", "--mode", "pre-iwasawa"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["q"], serde_json::json!([[0.0, -0.5], [-0.5, 0.0]]));
    assert!((v["l"][0][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);

    let out = metaplectic(&["decompose", "--catalog", "stft", "--mode", "free"]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("tau-rotation"));

    let v = stdout_json(&metaplectic(&["decompose", "--catalog", "fourier", "--mode", "free"]));
    assert_eq!(v["q"], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));
    assert_eq!(v["b"], serde_json::json!([[1.0, 0.0], [0.0, 1.0]]));
    assert_eq!(v["p"], serde_json::json!([[0.0, 0.0], [0.0, 0.0]]));

    let v = stdout_json(&metaplectic(&["decompose", "--catalog", "stft", "--mode", "joint-svd"]));
    assert_eq!(v["sigma"].as_array().unwrap().len(), 2);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn catalog_listing_and_matrices() {
    let names = stdout_json(&metaplectic(&["catalog"]));
    assert_eq!(names, serde_json::json!(["stft", "ambiguity", "tau_wigner", "fourier", "chirp", "dilation"]));
    let out = metaplectic(&["catalog", "--catalog", "ambiguity", "--d", "2"]);
    let json: MatrixJson = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json.half_dim, 4);
    SymplecticMatrix::from_json(&json, 1e-12).unwrap();
}

#[test]
fn witness_needs_a_failing_verdict() {
    let out = metaplectic(&["witness", "--catalog", "stft"]);
    assert_eq!(code(&out), 5);
    assert!(out.stdout.is_empty());
    assert_eq!(code(&metaplectic(&["witness", "--catalog", "tau_wigner", "--tau", "0", "--quadratic"])), 5);
}

#[test]
fn fourier_witness_is_compact() {
    let out = metaplectic(&["witness", "--catalog", "fourier", "--grid", "256"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = stdout_json(&out);
    let area = v["support"]["area"].as_f64().unwrap();
    assert!((area - 4.0).abs() < 0.5, "{area}");
    assert!(v["mismatch"].as_f64().unwrap() < 5e-2);
    assert_eq!(v["recipe"]["mode"], "sesquilinear");
}

#[test]
fn wigner_gaussian_report_and_csv() {
    let path = scratch("stft.csv");
    let out = metaplectic(&["wigner", "--catalog", "stft", "--f", "gauss", "--g", "gauss", "--grid", "256", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: SupportReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.mass_fraction > 0.999);
    assert_eq!(report.eps, 1e-3);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x1,x2,re,im,abs"));
    assert_eq!(lines.count(), 256 * 256);
}

#[test]
fn four_axis_grids_go_to_binary() {
    let path = scratch("stft2.bin");
    let out = metaplectic(&["wigner", "--catalog", "stft", "--d", "2", "--grid", "8", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 8u64.pow(4) * 16);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(path.with_extension("bin.json")).unwrap()).unwrap();
    assert_eq!(sidecar["dims"], 4);
    assert_eq!(sidecar["N"], 8);
    assert_eq!(sidecar["order"], "row-major");
    assert_eq!(code(&metaplectic(&["wigner", "--catalog", "stft", "--d", "2", "--grid", "64"])), 6);
}

#[test]
fn selfcheck_passes_and_catches_a_bad_fft() {
    for seed in ["0", "7"] {
        let out = metaplectic(&["selfcheck", "--seed", seed]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(stdout_json(&out)["passed"], true);
    }
    let out = metaplectic(&["selfcheck", "--inject-fault", "fft-sign"]);
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"grid.fourier_sign"), "{failed:?}");
    assert!(stderr(&out).contains("grid.fourier_sign"));
    assert!(!stderr(&out).contains('{'));
}

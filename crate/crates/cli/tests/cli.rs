use std::path::PathBuf;
use std::process::{Command, Output};

use dirspaces::{DirichletSeries, Symbol};
use serde_json::Value;

fn dirspaces(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirspaces"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = dirspaces(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_translation_is_isometry() {
    let v = json(&["classify", "--symbol", r#"{"c0":1,"phi":{"terms":[[1,0,2]]}}"#, "--N", "32"]);
    assert_eq!(v["verdict"], "Isometry");
    assert_eq!(v["vertical_translation"], 2.0);
    assert!(v["isometry_defect"]["defect"].as_f64().unwrap() <= 1e-12);
    let symbol: Symbol = serde_json::from_value(v["symbol"].clone()).unwrap();
    assert_eq!(symbol.vertical_translation(), Some(2.0));
}

#[test]
fn classify_dilation_is_not_isometry() {
    let v = json(&["classify", "--c0", "2", "--alpha", "0", "--N", "32"]);
    assert_eq!(v["verdict"], "NotIsometry");
    assert!(v["isometry_defect"]["defect"].as_f64().unwrap() >= 0.29);
}

#[test]
fn weights_alpha0() {
    let v = json(&["weights", "--alpha", "0", "--N", "4"]);
    let w: Vec<f64> = serde_json::from_value(v["weights"].clone()).unwrap();
    let expected = [1.0, 0.5906, 0.4765, 0.4191];
    for (a, b) in w.iter().zip(expected) {
        assert!((a - b).abs() < 1e-4, "{w:?}");
    }
    for (n, wn) in w.iter().enumerate() {
        assert!((wn - 1.0 / (1.0 + ((n + 1) as f64).ln())).abs() < 1e-15);
    }
}

#[test]
fn norm_a2_of_one_plus_2s() {
    let v = json(&["norm", "--p", "2", "--alpha", "0", "--series", r#"{"terms":[[1,1,0],[2,1,0]]}"#]);
    assert!((v["value"].as_f64().unwrap() - 1.2612).abs() < 1e-4);
    assert_eq!(v["kind"], "exact");
}

#[test]
fn csv_output() {
    let out = dirspaces(&["weights", "--alpha", "1", "--N", "3", "--csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,weight");
    assert_eq!(lines.len(), 4);
    let out = dirspaces(&["classify", "--c0", "2", "--N", "16", "--csv"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("sigma,reference,norm,truncated"));
}

#[test]
fn config_file_and_flag_override() {
    let path = tmp(
        "classify.json",
        r#"{"command":"classify","symbol":{"c0":2,"phi":{"terms":[]}},"measure":{"type":"alpha","alpha":1},"N":64}"#,
    );
    let v = json(&["run", path.to_str().unwrap()]);
    assert_eq!(v["verdict"], "NotIsometry");
    assert_eq!(v["measure"], "alpha=1");
    let v = json(&["--config", path.to_str().unwrap(), "classify", "--c0", "1", "--phi", r#"{"terms":[[1,0,-1]]}"#]);
    assert_eq!(v["verdict"], "Isometry");
    assert_eq!(v["N"], 64);
}

#[test]
fn sampled_density_measure() {
    let samples: Vec<[f64; 2]> = (0..=400)
        .map(|i| {
            let s = i as f64 * 0.05;
            [s, 2.0 * (-2.0 * s).exp()]
        })
        .collect();
    let measure = serde_json::json!({ "type": "density", "samples": samples }).to_string();
    let v = json(&["weights", "--measure", &measure, "--N", "3"]);
    let w: Vec<f64> = serde_json::from_value(v["weights"].clone()).unwrap();
    assert!((w[1] - 1.0 / (1.0 + 2f64.ln())).abs() < 1e-6, "{w:?}");
}

#[test]
fn kernel_and_profile_reports_reparse() {
    let v = json(&["kernel", "--s", "2,0", "--w", "2,1", "--N", "200"]);
    assert!(v["kernel"]["tail"].as_f64().unwrap() > 0.0);
    let v = json(&["profile", "--c0", "1", "--phi", r#"{"terms":[[1,1,0]]}"#]);
    let symbol: Symbol = serde_json::from_value(v["symbol"].clone()).unwrap();
    assert_eq!(symbol.c0(), 1);
    for row in v["rows"].as_array().unwrap() {
        let sigma = row["sigma"].as_f64().unwrap();
        assert!((row["norm"].as_f64().unwrap() - 2f64.powf(-sigma - 1.0)).abs() < 1e-15);
    }
    let v = json(&["compose", "--c0", "2", "--N", "8"]);
    let phi: DirichletSeries = serde_json::from_value(v["symbol"]["phi"].clone()).unwrap();
    assert!(phi.is_zero());
    assert_eq!(v["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn check_symbol_reports_witness() {
    let v = json(&["check-symbol", "--c0", "1", "--phi", r#"{"terms":[[2,0.5,0]]}"#]);
    assert_eq!(v["certificate"]["verdict"], "certified_no");
    assert!(v["certificate"]["witness"][0].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(dirspaces(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dirspaces(&[]).status.code(), Some(2));
    assert_eq!(dirspaces(&["kernel"]).status.code(), Some(2));
    assert_eq!(dirspaces(&["weights", "--alpha", "-2"]).status.code(), Some(2));
    assert_eq!(dirspaces(&["compose", "--phi", "{not json"]).status.code(), Some(2));

    let out = dirspaces(&["kernel", "--s", "0.4,0", "--w", "2,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));
    let out = dirspaces(&["norm", "--hardy", "--series", r#"{"terms":[[1,1,0],[2,1,0]]}"#, "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

use std::path::Path;
use std::process::{Command, Output};

use oscillax::cli::{run, EXIT_CONFIG, EXIT_FAIL, EXIT_OK};
use oscillax::forms::{synthetic_maass, write_maass_json};
use serde_json::Value;

fn bin(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscillax"))
        .args(args)
        .env("OSCILLAX_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("oscillax").chain(args.iter().copied()))
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(code(&["verify-delta", "--Q", "2"]), EXIT_CONFIG);
    assert_eq!(code(&["verify-delta", "--Q", "65"]), EXIT_CONFIG);
    assert_eq!(code(&["verify-integrals", "--preset", "desk9"]), EXIT_CONFIG);
    assert_eq!(code(&["--precision", "extended", "verify-gamma"]), EXIT_CONFIG);
    assert_eq!(code(&["verify-gamma", "--threshold", "nope=1"]), EXIT_CONFIG);
    assert_eq!(code(&["verify-gamma", "--threshold", "gamma.stirling_rel"]), EXIT_CONFIG);
    assert_eq!(code(&["eval-l", "--t", "0:16"]), EXIT_CONFIG);
    assert_eq!(code(&["eval-l", "--pair", "delta-delta"]), EXIT_CONFIG);
    assert_eq!(code(&["verify-voronoi", "--form", "maass"]), EXIT_CONFIG);
    assert_eq!(code(&["no-such-command"]), EXIT_CONFIG);
}

#[test]
fn thresholds_decide_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = out.to_str().unwrap();
    assert_eq!(code(&["verify-gamma", "--output", o]), EXIT_OK);
    assert_eq!(code(&["verify-gamma", "--output", o, "--threshold", "gamma.envelope_constant=1.5"]), EXIT_FAIL);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["passed"], false);
    assert_eq!(r["failures"][0], "gamma.envelope_constant");
    assert_eq!(r["config"]["thresholds"]["gamma.envelope_constant"], 1.5);
}

#[test]
fn reports_are_deterministic_and_echo_config() {
    let dir = tempfile::tempdir().unwrap();
    let a = bin(&["--seed", "7", "verify-delta", "--Q", "12"], dir.path());
    let b = bin(&["--seed", "7", "verify-delta", "--Q", "12"], dir.path());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "verify-delta");
    assert_eq!(r["seed"], 7);
    assert_eq!(r["config"]["Q"], 12.0);
    assert_eq!(r["config"]["precision"], "double");
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["name"] == "delta.max_residual" && c["pass"] == true));
    // the decay-slope target is not met, so the command reports failure
    assert_eq!(a.status.code(), Some(EXIT_FAIL));
}

#[test]
fn csv_checks_match_json_checks() {
    let dir = tempfile::tempdir().unwrap();
    let j = bin(&["verify-gamma"], dir.path());
    let c = bin(&["verify-gamma", "--format", "csv"], dir.path());
    let r: Value = serde_json::from_slice(&j.stdout).unwrap();
    let text = String::from_utf8(c.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,value,relation,threshold,pass"));
    for (line, check) in lines.zip(r["checks"].as_array().unwrap()) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], check["name"]);
        assert_eq!(f[1].parse::<f64>().unwrap(), check["value"].as_f64().unwrap());
    }
}

#[test]
fn eval_l_scan_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("scan.csv");
    let plot = dir.path().join("plot.csv");
    let c = bin(
        &["eval-l", "--pair", "delta-e4delta", "--t", "0:16:8", "--format", "csv", "--output", csv_path.to_str().unwrap(), "--plot-data", plot.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(c.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&c.stderr));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,re_L,im_L,abs_L,certified_error");
    assert_eq!(rows.len(), 9);
    assert_eq!(std::fs::read_to_string(&plot).unwrap().lines().count(), 9);

    let j = bin(&["eval-l", "--t", "0:16:8"], dir.path());
    let r: Value = serde_json::from_slice(&j.stdout).unwrap();
    let scan = r["data"]["scan"]["rows"].as_array().unwrap();
    assert_eq!(scan.len(), 8);
    for (line, row) in rows[1..].iter().zip(scan) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[0], row["t"].as_f64().unwrap());
        assert_eq!(f[3], row["abs_l"].as_f64().unwrap());
    }
    for res in r["data"]["residuals"].as_array().unwrap() {
        assert!(res[2].as_f64().unwrap() <= 1e-4);
    }
}

#[test]
fn maass_identity_is_skipped_but_transforms_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("maass.json");
    write_maass_json(&synthetic_maass(9.533695, 0, 1, 200, 3), &path).unwrap();
    let o = bin(&["verify-voronoi", "--form", "maass", "--coeff-file", path.to_str().unwrap()], dir.path());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["data"]["identity"]["status"], "SKIPPED");
    assert_eq!(r["data"]["transforms"].as_array().unwrap().len(), 3);
    assert_eq!(o.status.code(), Some(EXIT_OK));
}

#[test]
fn single_voronoi_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["verify-voronoi", "--form", "delta", "--q", "3", "--N", "100"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["checks"].as_array().unwrap().len(), 1);
    // the coefficient table was cached under the env directory
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
}

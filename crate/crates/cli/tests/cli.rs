use std::fmt::Write as _;
use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> (i32, Value) {
    let status =
        Command::new(env!("CARGO_BIN_EXE_lightcone")).args(args).arg("--out").arg(out).output().expect("binary runs");
    let text = std::fs::read_to_string(out.join("summary.json")).unwrap_or_else(|_| "null".into());
    (status.status.code().unwrap_or(-1), serde_json::from_str(&text).unwrap())
}

fn csv_column(path: &Path, name: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let col = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn unit_cone_volume() {
    let dir = TempDir::new().unwrap();
    let (code, s) = run(&["dod-volume", "--n", "2", "--grid", "1024", "--radial", "1024"], dir.path());
    assert_eq!(code, 0);
    let r = &s["results"];
    assert!((r["volume"].as_f64().unwrap() - 2.0944).abs() < 1e-4);
    assert!((r["oracle"].as_f64().unwrap() - 2.0943951).abs() < 1e-7);
    assert!(r["rel_err"].as_f64().unwrap() < 1e-3);
    assert_eq!(s["passed"], true);
}

#[test]
fn descent_trace_volume_never_drops_beyond_grid_noise() {
    let dir = TempDir::new().unwrap();
    let (code, s) = run(&["descent", "--seed", "42", "--iters", "300"], dir.path());
    assert_eq!(code, 0);
    let volumes = csv_column(&dir.path().join("trace.csv"), "volume");
    assert_eq!(volumes.len(), 301);
    let eps = s["results"]["eps_grid"].as_f64().unwrap();
    assert!(volumes.windows(2).all(|w| w[1] >= w[0] - eps));
    assert!(s["results"]["final_over_cap"].as_f64().unwrap() > 0.98);
}

#[test]
fn isoperimetric_batch() {
    let dir = TempDir::new().unwrap();
    let (code, _) = run(&["verify-isoperimetric", "--cases", "50", "--seed", "7"], dir.path());
    assert_eq!(code, 0);
    let ratios = csv_column(&dir.path().join("cases.csv"), "ratio");
    assert_eq!(ratios.len(), 50);
    assert!(ratios.iter().all(|r| *r <= 1.0 + 1e-2));
}

#[test]
fn outputs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    let args = ["descent", "--seed", "3", "--iters", "20", "--grid", "128", "--radial", "128"];
    run(&args, dir.path());
    let (summary, trace) = (read("summary.json"), read("trace.csv"));
    run(&args, dir.path());
    assert_eq!(summary, read("summary.json"));
    assert_eq!(trace, read("trace.csv"));
    let args = ["verify-hyperboloid", "--seed", "4", "--cases", "2", "--grid", "64", "--radial", "32"];
    run(&args, dir.path());
    let cases = read("cases.csv");
    run(&args, dir.path());
    assert_eq!(cases, read("cases.csv"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("batch.cfg");
    std::fs::write(&config, "# small batch\nseed = 7\ncases = 3\ngrid = 128\nradial = 128\n").unwrap();
    let out = dir.path().join("a");
    let (code, s) = run(&["verify-euclid", "--config", config.to_str().unwrap(), "--cases", "2"], &out);
    assert_eq!(code, 0);
    assert_eq!(s["settings"]["seed"], 7);
    assert_eq!(csv_column(&out.join("cases.csv"), "ratio").len(), 2);
}

#[test]
fn failed_checks_exit_nonzero_with_a_record() {
    let dir = TempDir::new().unwrap();
    let (code, s) = run(&["dod-volume", "--grid", "64", "--radial", "64", "--tolerance", "1e-9"], dir.path());
    assert_eq!(code, 1);
    assert_eq!(s["passed"], false);
    let f = &s["failures"][0];
    assert_eq!(f["name"], "volume relative error");
    assert!(f["measured"].as_f64().unwrap() > f["limit"].as_f64().unwrap());
}

#[test]
fn input_errors_name_the_file_and_line() {
    let dir = TempDir::new().unwrap();
    let profile = dir.path().join("bad.csv");
    std::fs::write(&profile, "theta,value\n0,1\n1,oops\n2,1\n").unwrap();
    let (code, s) = run(&["perimeter", "--profile", profile.to_str().unwrap()], dir.path());
    assert_eq!(code, 2);
    let msg = s["error"].as_str().unwrap();
    assert!(msg.contains("bad.csv") && msg.contains('3'), "{msg}");

    let (code, s) = run(&["descent"], &dir.path().join("noseed"));
    assert_eq!(code, 2);
    assert!(s["error"].as_str().unwrap().contains("--seed"));
}

#[test]
fn polarised_profile_file_reads_back() {
    let dir = TempDir::new().unwrap();
    let (code, s) =
        run(&["polarize", "--grid", "256", "--radial", "256", "--alpha", "0.8", "--angle", "1"], dir.path());
    assert_eq!(code, 0);
    let file = dir.path().join("polarized.csv");
    let (code, t) = run(&["perimeter", "--profile", file.to_str().unwrap()], &dir.path().join("again"));
    assert_eq!(code, 0);
    let (a, b) = (s["results"]["perimeter_after"].as_f64().unwrap(), t["results"]["perimeter"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-12 * a);
}

#[test]
fn hyperboloid_inputs_from_files() {
    let dir = TempDir::new().unwrap();
    let set = dir.path().join("balls.csv");
    std::fs::write(&set, "s,theta,delta\n0.6,0,0.3\n0.6,3.14159,0.3\n").unwrap();
    let (code, s) = run(&["hyp-dod", "--set", set.to_str().unwrap(), "--grid", "128", "--radial", "64"], dir.path());
    assert_eq!(code, 0);
    assert!(s["results"]["oracle"].is_null());
    assert!(s["results"]["dod_volume"].as_f64().unwrap() > 0.0);

    // Flat disk spanning the rim of the ball of radius 0.7 about e0.
    let (cells, half) = (80usize, 1.0f64);
    let h = 2.0 * half / cells as f64;
    let rho2 = 0.7f64.sinh().powi(2);
    let mut text = format!("spacing {h}\nx1,x2,nu,level\n");
    for j in 0..=cells {
        for i in 0..=cells {
            let (x, y) = (-half + i as f64 * h, -half + j as f64 * h);
            let _ = writeln!(text, "{x},{y},{},{}", 0.7f64.cosh(), rho2 - x * x - y * y);
        }
    }
    let graph = dir.path().join("disk.csv");
    std::fs::write(&graph, text).unwrap();
    let out = dir.path().join("disk");
    let (code, s) =
        run(&["verify-hyp-disk", "--graph", graph.to_str().unwrap(), "--grid", "128", "--radial", "64"], &out);
    assert_eq!(code, 0, "{s}");
    assert_eq!(s["results"]["outside"], 0);
    assert!(s["results"]["max_ratio"].as_f64().unwrap() <= 1.01);
}

#[test]
fn boosted_family_limit_perimeter() {
    let dir = TempDir::new().unwrap();
    let args = ["verify-infinity", "--c", "0.7", "--k", "0.6", "--s-max", "8", "--shells", "400", "--grid", "128"];
    let (code, s) = run(&args, dir.path());
    assert_eq!(code, 0);
    assert!((s["results"]["check"]["ratio"].as_f64().unwrap() - 1.0).abs() < 1e-2);
}

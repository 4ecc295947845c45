//! End-to-end runs of the `tailpath` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tailpath(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailpath"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut lines = text.lines();
    let header = lines.next().expect("header row").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(|f| f.parse().expect("numeric field")).collect()).collect();
    (header, rows)
}

// the documented rounded values, not the constant
#[test]
#[allow(clippy::approx_constant)]
fn mtcm_smo_reports_closed_form() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["mtcm", "--model", "smo:alpha=0.35,beta=0.7"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let b = v["b_star"].as_f64().unwrap();
    let l = v["lambda_star"].as_f64().unwrap();
    assert!((b - 1.414214).abs() < 1e-6, "{b}");
    assert!((l - 0.494975).abs() < 1e-6, "{l}");
    assert_eq!(v["unique"], serde_json::Value::Bool(true));
    assert!(v["n_evals"].as_u64().unwrap() > 0);
    let on_disk: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("smo_mtcm.json")).unwrap()).unwrap();
    assert_eq!(on_disk, v);
}

#[test]
fn t_path_ratio_tends_to_one() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["path", "--model", "t:nu=4,rho=0.5", "--schedule", "default"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let (header, rows) = read_csv(&dir.path().join("t_path.csv"));
    assert_eq!(header, ["u", "phi_star", "v_star", "pi", "pi_over_u", "ratio_b", "boundary_flag"]);
    assert_eq!(rows.len(), 7);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 1e-4);
    assert!((last[5] - 1.0).abs() <= 0.02, "ratio_b {}", last[5]);
    assert!(rows.iter().all(|r| r[6] == 0.0 || r[6] == 1.0));
}

#[test]
fn verify_fgm_reports_non_existence_and_passes() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["verify", "--suite", "fgm"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS fgm: boundary maximizers"), "{text}");
    assert!(text.contains("PASS fgm: degenerate tail detected"), "{text}");
    assert!(text.contains("2 passed, 0 failed"), "{text}");
}

#[test]
fn failed_verification_exits_one() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["verify", "--suite", "smo", "--schedule", "0.9,0.8"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL smo"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["mtcm", "--model", "gumbel:theta=2"],
        vec!["mtcm", "--model", "smo:alpha=0.35"],
        vec!["mtcm", "--model", "t:nu=4,rho=2"],
        vec!["path", "--model", "indep", "--schedule", "0.1,0.5"],
        vec!["path", "--model", "indep", "--schedule", "0,0.5"],
        vec!["spectral", "--model", "smo:alpha=0.35,beta=0.7"],
        vec!["singular", "--model", "t:nu=4,rho=0.5"],
        vec!["verify", "--suite", "nope"],
        vec!["frobnicate"],
    ] {
        let o = tailpath(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn numerical_failure_exits_three_and_names_the_operation() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["mtcm", "--model", "fgm:theta=-1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("mtcm failed"), "{}", stderr(&o));
}

#[test]
fn thread_cap_is_validated() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tailpath"))
            .args(["verify", "--suite", "fgm", "--out"])
            .arg(dir.path())
            .env("TAILPATH_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("1").status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        let o = tailpath(&["figure", "--format", "svg", "--seed", "7"], dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in &names {
        let (x, y) = (fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
        assert!(x == y, "{name:?} differs between runs");
    }

    let c = TempDir::new().unwrap();
    tailpath(&["sample", "--model", "sag:alpha=0.35,beta=0.7,theta=2", "--seed", "8"], c.path());
    assert_ne!(fs::read(a.path().join("sag_sample.csv")).unwrap(), fs::read(c.path().join("sag_sample.csv")).unwrap());
}

#[test]
fn figure_writes_every_panel_input() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["figure"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let expect = |name: &str, header: &[&str], min_rows: usize| {
        let (h, rows) = read_csv(&dir.path().join(name));
        assert_eq!(h, header, "{name}");
        assert!(rows.len() >= min_rows, "{name}: {} rows", rows.len());
        rows
    };
    for m in ["smo", "sag"] {
        expect(&format!("{m}_profile.csv"), &["b", "lambda_profile"], 401);
        let marker = expect(&format!("{m}_profile_marker.csv"), &["b_star", "lambda_star", "unique"], 1);
        assert!((marker[0][0] - 2f64.sqrt()).abs() < 1e-4);
        let pairs = expect(&format!("{m}_sample.csv"), &["u", "v"], 5000);
        assert_eq!(pairs.len(), 5000);
        assert!(pairs.iter().flatten().all(|&x| (0.0..=1.0).contains(&x)));
        let path = expect(
            &format!("{m}_path.csv"),
            &["u", "phi_star", "v_star", "pi", "pi_over_u", "ratio_b", "boundary_flag"],
            100,
        );
        assert!((path.last().unwrap()[5] - 2f64.sqrt()).abs() < 0.02);
        assert!(dir.path().join(format!("{m}_mtcm.json")).exists());
    }
    expect("smo_singular.csv", &["u", "x_star", "v_star", "ratio", "residual"], 100);
    assert!(stdout(&o).contains("b* = 1.41421"));
}

#[test]
fn spectral_and_profile_tables() {
    let dir = TempDir::new().unwrap();
    let o = tailpath(&["spectral", "--model", "t:nu=4,rho=0.5", "--points", "51", "--format", "json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for (name, header) in [("h", ["w", "h"]), ("m", ["a", "m"]), ("L", ["s", "L"])] {
        let (h, rows) = read_csv(&dir.path().join(format!("t_spectral_{name}.csv")));
        assert_eq!(h, header);
        assert_eq!(rows.len(), 51);
        assert!(rows.iter().all(|r| r[1].is_finite() && r[1] >= 0.0));
        assert!(dir.path().join(format!("t_spectral_{name}.json")).exists());
    }
    // h is symmetric about 1/2 on the symmetric grid
    let (_, h) = read_csv(&dir.path().join("t_spectral_h.csv"));
    for k in 0..h.len() {
        let (a, b) = (h[k][1], h[h.len() - 1 - k][1]);
        assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    let o = tailpath(&["profile", "--model", "fgm:theta=0.5", "--points", "11"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = read_csv(&dir.path().join("fgm_profile.csv"));
    assert!(rows.iter().all(|r| r[1].abs() < 1e-10));
    let (_, marker) = read_csv(&dir.path().join("fgm_profile_marker.csv"));
    assert!(marker.is_empty());
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let dir = TempDir::new().unwrap();
    tailpath(&["sample", "--model", "indep", "--n", "20"], dir.path());
    let text = fs::read_to_string(dir.path().join("indep_sample.csv")).unwrap();
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        let mantissa = field.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 17, "{field}");
    }
}

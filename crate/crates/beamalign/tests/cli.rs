//! End-to-end checks of the command-line binary: each subcommand runs and
//! prints what it promises, config files overlay defaults with flags on
//! top, repeated sweeps are byte-identical, and bad input fails loudly.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

/// Path of the compiled binary under test.
fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_beamalign")
}

/// Runs the binary with `args`, panicking if it cannot be spawned.
fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should spawn")
}

/// Fresh scratch directory unique to one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("beamalign-cli-{}-{}", name, std::process::id()));
    fs::create_dir_all(&dir).expect("scratch dir should be creatable");
    dir
}

/// Extracts the value of a `key = value` stdout line.
fn field(stdout: &str, key: &str) -> f64 {
    let prefix = format!("{key} = ");
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("missing '{key}' line in:\n{stdout}"))
        .trim()
        .parse()
        .unwrap_or_else(|_| panic!("unparseable '{key}' line in:\n{stdout}"))
}

#[test]
fn test_01_solve_prints_alignment_summary() {
    let out = run(&["solve", "--seed", "181", "--no-timing"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();

    let rate = field(&stdout, "rate");
    assert!(rate.is_finite() && rate > 0.0);
    let eta = field(&stdout, "eta");
    assert!(eta >= 1.0 && eta.fract() == 0.0);
    assert!(field(&stdout, "delta") > 0.0);
    assert!(field(&stdout, "objective").is_finite());
    assert!(field(&stdout, "real_roots") >= 0.0);
    let tau = 2.0 * std::f64::consts::PI;
    for key in ["theta_rx", "theta_tx"] {
        let v = field(&stdout, key);
        assert!((0.0..=tau).contains(&v), "{key} = {v} outside [0, 2pi]");
    }
}

#[test]
fn test_02_baseline_reports_grid_best() {
    let out = run(&["baseline", "--grid", "90", "--seed", "181"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();

    assert_eq!(field(&stdout, "grid"), 90.0);
    assert!(field(&stdout, "rate") > 0.0);
    let tau = 2.0 * std::f64::consts::PI;
    assert!((0.0..=tau).contains(&field(&stdout, "theta_rx")));
    assert!((0.0..=tau).contains(&field(&stdout, "theta_tx")));
}

#[test]
fn test_03_series_writes_per_monomial_csv() {
    let dir = scratch("series");
    let path = dir.join("coeffs.csv");
    let out = run(&[
        "series",
        "--which",
        "f2",
        "--eps",
        "0.7",
        "--seed",
        "181",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = fs::read_to_string(&path).expect("series csv should exist");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("norm_mag,deg_rx,deg_tx,selected"));
    let mut rows = 0;
    let mut selected = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4, "bad row '{line}'");
        let mag: f64 = cols[0].parse().unwrap();
        assert!((0.0..=1.0).contains(&mag));
        assert!(matches!(cols[3], "0" | "1"), "bad flag in '{line}'");
        rows += 1;
        selected += usize::from(cols[3] == "1");
    }
    assert!(rows > 0, "series table should not be empty");
    assert!(selected > 0, "threshold 0.7 should keep at least one term");
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn test_04_sweep_runs_are_byte_identical() {
    let dir = scratch("sweep");
    let args = |csv: &str, svg: &str| {
        vec![
            "sweep".to_string(),
            "--seed".to_string(),
            "181".to_string(),
            "--no-timing".to_string(),
            "--eps-pairs".to_string(),
            "0.6:0.6,0.7:0.7".to_string(),
            "--out".to_string(),
            dir.join(csv).to_str().unwrap().to_string(),
            "--svg".to_string(),
            dir.join(svg).to_str().unwrap().to_string(),
        ]
    };
    for (csv, svg) in [("a.csv", "a.svg"), ("b.csv", "b.svg")] {
        let out = Command::new(bin())
            .args(args(csv, svg))
            .output()
            .expect("binary should spawn");
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    let a = fs::read(dir.join("a.csv")).unwrap();
    let b = fs::read(dir.join("b.csv")).unwrap();
    assert_eq!(a, b, "two sweep runs should serialize identically");
    assert_eq!(
        fs::read(dir.join("a.svg")).unwrap(),
        fs::read(dir.join("b.svg")).unwrap()
    );

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eps1,eps2,eta,delta,objective,r_est,r_exh,abs_diff,n_real_roots,status,wall_ms")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 11, "bad row '{row}'");
        assert_eq!(cols[9], "ok");
        assert_eq!(cols[10], "0", "--no-timing should zero wall_ms");
    }

    let svg = fs::read_to_string(dir.join("a.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn test_05_config_file_overridden_by_flags() {
    let dir = scratch("config");
    let path = dir.join("align.conf");
    fs::write(&path, "# scratch config\nseed = 7\n\ndegree_cap = 12\n").unwrap();
    let conf = path.to_str().unwrap();

    let from_file = run(&["solve", "--config", conf]);
    let overridden = run(&["solve", "--config", conf, "--seed", "181"]);
    let explicit = run(&["solve", "--seed", "181", "--degree-cap", "12"]);
    for out in [&from_file, &overridden, &explicit] {
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    let explicit_stdout = String::from_utf8(explicit.stdout).unwrap();
    assert_eq!(
        String::from_utf8(overridden.stdout).unwrap(),
        explicit_stdout,
        "--seed should beat the config file, all else from the file"
    );
    assert_ne!(
        String::from_utf8(from_file.stdout).unwrap(),
        explicit_stdout,
        "seed 7 and seed 181 should align differently"
    );
    let _ = fs::remove_dir_all(&dir);
}

#[test]
fn test_06_bad_input_exits_nonzero_with_message() {
    let cases: [&[&str]; 3] = [
        &["solve", "--eps1", "1.5"],
        &["sweep", "--eps-pairs", "nonsense"],
        &["solve", "--config", "/nonexistent/align.conf"],
    ];
    for args in cases {
        let out = run(args);
        assert!(!out.status.success(), "{args:?} should fail");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(
            stderr.contains("error:"),
            "no message for {args:?}: {stderr}"
        );
    }
}

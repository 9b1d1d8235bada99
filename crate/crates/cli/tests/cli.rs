use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rbment(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbment"))
        .args(args)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run_ok(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Vec<PathBuf> {
    let mut args = vec![
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend(extra);
    let o = rbment(&args);
    assert!(
        o.status.success(),
        "{cmd} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout)
        .unwrap()
        .lines()
        .map(PathBuf::from)
        .collect()
}

fn assert_table(path: &Path, header_start: &str) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# rbment "));
    assert!(lines.next().unwrap().starts_with("# config_hash "));
    assert!(
        lines.next().unwrap().starts_with(header_start),
        "{}",
        path.display()
    );
    assert!(lines.next().is_some(), "{} has no rows", path.display());
}

const CONFIGS: &[(&str, &str)] = &[
    (
        "phase-diagram",
        r#"{"u": [0.0], "v": [1.0, "inf"], "lambda": [0.5, 1.5]}"#,
    ),
    (
        "page-curve",
        r#"{"lambda": [0.5], "analytic": {"u": 0.0, "v": "inf", "points": 5},
            "numeric": {"n": [4, 6], "u": 0.0, "v": 2.0, "samples": 6}, "seed": 1}"#,
    ),
    (
        "spectrum",
        r#"{"ensemble": {"n": 6, "m": 6, "u": 0.0, "v": 2.0}, "samples": 5, "bins": 8}"#,
    ),
    (
        "level-stats",
        r#"{"ensemble": {"n": 8, "m": 8, "u": 0.0, "v": 2.0}, "samples": 4, "goe_samples": 500}"#,
    ),
    (
        "fractal",
        r#"{"q": [2, 4], "lambda": [0.25, 1.0],
            "numeric": {"n": [4, 6], "lambda": [0.5], "u": 0.0, "v": 2.0, "samples": 5}}"#,
    ),
    (
        "design-check",
        r#"{"ensemble": {"n": 6, "m": 6, "u": 0.5, "v": 0.5}, "samples": 10, "haar_control": true}"#,
    ),
    (
        "norm-fluct",
        r#"{"n": [4, 6, 8, 10], "lambda": [0.5], "u": 0.0, "v": 1.0, "samples": 10}"#,
    ),
];

#[test]
fn every_subcommand_writes_tables() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    for (cmd, body) in CONFIGS {
        let cfg = write_config(d.path(), &format!("{cmd}.json"), body);
        let files = run_ok(cmd, &cfg, &out, &[]);
        assert!(!files.is_empty(), "{cmd} reported no files");
        for f in &files {
            assert!(
                f.starts_with(out.join(cmd)),
                "{} outside its subdirectory",
                f.display()
            );
            assert!(f.exists());
        }
    }
    assert_table(
        &out.join("phase-diagram/phase_diagram.csv"),
        "u,v,lambda,phi_star",
    );
    assert_table(
        &out.join("page-curve/page_analytic_lambda0.5.csv"),
        "a,s2_density",
    );
    assert_table(
        &out.join("page-curve/page_numeric_n6_lambda0.5.csv"),
        "a,s2_density,s2_stderr",
    );
    assert_table(
        &out.join("spectrum/spectrum_mean.csv"),
        "k,xi_mean,xi_stderr",
    );
    assert_table(
        &out.join("spectrum/spectrum_density.csv"),
        "eps_lo,eps_hi,density,mp_density",
    );
    assert_table(
        &out.join("level-stats/ratio_histogram.csv"),
        "r_lo,r_hi,p_numeric",
    );
    assert_table(
        &out.join("fractal/fractal_analytic.csv"),
        "q,lambda,dq,valid",
    );
    assert_table(
        &out.join("fractal/fractal_numeric.csv"),
        "n,m,lambda,q,dq_mean",
    );
    assert_table(
        &out.join("design-check/design_values.csv"),
        "test_state,value,stderr,haar_value",
    );
    assert_table(
        &out.join("norm-fluct/norm_fluct.csv"),
        "n,m,lambda,u,v,statistic",
    );
    assert_table(
        &out.join("norm-fluct/norm_fluct_fit.csv"),
        "lambda,intercept",
    );

    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(out.join("design-check/design_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["data"]["symmetry_exact"], true);
    assert_eq!(report["data"]["null_vectors_ok"], true);
}

#[test]
fn reruns_are_byte_identical_and_seed_changes_hash() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "s.json", CONFIGS[2].1);
    let a = run_ok("spectrum", &cfg, &d.path().join("a"), &[]);
    let b = run_ok("spectrum", &cfg, &d.path().join("b"), &["--threads", "1"]);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(
            fs::read(x).unwrap(),
            fs::read(y).unwrap(),
            "{}",
            x.display()
        );
    }
    let c = run_ok("spectrum", &cfg, &d.path().join("c"), &["--seed", "99"]);
    let first = fs::read_to_string(&a[0]).unwrap();
    let seeded = fs::read_to_string(&c[0]).unwrap();
    assert_ne!(first.lines().nth(1), seeded.lines().nth(1));
    assert_ne!(first, seeded);
}

#[test]
fn existing_output_needs_force() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "f.json", CONFIGS[4].1);
    let out = d.path().join("out");
    let first = run_ok("fractal", &cfg, &out, &[]);
    let before = fs::read(&first[0]).unwrap();
    let o = rbment(&[
        "fractal",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--force"));
    let again = run_ok("fractal", &cfg, &out, &["--force"]);
    assert_eq!(before, fs::read(&again[0]).unwrap());
}

#[test]
fn config_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let cases = [
        (
            "design-check",
            r#"{"ensemble": {"n": 6, "m": 6, "u": 0, "v": 1}, "samples": 4, "unknown": 1}"#,
        ),
        (
            "spectrum",
            r#"{"ensemble": {"n": 6, "u": 0, "v": 1}, "samples": 4}"#,
        ),
        (
            "fractal",
            r#"{"q": [5], "lambda": [0.5], "numeric": {"n": [4], "lambda": [0.5], "u": 0, "v": 1, "samples": 2}}"#,
        ),
        (
            "phase-diagram",
            r#"{"u": [0.0], "v": ["huge"], "lambda": [0.5]}"#,
        ),
        ("norm-fluct", "not json"),
    ];
    for (i, (cmd, body)) in cases.iter().enumerate() {
        let cfg = write_config(d.path(), &format!("bad{i}.json"), body);
        let o = rbment(&[
            cmd,
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--force",
        ]);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = rbment(&["spectrum", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn capacity_and_budget_errors_exit_3() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let cases = [
        (
            "spectrum",
            r#"{"ensemble": {"n": 30, "m": 4, "u": 0, "v": 1}, "samples": 2}"#,
        ),
        (
            "design-check",
            r#"{"ensemble": {"n": 16, "m": 4, "u": 0, "v": 1}, "samples": 2}"#,
        ),
        (
            "norm-fluct",
            r#"{"n": [10], "lambda": [0.5], "u": 0, "v": 1, "samples": 10, "budget": 1000}"#,
        ),
    ];
    for (i, (cmd, body)) in cases.iter().enumerate() {
        let cfg = write_config(d.path(), &format!("big{i}.json"), body);
        let o = rbment(&[
            cmd,
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--force",
        ]);
        assert_eq!(
            o.status.code(),
            Some(3),
            "{cmd}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn shipped_ci_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/ci");
    let d = tempfile::tempdir().unwrap();
    for (cmd, _) in CONFIGS {
        let files = run_ok(cmd, &dir.join(format!("{cmd}.json")), d.path(), &[]);
        assert!(!files.is_empty(), "{cmd}");
    }
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(3)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn single_point_phase_grid_matches_library() {
    use rbment::statmech::{minimize_z0, s2_estimate, ModelParams};
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "p.json",
        r#"{"u": [0.5], "v": [2.0], "lambda": [0.75]}"#,
    );
    let files = run_ok("phase-diagram", &cfg, d.path(), &[]);
    let rows = data_rows(&files[0]);
    assert_eq!(rows.len(), 1);
    let p = ModelParams::new(0.5, 2.0, 0.75).unwrap();
    let z0 = minimize_z0(&p);
    let s2 = s2_estimate(0.5, &p).unwrap();
    let cell = |k: usize| rows[0][k].parse::<f64>().unwrap();
    assert_eq!(cell(3), z0.phi);
    assert_eq!(cell(5), z0.free_energy);
    assert_eq!(cell(9), s2.value);
}

#[test]
fn spectrum_rank_limited_and_zero_weight() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(
        d.path(),
        "r.json",
        r#"{"ensemble": {"n": 8, "m": 2, "u": 0.3, "v": 1.0}, "samples": 6, "bins": 6}"#,
    );
    let files = run_ok("spectrum", &cfg, &d.path().join("rank"), &[]);
    let mean = data_rows(&files[0]);
    assert_eq!(mean.len(), 16);
    let nonzero = mean
        .iter()
        .filter(|r| r[1].parse::<f64>().unwrap() > 1e-12)
        .count();
    assert_eq!(nonzero, 4);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&files[2]).unwrap()).unwrap();
    assert_eq!(summary["data"]["rank_limited"], true);
    assert_eq!(summary["data"]["mean_zero_eigenvalues"], 12.0);

    let cfg = write_config(
        d.path(),
        "z.json",
        r#"{"ensemble": {"n": 6, "m": 3, "u": 0.0, "v": 0.0}, "samples": 3, "bins": 4}"#,
    );
    let files = run_ok("spectrum", &cfg, &d.path().join("zero"), &[]);
    let mean = data_rows(&files[0]);
    assert!((mean[0][1].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    assert!(mean[1..]
        .iter()
        .all(|r| r[1].parse::<f64>().unwrap().abs() < 1e-12));
}

#[test]
fn fractal_rejects_q_below_two() {
    let d = tempfile::tempdir().unwrap();
    let cfg = write_config(d.path(), "q.json", r#"{"q": [1], "lambda": [0.5]}"#);
    let o = rbment(&[
        "fractal",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        d.path().to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

//! End-to-end checks of the `hylie` binary: exit codes, config merging,
//! output formats, and the documented example values.

use std::path::Path;
use std::process::{Command, Output};

fn hylie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hylie"))
        .args(args)
        .output()
        .expect("spawn hylie")
}

fn hylie_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hylie"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn hylie")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn usage_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["plancherel", "--group", "ZZ9"],
        vec!["plancherel"],
        vec!["certificate", "--group", "A1", "--p", "1.9", "--q", "1.2"],
        vec!["local-constant", "--group", "A1", "--grid", "100"],
        vec!["local-constant", "--group", "A1", "--profile", "bumpy"],
        vec!["local-constant", "--group", "A1", "--format", "xml"],
        vec!["local-constant", "--group", "A1", "--k-list", "a,b"],
    ];
    for args in cases {
        let out = hylie(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "{args:?} produced no diagnostics");
    }
    // Unknown subcommands and flags are also usage errors.
    assert_eq!(hylie(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        hylie(&["plancherel", "--group", "A1", "--bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn plancherel_passes_and_breach_exits_1() {
    let out = hylie(&["plancherel", "--group", "A1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "plancherel");
    assert_eq!(v["config"]["group"], "A1");
    assert_eq!(v["report"]["pass"], true);
    let worst = v["report"]["worst_residual"].as_f64().unwrap();
    assert!(worst < 1e-10, "A1 worst residual {worst}");

    // An unmeetable tolerance still writes the full report but exits 1.
    // (Five trials: the early seeds happen to reproduce exactly, so the
    // worst residual over fewer trials can be 0.0.)
    let out = hylie(&[
        "plancherel", "--group", "A2", "--trials", "5", "--tolerance", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds tolerance"));
}

#[test]
fn local_constant_q2_is_unit() {
    let out = hylie(&[
        "local-constant", "--group", "A1", "--q", "2", "--grid", "256",
        "--k-list", "1,2", "--xi-max", "20", "--xi-step", "0.1",
        "--euclid-n", "256",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let estimate = v["report"]["estimate"].as_f64().unwrap();
    assert!(
        (estimate - 1.0).abs() <= 1e-8,
        "q=2 estimate {estimate} should be 1 within 1e-8"
    );
    assert_eq!(v["config"]["q"], 2.0);
}

#[test]
fn config_file_merges_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# base configuration\ngroup=A1\nq=4/3\ngrid=256\nk_list=1,2\n\
         xi_max=20\nxi_step=0.1\neuclid_n=256\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = hylie(&["local-constant", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["config"]["q"], 4.0 / 3.0);
    assert_eq!(v["config"]["grid"], 256);

    let out = hylie(&["local-constant", "--config", cfg, "--q", "3/2"]);
    let v = stdout_json(&out);
    assert_eq!(v["config"]["q"], 1.5, "flag must override the file");

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "grd=256\n").unwrap();
    let out = hylie(&["local-constant", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "unknown key must be rejected");
}

#[test]
fn out_flag_writes_file_and_csv_has_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let out = hylie_in(
        dir.path(),
        &[
            "certificate", "--group", "A1", "--n-list", "1,2", "--grid", "256",
            "--cutoff", "40", "--format", "csv", "--out",
            report.to_str().unwrap(),
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty(), "silent when writing to --out");
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("# version="));
    assert!(text.contains("# command=certificate"));
    assert!(text.contains("n,lower_bound,upper_bound,K,residual_max"));
    assert!(text.contains("# lower_growth_exponent="));
    let rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 3, "header plus one row per size:\n{text}");
}

#[test]
fn character_mode_reports_growth() {
    let out = hylie(&[
        "certificate", "--group", "A1", "--character", "--n-list", "2,4,8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["config"]["character"], true);
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let n = row["n"].as_f64().unwrap();
        let target = n.powf(1.0 / 3.0);
        let phat = row["phat_norm"].as_f64().unwrap();
        assert!((phat - target).abs() <= 1e-10 * target);
    }
    let slope = v["report"]["phi_growth_exponent"].as_f64().unwrap();
    assert!(slope > 0.2, "space-norm growth exponent {slope}");
}

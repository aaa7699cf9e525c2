use std::path::Path;
use std::process::{Command, Output};

fn hybridbf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hybridbf"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn successful_run_writes_complete_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = hybridbf(&[
        "run",
        "sinr-vs-snr",
        "--out",
        s(&out),
        "--trials",
        "3",
        "--snapshots",
        "16",
        "--seed",
        "5",
        "--gamma",
        "7",
        "--plot",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = hybridbf::read_csv(&out).unwrap();
    assert_eq!(t.rows.len(), 13);
    assert_eq!(t.meta("seed"), Some("5"));
    assert_eq!(t.meta("trials"), Some("3"));
    assert_eq!(t.meta("gamma"), Some("7.0"));
    let script = std::fs::read_to_string(dir.path().join("fig.gp")).unwrap();
    assert!(script.contains("'fig.csv' using 1:2"));
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    let out = dir.path().join("r.csv");
    std::fs::write(
        &cfg,
        format!(
            "experiment = rmse-vs-epsilon\ntrials = 2\nsweep = 1, 2\nsnapshots = 8\n\
             gamma_noise_mult = 30\noutput = {}\n",
            s(&out)
        ),
    )
    .unwrap();
    let o = hybridbf(&[
        "run",
        "rmse-vs-epsilon",
        "--config",
        s(&cfg),
        "--gamma",
        "3",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t = hybridbf::read_csv(&out).unwrap();
    assert_eq!(t.columns[0], "epsilon_deg");
    assert_eq!(t.meta("gamma"), Some("3.0"));
    assert_eq!(t.meta("gamma_noise_mult"), None);
}

#[test]
fn failures_exit_nonzero_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "n_antennas = 30\nn_subarrays = 4\n").unwrap();
    let missing = dir.path().join("missing.cfg");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "run",
            "beam-pattern",
            "--config",
            s(&bad_cfg),
            "--out",
            s(&out),
        ],
        vec![
            "run",
            "beam-pattern",
            "--config",
            s(&missing),
            "--out",
            s(&out),
        ],
        vec!["run", "fig-9", "--out", s(&out)],
        vec![
            "run",
            "beam-pattern",
            "--out",
            s(&out),
            "--gamma",
            "1",
            "--gamma-noise-mult",
            "2",
        ],
        vec![
            "run",
            "beam-pattern",
            "--out",
            s(&out),
            "--epsilon-deg",
            "95",
        ],
        vec!["run", "beam-pattern", "--out", s(&out), "--trials", "0"],
        vec!["run", "beam-pattern"],
        vec!["run", "beam-pattern", "--out", "/nonexistent/dir/x.csv"],
    ];
    for args in cases {
        let o = hybridbf(&args);
        assert!(!o.status.success(), "{args:?} succeeded");
        assert!(!out.exists(), "{args:?} left output");
    }
    let o = hybridbf(&[
        "run",
        "beam-pattern",
        "--config",
        s(&bad_cfg),
        "--out",
        s(&out),
    ]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_subarrays"));
}

#[test]
fn list_prints_experiment_ids() {
    let o = hybridbf(&["list"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("sinr-vs-snapshots"));
}

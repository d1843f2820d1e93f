use std::process::Command;

use nbi_cem::experiments::CSV_COLUMNS;

fn nbi_sim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nbi-sim"))
}

#[test]
fn sweep_writes_the_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let status = nbi_sim()
        .args(["--trials", "3", "--algos", "oracle,sp", "--seed", "5", "--out"])
        .arg(&out)
        .args(["sweep-g", "--values", "24,68"])
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert!(rows.iter().all(|r| r.split(',').count() == CSV_COLUMNS.len()));
    assert!(rows[0].starts_with("oracle,g,2.4e1,0,"));
}

#[test]
fn same_seed_same_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let ok = nbi_sim()
            .args(["--trials", "4", "--algos", "scem,rscem", "--seed", "9", "--out"])
            .arg(&path)
            .args(["sweep-inr", "--values", "10,20"])
            .output()
            .unwrap();
        assert!(ok.status.success());
        // Drop the wall-clock column.
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn config_file_is_read_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    std::fs::write(&good, "n_subcarriers = 64\ncp_len = 24\nchannel_len = 9\nsparsity = 2\nsample_rate_hz = 1.92e6\nn_rx = 2\n").unwrap();
    let out = nbi_sim().arg("--config").arg(&good).args(["--trials", "2", "iters"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("sscem") && stdout.contains("samp"));

    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "sparsity = 2\nnoise_level = 3\n").unwrap();
    let out = nbi_sim().arg("--config").arg(&bad).arg("demo").output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2") && stderr.contains("noise_level"), "{stderr}");
}

#[test]
fn demo_prints_every_algorithm() {
    let out = nbi_sim().args(["--algos", "scem,oracle", "demo", "--trial", "1"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("true support"));
    assert!(stdout.lines().any(|l| l.starts_with("scem")));
    assert!(stdout.lines().any(|l| l.starts_with("oracle")));
}

#[test]
fn unknown_algorithm_is_rejected() {
    let out = nbi_sim().args(["--algos", "scem,omp", "sweep-k"]).output().unwrap();
    assert!(!out.status.success());
}

use std::process::{Command, Output};

fn unitfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitfrac"))
        .args(args)
        .env_remove("UNITFRAC_CACHE")
        .env_remove("UNITFRAC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exit_codes() {
    let o = unitfrac(&["verify", "1726201", "431566", "13447105790", "98022323785"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
    assert_eq!(
        unitfrac(&["verify", "2", "1", "2", "2"]).status.code(),
        Some(0)
    );
    let o = unitfrac(&["verify", "7", "2", "2", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(unitfrac(&["verify", "7", "2"]).status.code(), Some(2));
    assert_eq!(unitfrac(&["solve", "1"]).status.code(), Some(2));
    assert_eq!(unitfrac(&["sieve"]).status.code(), Some(2));
    assert_eq!(
        unitfrac(&["--methods", "magic", "solve", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(unitfrac(&["parametric", "7"]).status.code(), Some(2));
}

#[test]
fn solve_prints_a_record() {
    let o = unitfrac(&["solve", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["method"], "identity:F1");
    assert_eq!(
        (v["x"].as_u64(), v["y"].as_u64(), v["z"].as_u64()),
        (Some(6), Some(6), Some(3))
    );

    let o = unitfrac(&["--methods", "split,multiplier", "solve", "409"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["method"], "multiplier-split");
    assert_eq!(v["params"]["r1"], 2);
}

#[test]
fn solve_not_found_exit_1() {
    let o = unitfrac(&["--methods", "split", "solve", "409"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stages"][0]["status"], "exhausted");
}

#[test]
fn resource_limit_exit_3() {
    // a work budget of one iteration cannot split this semiprime
    let n = (2147483693u128 * 2147483813).to_string();
    let o = unitfrac(&["--work-budget", "1", "--methods", "identity", "solve", &n]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
}

#[test]
fn oracle_and_parametric() {
    let o = unitfrac(&["oracle", "13"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    assert_eq!(
        stdout(&unitfrac(&["oracle", "13", "--count-only"])).trim(),
        "4"
    );
    assert_eq!(
        stdout(&unitfrac(&["oracle", "13", "--max", "2"]))
            .lines()
            .count(),
        2
    );

    let o = unitfrac(&["parametric", "409", "--w5-max", "1000", "--u5-max", "1000"]);
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = unitfrac(&["parametric", "409", "--first"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["w5"].as_u64(), v["u5"].as_u64()), (Some(1), Some(15)));
}

#[test]
fn families_golden_atlas() {
    let o = unitfrac(&["families", "--list"]);
    let text = stdout(&o);
    assert!(text.starts_with("id\tcondition\ttriple\tderivation\n"));
    assert_eq!(text.lines().count(), 32);

    let o = unitfrac(&["golden"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        12
    );

    let o = unitfrac(&["atlas", "--modulus", "120", "--exceptions"]);
    assert_eq!(stdout(&o), "1\t-\n49\t-\n");
}

#[test]
fn sieve_reports_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f).to_string_lossy().into_owned();
    let args = |resume: bool| {
        let mut a = vec![
            "--cache".to_string(),
            p("cache.jsonl"),
            "--methods".into(),
            "split".into(),
            "sieve".into(),
            "--l-start".into(),
            "1".into(),
            "--l-end".into(),
            "1000".into(),
            "--report".into(),
            p("report.json"),
            "--csv".into(),
            p("ex.csv"),
            "--events".into(),
            p("events.jsonl"),
        ];
        if resume {
            a.push("--resume".into());
        }
        a
    };
    let run = |resume| {
        let a = args(resume);
        unitfrac(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let o = run(false);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("exceptions    5: 17 24 232 400 997"),
        "{}",
        stdout(&o)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p("report.json")).unwrap()).unwrap();
    assert_eq!(
        report["exceptions"],
        serde_json::json!([17, 24, 232, 400, 997])
    );
    assert_eq!(report["solver_calls"], 1000);
    let csv = std::fs::read_to_string(p("ex.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let events = std::fs::read_to_string(p("events.jsonl")).unwrap();
    assert_eq!(events.lines().count(), 1002);

    let o = run(true);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p("report.json")).unwrap()).unwrap();
    assert_eq!(report["solver_calls"], 0);
    assert_eq!(report["cached"], 1000);
    assert_eq!(
        report["exceptions"],
        serde_json::json!([17, 24, 232, 400, 997])
    );
}

#[test]
fn config_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("u.toml");
    std::fs::write(&cfg, "methods = [\"split\"]\n").unwrap();
    let cfg = cfg.to_string_lossy().into_owned();
    assert_eq!(
        unitfrac(&["--config", &cfg, "solve", "409"]).status.code(),
        Some(1)
    );
    // the flag wins over the file
    assert_eq!(
        unitfrac(&["--config", &cfg, "--methods", "multiplier", "solve", "409"])
            .status
            .code(),
        Some(0)
    );
    std::fs::write(dir.path().join("bad.toml"), "r1_max = 0\n").unwrap();
    let bad = dir.path().join("bad.toml").to_string_lossy().into_owned();
    assert_eq!(
        unitfrac(&["--config", &bad, "solve", "5"]).status.code(),
        Some(2)
    );

    let cache = dir.path().join("env-cache.jsonl");
    let o = Command::new(env!("CARGO_BIN_EXE_unitfrac"))
        .args([
            "--methods",
            "identity",
            "sieve",
            "--n-start",
            "2",
            "--n-end",
            "50",
        ])
        .env("UNITFRAC_CACHE", &cache)
        .env("UNITFRAC_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), 49);
}

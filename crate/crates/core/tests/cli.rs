use std::process::Command;

fn llmoea() -> Command {
    Command::new(env!("CARGO_BIN_EXE_llmoea"))
}

#[test]
fn run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = llmoea()
        .args([
            "run",
            "--problem",
            "ZDT3",
            "--pop",
            "20",
            "--evals",
            "600",
            "--seed",
            "2",
            "--svg",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("HV "), "{stdout}");
    for f in ["metrics.csv", "final_front.csv", "run.jsonl", "hv.svg"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "problem = \"UF2\"\npop_size = 20\nmax_evaluations = 400\nalgorithm = \"nsga2\"\n",
    )
    .unwrap();
    let out = llmoea()
        .arg("run")
        .arg("--config")
        .arg(&cfg)
        .args(["--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("UF2 nsga2 seed 7"), "{stdout}");
    assert!(stdout.contains("LLM invocations 0"), "{stdout}");
}

#[test]
fn errors_exit_nonzero_with_a_message() {
    let out = llmoea().args(["run", "--problem", "DTLZ9"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("DTLZ9"));

    // An HTTP provider without a key in its environment variable is refused before any request.
    let out = llmoea()
        .args([
            "run",
            "--provider",
            "http",
            "--api-base",
            "http://127.0.0.1:9",
            "--model",
            "m",
        ])
        .args(["--api-key-env", "LLMOEA_TEST_UNSET_KEY"])
        .env_remove("LLMOEA_TEST_UNSET_KEY")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("LLMOEA_TEST_UNSET_KEY"));
}

#[test]
fn batch_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = llmoea()
        .args([
            "batch",
            "--seeds",
            "1..2",
            "--problems",
            "ZDT1,UF1..UF2",
            "--pop",
            "12",
            "--evals",
            "240",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 3 * 2);
    assert!(dir.path().join("UF2/nsga2-llm/seed-2/metrics.csv").is_file());
}

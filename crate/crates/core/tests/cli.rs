use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankin-cohen"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn u_table_first_order() {
    let o = run(&["u-table", "--l1", "1", "--l2", "1", "--l3", "1", "--n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for v in ["1/2", "3/2", "-1/2"] {
        assert!(text.contains(v), "{text}");
    }
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["u-table", "--l1", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--suite", "nonsense"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["u-table", "--l1", "-1", "--l2", "1", "--l3", "1", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verify_is_deterministic() {
    let args = [
        "verify",
        "--suite",
        "main,classical,star",
        "--samples",
        "3",
        "--max-n",
        "2",
        "--max-degree",
        "2",
        "--hbar-order",
        "3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["suite"], "main,classical,star");
    assert_eq!(doc["config"]["seed"], 42);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("rc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.conf");
    std::fs::write(&path, "seed = 9\nsamples = 1\nmax-n = 1\nmax-degree = 1\n").unwrap();
    let o = run(&[
        "verify",
        "--suite",
        "main",
        "--config",
        path.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["config"]["seed"], 11);
    assert_eq!(doc["config"]["max_n"], 1);
}

#[test]
fn bracket_and_rewrite() {
    let o = run(&[
        "bracket", "--l1", "2", "--l2", "3", "--n", "1", "--f", "z^2", "--g", "z",
    ]);
    assert_eq!(stdout(&o).trim(), "weight 7: -4*z^2");
    let o = run(&["rewrite", "--expr", "[f2,f1]_1"]);
    assert_eq!(stdout(&o).trim(), "-1  (1)");
}

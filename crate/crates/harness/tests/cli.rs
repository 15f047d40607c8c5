use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bicriteria"))
}

#[test]
fn gen_then_run() {
    let dir = std::env::temp_dir().join(format!("bicriteria-cli-{}", std::process::id()));
    let st = cli().args(["gen", "--corpus", "monotone", "--out"]).arg(&dir).status().unwrap();
    assert!(st.success());
    let file = dir.join("modular-0-knapsack.json");
    let out = cli()
        .args(["run", "--solver", "density_greedy_monotone", "--epsilon", "0.1", "--instance"])
        .arg(&file)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("instance_id,solver,epsilon,delta,T,dt,seed,"));
    assert!(lines.next().unwrap().starts_with("modular-0/knapsack,density_greedy_monotone,0.1,"));

    let out = cli().args(["run", "--solver", "nonexistent", "--instance"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cli().args(["run", "--bogus"]).status().unwrap().code(), Some(2));
    assert_eq!(cli().args(["accept", "13"]).status().unwrap().code(), Some(2));
    assert_eq!(cli().args(["sweep", "--ell", "1"]).status().unwrap().code(), Some(2));
}

#[test]
fn accept_and_sweep_succeed() {
    let out = cli().args(["accept", "10"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("PASS criterion 10"));
    let out = cli().args(["sweep", "--ell", "2", "--points", "3", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let pts: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(pts.len(), 3);
}

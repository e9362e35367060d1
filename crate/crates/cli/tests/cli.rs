use std::process::{Command, Output};

use vminor_core::{parse_graph_auto, Graph};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vminor")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn graph_commands() {
    let out = run(&["make", "ring", "5"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5; 1-2,1-5,2-3,3-4,4-5");

    let out = run(&["measure", "-g", "ring:6", "1", "Y"]);
    assert_eq!(parse_graph_auto(stdout(&out).trim()).unwrap(), Graph::cycle_through(&[2, 3, 4, 5, 6]).unwrap());

    let out = run(&["lc", "-g", "line:3", "2", "--json"]);
    assert_eq!(stdout(&out).trim(), r#"{"version":1,"v":[1,2,3],"e":[[1,2],[1,3],[2,3]]}"#);

    let out = run(&["cz", "-g", "4; 1-2", "3", "4"]);
    assert_eq!(stdout(&out).trim(), "4; 1-2,3-4");

    let out = run(&["make", "complete", "2", "--dot"]);
    let dot = stdout(&out);
    assert!(dot.starts_with("graph G {") && dot.contains("1 -- 2"), "{dot}");

    let out = run(&["orbit", "-g", "line:3", "--count"]);
    assert_eq!(stdout(&out).trim(), "orbit size: 4");
}

#[test]
fn graph_from_file() {
    let path = std::env::temp_dir().join(format!("vminor-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"v":[1,2,3],"e":[[1,2],[2,3]]}"#).unwrap();
    let out = run(&["foliage", "-g", &format!("@{}", path.display()), "--json"]);
    std::fs::remove_file(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["foliage"]["axils"], serde_json::json!([2]));
}

#[test]
fn decisions_and_witnesses() {
    let out = run(&["vminor", "-g", "line:3", "-t", "[1,3]; 1-3", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["decision"], true);

    let out = run(&["bell", "-g", "ring:6", "1", "3", "2", "4"]);
    assert!(out.status.success(), "a false decision is still a clean report");
    assert!(stdout(&out).contains("decision: false"));
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "ring", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("confirmed"));

    // A budget too small to finish is an overrun, which fails the run.
    let out = run(&["verify", "line", "--n-max", "7", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));

    let out = run(&["verify", "ring", "--n-max", "9"]);
    assert_eq!(out.status.code(), Some(2), "needs --long");
    let out = run(&["verify", "ring", "--n-max", "13", "--long"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["verify", "controls", "--n-max", "6"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_input_is_reported() {
    for args in [
        &["lc", "-g", "1-1", "1"][..],
        &["lc", "-g", "3; 1-2,1-2", "1"],
        &["lc", "-g", "2; 1-x", "1"],
        &["lc", "-g", "ring:5", "9"],
        &["measure", "-g", "ring:5", "1", "X", "-w", "3"],
        &["make", "ring", "64"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
    }
}

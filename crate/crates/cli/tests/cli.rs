//! End-to-end tests of the binary: output shapes, exit codes, determinism.

use std::process::{Command, Output};

fn tubings(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tubings"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn hvec_hexagon() {
    let out = tubings(&["hvec", "A:1,2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["f"], serde_json::json!([6, 6, 1]));
    assert_eq!(v["h"], serde_json::json!([1, 4, 1]));
    assert_eq!(v["gamma"], serde_json::json!([1, 2]));
    assert_eq!(v["schema"], 1);
}

#[test]
fn hvec_chain_and_claw() {
    let out = tubings(&["hvec", "chain:4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 3, 1]));
    let out = tubings(&["hvec", "A:0,3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 4, 1]));
}

#[test]
fn hvec_graph_input() {
    let out = tubings(&["hvec", "complete:3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 4, 1]));
    assert_eq!(v["kind"], "graph");
}

#[test]
fn verify_exit_codes() {
    assert!(tubings(&["verify", "main", "1", "2"]).status.success());
    assert!(tubings(&["verify", "size", "3", "2"]).status.success());
    assert!(tubings(&["verify", "f-bij", "2", "2"]).status.success());
    assert!(tubings(&["verify", "g-bij", "2", "2"]).status.success());
    assert!(tubings(&["verify", "branden", "1", "2"]).status.success());
    assert!(tubings(&["verify", "happy", "5"]).status.success());
    assert!(tubings(&["verify", "recurrence", "3"]).status.success());
    assert!(tubings(&["verify", "realroot", "8"]).status.success());
    assert!(tubings(&["verify", "interlace", "6"]).status.success());
}

#[test]
fn verify_size_report_values() {
    let out = tubings(&["verify", "size", "3", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lhs"], 56);
    assert_eq!(v["rhs"], 56);
    assert_eq!(v["equal"], true);
}

#[test]
fn budget_refusal_is_exit_3() {
    let out = tubings(&["hvec", "A:5,5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = tubings(&["verify", "main", "6", "6"]);
    assert_eq!(out.status.code(), Some(3));
    // raising the budget lifts the refusal for a still-small case
    let out = tubings(&["verify", "size", "5", "5", "--budget", "10"]);
    assert!(out.status.success());
}

#[test]
fn usage_errors_are_exit_2() {
    assert_eq!(
        tubings(&["verify", "nonsense", "1", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(tubings(&["hvec", "unknown:3"]).status.code(), Some(2));
    assert_eq!(tubings(&["verify", "main", "2"]).status.code(), Some(2));
    assert_eq!(
        tubings(&["conjecture", "c2", "--poset", "A:1,2", "--subposet", "2,3"])
            .status
            .code(),
        Some(2),
        "non-chain autonomous subposet is an input error"
    );
}

#[test]
fn conjecture_worked_instances() {
    let out = tubings(&[
        "conjecture",
        "c2",
        "--poset",
        "chain:4",
        "--subposet",
        "2,3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["parameters"]["conjecture_status"], "verified");
    let out = tubings(&[
        "conjecture",
        "chain-n",
        "--poset",
        "chain:4",
        "--subposet",
        "1,2,3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["lhs"], serde_json::json!([6, 18, 6]));
}

#[test]
fn table_shape_and_narayana_column() {
    let out = tubings(&["table", "--budget", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    // the k = 0 rows are Narayana triangle rows
    let expect: Vec<serde_json::Value> = vec![
        serde_json::json!([1]),
        serde_json::json!([1, 1]),
        serde_json::json!([1, 3, 1]),
        serde_json::json!([1, 6, 6, 1]),
        serde_json::json!([1, 10, 20, 10, 1]),
        serde_json::json!([1, 15, 50, 50, 15, 1]),
    ];
    let narayana_rows: Vec<&serde_json::Value> = rows.iter().filter(|r| r["k"] == 0).collect();
    assert_eq!(narayana_rows.len(), 6);
    for (row, h) in narayana_rows.iter().zip(&expect) {
        assert_eq!(&row["h"], h);
    }
    // empty sweep exits 0 with no rows
    let out = tubings(&["table", "--budget", "0", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["hvec", "A:1,2", "--format", "json"],
        vec!["verify", "main", "1", "2", "--format", "json"],
        vec!["table", "--budget", "5", "--format", "json"],
    ] {
        let a = tubings(&args);
        let b = tubings(&args);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn file_inputs_round_trip() {
    let dir = std::env::temp_dir();
    let poset_path = dir.join("tubings_test_poset.json");
    std::fs::write(
        &poset_path,
        r#"{"elements": ["a", "b", "c", "d"], "covers": [["a","b"],["b","c"],["b","d"]]}"#,
    )
    .unwrap();
    let out = tubings(&["hvec", poset_path.to_str().unwrap(), "--format", "json"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 4, 1])); // A(1,2) by another name

    let graph_path = dir.join("tubings_test_graph.json");
    std::fs::write(&graph_path, r#"{"vertices": 3, "edges": [[0,1],[1,2]]}"#).unwrap();
    let out = tubings(&["hvec", graph_path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 3, 1]));
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join("tubings_test_out.json");
    let _ = std::fs::remove_file(&path);
    let out = tubings(&[
        "hvec",
        "A:1,2",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["h"], serde_json::json!([1, 4, 1]));
}

//! End-to-end tests of the `lab` binary: output contract, reproducibility,
//! file output, and argument validation.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lab"))
}

fn run(args: &[&str]) -> Output {
    lab().args(args).output().expect("binary should run")
}

fn stdout_ok(output: &Output) -> String {
    assert!(
        output.status.success(),
        "exit {:?}, stderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout.clone()).expect("stdout should be UTF-8")
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

fn temp_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("lab-test-{tag}-{}", std::process::id()))
}

#[test]
fn tables_prints_versioned_csv_with_config_preamble() {
    let text = stdout_ok(&run(&["tables", "1"]));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# version="));
    assert!(text.lines().any(|l| l == "# command=tables"));
    assert!(text.lines().any(|l| l == "# which=1"));
    let data = data_lines(&text);
    assert_eq!(data[0], "table,r,g,column,value,reference,diff,source,flagged");
    // 15 computed cells plus the prior-heuristic reference cells.
    assert_eq!(data.len() - 1, 36);
}

#[test]
fn table_row_counts_are_stable() {
    for (which, rows) in [("2", 26), ("3", 14)] {
        let text = stdout_ok(&run(&["tables", which]));
        assert_eq!(data_lines(&text).len() - 1, rows, "tables {which}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "tree-prob", "--r", "3", "--d", "2", "--trials", "2048", "--seed", "7",
    ];
    let a = stdout_ok(&run(&args));
    let b = stdout_ok(&run(&args));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn worker_count_does_not_change_output() {
    let args = [
        "tree-prob", "--r", "3", "--d", "3", "--trials", "4096", "--seed", "11",
    ];
    let one = lab().args(args).env("LAB_THREADS", "1").output().unwrap();
    let three = lab().args(args).env("LAB_THREADS", "3").output().unwrap();
    assert!(one.status.success(), "LAB_THREADS=1 run failed");
    assert!(three.status.success(), "LAB_THREADS=3 run failed");
    assert_eq!(one.stdout, three.stdout);
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = temp_path("tables.csv");
    let out = run(&["tables", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("# version="));
    assert!(out.stdout.is_empty(), "file output should not echo to stdout");
}

#[test]
fn json_format_is_machine_readable() {
    let text = stdout_ok(&run(&["tables", "2", "--format", "json"]));
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["command"], "tables");
    assert!(value["version"].is_string());
    assert_eq!(value["config"]["which"], "2");
    let columns = value["columns"].as_array().unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 26);
    for row in rows {
        assert_eq!(row.as_array().unwrap().len(), columns.len());
    }
}

#[test]
fn graph_files_behave_like_named_graphs() {
    let g = greedylab::graph::named_graph("petersen").unwrap();
    let path = temp_path("petersen.txt");
    std::fs::write(&path, g.to_edge_list_string()).unwrap();
    let common = ["--trials", "5000", "--seed", "3"];
    let by_name = stdout_ok(&run(
        &[&["graph-mc", "--graph", "petersen"], &common[..]].concat(),
    ));
    let by_file = stdout_ok(&run(
        &[&["graph-mc", "--graph", path.to_str().unwrap()], &common[..]].concat(),
    ));
    std::fs::remove_file(&path).ok();
    // The graph column echoes the source string, so compare the rest.
    let row_name = *data_lines(&by_name).last().unwrap();
    let row_file = *data_lines(&by_file).last().unwrap();
    let tail = |row: &str| row.split(',').skip(1).map(String::from).collect::<Vec<_>>();
    assert_eq!(tail(row_name), tail(row_file));
}

#[test]
fn recursion_reports_one_row_per_depth() {
    let text = stdout_ok(&run(&["recursion", "--r", "3", "--dmax", "6", "--K", "200"]));
    let data = data_lines(&text);
    assert_eq!(data[0], "d,sup_norm,mean_error,tail_mass,bound");
    assert_eq!(data.len() - 1, 7, "expected depths 0 through 6");
}

#[test]
fn invalid_inputs_exit_nonzero() {
    let cases: &[&[&str]] = &[
        &["tables", "4"],
        &["graph-mc", "--graph", "nosuchgraph"],
        &["graph-mc", "--graph", "petersen", "--mode", "q"],
        &["graph-mc", "--graph", "petersen", "--dist", "uniform:1,0"],
        &["recursion", "--var", "z"],
        &["var-scaling", "--trials", "1"],
        &["verify", "nosuch"],
        &["tree-prob", "--d", "0"],
    ];
    for args in cases {
        let out = lab().args(*args).output().unwrap();
        assert!(!out.status.success(), "args {args:?} should fail");
        assert!(
            !out.stderr.is_empty(),
            "args {args:?} should explain the failure on stderr"
        );
    }
}

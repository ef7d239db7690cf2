//! End-to-end runs of the installed binary: printed notation, exit codes,
//! and the export schema.

use std::process::{Command, Output};

fn genus0(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus0"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

#[test]
fn usage_errors_exit_with_code_two() {
    assert_eq!(genus0(&[]).status.code(), Some(2));
    assert_eq!(genus0(&["table", "bogus"]).status.code(), Some(2));
    assert_eq!(genus0(&["export", "unknown-table", "--n", "4"]).status.code(), Some(2));
    assert_eq!(genus0(&["export", "moduli-open", "--n", "2"]).status.code(), Some(2));
    assert_eq!(genus0(&["table", "moduli-open", "--space", "config"]).status.code(), Some(2));
    assert_eq!(genus0(&["table", "betti", "--space", "config"]).status.code(), Some(2));
}

#[test]
fn table_rows_print_in_the_notation_of_the_tables() {
    let open = genus0(&["table", "moduli-open", "--n-max", "4"]);
    assert_eq!(open.status.code(), Some(0));
    assert_eq!(stdout(&open), "3: s_3\n4: s_4 - t s_{2^2}\n");

    let compact = genus0(&["table", "moduli-compact", "--n-max", "4"]);
    assert_eq!(stdout(&compact), "3: s_3\n4: (1 + t^2) s_4\n");

    let betti = genus0(&["table", "betti", "--space", "config", "--n", "3"]);
    assert_eq!(betti.status.code(), Some(0));
    assert_eq!(stdout(&betti), "1 - 3t + 2t^2\n");
}

#[test]
fn the_tables_suite_at_the_lowest_cap_makes_four_comparisons() {
    let run = genus0(&["verify", "--suite", "tables", "--n-max", "3"]);
    assert_eq!(run.status.code(), Some(0));
    let text = stdout(&run);
    assert_eq!(text.matches("PASS ").count(), 4);
    assert_eq!(text.matches("FAIL ").count(), 0);
    assert!(text.contains("4 comparisons, all passed"));
}

#[test]
fn suite_output_does_not_depend_on_the_worker_count() {
    let serial = genus0(&["verify", "--suite", "duality", "--n-max", "6", "--jobs", "1"]);
    let fanned = genus0(&["verify", "--suite", "duality", "--n-max", "6", "--jobs", "4"]);
    assert_eq!(serial.status.code(), Some(0));
    assert_eq!(stdout(&serial), stdout(&fanned));
    assert!(stdout(&serial).contains("(25, 16, 9, 0)"));
}

#[test]
fn exported_rows_follow_the_symseries_schema() {
    let run = genus0(&["export", "moduli-open", "--n", "4"]);
    assert_eq!(run.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run)).expect("valid json");
    assert_eq!(json["schema"], "symseries-v1");
    assert_eq!(json["basis"], "schur");
    assert_eq!(json["degree_cap"], 4);
    let terms = json["terms"].as_array().expect("terms array");
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[1]["partition"], serde_json::json!([2, 2]));
    assert_eq!(terms[1]["coeff"]["num"], serde_json::json!(["0", "-1"]));
    assert_eq!(terms[1]["coeff"]["den"], serde_json::json!(["1"]));
}

#[test]
fn the_out_flag_writes_the_rendered_output_to_disk() {
    let path = std::env::temp_dir().join(format!("genus0-out-{}.json", std::process::id()));
    let path_text = path.to_str().expect("temp path is utf-8");
    let run = genus0(&["export", "grav", "--n", "4", "--out", path_text]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).is_empty());
    let written = std::fs::read_to_string(&path).expect("file written");
    let json: serde_json::Value = serde_json::from_str(&written).expect("valid json");
    assert_eq!(json["schema"], "symseries-v1");
    std::fs::remove_file(&path).ok();
}

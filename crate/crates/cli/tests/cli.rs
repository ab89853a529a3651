//! End-to-end runs of the `quartdiff` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quartdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn solve_prints_the_rational_witness() {
    let o = run(&["solve", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("5 = (3/2)^4 - (1/2)^4"), "{}", stdout(&o));
}

#[test]
fn emitted_certificate_verifies_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("31.json");
    let o = run(&["solve", "31", "--emit", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("not representable"));

    let o = run(&["verify", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("n = 31: verified, not representable"));

    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    json["n"] = serde_json::json!(37);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, json.to_string()).unwrap();
    let o = run(&["verify", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("INVALID"));
}

#[test]
fn undecided_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("799.json");
    let o = run(&["solve", "799", "--emit", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("2209u^8 + 1156v^8 = 1w^4: open"));
    let o = run(&["verify", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn range_file_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("range.json");
    let o = run(&["range", "1", "20", "--out", path_str(&out), "--include-fourth-powers"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("representable n: [5, 15]"), "{text}");
    assert!(text.contains("fourth powers (y = 0): [1, 16]"), "{text}");
    let o = run(&["verify", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 20);
}

#[test]
fn table_check_on_a_small_range() {
    let o = run(&["table-check", "--hi", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("table entries in 1..=60: 4"));
}

#[test]
fn generator_file_is_used_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("gens.txt");
    fs::write(&good, "# A then X Y Z\n3844 98 -1148 1\n").unwrap();
    let cert = dir.path().join("31.json");
    let o = run(&["solve", "31", "--generators", path_str(&good), "--emit", path_str(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&cert).unwrap().contains("\"file\""));

    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "3844 1 1 1\n").unwrap();
    let o = run(&["solve", "31", "--generators", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
}

//! Black-box tests of the command-line interface: output shape and exit codes.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn hembed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hembed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn hembed_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hembed"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary exits")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn check_true_prints_true_and_exits_zero() {
    let nat = fixture("nat09.fmod");
    for goal in [
        ["+(1,X:Nat)", "+(Y:Nat,+(1,3))"],
        ["+(1,2)", "+(2,+(3,1))"],
    ] {
        let out = hembed(&[
            "check", "--module", &nat, "--engine", "sml", goal[0], goal[1],
        ]);
        assert_eq!(stdout(&out), "true\n");
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn check_false_exits_one() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&[
        "check", "--module", &nat, "--engine", "naive", "+(1,2)", "suc(suc(1))",
    ]);
    assert_eq!(stdout(&out), "false\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_every_engine_agrees_on_the_worked_example() {
    let nat = fixture("nat09.fmod");
    for engine in ["oracle", "naive", "rogd", "ml", "sml"] {
        let out = hembed(&[
            "check", "--module", &nat, "--engine", engine, "+(2,1)", "+(1,+(0,+(3,2)))",
        ]);
        assert_eq!(stdout(&out), "true\n", "{engine}");
        assert_eq!(out.status.code(), Some(0), "{engine}");
    }
}

#[test]
fn check_timeout_exits_three() {
    let nat = fixture("nat09.fmod");
    let wide = "+(1,+(2,+(3,+(4,+(5,+(6,+(7,+(8,9))))))))";
    let out = hembed(&[
        "check",
        "--module",
        &nat,
        "--engine",
        "naive",
        "--timeout-ms",
        "1",
        "+(9,+(9,1))",
        wide,
    ]);
    assert_eq!(stdout(&out), "timeout\n");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_unknown_engine_exits_two() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&["check", "--module", &nat, "--engine", "bogus", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_missing_module_exits_two() {
    let out = hembed(&["check", "--module", "/nonexistent.fmod", "0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn check_parse_error_exits_two() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&["check", "--module", &nat, "+(1,", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_rogd_matches_golden() {
    let nat = fixture("nat.fmod");
    let out = hembed(&["gen", "--module", &nat, "--kind", "rogd"]);
    assert_eq!(stdout(&out), include_str!("golden/nat_rogd.txt"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gen_emb_matches_golden() {
    let nat = fixture("nat.fmod");
    let out = hembed(&["gen", "--module", &nat, "--kind", "emb"]);
    assert_eq!(stdout(&out), include_str!("golden/natu_emb.txt"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn succ_lists_the_six_successors() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&["succ", "--module", &nat, "+(2,+(3,1))"]);
    let text = stdout(&out);
    let lines: BTreeSet<&str> = text.lines().collect();
    let want: BTreeSet<&str> = ["+(1,2)", "+(1,3)", "+(2,3)", "1", "2", "3"]
        .into_iter()
        .collect();
    assert_eq!(lines, want);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn class_reports_twelve_members_for_a_three_addend_sum() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&["class", "--module", &nat, "+(1,+(2,3))"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert_eq!(lines[12], "total 12");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn whistle_blows_on_the_first_embedded_term() {
    let nat = fixture("nat09.fmod");
    let out = hembed_with_stdin(
        &["whistle", "--module", &nat, "--engine", "sml"],
        "+(1,2)\nsuc(0)\n+(+(2,1),3)\n",
    );
    assert_eq!(stdout(&out), "pass\npass\nblow 0\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn whistle_passes_a_clean_stream() {
    let nat = fixture("nat09.fmod");
    let out = hembed_with_stdin(
        &["whistle", "--module", &nat, "--engine", "ml"],
        "suc(0)\n+(1,2)\n",
    );
    assert_eq!(stdout(&out), "pass\npass\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn whistle_rejects_malformed_terms() {
    let nat = fixture("nat09.fmod");
    let out = hembed_with_stdin(&["whistle", "--module", &nat], "+(1\n");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_the_csv_report() {
    let nat = fixture("nat09.fmod");
    let path = std::env::temp_dir().join(format!("hembed-bench-{}.csv", std::process::id()));
    let out = hembed(&[
        "bench",
        "--module",
        &nat,
        "--engines",
        "sml,ml",
        "--seed",
        "3",
        "--t1-depth",
        "4",
        "--t2-depths",
        "3",
        "--timeout-ms",
        "10000",
        "--reps",
        "2",
        "--csv",
        path.to_str().expect("utf-8 temp path"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(&path).expect("report written");
    std::fs::remove_file(&path).ok();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(
        lines[0],
        "engine,goal_id,t1_ot,t1_ft,t2_ot,t2_ft,outcome,time_ms,states,calls"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("sml,0,"));
    assert!(lines[2].starts_with("ml,0,"));
}

#[test]
fn bench_prints_to_stdout_without_a_path() {
    let nat = fixture("nat09.fmod");
    let out = hembed(&[
        "bench",
        "--module",
        &nat,
        "--engines",
        "sml",
        "--seed",
        "3",
        "--t1-depth",
        "4",
        "--t2-depths",
        "2,3",
        "--timeout-ms",
        "10000",
        "--reps",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("engine,goal_id,"));
    assert_eq!(text.lines().count(), 3);
}

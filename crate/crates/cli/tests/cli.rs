use std::process::{Command, Output};

fn mgroups(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgroups")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn word_problem_verdicts() {
    let cases = [
        (&["wp", "--family", "grig", "--omega", "(012)", "--word", "bcd"][..], "trivial"),
        (&["wp", "--family", "grig", "--omega", "(012)", "--word", "ad"][..], "nontrivial"),
        (&["wp", "--family", "grig", "--omega", "(0)", "--word", "d"][..], "nontrivial"),
        (&["wp", "--family", "l", "--omega", "(0)", "--word", "xx"][..], "trivial"),
        (&["wp", "--family", "lamp", "--modulus", "3", "--word", "sss"][..], "trivial"),
        (&["wp", "--family", "free", "--word", "abBA"][..], "trivial"),
        (&["wp", "--family", "limit", "--word", "bcd"][..], "trivial"),
    ];
    for (args, expected) in cases {
        let o = mgroups(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&o).trim(), expected, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(mgroups(&["wp", "--family", "grig", "--omega", "1(0)", "--word", "a"]).status.code(), Some(3));
    assert_eq!(mgroups(&["wp", "--family", "grig", "--omega", "(3)", "--word", "a"]).status.code(), Some(2));
    assert_eq!(mgroups(&["wp", "--family", "grig", "--omega", "(012)", "--word", "xq"]).status.code(), Some(2));
    assert_eq!(mgroups(&["growth", "--family", "lamp", "--modulus", "1"]).status.code(), Some(2));
    assert_eq!(mgroups(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(mgroups(&["--threads", "0", "wp", "--family", "free", "--word", "a"]).status.code(), Some(2));
    let paper = mgroups(&["minimality", "--n", "2", "--m", "2", "--window", "12", "--variant", "paper"]);
    assert_eq!(paper.status.code(), Some(1));
    assert!(stdout(&paper).contains("\"verdict\": \"fail\""));
    assert_eq!(mgroups(&["minimality", "--n", "3", "--m", "3"]).status.code(), Some(0));
    assert_eq!(mgroups(&["structure", "--negative-control"]).status.code(), Some(0));
}

#[test]
fn csv_outputs() {
    let g = mgroups(&["growth", "--family", "grig", "--omega", "(012)", "--n-max", "3"]);
    assert_eq!(stdout(&g), "n,gamma\n0,1\n1,5\n2,11\n3,23\n");
    let c = mgroups(&["converge", "--j-from", "1", "--j-to", "2", "--n-max", "3"]);
    assert_eq!(c.status.code(), Some(0));
    let text = stdout(&c);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("j,agree_N,exact"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn json_reports_carry_schema() {
    let o = mgroups(&["separate", "--omega1", "(012)", "--omega2", "(012)", "--l-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["four_generator"].is_null() && v["two_generator"].is_null());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("growth.csv");
    let o = mgroups(&["--out", path.to_str().unwrap(), "growth", "--family", "lamp", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "n,gamma\n0,1\n1,4\n2,10\n");
}

#[test]
fn seeds_drive_sampling() {
    let run = |seed: &str| stdout(&mgroups(&["--seed", seed, "thm2-check", "--samples", "50", "--max-len", "10"]));
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

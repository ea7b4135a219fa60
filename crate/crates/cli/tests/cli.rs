use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use fintop_core::io::{parse_space, write_space};
use tempfile::TempDir;

struct Outcome {
    code: i32,
    out: String,
    err: String,
}

fn fintop(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["fintop".to_string()];
    argv.extend(args.iter().map(|a| a.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = fintop_cli::run(&argv, stdin.as_bytes(), &mut out, &mut err);
    Outcome {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        Files {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

const SIERPINSKI: &str = "points 2\nopen -\nopen 1\nopen 0,1\n";
const DISCRETE_3: &str =
    "points 3\nopen -\nopen 0\nopen 1\nopen 2\nopen 0,1\nopen 0,2\nopen 1,2\nopen 0,1,2\n";

#[test]
fn solves_sierpinski_in_one_round() {
    let f = Files::new();
    let s = f.put("sierpinski.sp", SIERPINSKI);
    let r = fintop(&["game", "solve", "--space", &s], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.starts_with("winner: I (round 1)\n"), "{}", r.out);
}

#[test]
fn closure_listing_has_level_tags() {
    let f = Files::new();
    let s = f.put("d3.sp", DISCRETE_3);
    let fam = f.put("a.fam", "family\nopen 0\nopen 1,2\n");
    let r = fintop(&["lattice", "close", "--space", &s, "--family", &fam], "");
    assert_eq!(r.code, 0, "{}", r.err);
    let expected = "level 0 | {0} | generator\n\
                    level 0 | {1,2} | generator\n\
                    level 1 | {} | intersection of {0} {1,2}\n\
                    level 1 | {0,1,2} | union of {0} {1,2}\n\
                    levels: 2\n\
                    family\nopen -\nopen 0\nopen 1,2\nopen 0,1,2\n";
    assert_eq!(r.out, expected);
}

#[test]
fn seq_failure_exits_one_and_extension_recovers() {
    let f = Files::new();
    let s = f.put("d3.sp", DISCRETE_3);
    let fam = f.put("a.fam", "family\nopen 0\n");
    let r = fintop(&["lattice", "seq", "--space", &s, "--family", &fam], "");
    assert_eq!(r.code, 1);
    assert!(r.out.contains("{0} | seq: no | chain: none"), "{}", r.out);
    let r = fintop(
        &[
            "lattice", "seq", "--space", &s, "--family", &fam, "--extend",
        ],
        "",
    );
    assert_eq!(r.code, 0);
    assert!(
        r.out
            .ends_with("extension:\nfamily\nopen -\nopen 0\nopen 1,2\nopen 0,1,2\n"),
        "{}",
        r.out
    );
}

#[test]
fn quotient_of_a_partition() {
    let f = Files::new();
    let s = f.put("d3.sp", DISCRETE_3);
    let fam = f.put("a.fam", "family\nopen -\nopen 0\nopen 1,2\nopen 0,1,2\n");
    let r = fintop(&["quotient", "build", "--space", &s, "--family", &fam], "");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("class 1 | {1,2}\n"), "{}", r.out);
    assert!(r.out.contains("q: 0->0 1->1 2->1\n"), "{}", r.out);
    assert!(r.out.contains("base check: Verified\n"), "{}", r.out);
    assert!(
        r.out
            .ends_with("points 2\nopen -\nopen 0\nopen 1\nopen 0,1\n"),
        "{}",
        r.out
    );
}

#[test]
fn map_classification_table() {
    let f = Files::new();
    let d = f.put("d2.sp", "points 2\nopen -\nopen 0\nopen 1\nopen 0,1\n");
    let s = f.put("s.sp", SIERPINSKI);
    let m = f.put("f.map", "map d2 sier\nsend 0 0\nsend 1 0\n");
    let r = fintop(
        &[
            "map",
            "classify",
            "--space",
            &d,
            "--space",
            &format!("sier={s}"),
            "--map",
            &m,
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.err);
    // constant onto the closed point: not skeletal into the space, but
    // skeletal onto its image
    assert!(r.out.contains("skeletal: no\n"), "{}", r.out);
    assert!(
        r.out
            .contains("onto image: open: yes | d-open: yes | skeletal: yes"),
        "{}",
        r.out
    );

    let bad = f.put("g.map", "map d2 sier\nsend 0 1\nsend 1 0\n");
    let r = fintop(
        &[
            "map",
            "classify",
            "--space",
            &d,
            "--space",
            &format!("sier={s}"),
            "--map",
            &bad,
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.err);
    let r = fintop(
        &[
            "map", "classify", "--space", &s, "--space", &d, "--map", &bad,
        ],
        "",
    );
    assert_eq!(r.code, 2);
    assert!(r.err.contains("unknown space sier"), "{}", r.err);
}

#[test]
fn embedding_verdicts_set_the_exit_code() {
    let f = Files::new();
    let d = f.put("d2.sp", "points 2\nopen -\nopen 0\nopen 1\nopen 0,1\n");
    let p = f.put("p.fam", "family\nopen 0\n");
    let r = fintop(
        &[
            "embed",
            "check",
            "--space",
            &d,
            "--family",
            &p,
            "--relation",
            "c",
        ],
        "",
    );
    assert_eq!(r.code, 1);
    assert!(r.out.contains("unguarded open: {1}"), "{}", r.out);
    let r = fintop(
        &[
            "embed",
            "check",
            "--space",
            &d,
            "--family",
            &p,
            "--relation",
            "bang",
        ],
        "",
    );
    assert_eq!(r.code, 1);
    let top = f.put("t.fam", "family\nopen 0\nopen 1\nopen 0,1\n");
    let w = f.put("w.fam", "family\nopen 0\nopen 1\n");
    let r = fintop(
        &[
            "embed",
            "check",
            "--space",
            &d,
            "--family",
            &top,
            "--relation",
            "predense",
            "--sub",
            &w,
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.err);
    let r = fintop(
        &[
            "embed",
            "check",
            "--space",
            &d,
            "--family",
            &top,
            "--relation",
            "predense",
        ],
        "",
    );
    assert_eq!(r.code, 2);
}

#[test]
fn interactive_play_reprompts_and_quits() {
    let f = Files::new();
    let s = f.put("s.sp", SIERPINSKI);
    let club = f.put("club.fam", "family\nopen 1\nopen 0,1\n");
    let args = [
        "game",
        "play",
        "--space",
        &s,
        "--strategy-i",
        &format!("club:{club}"),
        "--interactive",
    ];
    let r = fintop(&args, "0,1\n1\n");
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(
        r.out
            .contains("invalid move: the move is not inside I's move {1}"),
        "{}",
        r.out
    );
    assert!(r.out.contains("dense after round 1"), "{}", r.out);
    assert!(r.out.ends_with("winner: I (round 1)\n"), "{}", r.out);

    let r = fintop(&args, "quit\n");
    assert_eq!(r.code, 0);
    assert!(r.out.ends_with("truncated after 0 rounds\n"), "{}", r.out);
}

#[test]
fn batch_play_records_the_seed() {
    let f = Files::new();
    let s = f.put("d3.sp", DISCRETE_3);
    let args = [
        "game",
        "play",
        "--space",
        &s,
        "--strategy-ii",
        "random",
        "--seed",
        "11",
    ];
    let a = fintop(&args, "");
    let b = fintop(&args, "");
    assert_eq!(a.code, 0, "{}", a.err);
    assert!(a.out.contains("seed: 11\n"));
    assert_eq!(a.out, b.out);
    let r = fintop(
        &[
            "game",
            "play",
            "--space",
            &s,
            "--strategy-i",
            "fixed:0",
            "--strategy-ii",
            "echo",
        ],
        "",
    );
    assert_eq!(r.code, 1);
    assert!(r.out.ends_with("truncated after 16 rounds\n"), "{}", r.out);
    let r = fintop(
        &["game", "play", "--space", &s, "--strategy-ii", "sideways"],
        "",
    );
    assert_eq!(r.code, 2);
}

#[test]
fn verify_is_clean_and_deterministic() {
    let f = Files::new();
    let (a, b) = (f.path("a.jsonl"), f.path("b.jsonl"));
    for path in [&a, &b] {
        let r = fintop(
            &[
                "verify",
                "--max-points",
                "3",
                "--report",
                path.to_str().unwrap(),
            ],
            "",
        );
        assert_eq!(r.code, 0, "{}", r.out);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    for line in text.lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["theorem", "space", "verdict", "counterexample"] {
            assert!(record.get(key).is_some(), "{line}");
        }
    }
}

#[test]
fn verify_reports_mutation_counterexamples() {
    let r = fintop(
        &[
            "verify",
            "--max-points",
            "3",
            "--theorem",
            "bang-implies-c",
            "--mutate",
            "bang-without-separation",
        ],
        "",
    );
    assert_eq!(r.code, 1);
    assert!(r.out.contains("FAIL bang-implies-c"), "{}", r.out);
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(
        fintop(&["verify", "--max-points", "3", "--theorem", "nope"], "").code,
        2
    );
    let r = fintop(&["frobnicate"], "");
    assert_eq!(r.code, 2);
    assert!(r.err.contains("Usage:"), "{}", r.err);
    let f = Files::new();
    let bad = f.put("bad.sp", "points 2\nopen -\nopen 0\nopen 1\n");
    let r = fintop(&["space", "validate", "--space", &bad], "");
    assert_eq!(r.code, 2);
    assert!(r.err.contains("not a topology"), "{}", r.err);
    assert_eq!(fintop(&["--help"], "").code, 0);
}

#[test]
fn enumerated_spaces_round_trip() {
    let r = fintop(&["space", "enumerate", "--points", "3"], "");
    assert_eq!(r.code, 0);
    assert!(r.out.ends_with("# 5 spaces\n"), "{}", r.out);
    let r = fintop(&["space", "enumerate", "--points", "3", "--labeled"], "");
    assert!(r.out.ends_with("# 19 spaces\n"));
    let blocks: Vec<&str> = r.out.split("points ").skip(1).collect();
    assert_eq!(blocks.len(), 19);
    for block in blocks {
        let text = format!("points {}", block.split("\n#").next().unwrap());
        let text = text.trim_end().to_string() + "\n";
        assert_eq!(write_space(&parse_space(&text).unwrap()), text);
    }
}

#[test]
fn validate_reports_canonical_form() {
    let f = Files::new();
    let s = f.put("s.sp", "points 2\nopen 0\nopen -\nopen 0,1\n");
    let r = fintop(&["space", "validate", "--space", &s], "");
    assert_eq!(r.code, 0);
    assert!(r.out.contains("t0: yes\n"));
    assert!(r.out.contains("canonical form: 2:1.3\n"), "{}", r.out);
}

fn binary(args: &[&str], envs: &[(&str, &str)]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fintop"))
        .args(args)
        .envs(envs.iter().copied())
        .output()
        .unwrap()
}

#[test]
fn point_budget_comes_from_the_environment() {
    let f = Files::new();
    let s = f.put("d3.sp", DISCRETE_3);
    let out = binary(
        &["space", "validate", "--space", &s],
        &[("FINTOP_POINT_BUDGET", "2")],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("point budget of 2"));
    let out = binary(
        &["space", "validate", "--space", &s],
        &[("FINTOP_POINT_BUDGET", "3")],
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn binary_exit_codes() {
    let f = Files::new();
    let s = f.put("s.sp", SIERPINSKI);
    let out = binary(&["game", "solve", "--space", &s], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("winner: I (round 1)"));
    assert_eq!(binary(&["verify"], &[]).status.code(), Some(2));
    assert!(Path::new(env!("CARGO_BIN_EXE_fintop")).exists());
}

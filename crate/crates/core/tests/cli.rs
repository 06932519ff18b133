mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::fixture;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_devinterest"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Relative path -> bytes for every file below `dir`.
fn tree(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                );
            }
        }
    }
    out
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
    }
}

fn generate_seed_42(dir: &Path) -> PathBuf {
    let spec = dir.join("spec.json");
    fs::write(
        &spec,
        r#"{
  "n_developers": 50, "n_repos": 200, "n_questions": 200,
  "vocabulary_size": 240, "tags_per_item": {"min": 1, "max": 3},
  "activities": {
    "fork": {"min": 1, "max": 2}, "watch": {"min": 1, "max": 4},
    "commit": {"min": 0, "max": 2}, "pull_request": {"min": 0, "max": 1},
    "ask": {"min": 0, "max": 1}, "answer": {"min": 1, "max": 3},
    "favorite": {"min": 0, "max": 2}
  },
  "overlap": 0.5, "noise": 0.2, "seed": 42
}"#,
    )
    .unwrap();
    let data = dir.join("data");
    let out = run(&["generate", "--spec", s(&spec), "--out", s(&data)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    data
}

#[test]
fn score_all_on_worked_examples() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "score",
        "all",
        "--input",
        s(&fixture("combined_example")),
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let scores = fs::read_to_string(tmp.path().join("scores.csv")).unwrap();
    assert!(
        scores
            .lines()
            .any(|l| l.starts_with("D000001,cross,0.666667,")),
        "{scores}"
    );
    assert!(
        scores
            .lines()
            .any(|l| l.starts_with("D000002,co:watch,0.666667,")),
        "{scores}"
    );
    assert!(scores.matches("0.666667").count() >= 2);
}

#[test]
fn oracle_check_on_generated_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let data = generate_seed_42(tmp.path());
    let out = run(&["oracle-check", "--input", s(&data)]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("0 mismatches"), "{stdout}");
}

#[test]
fn oracle_check_respects_cap() {
    let tmp = tempfile::tempdir().unwrap();
    let data = generate_seed_42(tmp.path());
    let out = run(&["oracle-check", "--input", s(&data), "--cap", "10"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_input_file_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    copy_dir(&fixture("cross_example"), &input);
    fs::remove_file(input.join("questions.jsonl")).unwrap();
    let out = run(&[
        "all",
        "--input",
        s(&input),
        "--out",
        s(&tmp.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("questions.jsonl"), "{stderr}");
    assert_eq!(stderr.trim_end().lines().count(), 1);
}

#[test]
fn malformed_and_dangling_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("in");
    copy_dir(&fixture("cross_example"), &input);
    fs::write(
        input.join("activities_b.jsonl"),
        "{\"user_id\": \"so-d\", \"kind\": \"answer\", \"item_id\": \"rX\"}\n",
    )
    .unwrap();
    let out = run(&["link", "--input", s(&input), "--out", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dangling reference rX"));

    fs::write(
        input.join("activities_b.jsonl"),
        "{\"user_id\": \"so-d\"}\nnot json\n",
    )
    .unwrap();
    let out = run(&["link", "--input", s(&input), "--out", s(tmp.path())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("activities_b.jsonl:1"));
}

#[test]
fn usage_errors_and_version() {
    assert_eq!(run(&["score"]).status.code(), Some(2));
    assert_eq!(run(&["score", "everything"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["all", "--membership", "maybe"]).status.code(),
        Some(2)
    );
    let v = run(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn missing_paths_are_reported() {
    let out = run(&["all"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let data = generate_seed_42(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        let o = run(&["all", "--input", s(&data), "--out", s(out)]);
        assert!(o.status.success());
    }
    let (ta, tb) = (tree(&a), tree(&b));
    assert!(ta.len() >= 5 + 2 * 19);
    assert_eq!(ta, tb);

    let o = run(&["all", "--input", s(&data), "--out", s(&a), "--threads", "1"]);
    assert!(o.status.success());
    assert_eq!(tree(&a), tb);
}

#[test]
fn stages_compose_to_fused_run() {
    let tmp = tempfile::tempdir().unwrap();
    let data = generate_seed_42(tmp.path());
    let (staged, fused) = (tmp.path().join("staged"), tmp.path().join("fused"));
    for cmd in [&["link"][..], &["extract"], &["score", "all"], &["report"]] {
        let mut args: Vec<&str> = cmd.to_vec();
        args.extend(["--input", s(&data), "--out", s(&staged)]);
        let o = run(&args);
        assert!(
            o.status.success(),
            "{cmd:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert!(run(&["all", "--input", s(&data), "--out", s(&fused)])
        .status
        .success());
    assert_eq!(tree(&staged), tree(&fused));
}

#[test]
fn config_file_and_flag_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("cfg.json");
    let input = fixture("combined_example");
    fs::write(
        &cfg,
        format!(
            r#"{{"input": "{}", "output": "{}", "empty_side": "zero"}}"#,
            s(&input),
            s(&tmp.path().join("from_file"))
        ),
    )
    .unwrap();
    let o = run(&["score", "pairs", "--config", s(&cfg)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let zero = fs::read_to_string(tmp.path().join("from_file/scores.csv")).unwrap();

    let flag_out = tmp.path().join("flag");
    let o = run(&[
        "score",
        "pairs",
        "--config",
        s(&cfg),
        "--empty-side",
        "undefined",
        "--out",
        s(&flag_out),
    ]);
    assert!(o.status.success());
    let undefined = fs::read_to_string(flag_out.join("scores.csv")).unwrap();
    assert!(zero.matches("undefined").count() < undefined.matches("undefined").count());

    fs::write(&cfg, r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(run(&["all", "--config", s(&cfg)]).status.code(), Some(1));
}

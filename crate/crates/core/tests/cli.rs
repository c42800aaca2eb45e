mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use akkadian::cli::{OutputRecord, EXIT_MALFORMED, EXIT_NO_RESULT, EXIT_OK};

fn akkad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akkad")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<OutputRecord> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn parse_text_layout() {
    let out = akkad(&["parse", "liqbi"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(
        stdout(&out),
        "Stem\tq-b-&\nParse\tG Precative Third Weak 3 c s\nNormalized form\tliqbi\n\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("Computation time"));
}

#[test]
fn parse_unicode_style() {
    let out = akkad(&["parse", "--style", "unicode", "inadduu$i"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(stdout(&out).contains("Normalized form\tinaddūši"), "{}", stdout(&out));
}

#[test]
fn parse_structured() {
    let out = akkad(&["parse", "--format", "structured", "tumalli*nikkim"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].analyses.len(), 3);
    assert!(recs[0].analyses.iter().all(|a| a.label.ends_with("Ventive 2 f s")));
}

#[test]
fn exit_codes() {
    assert_eq!(akkad(&["parse", "xyz"]).status.code(), Some(EXIT_NO_RESULT));
    assert_eq!(akkad(&["parse", "ip1rus"]).status.code(), Some(EXIT_MALFORMED));
    assert_eq!(akkad(&["generate", "p", "r", "s", "D", "Imperative", "3cs"]).status.code(), Some(EXIT_NO_RESULT));
    assert_eq!(akkad(&["generate", "p", "r", "s", "G", "Preterite", "3zz"]).status.code(), Some(EXIT_MALFORMED));
    assert_eq!(akkad(&["bogus"]).status.code(), Some(2));
}

#[test]
fn generate_preterites() {
    let out = akkad(&["generate", "--format", "structured", "p", "r", "s", "G", "Preterite", "3cs"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = records(&out);
    let forms: Vec<&str> = recs[0].analyses.iter().map(|a| a.normalized.ascii.as_str()).collect();
    assert_eq!(forms, ["ipras", "ipres", "ipris", "iprus"]);
}

#[test]
fn generate_with_suffixes() {
    let out = akkad(&["generate", "n", "d", "&", "G", "Durative", "3mp", "--accusative", "3fs"]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(stdout(&out).contains("inadduu$i"), "{}", stdout(&out));
}

#[test]
fn file_input_covers_fixture() {
    let rows = common::paradigm_rows();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    for r in &rows {
        writeln!(file, "{}", r.form).unwrap();
    }
    let out = akkad(&["parse", "--format", "structured", "--file", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let recs = records(&out);
    assert_eq!(recs.len(), rows.len());
    for (rec, row) in recs.iter().zip(&rows) {
        assert_eq!(rec.input, row.form);
        assert!(rec.line.is_some());
        assert!(
            rec.analyses.iter().any(|a| a.radicals == row.root && a.bundle() == row.bundle),
            "line {}: {}",
            row.line,
            row.form
        );
    }
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_akkad"))
        .args(["parse", "--file", "-", "--format", "structured"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"iprus\nliqbi\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(records(&out).len(), 2);
}

#[test]
fn custom_rules_dir() {
    let dir = tempfile::tempdir().unwrap();
    for (name, stem) in [("g.toml", "G"), ("d.toml", "D"), ("n.toml", "N")] {
        std::fs::write(dir.path().join(name), format!("version = 1\nstem = \"{stem}\"\nrules = []\n")).unwrap();
    }
    let out = akkad(&["parse", "--rules-dir", dir.path().to_str().unwrap(), "iprus"]);
    assert_eq!(out.status.code(), Some(EXIT_NO_RESULT));
}

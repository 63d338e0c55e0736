use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn psts(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psts"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let o = psts(&full);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap())
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const NINE: &str = "order 9\n1 2 3\n4 5 6\n7 8 9\n";

#[test]
fn certificate_has_thirteen_entries() {
    let (c, r) = report(&["verify-sts13"]);
    assert_eq!(c, 0);
    assert_eq!(r["outcome"], "verified");
    let entries = r["details"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 13);
    let e11 = entries.iter().find(|e| e["vertex"] == 11).unwrap();
    assert_eq!(e11["exponent"], 0);
    assert_eq!(
        e11["blocks"],
        serde_json::json!([[0, 2, 7], [1, 3, 8], [5, 6, 9], [4, 10, 12]])
    );
}

#[test]
fn construct_three_blocks_of_order_nine() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "nine.psts", NINE);
    let o = psts(&["construct", s(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1 2 4 3 5 7 6 8 9");
    let (_, r) = report(&["construct", s(&f)]);
    assert_eq!(r["details"]["method"], "ThreeBlocksOrder9");
}

#[test]
fn decide_exit_codes() {
    let d = TempDir::new().unwrap();
    let gen = psts(&[
        "gen", "cyclic", "--n", "13", "--base", "0,1,4", "--base", "0,2,7",
    ]);
    assert_eq!(code(&gen), 0);
    let sts = write(&d, "sts13.psts", &stdout(&gen));
    let (c, r) = report(&["decide", s(&sts)]);
    assert_eq!((c, r["outcome"].as_str().unwrap()), (1, "not_sequenceable"));
    let (c, r) = report(&["decide", s(&sts), "--budget", "5"]);
    assert_eq!((c, r["outcome"].as_str().unwrap()), (2, "unknown"));
    let (c, _) = report(&["construct", s(&sts)]);
    assert_eq!(c, 1);

    let fano = psts(&["gen", "cyclic", "--n", "7", "--base", "0,1,3"]);
    let fano = write(&d, "fano.psts", &stdout(&fano));
    for extra in [
        &[][..],
        &["--parallel", "4"][..],
        &["--parallel", "4", "--deterministic"][..],
    ] {
        let mut args = vec!["decide", s(&fano)];
        args.extend_from_slice(extra);
        let (c, r) = report(&args);
        assert_eq!(c, 0);
        assert_eq!(r["details"]["witness"].as_array().unwrap().len(), 7);
    }
}

#[test]
fn check_seq_lists_segments() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "nine.psts", NINE);
    let good = write(&d, "good.seq", "1,2,4,3,5,7,6,8,9\n");
    let bad = write(
        &d,
        "bad.seq",
        "[\"1\",\"2\",\"3\",\"4\",\"5\",\"6\",\"7\",\"8\",\"9\"]",
    );
    assert_eq!(report(&["check-seq", s(&f), s(&good)]).0, 0);
    let (c, r) = report(&["check-seq", s(&f), s(&bad)]);
    assert_eq!(c, 1);
    let segs = r["details"]["inadmissible_segments"].as_array().unwrap();
    assert_eq!(segs.len(), 5);
    assert_eq!(segs[0]["partition"], serde_json::json!([["1", "2", "3"]]));
}

#[test]
fn generated_systems_round_trip() {
    let d = TempDir::new().unwrap();
    for args in [
        vec![
            "gen", "random", "--n", "15", "--blocks", "20", "--seed", "9",
        ],
        vec!["gen", "chain", "--sizes", "2,3,2"],
        vec!["gen", "friendship", "--m", "4"],
    ] {
        let o = psts(&args);
        assert_eq!(code(&o), 0);
        let text = stdout(&o);
        let f = write(&d, "g.psts", &text);
        let (c, r) = report(&["validate", s(&f)]);
        assert_eq!(c, 0);
        let (_, g) = report(&args);
        let doc = &g["details"]["system"];
        assert_eq!(r["details"]["order"], doc["order"]);
        assert_eq!(r["details"]["points"], doc["points"]);
        assert_eq!(
            r["details"]["blocks"].as_u64().unwrap() as usize,
            doc["blocks"].as_array().unwrap().len()
        );
        let json = write(&d, "g.json", &serde_json::to_string(doc).unwrap());
        let (c, rj) = report(&["validate", s(&json)]);
        assert_eq!(c, 0);
        assert_eq!(rj["details"], r["details"]);
    }
}

#[test]
fn reports_are_reproducible() {
    let d = TempDir::new().unwrap();
    let text = stdout(&psts(&[
        "gen", "random", "--n", "12", "--blocks", "18", "--seed", "4",
    ]));
    assert_eq!(
        text,
        stdout(&psts(&[
            "gen", "random", "--n", "12", "--blocks", "18", "--seed", "4"
        ]))
    );
    let f = write(&d, "r.psts", &text);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let a = strip(report(&["decide", s(&f)]).1);
    let b = strip(report(&["decide", s(&f)]).1);
    assert_eq!(a, b);
    assert_eq!(a["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn usage_and_input_errors_exit_3() {
    let d = TempDir::new().unwrap();
    assert_eq!(code(&psts(&["frobnicate"])), 3);
    assert_eq!(code(&psts(&["decide"])), 3);
    assert_eq!(code(&psts(&["decide", "/nonexistent/x.psts"])), 3);
    let f = write(&d, "broken.psts", "order 5\n1 2 3\n1 2\n");
    let o = psts(&["validate", s(&f)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let (c, r) = report(&["validate", s(&f)]);
    assert_eq!((c, r["outcome"].as_str().unwrap()), (3, "error"));
    assert_eq!(code(&psts(&["--help"])), 0);
}

#[test]
fn packing_commands() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "t.psts", "order 12\na b c\nd e f\ng h i\n");
    let (c, r) = report(&["pack", s(&f)]);
    assert_eq!((c, r["details"]["nu"].as_u64().unwrap()), (0, 3));
    let (_, r) = report(&["bad-sets", s(&f)]);
    let sets = r["details"]["bad_sets"].as_array().unwrap();
    assert_eq!(sets.len(), 1);
    assert_eq!(sets[0]["set"], serde_json::json!(["iso1", "iso2", "iso3"]));
    assert_eq!(
        report(&["good-set", s(&f), "--points", "iso1,iso2,iso3"]).0,
        1
    );
    assert_eq!(report(&["good-set", s(&f), "--points", "a,iso2,iso3"]).0, 0);
    assert_eq!(report(&["good-set", s(&f), "--points", "a"]).0, 3);
    assert_eq!(stdout(&psts(&["bound", "10"])).trim(), "13");
}

#[test]
fn hunt_streams_json_lines() {
    let o = psts(&["hunt", "--order", "8", "--seeds", "3..8", "--blocks", "6"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 6);
    for (i, l) in lines[..5].iter().enumerate() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["seed"], 3 + i as u64);
        assert_eq!(v["outcome"], "sequenceable");
    }
    assert_eq!(code(&psts(&["hunt", "--order", "8", "--seeds", "9..3"])), 3);
}

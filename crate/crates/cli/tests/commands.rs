use std::path::Path;
use std::process::{Command, Output};

use flatspin::catalog::{random_diagonal_group, torus};
use flatspin_cli::group_file::GroupFile;
use flatspin_cli::report::{text_facts, Report};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn flatspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatspin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn cyclic_seven_has_no_spinc_structure() {
    let out = flatspin(&["analyze", "catalog:cyclic-hw-7", "--checks", "spinc"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["spinc"]["answer"], "NO");
    assert_eq!(r["verdicts"]["spinc"]["obstruction"]["parity"], "1/2");
    assert!(!r["verdicts"]["spinc"]["obstruction"]["terms"].as_array().unwrap().is_empty());
    assert!(r["verdicts"]["spin"].is_null());
}

#[test]
fn first_five_dimensional_group() {
    let out = flatspin(&["analyze", "catalog:hw-5-1", "--checks", "spin,spinc"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["spin"]["answer"], "NO");
    assert_eq!(r["verdicts"]["spinc"]["answer"], "NO");
    assert_eq!(r["labels"][1], "1-th 219.1.1");
}

#[test]
fn torus_file_has_both_structures() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "torus5.json", &GroupFile::from_group(&torus(5).unwrap()).to_canonical());
    let out = flatspin(&["analyze", &path]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["verdicts"]["spin"]["answer"], "YES");
    assert_eq!(r["verdicts"]["spinc"]["answer"], "YES");
    assert_eq!(r["invariants"]["betti"], serde_json::json!([1, 5, 10, 10, 5, 1]));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&flatspin(&["analyze", "catalog:nope"])), 1);
    assert_eq!(code(&flatspin(&["analyze", "/nonexistent/group.json"])), 1);
    assert_eq!(code(&flatspin(&["enumerate", "9", "--exhaustive"])), 1);
    assert_eq!(code(&flatspin(&["frobnicate"])), 1);
    assert_eq!(code(&flatspin(&["--help"])), 0);

    let bad = write(dir.path(), "bad.json", "{\"dimension\": 2,\n \"generators\": [{\"signs\": [1, 3], \"translation\": [\"0\", \"0\"]}]}");
    let out = flatspin(&["analyze", &bad]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let torsion = write(
        dir.path(),
        "torsion.json",
        "{\"dimension\": 3, \"generators\": [{\"signs\": [1, -1, -1], \"translation\": [\"1/2\", \"0\", \"0\"]}, {\"signs\": [-1, 1, -1], \"translation\": [\"0\", \"0\", \"0\"]}]}",
    );
    let out = flatspin(&["analyze", &torsion]);
    assert_eq!(code(&out), 2);
    let r = json(&out);
    assert_eq!(r["validation"]["torsion_free"], false);
    assert!(r["validation"]["torsion_witness"].is_object());
    assert_eq!(code(&flatspin(&["cross-check", &torsion])), 2);
}

#[test]
fn text_and_json_agree() {
    for target in ["catalog:hw-5-1", "catalog:cyclic-hw-9", "catalog:torus-3", "catalog:cyclic-hw-3"] {
        let r: Report = serde_json::from_slice(&flatspin(&["analyze", target]).stdout).unwrap();
        let facts = text_facts(&stdout(&flatspin(&["analyze", target, "--format", "text"])));
        assert_eq!(facts["spin"], r.verdicts.spin.as_ref().unwrap().answer);
        assert_eq!(facts["spinc"], r.verdicts.spinc.as_ref().unwrap().answer);
        assert_eq!(facts["torsion_free"], r.validation.torsion_free.unwrap().to_string());
        assert_eq!(facts["is_hw"], r.validation.is_hw.unwrap().to_string());
        let betti: Vec<String> = r.invariants.betti.unwrap().iter().map(u64::to_string).collect();
        assert_eq!(facts["betti"], betti.join(" "));
        assert_eq!(facts["h1_torsion"], r.invariants.h1.unwrap().torsion.join(" "));
    }
}

#[test]
fn reports_replay_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    for target in ["catalog:hw-5-1", "catalog:cyclic-hw-11", "catalog:torus-4"] {
        let report = stdout(&flatspin(&["analyze", target]));
        let path = write(dir.path(), "report.json", &report);
        let out = flatspin(&["verify", &path]);
        assert_eq!(code(&out), 0, "{target}");
        assert_eq!(json(&out)["ok"], true);
    }

    let report = stdout(&flatspin(&["analyze", "catalog:cyclic-hw-5"]));
    let mut value: Value = serde_json::from_str(&report).unwrap();
    value["verdicts"]["spinc"]["obstruction"]["terms"][0]["coefficient"] = "2".into();
    let path = write(dir.path(), "tampered.json", &value.to_string());
    assert_eq!(code(&flatspin(&["verify", &path])), 3);

    let mut value: Value = serde_json::from_str(&report).unwrap();
    value["invariants"]["betti"][1] = 1.into();
    let path = write(dir.path(), "tampered.json", &value.to_string());
    assert_eq!(code(&flatspin(&["verify", &path])), 3);

    // coordinates 2 and 3 are negated, so their angles are pinned to {0, 1/2}
    let rank_one = write(
        dir.path(),
        "rank_one.json",
        "{\"dimension\": 3, \"generators\": [{\"signs\": [1, -1, -1], \"translation\": [\"1/2\", \"0\", \"0\"]}]}",
    );
    let report = stdout(&flatspin(&["analyze", &rank_one]));
    let mut value: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(value["verdicts"]["spinc"]["answer"], "YES");
    value["verdicts"]["spinc"]["witness"]["zeta"][1] = "1/3".into();
    let path = write(dir.path(), "tampered.json", &value.to_string());
    assert_eq!(code(&flatspin(&["verify", &path])), 3);

    let path = write(dir.path(), "garbage.json", "{\"version\": 1}");
    assert_eq!(code(&flatspin(&["verify", &path])), 1);
}

#[test]
fn cross_check_examples() {
    for target in ["catalog:cyclic-hw-5", "catalog:torus-3", "catalog:hw-5-1"] {
        let out = flatspin(&["cross-check", target]);
        assert_eq!(code(&out), 0, "{target}");
        assert_eq!(json(&out)["match"], true);
    }
    assert_eq!(code(&flatspin(&["cross-check", "catalog:cyclic-hw-15"])), 1);
}

#[test]
fn enumeration_is_deterministic() {
    let a = flatspin(&["enumerate", "7", "--sample", "40", "--seed", "7", "--jobs", "1"]);
    let b = flatspin(&["enumerate", "7", "--sample", "40", "--seed", "7", "--jobs", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<&str> = std::str::from_utf8(&a.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 41);
    let summary: Value = serde_json::from_str(lines[40]).unwrap();
    assert_eq!(summary["summary"]["torsion_free"], 40);
    assert!(summary["summary"]["note"].as_str().unwrap().contains("counted separately"));

    let a = flatspin(&["enumerate", "3", "--exhaustive", "--jobs", "1", "--format", "text"]);
    let b = flatspin(&["enumerate", "3", "--exhaustive", "--jobs", "3", "--format", "text"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("torsion_free: 8"));
}

#[test]
fn enumeration_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.jsonl");
    let out = flatspin(&["enumerate", "5", "--sample", "10", "--seed", "3", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 11);
    assert!(String::from_utf8_lossy(&out.stderr).contains("torsion_free: 10"));
}

#[test]
fn canonical_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=7 {
        let text = GroupFile::from_group(&random_diagonal_group(&mut rng, n)).to_canonical();
        let parsed = GroupFile::parse(&text).unwrap();
        assert_eq!(parsed.to_canonical(), text);
        assert_eq!(GroupFile::from_group(&parsed.build().unwrap()), parsed);
    }
}

#[test]
fn exhaustive_output_does_not_depend_on_workers() {
    use flatspin::catalog::EnumerationMode;
    use flatspin_cli::enumerate::{enumerate, Record};
    let run = |jobs| {
        let mut records: Vec<Record> = Vec::new();
        let (summary, _) = enumerate(5, EnumerationMode::Exhaustive, Some(jobs), &mut |r| {
            records.push(r.clone());
            Ok(())
        })
        .unwrap();
        (records, summary)
    };
    let (one, s1) = run(1);
    let (many, s4) = run(4);
    assert_eq!(one, many);
    assert_eq!(s1, s4);
    assert!(one.windows(2).all(|w| w[0].index < w[1].index));
}

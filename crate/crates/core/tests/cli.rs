mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::fixture;
use tempfile::tempdir;

fn phonaug(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phonaug"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .expect("spawn phonaug")
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count()
}

fn manifest(path: &Path, rows: impl Iterator<Item = String>) {
    fs::write(path, rows.collect::<Vec<_>>().join("\n") + "\n").unwrap();
}

#[test]
fn all_blank_path_decodes_to_empty_track() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("paths.jsonl");
    let output = dir.path().join("tracks.jsonl");
    fs::write(
        &input,
        r#"{"utt_id":"u1","frame_ms":20,"labels":["_","_","_"]}"#,
    )
    .unwrap();
    ok(phonaug(&[&"decode", &input, &output, &"--model", &"RM"]));
    let text = fs::read_to_string(&output).unwrap();
    assert!(text.contains(r#""phones":[]"#), "{text}");
}

#[test]
fn malformed_line_is_reported_with_its_number() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("paths.jsonl");
    fs::write(
        &input,
        "{\"utt_id\":\"u1\",\"frame_ms\":20,\"labels\":[\"a\"]}\n{not json\n",
    )
    .unwrap();
    let out = phonaug(&[&"decode", &input, &dir.path().join("o.jsonl")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn unknown_symbol_in_path_fails() {
    let dir = tempdir().unwrap();
    let input = dir.path().join("paths.jsonl");
    fs::write(
        &input,
        r#"{"utt_id":"u1","frame_ms":20,"labels":["a","Q"]}"#,
    )
    .unwrap();
    let out = phonaug(&[&"decode", &input, &dir.path().join("o.jsonl")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));
}

#[test]
fn bad_mapping_file_fails_before_reading_inputs() {
    let dir = tempdir().unwrap();
    let mapping = dir.path().join("mapping.json");
    fs::write(&mapping, "{\"broken\": ").unwrap();
    let out = phonaug(&[
        &"--mapping",
        &mapping,
        &"augment",
        &"missing-rm.jsonl",
        &"missing-hm.jsonl",
        &dir.path().join("o.jsonl"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("mapping.json"), "{}", stderr(&out));
}

#[test]
fn synth_decode_augment_round_trip() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    ok(phonaug(&[
        &"synth",
        &d,
        &"--utterances",
        &"150",
        &"--seed",
        &"5",
    ]));
    ok(phonaug(&[
        &"decode",
        &d.join("rm_paths.jsonl"),
        &d.join("rm.jsonl"),
    ]));
    ok(phonaug(&[
        &"decode",
        &d.join("hm_paths.jsonl"),
        &d.join("hm.jsonl"),
    ]));
    assert_eq!(
        fs::read_to_string(d.join("rm.jsonl")).unwrap(),
        fs::read_to_string(d.join("rm_tracks.jsonl")).unwrap()
    );

    let stats = d.join("stats.json");
    ok(phonaug(&[
        &"augment",
        &d.join("rm.jsonl"),
        &d.join("hm.jsonl"),
        &d.join("tm.jsonl"),
        &"--stats",
        &stats,
    ]));
    let stats: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(
        stats["matched"].as_u64().unwrap() as usize,
        lines(&d.join("truth.jsonl"))
    );
    assert_eq!(lines(&d.join("tm.jsonl")), 150);

    ok(phonaug(&[
        &"augment",
        &"--no-breathy",
        &d.join("rm.jsonl"),
        &d.join("hm.jsonl"),
        &d.join("tm_plain.jsonl"),
    ]));
    assert!(fs::read_to_string(d.join("tm.jsonl"))
        .unwrap()
        .contains('ʱ'));
    assert!(!fs::read_to_string(d.join("tm_plain.jsonl"))
        .unwrap()
        .contains('ʱ'));

    ok(phonaug(&[
        &"prefilter-aspiration",
        &d.join("rm.jsonl"),
        &d.join("hm.jsonl"),
        &d.join("asp.txt"),
    ]));
    let ids = fs::read_to_string(d.join("asp.txt")).unwrap();
    let ids: Vec<&str> = ids.lines().collect();
    assert!(!ids.is_empty());
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn missing_helper_track_fails_unless_skipped() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let rm = d.join("rm.jsonl");
    let hm = d.join("hm.jsonl");
    fs::write(
        &rm,
        r#"{"utt_id":"u1","model":"RM","frame_ms":20,"phones":[{"symbol":"t","start":0,"end":1}]}"#,
    )
    .unwrap();
    fs::write(&hm, "").unwrap();
    let out = phonaug(&[&"augment", &rm, &hm, &d.join("o.jsonl")]);
    assert_eq!(out.status.code(), Some(1));
    ok(phonaug(&[
        &"augment",
        &"--skip-missing",
        &rm,
        &hm,
        &d.join("o.jsonl"),
    ]));
    assert!(fs::read_to_string(d.join("o.jsonl"))
        .unwrap()
        .contains(r#""symbol":"t""#));
}

#[test]
fn empty_inputs_give_empty_outputs() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("e.jsonl"), "").unwrap();
    ok(phonaug(&[
        &"decode",
        &d.join("e.jsonl"),
        &d.join("t.jsonl"),
    ]));
    ok(phonaug(&[
        &"augment",
        &d.join("e.jsonl"),
        &d.join("e.jsonl"),
        &d.join("a.jsonl"),
    ]));
    ok(phonaug(&[
        &"prepare",
        &"filter",
        &d.join("e.jsonl"),
        &d.join("f.jsonl"),
    ]));
    for f in ["t.jsonl", "a.jsonl", "f.jsonl"] {
        assert_eq!(fs::read_to_string(d.join(f)).unwrap(), "");
    }
}

#[test]
fn onset_testset_and_split_sizes() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    let words = ["Ball", "Dach", "Gast", "Post", "Tag", "Kind"];
    manifest(
        &d.join("m.jsonl"),
        (0..600).map(|i| {
            format!(
                r#"{{"utt_id":"s{i:04}","language":"de","sentence":"{}","transcription":"a","analyzable":true}}"#,
                words[i % 6]
            )
        }),
    );
    ok(phonaug(&[
        &"prepare",
        &"onset-testset",
        &d.join("m.jsonl"),
        &d.join("o1.jsonl"),
        &"--seed",
        &"3",
    ]));
    ok(phonaug(&[
        &"prepare",
        &"onset-testset",
        &d.join("m.jsonl"),
        &d.join("o2.jsonl"),
        &"--seed",
        &"3",
    ]));
    assert_eq!(lines(&d.join("o1.jsonl")), 240);
    assert_eq!(
        fs::read(d.join("o1.jsonl")).unwrap(),
        fs::read(d.join("o2.jsonl")).unwrap()
    );

    manifest(
        &d.join("big.jsonl"),
        (0..7000).map(|i| {
            format!(
                r#"{{"utt_id":"c{i:05}","language":"l{}","sentence":"x","transcription":"a"}}"#,
                i % 7
            )
        }),
    );
    ok(phonaug(&[
        &"prepare",
        &"split",
        &d.join("big.jsonl"),
        &d.join("train.jsonl"),
        &d.join("valid.jsonl"),
        &"--fraction",
        &"0.2",
        &"--seed",
        &"1",
    ]));
    assert_eq!(lines(&d.join("train.jsonl")), 5600);
    assert_eq!(lines(&d.join("valid.jsonl")), 1400);
}

#[test]
fn remap_and_clean_vocab() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    manifest(
        &d.join("m.jsonl"),
        [
            r#"{"utt_id":"a","language":"de","sentence":"Bach","transcription":"baχ"}"#,
            r#"{"utt_id":"b","language":"de","sentence":"gut","transcription":"gut"}"#,
            r#"{"utt_id":"c","language":"de","sentence":"X","transcription":"Xa"}"#,
        ]
        .into_iter()
        .map(String::from),
    );
    fs::write(
        d.join("remap.json"),
        r#"{"remap":{"χ":"x"},"exclude":["X"]}"#,
    )
    .unwrap();
    ok(phonaug(&[
        &"prepare",
        &"remap",
        &d.join("m.jsonl"),
        &d.join("r.jsonl"),
        &"--config",
        &d.join("remap.json"),
        &"--report",
        &d.join("report.jsonl"),
    ]));
    let kept = fs::read_to_string(d.join("r.jsonl")).unwrap();
    assert!(kept.contains("bax") && kept.contains("ɡut") && !kept.contains(r#""c""#));
    assert_eq!(lines(&d.join("report.jsonl")), 3);

    fs::write(
        d.join("vocab.json"),
        r#"{"tokens":{"_":0,"a":1,"g":2,"ɡ":3,"u":4,"t":5,"b":6,"x":7},"blank":"_"}"#,
    )
    .unwrap();
    ok(phonaug(&[
        &"prepare",
        &"clean-vocab",
        &d.join("r.jsonl"),
        &"--vocab",
        &d.join("vocab.json"),
        &d.join("v.json"),
    ]));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("v.json")).unwrap()).unwrap();
    assert!(v["tokens"].get("g").is_none());
    assert_eq!(v["tokens"]["ʱ"], 7);
}

#[test]
fn evaluate_reports_and_significance() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    ok(phonaug(&[
        &"evaluate",
        &fixture("all_poa_tm.jsonl"),
        &d.join("one"),
    ]));
    let text = fs::read_to_string(d.join("one/report.txt")).unwrap();
    assert!(!text.contains("significance"));
    assert!(d.join("one/report.json").exists());
    assert!(fs::read_to_string(d.join("one/boxplot.csv"))
        .unwrap()
        .starts_with("group,class,min,q1,median,q3,max,outliers\n"));

    ok(phonaug(&[&"synth", &d.join("s"), &"--utterances", &"1"]));
    ok(phonaug(&[
        &"evaluate",
        &d.join("s/instances.jsonl"),
        &d.join("two"),
    ]));
    let text = fs::read_to_string(d.join("two/report.txt")).unwrap();
    assert!(
        text.contains("significance") && text.contains("BM vs TM"),
        "{text}"
    );

    let out = ok(phonaug(&[
        &"evaluate",
        &"--poa",
        &"velar",
        &fixture("velar_tm.jsonl"),
        &d.join("v"),
    ]));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("Results for velar plosives"));
    assert!(!stdout.contains("bilabial"));

    let out = phonaug(&[
        &"evaluate",
        &"--strict",
        &"--lenient",
        &fixture("all_poa_tm.jsonl"),
        &d.join("x"),
    ]);
    assert!(!out.status.success());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempdir().unwrap();
    let d = dir.path();
    for run in ["a", "b"] {
        ok(phonaug(&[
            &"synth",
            &d.join(run),
            &"--utterances",
            &"80",
            &"--seed",
            &"9",
            &"--jitter",
            &"1",
        ]));
    }
    for f in [
        "rm_paths.jsonl",
        "hm_paths.jsonl",
        "truth.jsonl",
        "instances.jsonl",
    ] {
        assert_eq!(
            fs::read(d.join("a").join(f)).unwrap(),
            fs::read(d.join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

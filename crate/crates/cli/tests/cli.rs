use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use cfp_cli::record::{from_csv, ResultRecord};
use cfp_cli::{parse_instance, SAMPLE_5X7, SAMPLE_8X12};
use cfp_core::instances::{sample_5x7, sample_8x12};
use cfp_core::{IncidenceMatrix, RandomSource};
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn cfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_records(text: &str) -> Vec<ResultRecord> {
    text.lines().map(|l| ResultRecord::from_json(l).unwrap()).collect()
}

fn without_elapsed(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.as_object_mut().unwrap().remove("elapsed_sec");
            v
        })
        .collect()
}

#[test]
fn bundled_instances_match_the_library_samples() {
    let a = parse_instance(SAMPLE_5X7).unwrap();
    assert_eq!(a.matrix, sample_5x7());
    assert_eq!(a.matrix.ones(), 20);
    let b = parse_instance(SAMPLE_8X12).unwrap();
    assert_eq!(b.matrix, sample_8x12());
    assert_eq!(b.matrix.ones(), 35);
}

#[test]
fn repeated_seeded_solves_reach_the_optimum() {
    let path = data("sample_5x7.txt");
    let out = cfp(&[
        "solve",
        "--instance",
        path.to_str().unwrap(),
        "--runs",
        "50",
        "--seed",
        "1",
        "--format",
        "csv",
    ]);
    let records = from_csv(&stdout(&out)).unwrap();
    assert_eq!(records.len(), 1);
    let r = &records[0];
    assert_eq!(
        (
            r.min_efficiency.as_str(),
            r.avg_efficiency.as_str(),
            r.max_efficiency.as_str()
        ),
        ("19/23", "19/23", "19/23")
    );
    r.verify(&sample_5x7()).unwrap();
}

#[test]
fn oracle_command_reports_enumeration_size() {
    let path = data("sample_5x7.txt");
    let out = cfp(&["oracle", "--instance", path.to_str().unwrap(), "--format", "json"]);
    let r = &json_records(&stdout(&out))[0];
    assert_eq!(r.efficiency, "19/23");
    assert_eq!(r.enumerated, Some(147_840));
    r.verify(&sample_5x7()).unwrap();

    let out = cfp(&[
        "oracle",
        "--instance",
        path.to_str().unwrap(),
        "--no-singletons",
        "--format",
        "json",
    ]);
    let r = &json_records(&stdout(&out))[0];
    assert_eq!(r.efficiency, "38/51");
    assert!(!r.singletons);
}

#[test]
fn larger_sample_reaches_the_reported_quality() {
    let path = data("sample_8x12.txt");
    let out = cfp(&["solve", "--instance", path.to_str().unwrap(), "--format", "json"]);
    let r = &json_records(&stdout(&out))[0];
    assert!(r.efficiency_pct >= 75.32, "{}", r.efficiency_pct);
    r.verify(&sample_8x12()).unwrap();
}

#[test]
fn output_is_independent_of_thread_count() {
    let a = data("sample_5x7.txt");
    let b = data("sample_8x12.txt");
    let base = [
        "solve",
        "--instance",
        a.to_str().unwrap(),
        "--instance",
        b.to_str().unwrap(),
        "--runs",
        "3",
        "--seed",
        "11",
        "--format",
        "json",
    ];
    let reference = without_elapsed(&stdout(&cfp(&base)));
    assert_eq!(reference.len(), 2);
    for threads in ["1", "2", "4"] {
        let mut args = base.to_vec();
        args.extend(["--threads", threads]);
        assert_eq!(without_elapsed(&stdout(&cfp(&args))), reference, "threads = {threads}");
    }
}

#[test]
fn text_output_can_include_the_block_matrix() {
    let path = data("sample_5x7.txt");
    let out = cfp(&["solve", "--instance", path.to_str().unwrap(), "--show-matrix"]);
    let text = stdout(&out);
    assert!(text.contains("efficiency    82.61% (19/23)"), "{text}");
    assert!(text.contains('|'));
}

#[test]
fn custom_instance_files_and_weights() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "# name: tiny\n3 4\n1 1 0 0\n1 1 0 0\n0 0 1 1\n").unwrap();
    let path = file.path().to_str().unwrap();
    let out = cfp(&["solve", "--instance", path, "--q", "0.7", "--format", "json"]);
    let r = &json_records(&stdout(&out))[0];
    assert_eq!(r.instance, "tiny");
    assert_eq!(r.q, "7/10");
    assert_eq!(r.efficiency, "1/1");
    assert_eq!(r.exceptions_plus_voids, 0);
}

#[test]
fn errors_use_distinct_exit_codes() {
    let missing = cfp(&["solve", "--instance", "/nonexistent/instance.txt"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("error"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "2 2\n1 0\n0 2\n").unwrap();
    let out = cfp(&["solve", "--instance", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("line 3"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let usage = cfp(&["solve"]);
    assert_eq!(usage.status.code(), Some(2));
    let weight = cfp(&["solve", "--instance", "x", "--q", "1.5"]);
    assert_eq!(weight.status.code(), Some(2));

    let path = data("sample_8x12.txt");
    let budget = cfp(&["oracle", "--instance", path.to_str().unwrap(), "--budget", "1000"]);
    assert_eq!(budget.status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_files_round_trip(m in 1usize..=15, p in 1usize..=15, density in 0.0f64..1.0, seed: u64) {
        let matrix = IncidenceMatrix::random(m, p, density, &mut RandomSource::new(seed, 0).rng()).unwrap();
        let file = cfp_cli::InstanceFile { name: "rt".into(), matrix: matrix.clone(), source: "generated".into() };
        let parsed = parse_instance(&file.to_string()).unwrap();
        prop_assert_eq!(parsed, file);
    }
}

use std::path::{Path, PathBuf};
use std::process::Command;

use quadtame::Ring;
use quadtame_cli::schema::{read_json, WordFile};
use quadtame_cli::walk::{run_random_walk, WalkConfig, WalkReport};
use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_quadtame")).args(args).current_dir(fixtures()).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn json(args: &[&str]) -> Value {
    let (s, code) = run(args);
    assert_eq!(code, 0, "{s}");
    serde_json::from_str(&s).unwrap()
}

#[test]
fn degree_of_the_linear_fixture() {
    let v = json(&["degree", "--word", "words/linear.json"]);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["eps"], -1);
    assert_eq!(v["components"][2], "x^2*z + y");
}

#[test]
fn powers_as_csv() {
    let (s, code) = run(&["powers", "--word", "words/exponential.json", "--n", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows, ["n,deg_forward,deg_backward", "1,3,3", "2,9,9", "3,21,21", "4,45,45"]);
}

#[test]
fn resonance_labels() {
    let v = json(&["resonance", "--word", "words/critical_pair.json", "--valuation", "valuations/minus_degree.json"]);
    assert_eq!((v["class"].as_str(), v["k"].as_u64(), v["lambda"].as_str()), (Some("critical"), Some(2), Some("1")));
    let v = json(&["resonance", "--word", "words/proper_pair.json", "--valuation", "valuations/minus_degree.json"]);
    assert_eq!((v["class"].as_str(), v["s1"].as_u64(), v["s2"].as_u64()), (Some("proper"), Some(3), Some(2)));
    let v = json(&["resonance", "--word", "words/coordinate_pair.json", "--valuation", "valuations/irrational.json"]);
    assert_eq!(v["class"], "independent");
}

#[test]
fn lower_bound_report() {
    let v = json(&[
        "thm417",
        "--word",
        "words/proper_pair.json",
        "--valuation",
        "valuations/minus_degree.json",
        "--poly",
        "y^2 - x^3",
    ]);
    assert_eq!(
        (v["lhs"].as_str(), v["nu0"].as_str(), v["bound_holds"].as_bool()),
        (Some("-5"), Some("-6"), Some(true))
    );
}

#[test]
fn input_errors_exit_with_two() {
    let dir = std::env::temp_dir().join(format!("quadtame-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"generators": {}, "word": ["q"]}"#).unwrap();
    let (s, code) = run(&["degree", "--word", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["error"]["kind"], "UnknownGenerator");

    let (s, code) = run(&["thm4", "--word", "words/sigma.json"]);
    assert_eq!(code, 2);
    assert!(s.contains("AffineInput"));

    let (s, code) = run(&["verify5", "--word", "words/gallery.json", "--valuation", "valuations/minus_degree.json"]);
    assert_eq!(code, 2);
    assert!(s.contains("ConditionSevenViolated"));

    let (_, code) = run(&["degree", "--word", "words/missing.json"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn dot_output_for_the_oriented_graph() {
    let (s, code) = run(&[
        "complex",
        "--word",
        "words/gallery.json",
        "--valuation",
        "valuations/balanced7.json",
        "--format",
        "dot",
    ]);
    assert_eq!(code, 0);
    assert!(s.starts_with("graph"));
    assert!(s.trim_end().ends_with('}'));
}

#[test]
fn word_files_round_trip() {
    let ring = Ring::default();
    for name in ["gallery_long.json", "proper_pair.json", "conjugator.json"] {
        let wf: WordFile = read_json(&fixtures().join("words").join(name)).unwrap();
        let back: WordFile = serde_json::from_str(&serde_json::to_string(&wf).unwrap()).unwrap();
        assert_eq!(back, wf);
        assert_eq!(back.word().unwrap().evaluate(&ring).unwrap(), wf.word().unwrap().evaluate(&ring).unwrap());
    }
}

#[test]
fn walk_reports_round_trip_and_match_the_library() {
    let v = json(&["walk", "--config", "walks/single_hyperbolic.json", "--n", "4"]);
    let rep: WalkReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&rep).unwrap(), v);
    let mut cfg = WalkConfig::from_file(&read_json(&fixtures().join("walks/single_hyperbolic.json")).unwrap()).unwrap();
    cfg.steps = 4;
    let lib = run_random_walk(&cfg).unwrap();
    assert_eq!(lib.lambda1, rep.lambda1);
    assert_eq!(lib.mean_logdeg_forward, rep.mean_logdeg_forward);
}

#[test]
fn seeds_change_walks() {
    let a = json(&["walk", "--config", "walks/single_hyperbolic.json", "--n", "4", "--seed", "7"]);
    let b = json(&["walk", "--config", "walks/single_hyperbolic.json", "--n", "4", "--seed", "8"]);
    assert_eq!(a["config"]["seed"], 7);
    assert_ne!(a["mean_logdeg_forward"], b["mean_logdeg_forward"]);
}

use std::process::{Command, Output};

fn hck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hck")).args(args).env_remove("HCK_JOBS").output().expect("hck runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = hck(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("valid JSON on stdout"))
}

#[test]
fn iwahori_center_of_a1_at_radius_zero_is_the_identity() {
    let (code, v) = json(&["iwahori-center", "--datum", "a1", "--radius", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let basis = v["data"]["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 1);
    let terms = basis[0]["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["lambda"], serde_json::json!([0]));
    assert_eq!(terms[0]["w"], serde_json::json!([]));
    assert_eq!(terms[0]["coeff"], "1");
}

#[test]
fn gl3_heart_check_escalates_to_distinct_volume() {
    let o = hck(&["heart-check", "--datum", "gl3", "--x", "1/2,0,0", "--r", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("MISMATCH"), "{text}");
    assert!(text.contains("DISTINCT_VOLUME"), "{text}");
}

#[test]
fn builtin_clifford_catalog_passes_entry_by_entry() {
    let (code, v) = json(&["clifford", "--catalog", "builtin", "--check", "all"]);
    assert_eq!(code, 0);
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(checks.len() > 1);
    assert!(checks.iter().all(|c| c["status"] == "PASS"));
}

#[test]
fn counterexample_and_torus_roc_pass() {
    assert_eq!(hck(&["counterexample"]).status.code(), Some(0));
    let o = hck(&["torus-center", "--datum", "gl2", "--q", "3", "--radius", "1", "--check", "roc"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["--format", "json", "iwahori-center", "--datum", "gl2", "--radius", "1"][..],
        &["--format", "json", "heart-check", "--datum", "gl3", "--x", "1/2,0,0", "--r", "1"][..],
        &["--format", "json", "spade-check", "--bounds", "1,1;2,1"][..],
    ] {
        let (a, b) = (hck(args), hck(args));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = json(&["counterexample"]);
    assert!(v["report"].get("wall_time_ms").is_none());
    let (_, v) = json(&["--timing", "counterexample"]);
    assert!(v["report"]["wall_time_ms"].is_u64());
}

#[test]
fn malformed_catalog_reports_position_and_exits_two() {
    let path = std::env::temp_dir().join(format!("hck-bad-catalog-{}.json", std::process::id()));
    std::fs::write(&path, "{\n  \"entries\": [\n    {\"name\": 3,\n").unwrap();
    let o = hck(&["clifford", "--catalog", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(hck(&["heart-check", "--datum", "gl3", "--x", "1/2,0", "--r", "1"]).status.code(), Some(2));
    assert_eq!(hck(&["rootdatum", "--datum", "e9"]).status.code(), Some(2));
    assert_eq!(hck(&["spade-check", "--bounds", "1,0;0,1"]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["--format", "json", "spade-check", "--bounds", "1,1;2,1"];
    let one = Command::new(env!("CARGO_BIN_EXE_hck")).args(["--jobs", "1"]).args(args).output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_hck")).args(["--jobs", "4"]).args(args).output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn su2ym(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_su2ym"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str], job: &str) -> Value {
    let mut a = vec!["solve", "--format", "json"];
    a.extend_from_slice(args);
    let o = su2ym(&a, job);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

const GOLDEN_MINIMA: &str = include_str!("golden/atlas_minima.tsv");
const GOLDEN_1_1: &str = include_str!("golden/atlas_1_1.tsv");

#[test]
fn atlas_matches_golden() {
    let o = su2ym(&["atlas"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), GOLDEN_MINIMA);
    let seq = su2ym(&["atlas", "--sequential"], "");
    assert_eq!(stdout(&seq), GOLDEN_MINIMA);
}

#[test]
fn atlas_minimal_signature_has_eight_rows() {
    let o = su2ym(&["atlas", "--grid", "1,1"], "");
    assert_eq!(stdout(&o), GOLDEN_1_1);
    assert_eq!(GOLDEN_1_1.lines().count(), 9);
}

#[test]
fn atlas_empty_grid() {
    let o = su2ym(&["atlas", "--grid", ""], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn atlas_three_three_has_triple_null_row() {
    let o = su2ym(&["atlas", "--grid", "3,3"], "");
    let line = stdout(&o).lines().find(|l| l.contains("000-null3")).unwrap().to_string();
    assert!(line.contains("(3,0,0)\t1\t"), "{line}");
}

#[test]
fn atlas_json_is_parseable() {
    let o = su2ym(&["atlas", "--grid", "2,2", "--format", "json"], "");
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().iter().any(|e| e["row"] == "000-null2"));
}

#[test]
fn zero_current_minkowski_reports_families() {
    let job = r#"{"signature": {"p": 1, "q": 3}, "current": [[0,0,0],[0,0,0],[0,0,0],[0,0,0]]}"#;
    let v = json(&["--sample-families", "3"], job);
    assert_eq!(v["count_label"], "∞");
    let fams = v["families"].as_array().unwrap();
    assert_eq!(fams.len(), 2);
    assert_eq!(fams[0]["samples"].as_array().unwrap().len(), 3);
    assert_eq!(fams[0]["domain"], "R\\{0}");
}

#[test]
fn triple_null_current_has_no_solution() {
    let job = r#"{"signature": {"p": 3, "q": 3},
        "current": [[1,0,0],[0,1,0],[0,0,1],[1,0,0],[0,1,0],[0,0,1]]}"#;
    let o = su2ym(&["solve"], job);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("no solution"), "{text}");
    let v = json(&[], job);
    assert_eq!(v["count_label"], "0");
    assert_eq!(v["class"]["d"], 3);
}

#[test]
fn oracle_verdict_is_reported() {
    let job = r#"{"signature": {"p": 2, "q": 1}, "current": [[1,0.2,0],[0,0.5,0.1],[0,0,5]]}"#;
    let v = json(&["--oracle", "--seed", "7", "--starts", "128"], job);
    let checks = v["oracle"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["match"], true);
    assert_eq!(checks[0]["count"], 6);
    assert_eq!(checks[0]["seed"], 7);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 6);
}

#[test]
fn minimal_signature_solution_fields() {
    let job = r#"{"signature": {"p": 1, "q": 1}, "current": [[1.3,0,0],[0,0.4,0]], "options": {"frame": "original"}}"#;
    let v = json(&[], job);
    let s = &v["solutions"][0];
    let f2 = s["strength"]["f2"].as_f64().unwrap();
    let want = 0.5 * (1.3f64 * 0.4).powi(2).cbrt();
    assert!((f2 - want).abs() < 1e-11);
    assert_eq!(s["residual"]["per_equation"].as_array().unwrap().len(), 6);
    assert!(s["residual"]["max_abs"].as_f64().unwrap() < 1e-12);
}

#[test]
fn canonical_frame_includes_transform() {
    let job = r#"{"signature": {"p": 2, "q": 2}, "current": [[1,0,0],[0,0,0],[0.3,2,0],[0,0,0]]}"#;
    let v = json(&["--frame", "canonical"], job);
    assert_eq!(v["frame"], "canonical");
    assert!(v["transform"]["Q"].is_array());
}

#[test]
fn output_is_deterministic() {
    let job = r#"{"signature": {"p": 2, "q": 1}, "current": [[1,0.2,0],[0,0.5,0.1],[0,0,5]]}"#;
    let a = su2ym(&["solve", "--oracle"], job);
    let b = su2ym(&["solve", "--oracle"], job);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_input_exits_with_two() {
    for job in [
        "not json",
        r#"{"signature": {"p": 1, "q": 1}, "current": [[1,0,0]]}"#,
        r#"{"signature": {"p": 0, "q": 1}, "current": [[1,0,0]]}"#,
        r#"{"signature": {"p": 1, "q": 1}, "current": [[1,0],[0,1]]}"#,
    ] {
        let o = su2ym(&["solve"], job);
        assert_eq!(o.status.code(), Some(2), "{job}");
        assert!(!o.stderr.is_empty());
    }
    let o = su2ym(&["solve", "--oracle", "--starts", "3"], r#"{"signature": {"p": 1, "q": 1}, "current": [[1,0,0],[0,2,0]]}"#);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reads_job_from_file() {
    let dir = std::env::temp_dir().join(format!("su2ym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("job.json");
    std::fs::write(&path, r#"{"signature": {"p": 3, "q": 1}, "current": [[2,0,0],[0,2,0],[0,0,2],[0,0,0]]}"#).unwrap();
    let o = su2ym(&["solve", path.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f2 = -1.5"));
    std::fs::remove_dir_all(&dir).unwrap();
}

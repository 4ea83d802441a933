use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kakimizu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kakimizu"))
        .args(args)
        .env_remove("KAKIMIZU_THREADS")
        .output()
        .expect("binary runs")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Zeroes every "seconds" field so timing never reaches a golden file.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "seconds" {
                    *x = Value::from(0.0);
                } else {
                    strip_timing(x);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn normalise(stdout: &[u8]) -> String {
    let mut v: Value = serde_json::from_slice(stdout).expect("stdout is JSON");
    strip_timing(&mut v);
    let mut s = serde_json::to_string_pretty(&v).unwrap();
    s.push('\n');
    s
}

/// Compares against the golden file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, args: &[&str], code: i32) {
    let out = kakimizu(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let actual = normalise(&out.stdout);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

#[test]
fn build_golden() {
    check_golden("build_n2.json", &["build", "--n", "2"], 0);
    check_golden("build_n3_cycles.json", &["build", "--n", "3", "--include-cycles"], 0);
    check_golden("build_twists.json", &["build", "--twists", "2,-3,2,2"], 0);
}

#[test]
fn build_output_is_canonical_bytes() {
    let a = kakimizu(&["build", "--n", "4", "--include-cycles"]);
    let b = kakimizu(&["build", "--n", "4", "--include-cycles"]);
    assert_eq!(a.stdout, b.stdout);
    let k = kakimizu::io::import_complex(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!(kakimizu::io::export_complex(&k, true).as_bytes(), a.stdout.as_slice());
}

#[test]
fn slope_and_bounds_golden() {
    check_golden("slope_2_2.json", &["slope", "--twists", "2,2"], 0);
    check_golden("slope_neg.json", &["slope", "--twists", "-2,2"], 0);
    check_golden("bounds_g1.json", &["bounds", "--genus", "1"], 0);
    check_golden("bounds_g2.json", &["bounds", "--genus", "2"], 0);
}

#[test]
fn verify_golden() {
    check_golden("verify_2_3.json", &["verify", "--n-range", "2..3"], 0);
    check_golden("verify_twists.json", &["verify", "--twists", "2,2", "--no-collapse"], 0);
}

#[test]
fn starved_circuit_budget_fails_a_check() {
    check_golden(
        "verify_starved.json",
        &["verify", "--n", "3", "--circuit-budget", "1"],
        1,
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--n-range", "2..20"][..],
        &["verify", "--n", "2", "--twists", "2,2"],
        &["verify"],
        &["verify", "--n-range", "two..3"],
        &["build", "--n", "0"],
        &["slope", "--twists", "2,1"],
        &["slope", "--twists", "2,2,2"],
        &["bounds", "--genus", "0"],
        &["frobnicate"],
        &["path", "--in", "/nonexistent.json", "--from", "+", "--to", "-"],
    ] {
        assert_eq!(kakimizu(args).status.code(), Some(2), "{args:?}");
    }
    let bad_threads = Command::new(env!("CARGO_BIN_EXE_kakimizu"))
        .args(["bounds", "--genus", "1"])
        .env("KAKIMIZU_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_output() {
    let capped = Command::new(env!("CARGO_BIN_EXE_kakimizu"))
        .args(["verify", "--n", "4"])
        .env("KAKIMIZU_THREADS", "1")
        .output()
        .unwrap();
    let free = kakimizu(&["verify", "--n", "4"]);
    assert_eq!(capped.status.code(), Some(0));
    assert_eq!(normalise(&capped.stdout), normalise(&free.stdout));
}

#[test]
fn file_round_trip_and_paths() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.json");
    let f = file.to_str().unwrap();
    assert_eq!(kakimizu(&["build", "--n", "4", "--out", f]).status.code(), Some(0));

    check_golden(
        "path_bfs.json",
        &["path", "--in", f, "--from", "-+-", "--to", "+-+", "--method", "bfs"],
        0,
    );
    for method in ["bfs", "lemma71"] {
        let unknown = kakimizu(&["path", "--in", f, "--from", "----", "--to", "+++", "--method", method]);
        assert_eq!(unknown.status.code(), Some(2));
    }
    let bfs = kakimizu(&["path", "--in", f, "--from", "---", "--to", "+++"]);
    let built = kakimizu(&["path", "--in", f, "--from=---", "--to=+++", "--method", "lemma71"]);
    assert_eq!(bfs.status.code(), Some(0));
    assert_eq!(built.status.code(), Some(0));
    let bfs: Value = serde_json::from_slice(&bfs.stdout).unwrap();
    let built: Value = serde_json::from_slice(&built.stdout).unwrap();
    assert_eq!(bfs["distance"], 3);
    assert_eq!(built["distance"], 3);
    assert_eq!(built["path"].as_array().unwrap().len(), 4);

    let analysis = kakimizu(&[
        "analyze", "--in", f, "--homology", "--collapse", "--lemma51", "--flag",
    ]);
    assert_eq!(analysis.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&analysis.stdout).unwrap();
    assert_eq!(v["f_vector"], serde_json::json!([8, 19, 18, 6]));
    assert_eq!(v["euler_characteristic"], 1);
    assert_eq!(v["homology"]["trivial"], true);
    assert_eq!(v["collapse"]["status"], "collapses_to_point");
    assert_eq!(v["collapse"]["replayed"], true);
    assert_eq!(v["lemma51"]["status"], "criterion_fails");
    assert_eq!(v["lemma51"]["all_circuits_contractible"], true);
    assert_eq!(v["flag"]["flag"], true);

    fs::write(&file, r#"{"format":"other/9","vertices":[],"facets":[]}"#).unwrap();
    assert_eq!(kakimizu(&["analyze", "--in", f]).status.code(), Some(2));
}

#[test]
fn report_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = kakimizu(&["verify", "--n", "2", "--json", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}

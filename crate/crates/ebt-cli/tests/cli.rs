//! End-to-end tests of the `ebt` binary: exit codes, JSON shapes, format
//! switches and cache transparency.

use std::process::{Command, Output};

use serde_json::Value;

fn ebt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ebt"))
        .args(args)
        .env_remove("EBT_CACHE_DIR")
        .env_remove("XDG_CACHE_HOME")
        .output()
        .expect("binary runs")
}

fn json_stdout(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn stderr_text(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn group_reports_structure_with_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = ebt(&[
        "group",
        "--group",
        "Z/2",
        "--n",
        "2",
        "--variant",
        "B",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["schema"], "ebt/1");
    assert_eq!(v["command"], "group");
    assert_eq!(v["generators"], 2);
    assert_eq!(v["group"], "Z/2");
}

#[test]
fn group_normalizes_cyclic_factors() {
    let out = ebt(&[
        "group", "--group", "Z/4 x Z/2", "--n", "2", "--variant", "M", "--no-cache",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["group"], "Z/2 x Z/4");
}

#[test]
fn antisymmetrized_variant_rejects_trivial_group() {
    let out = ebt(&["group", "--group", "Z/1", "--n", "2", "--variant", "B-", "--no-cache"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("trivial"));
}

#[test]
fn unparseable_group_spec_reports_position() {
    let out = ebt(&["group", "--group", "Z/", "--n", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("parse error"));
}

#[test]
fn order_of_unit_sums_matches_the_torsion_bounds() {
    for (group, expr, order) in [
        ("Z/5", "[1,0]+[4,0]", "1"),
        ("Z/7", "[1,0]+[6,0]", "2"),
        ("Z/5", "[1,4]", "1"),
    ] {
        let out = ebt(&[
            "order", "--group", group, "--n", "2", "--variant", "B", "--expr", expr,
            "--no-cache",
        ]);
        let v = json_stdout(&out);
        assert_eq!(v["order"], order, "order of {expr} over {group}");
        assert!(v["reduced_coords"]["torsion"].is_array());
        assert!(v["reduced_coords"]["free"].is_array());
    }
}

#[test]
fn order_names_the_unfaithful_symbol() {
    let out = ebt(&[
        "order", "--group", "Z/4", "--n", "2", "--expr", "[2,2]", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("[2,2]"));
}

#[test]
fn verify_passing_suite_exits_zero() {
    let out = ebt(&["verify", "--suite", "pn", "--pmax", "5"]);
    let v = json_stdout(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suite"], "pn");
    assert!(v["checks"].as_array().unwrap().len() >= 4);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_unknown_suite_is_a_usage_error() {
    let out = ebt(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("pn"));
}

#[test]
fn verify_csv_lists_one_row_per_check() {
    let out = ebt(&[
        "verify", "--suite", "lemmas", "--pmax", "3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,passed,detail"));
    assert!(lines.clone().count() >= 2);
    assert!(lines.all(|l| l.split(',').count() >= 3));
}

#[test]
fn hecke_applies_the_averaging_operator() {
    let out = ebt(&[
        "hecke", "--group", "Z/3", "--n", "2", "--ell", "2", "--r", "1", "--expr", "[1,1]",
        "--no-cache",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["image"], "[0,2] + 2*[1,2]");
    assert_eq!(v["order"], "infinite");
}

#[test]
fn hecke_of_zero_is_zero() {
    let out = ebt(&[
        "hecke", "--group", "Z/3", "--n", "2", "--ell", "2", "--expr", "0", "--no-cache",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["image"], "0");
    assert_eq!(v["order"], "1");
}

#[test]
fn hecke_rejects_a_multiplier_dividing_the_group_order() {
    let out = ebt(&[
        "hecke", "--group", "Z/4", "--n", "2", "--ell", "2", "--expr", "[1,0]", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_text(&out).contains("prime not dividing"));
}

#[test]
fn hecke_scale_guard_requires_an_explicit_override() {
    let guarded = ebt(&[
        "hecke", "--group", "Z/3", "--n", "2", "--ell", "11", "--expr", "[1,0]", "--no-cache",
    ]);
    assert_eq!(guarded.status.code(), Some(2));

    let lifted = ebt(&[
        "hecke", "--group", "Z/3", "--n", "2", "--ell", "11", "--expr", "[1,0]",
        "--allow-large", "--no-cache",
    ]);
    assert_eq!(lifted.status.code(), Some(0));
}

#[test]
fn psi_reads_a_smooth_cone_directly() {
    let out = ebt(&[
        "psi",
        "--group",
        "Z/5",
        "--triple",
        r#"{"basis": [[1,0],[0,1]], "denominator": 1, "chi": [1, 2], "cone": [[1,0],[0,1]]}"#,
        "--no-cache",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["image"], "[1,2]");
}

#[test]
fn psi_subdivides_a_singular_cone() {
    let out = ebt(&[
        "psi",
        "--group",
        "Z/5",
        "--triple",
        r#"{"basis": [[1,0],[0,1]], "denominator": 1, "chi": [1, 2], "cone": [[1,0],[2,3]]}"#,
        "--no-cache",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["image"], "[1,4] + [2,4]");
}

#[test]
fn psi_rejects_a_malformed_triple() {
    let out = ebt(&[
        "psi", "--group", "Z/5", "--triple", r#"{"basis": [[1,0]], "denominator": 1}"#,
        "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_hits_are_bit_identical_to_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| {
        let mut v = vec![
            "order", "--group", "Z/9", "--n", "2", "--expr", "[1,0]+[8,0]",
        ];
        v.extend_from_slice(extra);
        ebt(&v)
    };
    let cache_flag = ["--cache-dir", dir.path().to_str().unwrap()];

    let cold = run(&cache_flag);
    assert!(cold.status.success());
    let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(entries.len(), 1, "one cache entry written");

    let warm = run(&cache_flag);
    let fresh = run(&["--no-cache"]);
    assert_eq!(cold.stdout, warm.stdout, "warm cache output identical");
    assert_eq!(cold.stdout, fresh.stdout, "no-cache output identical");
}

#[test]
fn cache_dir_env_var_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ebt"))
        .args(["group", "--group", "Z/3", "--n", "2"])
        .env("EBT_CACHE_DIR", dir.path())
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn corrupted_cache_entries_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache_flag = ["--cache-dir", dir.path().to_str().unwrap()];
    let args = [
        "group", "--group", "Z/6", "--n", "2", "--variant", "B",
    ];

    let cold = ebt(&[&args[..], &cache_flag[..]].concat());
    assert!(cold.status.success());
    let entry = std::fs::read_dir(dir.path())
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    std::fs::write(&entry, b"{ not json").unwrap();

    let replayed = ebt(&[&args[..], &cache_flag[..]].concat());
    assert!(replayed.status.success());
    assert_eq!(cold.stdout, replayed.stdout);
}

#[test]
fn table_format_renders_key_value_rows() {
    let out = ebt(&[
        "group", "--group", "Z/5", "--n", "2", "--format", "table", "--no-cache",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("generators"));
    assert!(text.contains("Z/5"));
}

use dorp_cli::{run, EXIT_FAIL, EXIT_NETWORK, EXIT_PASS, EXIT_RESOURCE, EXIT_USAGE};
use serde_json::Value;

fn dorp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dorp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn order_table_row() {
    let (code, out, _) = dorp(&["count", "--n", "4", "--table", "order", "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().any(|l| l == "4,97"), "{out}");
}

#[test]
fn count_filters_and_json() {
    let (code, out, _) = dorp(&["count", "--n", "5", "--table", "f", "--r", "3", "--p", "2"]);
    assert_eq!(code, EXIT_PASS);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "n,r,p,value");
    assert!(rows[1..].iter().all(|r| r.contains(",3,2,")));
    assert_eq!(rows.len(), 1 + 3);

    let (_, out, _) = dorp(&[
        "count", "--n", "3", "--table", "schroder", "--format", "json",
    ]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    let values: Vec<&str> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1", "2", "6", "22"]);
}

#[test]
fn monoid_rank_certificate() {
    let (code, out, _) = dorp(&["rank", "--object", "dorp", "--n", "4"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["formula_rank"], 10);
    assert_eq!(v["closure_size"], 97);
    assert_eq!(v["exact_rank"], 10);
    assert_eq!(v["pass"], true);
}

#[test]
fn hstar_suite_passes_with_a_note() {
    let (code, out, _) = dorp(&["verify", "--suite", "hstar", "--n", "4"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let noted =
        v["checks"].as_array().unwrap().iter().any(|c| {
            c["note"].is_string() && c["actual"].as_str().unwrap().contains("n=4;1->1,2->2")
        });
    assert!(noted, "{out}");
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    let strip = |s: &str| {
        let mut v = json(s);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        v
    };
    let (_, a, _) = dorp(&["--jobs", "1", "verify", "--suite", "classes", "--n", "5"]);
    let (_, b, _) = dorp(&["--jobs", "3", "verify", "--suite", "classes", "--n", "5"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn seed_is_recorded() {
    let (code, out, _) = dorp(&["--seed", "7", "verify", "--suite", "identity", "--n", "6"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(json(&out)["parameters"]["seed"], "7");
}

#[test]
fn failing_verification_exits_one() {
    let (code, out, _) = dorp(&["verify", "--suite", "ranks", "--n", "4", "--format", "text"]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("[FAIL] monoid n=4: irreducible count = formula"));
    assert!(out.contains("[PASS] monoid n=4: exact rank = formula"));
}

#[test]
fn enumerate_streams_literals() {
    let (code, out, _) = dorp(&["enumerate", "--set", "dorp", "--n", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().count(), 23);
    assert!(out
        .lines()
        .all(|l| l.parse::<dorp_core::PartialMap>().is_ok()));
    let (_, out, _) = dorp(&["enumerate", "--set", "rq", "--n", "3", "--p", "2"]);
    assert_eq!(out.lines().last(), Some("0"));
}

#[test]
fn greens_egg_box() {
    let (code, out, _) = dorp(&["greens", "--n", "3", "--relation", "L*"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 8);
    assert_eq!(
        classes
            .iter()
            .map(|c| c.as_array().unwrap().len())
            .sum::<usize>(),
        23
    );
}

#[test]
fn factorize_map() {
    let (code, out, _) = dorp(&["factorize", "--map", "n=5;3->2,4->1"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["recomposes"], true);
    assert_eq!(v["target"], "n=5;3->2,4->1");
}

#[test]
fn usage_and_domain_errors_exit_two() {
    assert_eq!(dorp(&["count", "--table", "nope"]).0, EXIT_USAGE);
    assert_eq!(dorp(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(dorp(&["factorize", "--map", "n=3;1->2"]).0, EXIT_USAGE);
    assert_eq!(dorp(&["factorize", "--map", "garbage"]).0, EXIT_USAGE);
    assert_eq!(dorp(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
    assert_eq!(
        dorp(&["rank", "--object", "ideal", "--n", "4"]).0,
        EXIT_USAGE
    );
    assert_eq!(dorp(&["--help"]).0, EXIT_PASS);
}

#[test]
fn resource_limits_exit_three() {
    let (code, _, err) = dorp(&["verify", "--suite", "greens", "--n", "4", "--bound", "10"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(err.contains("resource limit"));
    assert_eq!(dorp(&["enumerate", "--n", "12"]).0, EXIT_RESOURCE);
}

#[test]
fn offline_without_cache_exits_four() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = dorp(&[
        "oeis-check",
        "--offline",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_NETWORK);
    assert!(err.contains("network access is disabled"));
}

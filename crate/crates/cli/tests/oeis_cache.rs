mod common;

use std::time::{Duration, Instant};

use dorp_cli::oeis::{CacheEntry, OeisClient, SequenceQuery, Source};
use dorp_cli::{run, standard_queries, EXIT_PASS};

use common::{fixture, Recorded};

#[test]
fn standard_queries_hold_the_computed_terms() {
    let qs = standard_queries();
    assert_eq!(qs[0].term_string(), "1,2,6,22,90,394,1806,8558");
    assert_eq!(qs[1].terms.len(), 8);
    assert_eq!(
        qs[2].term_string().split(',').take(4).collect::<Vec<_>>(),
        ["2", "6", "23", "97"]
    );
    // rows 2..=8 of the height triangle have ceil(n/2) entries each
    assert_eq!(qs[3].terms.len(), 1 + 2 + 2 + 3 + 3 + 4 + 4);
}

#[test]
fn live_then_cached_verdicts_agree() {
    let dir = tempfile::tempdir().unwrap();
    let transport = Recorded::standard();
    let client = OeisClient::with_transport(dir.path(), false, Box::new(transport.clone()));
    let q = &standard_queries()[0];
    let live = client.lookup(q).unwrap();
    assert_eq!(live.source, Source::Live);
    assert!(live.found);
    assert_eq!(live.matches, ["A006318"]);
    let again = client.lookup(q).unwrap();
    assert_eq!(again.source, Source::Cache);
    assert_eq!((again.found, &again.matches), (live.found, &live.matches));
    assert_eq!(transport.calls(), 1);

    let path = dir.path().join(format!("{}.json", q.cache_key()));
    let entry: CacheEntry = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(entry.query, q.term_string());
    assert_eq!(entry.body, fixture("schroder.json"));
    assert!(chrono::DateTime::parse_from_rfc3339(&entry.fetched_at).is_ok());
}

#[test]
fn requests_are_spaced_by_a_second() {
    let dir = tempfile::tempdir().unwrap();
    let client = OeisClient::with_transport(dir.path(), false, Box::new(Recorded::standard()));
    let qs = standard_queries();
    let start = Instant::now();
    client.lookup(&qs[1]).unwrap();
    client.lookup(&qs[2]).unwrap();
    assert!(start.elapsed() >= Duration::from_secs(1));
}

#[test]
fn unrecorded_query_is_a_network_error() {
    let dir = tempfile::tempdir().unwrap();
    let client = OeisClient::with_transport(dir.path(), false, Box::new(Recorded::default()));
    let q = SequenceQuery::new("x", vec![5u32.into(), 7u32.into()]).unwrap();
    assert!(client.lookup(&q).unwrap_err().is_network());
    assert!(client.cached(&q).unwrap().is_none());
}

#[test]
fn malformed_cache_entry_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let q = SequenceQuery::new("x", vec![1u32.into()]).unwrap();
    std::fs::write(dir.path().join(format!("{}.json", q.cache_key())), "{").unwrap();
    let client = OeisClient::with_transport(dir.path(), true, Box::new(Recorded::default()));
    let e = client.lookup(&q).unwrap_err();
    assert!(!e.is_network());
}

#[test]
fn cli_replays_a_warm_cache_offline() {
    let dir = tempfile::tempdir().unwrap();
    let warm = OeisClient::with_transport(dir.path(), false, Box::new(Recorded::standard()));
    for q in standard_queries() {
        warm.lookup(&q).unwrap();
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = [
        "dorp",
        "oeis-check",
        "--offline",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ];
    assert_eq!(run(argv, &mut out, &mut err), EXIT_PASS);
    let report: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 4);
    assert!(checks[0]["actual"]
        .as_str()
        .unwrap()
        .starts_with("found A006318"));
    assert!(checks[1..].iter().all(|c| c["actual"] == "not found"));
    assert!(checks
        .iter()
        .all(|c| c["note"].as_str().unwrap().contains("source cache")));
}

//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use dorp_cli::oeis::{OeisClient, Source};
use dorp_cli::standard_queries;
use dorp_core::verify::{run_suite, Suite, SuiteConfig};
use dorp_core::{Check, VerificationReport};

use common::{fixture, Recorded};

struct Outcome {
    pass: bool,
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn from_checks<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Self {
        let mut out = Outcome {
            pass: true,
            checks: 0,
            failures: Vec::new(),
        };
        for c in checks {
            out.checks += 1;
            if !c.pass {
                out.pass = false;
                out.failures.push(format!(
                    "{}: expected {}, got {}",
                    c.name, c.expected, c.actual
                ));
            }
        }
        out
    }

    fn require(&mut self, what: &str, holds: bool) {
        self.checks += 1;
        if !holds {
            self.pass = false;
            self.failures.push(what.to_string());
        }
    }
}

fn suite(s: Suite, n: usize) -> Result<VerificationReport, String> {
    run_suite(
        s,
        &SuiteConfig {
            n: Some(n),
            ..Default::default()
        },
    )
    .map_err(|e| e.to_string())
}

fn whole(s: Suite, n: usize) -> Result<Outcome, String> {
    let report = suite(s, n)?;
    Ok(Outcome::from_checks(&report.checks))
}

fn order() -> Result<Outcome, String> {
    let report = suite(Suite::Order, 8)?;
    let mut out = Outcome::from_checks(&report.checks);
    for (n, size) in [(2, "6"), (3, "23"), (4, "97")] {
        let anchored = report.checks.iter().any(|c| {
            c.name == format!("n={n}: generated size = Schröder + antitone count")
                && c.actual == size
        });
        out.require(&format!("|DORP_{n}| = {size}"), anchored);
    }
    Ok(out)
}

fn hstar() -> Result<Outcome, String> {
    let report = suite(Suite::Hstar, 6)?;
    let mut out = Outcome::from_checks(&report.checks);
    let flagged = report.checks.iter().any(|c| {
        c.name.starts_with("n=4:") && c.note.is_some() && c.actual.contains("n=4;1->1,2->2")
    });
    out.require("height-only split flagged at n=4;1->1,2->2", flagged);
    Ok(out)
}

fn ranks(keep: fn(&str) -> bool) -> Result<Outcome, String> {
    let report = suite(Suite::Ranks, 6)?;
    Ok(Outcome::from_checks(
        report.checks.iter().filter(|c| keep(&c.name)),
    ))
}

fn is_quotient(name: &str) -> bool {
    name.starts_with("quotient ")
}

fn is_ideal_or_monoid(name: &str) -> bool {
    let n_of = |rest: &str| -> Option<usize> { rest.split([' ', ':']).next()?.parse().ok() };
    let n = name
        .strip_prefix("ideal n=")
        .or_else(|| name.strip_prefix("monoid n="))
        .and_then(n_of);
    matches!(n, Some(2..=6))
}

fn oeis() -> Result<Outcome, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let transport = Recorded::standard();
    let live = OeisClient::with_transport(dir.path(), false, Box::new(transport.clone()));
    let offline = OeisClient::with_transport(dir.path(), true, Box::new(Recorded::default()));
    let mut out = Outcome::from_checks(None);
    let queries = standard_queries();
    for (k, q) in queries.iter().enumerate() {
        let first = live.lookup(q).map_err(|e| e.to_string())?;
        let replay = offline.lookup(q).map_err(|e| e.to_string())?;
        out.require(
            &format!("{}: first lookup is live", q.label),
            first.source == Source::Live,
        );
        out.require(
            &format!("{}: replay comes from the cache", q.label),
            replay.source == Source::Cache,
        );
        let same = first.matches == replay.matches
            && first.found == replay.found
            && first.label == replay.label;
        out.require(
            &format!("{}: replayed verdict equals live verdict", q.label),
            same,
        );
        let entry = offline.cached(q).map_err(|e| e.to_string())?;
        let recorded = match k {
            0 => fixture("schroder.json"),
            1 => fixture("no_match.json"),
            _ => fixture("no_match_object.json"),
        };
        out.require(
            &format!("{}: cached body is byte-identical", q.label),
            entry.is_some_and(|e| e.body.as_bytes() == recorded.as_bytes()),
        );
        let text = serde_json::to_string(&replay).map_err(|e| e.to_string())?;
        let back: dorp_cli::oeis::LookupVerdict =
            serde_json::from_str(&text).map_err(|e| e.to_string())?;
        out.require(
            &format!("{}: verdict round-trips through JSON", q.label),
            back == replay,
        );
        if k == 0 {
            out.require(
                "Schröder prefix found as A006318",
                first.found && first.matches.iter().any(|m| m == "A006318"),
            );
        }
    }
    out.require("one request per query", transport.calls() == queries.len());
    Ok(out)
}

type Criterion = (
    &'static str,
    Option<Duration>,
    Box<dyn Fn() -> Result<Outcome, String>>,
);

fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        ("order of the monoid, n <= 8", secs(60), Box::new(order)),
        (
            "F(n,r,p) against brute force, n <= 7",
            secs(30),
            Box::new(|| whole(Suite::Antitone, 7)),
        ),
        (
            "binomial identity, m,n,k <= 20",
            secs(1),
            Box::new(|| whole(Suite::Identity, 20)),
        ),
        (
            "Green's characterizations, n <= 4",
            secs(60),
            Box::new(|| whole(Suite::Greens, 4)),
        ),
        (
            "abundance and unique idempotents, n <= 6",
            None,
            Box::new(|| whole(Suite::Abundance, 6)),
        ),
        (
            "idempotent count, n <= 8",
            None,
            Box::new(|| whole(Suite::Idempotents, 8)),
        ),
        (
            "starred chain identities",
            None,
            Box::new(|| whole(Suite::Starred, 5)),
        ),
        ("H*-class sizes, n <= 6", None, Box::new(hstar)),
        (
            "R*- and L*-class counts, n <= 7",
            None,
            Box::new(|| whole(Suite::Classes, 7)),
        ),
        (
            "rank of the Rees quotients, n <= 6",
            secs(120),
            Box::new(|| ranks(is_quotient)),
        ),
        (
            "rank of the ideals and the monoid, n in 2..=6",
            None,
            Box::new(|| ranks(is_ideal_or_monoid)),
        ),
        (
            "factorizations recompose, n <= 6",
            None,
            Box::new(|| whole(Suite::Factorizations, 6)),
        ),
        (
            "convex-vital counts, n <= 12",
            None,
            Box::new(|| whole(Suite::ConvexVitals, 12)),
        ),
        (
            "inverse-ideal witnesses, n <= 6",
            None,
            Box::new(|| whole(Suite::Inverse, 6)),
        ),
        (
            "OEIS client against recorded responses",
            None,
            Box::new(oeis),
        ),
    ]
}

fn main() {
    let mut failed = 0;
    for (k, (name, budget, body)) in criteria().into_iter().enumerate() {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let mut outcome = match result {
            Ok(o) => o,
            Err(e) => Outcome {
                pass: false,
                checks: 0,
                failures: vec![format!("error: {e}")],
            },
        };
        if let Some(limit) = budget {
            outcome.require(
                &format!("finished within {limit:?} (took {elapsed:.2?})"),
                elapsed <= limit,
            );
        }
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {:>2}: {name} ({} checks, {} ms)",
            k + 1,
            outcome.checks,
            elapsed.as_millis()
        );
        for f in outcome.failures.iter().take(20) {
            println!("         {f}");
        }
        if outcome.failures.len() > 20 {
            println!("         ... {} more", outcome.failures.len() - 20);
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of 15 criteria passed", 15 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

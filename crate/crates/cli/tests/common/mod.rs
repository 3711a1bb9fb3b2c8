//! Recorded search responses replayed through an in-memory transport.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dorp_cli::oeis::{OeisError, Transport};
use dorp_cli::standard_queries;

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Serves fixture bodies by query string and counts requests.
#[derive(Clone, Default)]
pub struct Recorded {
    bodies: HashMap<String, String>,
    pub calls: Arc<AtomicUsize>,
}

impl Recorded {
    /// The standard queries: the control gets the Schröder response and the
    /// computed sequences get empty results in both response shapes.
    pub fn standard() -> Self {
        let mut bodies = HashMap::new();
        for (k, q) in standard_queries().iter().enumerate() {
            let body = match k {
                0 => fixture("schroder.json"),
                1 => fixture("no_match.json"),
                _ => fixture("no_match_object.json"),
            };
            bodies.insert(q.term_string(), body);
        }
        Recorded {
            bodies,
            calls: Arc::default(),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Transport for Recorded {
    fn get(&self, url: &str) -> Result<String, OeisError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let q = url
            .split_once("q=")
            .and_then(|(_, rest)| rest.split('&').next())
            .ok_or_else(|| OeisError::Network(format!("unexpected url {url}")))?;
        self.bodies
            .get(q)
            .cloned()
            .ok_or_else(|| OeisError::Network(format!("no recording for {q}")))
    }
}

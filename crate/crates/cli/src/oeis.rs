//! Client for the OEIS JSON search endpoint with an on-disk response cache.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SEARCH_ENDPOINT: &str = "https://oeis.org/search";

#[derive(Debug, thiserror::Error)]
pub enum OeisError {
    #[error("network request failed: {0}")]
    Network(String),
    #[error("no cached response for `{0}` and network access is disabled")]
    OfflineMiss(String),
    #[error("malformed search response: {0}")]
    Parse(String),
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("empty query `{0}`")]
    EmptyQuery(String),
}

impl OeisError {
    /// Failures caused by having neither the network nor a cached answer.
    pub fn is_network(&self) -> bool {
        matches!(self, OeisError::Network(_) | OeisError::OfflineMiss(_))
    }
}

pub type Result<T> = std::result::Result<T, OeisError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceQuery {
    pub label: String,
    pub terms: Vec<BigUint>,
}

impl SequenceQuery {
    pub fn new(label: impl Into<String>, terms: Vec<BigUint>) -> Result<Self> {
        let label = label.into();
        if terms.is_empty() {
            return Err(OeisError::EmptyQuery(label));
        }
        Ok(SequenceQuery { label, terms })
    }

    /// Comma-joined terms, the search string sent to the server.
    pub fn term_string(&self) -> String {
        self.terms
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Cache key: hex SHA-256 of the term string.
    pub fn cache_key(&self) -> String {
        hex::encode(Sha256::digest(self.term_string().as_bytes()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Live,
    Cache,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupVerdict {
    pub label: String,
    pub found: bool,
    pub matches: Vec<String>,
    pub source: Source,
}

/// One cached response, stored as `<cache-dir>/<key>.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub query: String,
    pub fetched_at: String,
    pub body: String,
}

/// Fetches a URL and returns the response body.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<String>;
}

pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let config = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .user_agent(concat!("dorp-workbench/", env!("CARGO_PKG_VERSION")))
            .build();
        HttpTransport {
            agent: config.into(),
        }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        HttpTransport::new(Duration::from_secs(30))
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<String> {
        let mut response = self
            .agent
            .get(url)
            .call()
            .map_err(|e| OeisError::Network(e.to_string()))?;
        response
            .body_mut()
            .read_to_string()
            .map_err(|e| OeisError::Network(e.to_string()))
    }
}

/// Sequence identifiers in a search response.
///
/// Accepts a bare result array, an object with a `results` field (which may
/// be `null`), or `null`.
pub fn parse_matches(body: &str) -> Result<Vec<String>> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| OeisError::Parse(e.to_string()))?;
    let results = match &value {
        serde_json::Value::Null => return Ok(Vec::new()),
        serde_json::Value::Array(items) => items.as_slice(),
        serde_json::Value::Object(map) => match map.get("results") {
            None | Some(serde_json::Value::Null) => return Ok(Vec::new()),
            Some(serde_json::Value::Array(items)) => items.as_slice(),
            Some(_) => return Err(OeisError::Parse("`results` is not a list".into())),
        },
        _ => return Err(OeisError::Parse("expected a list or an object".into())),
    };
    results
        .iter()
        .map(|r| {
            r.get("number")
                .and_then(serde_json::Value::as_u64)
                .map(|k| format!("A{k:06}"))
                .ok_or_else(|| OeisError::Parse("result without a numeric `number`".into()))
        })
        .collect()
}

pub struct OeisClient {
    cache_dir: PathBuf,
    offline: bool,
    endpoint: String,
    min_interval: Duration,
    last_request: Mutex<Option<Instant>>,
    transport: Box<dyn Transport>,
}

impl OeisClient {
    pub fn new(cache_dir: impl Into<PathBuf>, offline: bool) -> Self {
        OeisClient::with_transport(cache_dir, offline, Box::new(HttpTransport::default()))
    }

    pub fn with_transport(
        cache_dir: impl Into<PathBuf>,
        offline: bool,
        transport: Box<dyn Transport>,
    ) -> Self {
        OeisClient {
            cache_dir: cache_dir.into(),
            offline,
            endpoint: SEARCH_ENDPOINT.to_string(),
            min_interval: Duration::from_secs(1),
            last_request: Mutex::new(None),
            transport,
        }
    }

    /// Spacing between consecutive network requests; at least one second.
    pub fn set_min_interval(&mut self, interval: Duration) {
        self.min_interval = interval.max(Duration::from_secs(1));
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn search_url(&self, q: &SequenceQuery) -> String {
        format!("{}?q={}&fmt=json", self.endpoint, q.term_string())
    }

    fn cache_path(&self, q: &SequenceQuery) -> PathBuf {
        self.cache_dir.join(format!("{}.json", q.cache_key()))
    }

    pub fn cached(&self, q: &SequenceQuery) -> Result<Option<CacheEntry>> {
        let path = self.cache_path(q);
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| OeisError::Parse(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes `entry` for `q`, replacing any previous one.
    pub fn store(&self, q: &SequenceQuery, entry: &CacheEntry) -> Result<()> {
        fs::create_dir_all(&self.cache_dir)?;
        let path = self.cache_path(q);
        let tmp = path.with_extension("json.tmp");
        let text =
            serde_json::to_string_pretty(entry).map_err(|e| OeisError::Parse(e.to_string()))?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    fn throttle(&self) {
        let mut last = self.last_request.lock().expect("rate limiter lock");
        if let Some(t) = *last {
            let elapsed = t.elapsed();
            if elapsed < self.min_interval {
                std::thread::sleep(self.min_interval - elapsed);
            }
        }
        *last = Some(Instant::now());
    }

    /// The raw response body for `q`, from the cache when present.
    pub fn fetch(&self, q: &SequenceQuery) -> Result<(String, Source)> {
        if let Some(entry) = self.cached(q)? {
            return Ok((entry.body, Source::Cache));
        }
        if self.offline {
            return Err(OeisError::OfflineMiss(q.term_string()));
        }
        self.throttle();
        let body = self.transport.get(&self.search_url(q))?;
        let entry = CacheEntry {
            query: q.term_string(),
            fetched_at: chrono::Utc::now().to_rfc3339(),
            body: body.clone(),
        };
        self.store(q, &entry)?;
        Ok((body, Source::Live))
    }

    pub fn lookup(&self, q: &SequenceQuery) -> Result<LookupVerdict> {
        let (body, source) = self.fetch(q)?;
        let matches = parse_matches(&body)?;
        Ok(LookupVerdict {
            label: q.label.clone(),
            found: !matches.is_empty(),
            matches,
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_response_shapes() {
        assert_eq!(parse_matches("null").unwrap(), Vec::<String>::new());
        assert_eq!(parse_matches("[]").unwrap(), Vec::<String>::new());
        assert_eq!(
            parse_matches(r#"[{"number": 6318}, {"number": 155069}]"#).unwrap(),
            ["A006318", "A155069"]
        );
        assert_eq!(
            parse_matches(r#"{"count": 0, "results": null}"#).unwrap(),
            Vec::<String>::new()
        );
        assert_eq!(
            parse_matches(r#"{"results": [{"number": 1}]}"#).unwrap(),
            ["A000001"]
        );
        assert!(parse_matches("{").is_err());
        assert!(parse_matches(r#"[{"name": "x"}]"#).is_err());
        assert!(parse_matches("3").is_err());
    }

    #[test]
    fn query_strings_and_keys() {
        let q = SequenceQuery::new("t", vec![1u32.into(), 2u32.into(), 6u32.into()]).unwrap();
        assert_eq!(q.term_string(), "1,2,6");
        assert_eq!(q.cache_key().len(), 64);
        assert!(SequenceQuery::new("empty", vec![]).is_err());
    }
}

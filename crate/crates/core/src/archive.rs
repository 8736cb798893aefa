//! The history function: enumerating and fetching historical snapshots of a
//! domain from a web archive's CDX index, so tracking codes removed from the
//! live site can still be recovered.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use tokio::sync::Semaphore;

use crate::error::Error;
use crate::fetch::{FetchFailure, FetchResult};
use crate::model::{ArchiveTimestamp, DomainKey};
use crate::store::content_hash;

/// Expected CDX JSON header row; rows are positional thereafter.
const CDX_HEADER: [&str; 7] = ["urlkey", "timestamp", "original", "mimetype", "statuscode", "digest", "length"];

/// One fetchable archived capture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotRef {
    pub domain: DomainKey,
    pub snapshot_ts: ArchiveTimestamp,
    pub original_url: String,
    pub digest: String,
    pub status_code: u16,
}

/// How densely to sample the snapshot history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// First 200-status snapshot per calendar month (the default).
    FirstPerMonth,
    /// Every distinct capture.
    All,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArchiveConfig {
    /// Base endpoint; tests point this at a local fixture server.
    #[serde(default = "d_endpoint")]
    pub endpoint: String,
    #[serde(default = "d_sampling")]
    pub sampling: Sampling,
    /// Hard bound on snapshot fetches per domain.
    #[serde(default = "d_max_fetches")]
    pub max_fetches_per_domain: usize,
    /// Archive etiquette: global cap on concurrent archive requests.
    #[serde(default = "d_concurrency")]
    pub concurrency: usize,
    #[serde(default = "d_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "d_throttle_retries")]
    pub throttle_retries: u32,
    #[serde(default = "d_backoff")]
    pub backoff_base_ms: u64,
    #[serde(default)]
    pub offline: bool,
}

fn d_endpoint() -> String {
    "https://web.archive.org".to_string()
}
fn d_sampling() -> Sampling {
    Sampling::FirstPerMonth
}
fn d_max_fetches() -> usize {
    60
}
fn d_concurrency() -> usize {
    2
}
fn d_timeout() -> u64 {
    30
}
fn d_throttle_retries() -> u32 {
    5
}
fn d_backoff() -> u64 {
    1000
}

impl Default for ArchiveConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

/// Client for a CDX-style web archive.
pub struct ArchiveClient {
    cfg: ArchiveConfig,
    client: reqwest::Client,
    gate: Semaphore,
}

impl ArchiveClient {
    pub fn new(cfg: ArchiveConfig, user_agent: &str) -> Result<Self, Error> {
        if cfg.offline {
            return Err(Error::Offline("archive client construction".into()));
        }
        let client = reqwest::Client::builder()
            .user_agent(user_agent.to_string())
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .build()
            .map_err(|e| Error::Config(format!("archive http client: {e}")))?;
        Ok(Self { gate: Semaphore::new(cfg.concurrency.max(1)), cfg, client })
    }

    pub fn config(&self) -> &ArchiveConfig {
        &self.cfg
    }

    async fn get_with_throttle(&self, url: &str) -> Result<reqwest::Response, Error> {
        let _permit = self.gate.acquire().await.expect("gate never closed");
        let mut attempt = 0u32;
        loop {
            let resp = self.client.get(url).send().await.map_err(|e| Error::Archive(format!("{url}: {e}")))?;
            if resp.status().as_u16() == 429 && attempt < self.cfg.throttle_retries {
                let backoff = self.cfg.backoff_base_ms * 2u64.pow(attempt);
                log::warn!("archive throttled (429), backing off {backoff}ms");
                tokio::time::sleep(Duration::from_millis(backoff)).await;
                attempt += 1;
                continue;
            }
            return Ok(resp);
        }
    }

    /// Enumerates captures of `domain` between `from_ts` and `to_ts`
    /// (YYYYMMDD… prefixes accepted by the CDX API), collapsed to the
    /// sampling policy, deduplicated by content digest, chronologically
    /// sorted.
    pub async fn list_snapshots(
        &self,
        domain: &DomainKey,
        from_ts: &str,
        to_ts: &str,
        sampling: Sampling,
    ) -> Result<Vec<SnapshotRef>, Error> {
        let url = format!(
            "{}/cdx/search/cdx?url={}&matchType=domain&from={}&to={}&filter=statuscode:200&output=json",
            self.cfg.endpoint.trim_end_matches('/'),
            domain.registrable(),
            from_ts,
            to_ts,
        );
        let resp = self.get_with_throttle(&url).await?;
        if !resp.status().is_success() {
            return Err(Error::Archive(format!("cdx query {url}: status {}", resp.status())));
        }
        let text = resp.text().await.map_err(|e| Error::Archive(format!("cdx body: {e}")))?;
        let mut refs = parse_cdx_response(&text, domain)?;

        // Root-page captures only; archived script bodies are fetched via the
        // same snapshot timestamp during extraction.
        refs.retain(|r| is_root_capture(&r.original_url));
        refs.sort_by(|a, b| a.snapshot_ts.cmp(&b.snapshot_ts).then_with(|| a.original_url.cmp(&b.original_url)));

        if sampling == Sampling::FirstPerMonth {
            let mut out: Vec<SnapshotRef> = Vec::new();
            for r in refs {
                if out.last().map(|p| p.snapshot_ts.month_bucket() == r.snapshot_ts.month_bucket()) != Some(true) {
                    out.push(r);
                }
            }
            refs = out;
        }

        // Digest dedup: identical content captured twice is one snapshot.
        let mut seen = std::collections::HashSet::new();
        refs.retain(|r| seen.insert(r.digest.clone()));
        refs.truncate(self.cfg.max_fetches_per_domain);
        Ok(refs)
    }

    /// URL of the raw-content form of a capture: the `id_` flag serves the
    /// archived bytes without the archive's own injected markup.
    pub fn snapshot_url(&self, snapshot: &SnapshotRef) -> String {
        format!(
            "{}/web/{}id_/{}",
            self.cfg.endpoint.trim_end_matches('/'),
            snapshot.snapshot_ts.as_str(),
            snapshot.original_url
        )
    }

    /// Raw-content URL for an arbitrary archived asset at a capture's
    /// timestamp (same-domain scripts referenced by an archived page).
    pub fn asset_url(&self, snapshot_ts: &ArchiveTimestamp, asset: &str) -> String {
        format!("{}/web/{}id_/{}", self.cfg.endpoint.trim_end_matches('/'), snapshot_ts.as_str(), asset)
    }

    /// Fetches one snapshot body. A 404 means the capture is gone; callers
    /// skip and continue.
    pub async fn fetch_snapshot(&self, snapshot: &SnapshotRef) -> Result<FetchResult, FetchFailure> {
        self.fetch_archived_url(&self.snapshot_url(snapshot)).await
    }

    pub async fn fetch_archived_url(&self, url: &str) -> Result<FetchResult, FetchFailure> {
        let resp = self
            .get_with_throttle(url)
            .await
            .map_err(|e| FetchFailure::Other(e.to_string()))?;
        let status = resp.status().as_u16();
        if status == 404 {
            return Err(FetchFailure::HttpStatus(404));
        }
        if status >= 400 {
            return Err(FetchFailure::HttpStatus(status));
        }
        let final_url = resp.url().to_string();
        let body = resp.bytes().await.map_err(|e| FetchFailure::Other(format!("body read: {e}")))?.to_vec();
        Ok(FetchResult {
            body_hash: content_hash(&body),
            final_url,
            status_code: status,
            body,
            fetched_at: chrono::Utc::now(),
            redirect_chain: Vec::new(),
        })
    }
}

fn is_root_capture(original_url: &str) -> bool {
    match url::Url::parse(original_url) {
        Ok(u) => (u.path() == "/" || u.path().is_empty()) && u.query().is_none(),
        Err(_) => false,
    }
}

/// Parses a CDX JSON response (array of arrays, first row the header).
/// Malformed rows are skipped with a warning; a malformed header is an error.
pub fn parse_cdx_response(text: &str, domain: &DomainKey) -> Result<Vec<SnapshotRef>, Error> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let rows: Vec<Vec<Value>> =
        serde_json::from_str(trimmed).map_err(|e| Error::Archive(format!("cdx response is not a JSON table: {e}")))?;
    let Some((header, data)) = rows.split_first() else {
        return Ok(Vec::new());
    };
    let header_names: Vec<&str> = header.iter().filter_map(|v| v.as_str()).collect();
    if header_names != CDX_HEADER {
        return Err(Error::Archive(format!("unexpected cdx header {header_names:?}")));
    }

    let mut out = Vec::new();
    for (i, row) in data.iter().enumerate() {
        let get = |idx: usize| row.get(idx).and_then(|v| v.as_str());
        let parsed = (|| -> Result<SnapshotRef, String> {
            let ts = get(1).ok_or("missing timestamp")?;
            let original = get(2).ok_or("missing original url")?;
            let status: u16 = get(4).ok_or("missing statuscode")?.parse().map_err(|_| "bad statuscode")?;
            let digest = get(5).ok_or("missing digest")?;
            Ok(SnapshotRef {
                domain: domain.clone(),
                snapshot_ts: ArchiveTimestamp::parse(ts)?,
                original_url: original.to_string(),
                digest: digest.to_string(),
                status_code: status,
            })
        })();
        match parsed {
            Ok(r) if r.status_code == 200 => out.push(r),
            Ok(_) => {}
            Err(reason) => log::warn!("skipping malformed cdx row {}: {reason}", i + 2),
        }
    }
    Ok(out)
}

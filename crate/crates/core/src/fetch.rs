//! Polite live-page retrieval and seed classification.
//!
//! Politeness contract: at most one in-flight request per registrable domain,
//! a configurable minimum spacing between requests to the same domain, and a
//! global concurrency cap. robots.txt is honored by default.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tokio::sync::{Mutex, Semaphore};
use tokio::time::Instant;
use url::Url;

use crate::error::Error;
use crate::lang::LanguageDetector;
use crate::model::{DomainKey, SeedStatus};
use crate::psl::registrable_domain;
use crate::robots::RobotsPolicy;
use crate::store::content_hash;

/// Why a fetch did not produce a page.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FetchFailure {
    #[error("dns resolution failed")]
    Dns,
    #[error("connect timeout")]
    ConnectTimeout,
    #[error("tls failure")]
    Tls,
    #[error("connect failed: {0}")]
    Connect(String),
    #[error("http status {0}")]
    HttpStatus(u16),
    #[error("too many redirects")]
    TooManyRedirects,
    #[error("disallowed by robots.txt")]
    RobotsDisallowed,
    #[error("network access attempted in offline mode")]
    Offline,
    #[error("{0}")]
    Other(String),
}

impl FetchFailure {
    /// Permanent failures are not retried.
    fn retryable(&self) -> bool {
        !matches!(self, FetchFailure::RobotsDisallowed | FetchFailure::TooManyRedirects | FetchFailure::Offline)
    }
}

/// A retrieved page body plus retrieval metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResult {
    pub final_url: String,
    pub status_code: u16,
    pub body: Vec<u8>,
    pub fetched_at: DateTime<Utc>,
    /// URLs that redirected, in order; excludes the final URL.
    pub redirect_chain: Vec<String>,
    /// Hash of `body` exactly as stored.
    pub body_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FetchConfig {
    #[serde(default = "d_timeout")]
    pub timeout_secs: u64,
    #[serde(default = "d_retries")]
    pub retries: u32,
    #[serde(default = "d_backoff")]
    pub backoff_base_ms: u64,
    #[serde(default = "d_spacing")]
    pub per_host_min_delay_ms: u64,
    #[serde(default = "d_concurrency")]
    pub global_concurrency: usize,
    #[serde(default = "d_redirects")]
    pub max_redirects: usize,
    #[serde(default = "d_body_cap")]
    pub max_body_bytes: usize,
    /// Truthful research user agent with a contact URL.
    #[serde(default = "d_user_agent")]
    pub user_agent: String,
    #[serde(default = "d_true")]
    pub respect_robots: bool,
    /// Try `https://` before falling back to `http://` on seed fetches.
    #[serde(default = "d_true")]
    pub https_first: bool,
    /// Pin hosts to socket addresses (`["example.sk=127.0.0.1:8080"]`),
    /// bypassing DNS. Used by hermetic test setups and recorded-run replays.
    #[serde(default)]
    pub resolve: Vec<String>,
    #[serde(default)]
    pub offline: bool,
}

fn d_timeout() -> u64 {
    15
}
fn d_retries() -> u32 {
    2
}
fn d_backoff() -> u64 {
    500
}
fn d_spacing() -> u64 {
    2000
}
fn d_concurrency() -> usize {
    8
}
fn d_redirects() -> usize {
    10
}
fn d_body_cap() -> usize {
    8 * 1024 * 1024
}
fn d_user_agent() -> String {
    format!("linkhound/{} (website-network research; +https://github.com/linkhound)", env!("CARGO_PKG_VERSION"))
}
fn d_true() -> bool {
    true
}

impl Default for FetchConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

/// Seed classification knobs, shared by live scanning and reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Registrable domains whose tracking codes belong to the platform
    /// operator, not the site author.
    #[serde(default = "default_platform_blocklist")]
    pub platform_blocklist: BTreeSet<String>,
    #[serde(default = "d_target_language")]
    pub target_language: String,
    /// Discard as non-target only at or above this detector confidence.
    #[serde(default = "d_lang_confidence")]
    pub language_confidence: f64,
}

fn default_platform_blocklist() -> BTreeSet<String> {
    ["livejournal.com", "blogspot.com", "wordpress.com", "tumblr.com", "medium.com"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

fn d_target_language() -> String {
    "sk".to_string()
}

fn d_lang_confidence() -> f64 {
    0.7
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

type HostGate = Arc<Mutex<Option<Instant>>>;

/// HTTP client with the politeness contract baked in. Cheap to share.
pub struct Fetcher {
    cfg: FetchConfig,
    client: reqwest::Client,
    hosts: Mutex<HashMap<String, HostGate>>,
    global: Arc<Semaphore>,
    robots: Mutex<HashMap<String, Arc<RobotsPolicy>>>,
}

impl Fetcher {
    pub fn new(cfg: FetchConfig) -> Result<Self, Error> {
        if cfg.offline {
            return Err(Error::Offline("fetcher construction".into()));
        }
        let mut builder = reqwest::Client::builder()
            .user_agent(cfg.user_agent.clone())
            .timeout(Duration::from_secs(cfg.timeout_secs))
            .redirect(reqwest::redirect::Policy::none());
        for pin in &cfg.resolve {
            let (host, addr) = pin
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("resolve entry {pin:?}: expected host=ip:port")))?;
            let addr = addr
                .parse()
                .map_err(|e| Error::Config(format!("resolve entry {pin:?}: {e}")))?;
            builder = builder.resolve(host, addr);
        }
        let client = builder.build().map_err(|e| Error::Config(format!("http client: {e}")))?;
        Ok(Self {
            global: Arc::new(Semaphore::new(cfg.global_concurrency)),
            hosts: Mutex::new(HashMap::new()),
            robots: Mutex::new(HashMap::new()),
            cfg,
            client,
        })
    }

    pub fn config(&self) -> &FetchConfig {
        &self.cfg
    }

    async fn host_gate(&self, registrable: &str) -> HostGate {
        let mut hosts = self.hosts.lock().await;
        hosts.entry(registrable.to_string()).or_default().clone()
    }

    /// One polite GET: waits for the per-host slot and spacing, no redirect
    /// handling here.
    async fn polite_get(&self, url: &Url, extra_delay: Option<f64>) -> Result<reqwest::Response, FetchFailure> {
        let _global = self.global.acquire().await.expect("semaphore never closed");
        let host_key = registrable_domain(url.as_str())
            .map(|d| d.registrable().to_string())
            .unwrap_or_else(|_| url.host_str().unwrap_or("").to_string());
        let gate = self.host_gate(&host_key).await;
        let mut last = gate.lock().await;
        let spacing_ms = extra_delay
            .map(|d| (d * 1000.0) as u64)
            .unwrap_or(0)
            .max(self.cfg.per_host_min_delay_ms);
        if let Some(prev) = *last {
            let due = prev + Duration::from_millis(spacing_ms);
            let now = Instant::now();
            if due > now {
                tokio::time::sleep(due - now).await;
            }
        }
        let result = self.client.get(url.clone()).send().await.map_err(classify_reqwest_error);
        *last = Some(Instant::now());
        result
    }

    async fn robots_for(&self, url: &Url) -> Arc<RobotsPolicy> {
        let origin = format!("{}://{}", url.scheme(), url.host_str().unwrap_or(""));
        {
            let cache = self.robots.lock().await;
            if let Some(p) = cache.get(&origin) {
                return p.clone();
            }
        }
        let robots_url = format!("{origin}/robots.txt");
        let policy = match Url::parse(&robots_url) {
            Ok(u) => match self.polite_get(&u, None).await {
                Ok(resp) if resp.status().is_success() => {
                    let text = resp.text().await.unwrap_or_default();
                    RobotsPolicy::parse(&text, &self.cfg.user_agent)
                }
                _ => RobotsPolicy::allow_all(),
            },
            Err(_) => RobotsPolicy::allow_all(),
        };
        let policy = Arc::new(policy);
        self.robots.lock().await.insert(origin, policy.clone());
        policy
    }

    /// Fetches a URL, following redirects manually (the chain is recorded),
    /// with retries and exponential backoff.
    pub async fn fetch_url(&self, url: &str) -> Result<FetchResult, FetchFailure> {
        let start_url = Url::parse(url).map_err(|e| FetchFailure::Other(format!("bad url: {e}")))?;
        let mut attempt = 0u32;
        loop {
            match self.fetch_once(&start_url).await {
                Ok(result) => return Ok(result),
                Err(failure) => {
                    if attempt >= self.cfg.retries || !failure.retryable() {
                        return Err(failure);
                    }
                    let backoff = self.cfg.backoff_base_ms * 2u64.pow(attempt);
                    log::debug!("retrying {url} after {backoff}ms: {failure}");
                    tokio::time::sleep(Duration::from_millis(backoff)).await;
                    attempt += 1;
                }
            }
        }
    }

    async fn fetch_once(&self, start: &Url) -> Result<FetchResult, FetchFailure> {
        let mut current = start.clone();
        let mut chain: Vec<String> = Vec::new();
        loop {
            if chain.len() > self.cfg.max_redirects {
                return Err(FetchFailure::TooManyRedirects);
            }
            let mut crawl_delay = None;
            if self.cfg.respect_robots {
                let policy = self.robots_for(&current).await;
                if !policy.allows(current.path()) {
                    return Err(FetchFailure::RobotsDisallowed);
                }
                crawl_delay = policy.crawl_delay;
            }
            let resp = self.polite_get(&current, crawl_delay).await?;
            let status = resp.status();
            if status.is_redirection() {
                let location = resp
                    .headers()
                    .get(reqwest::header::LOCATION)
                    .and_then(|v| v.to_str().ok())
                    .map(str::to_string);
                match location {
                    Some(loc) => {
                        let next = current
                            .join(&loc)
                            .map_err(|e| FetchFailure::Other(format!("bad redirect target {loc:?}: {e}")))?;
                        chain.push(current.to_string());
                        current = next;
                        continue;
                    }
                    None => return Err(FetchFailure::HttpStatus(status.as_u16())),
                }
            }
            if status.as_u16() >= 400 {
                return Err(FetchFailure::HttpStatus(status.as_u16()));
            }
            let final_url = current.to_string();
            let mut body = resp
                .bytes()
                .await
                .map_err(|e| FetchFailure::Other(format!("body read: {e}")))?
                .to_vec();
            body.truncate(self.cfg.max_body_bytes);
            return Ok(FetchResult {
                body_hash: content_hash(&body),
                final_url,
                status_code: status.as_u16(),
                body,
                fetched_at: Utc::now(),
                redirect_chain: chain,
            });
        }
    }

    /// Fetches a seed's root page: `https://` first, falling back to plain
    /// `http://` on transport-level failure. The registrable domain is stable
    /// under any redirects within the chain.
    pub async fn fetch_live(&self, domain: &DomainKey) -> Result<FetchResult, FetchFailure> {
        if !self.cfg.https_first {
            return self.fetch_url(&format!("http://{}/", domain.original_host())).await;
        }
        let https = format!("https://{}/", domain.original_host());
        match self.fetch_url(&https).await {
            Ok(r) => Ok(r),
            Err(FetchFailure::HttpStatus(code)) => Err(FetchFailure::HttpStatus(code)),
            Err(first) => {
                let http = format!("http://{}/", domain.original_host());
                match self.fetch_url(&http).await {
                    Ok(r) => Ok(r),
                    Err(_) => Err(first),
                }
            }
        }
    }
}

fn classify_reqwest_error(e: reqwest::Error) -> FetchFailure {
    if e.is_timeout() {
        return FetchFailure::ConnectTimeout;
    }
    let detail = format!("{e:?}").to_ascii_lowercase();
    if detail.contains("dns") || detail.contains("lookup") {
        FetchFailure::Dns
    } else if detail.contains("certificate") || detail.contains("tls") || detail.contains("ssl") {
        FetchFailure::Tls
    } else if e.is_connect() {
        FetchFailure::Connect(e.to_string())
    } else {
        FetchFailure::Other(e.to_string())
    }
}

/// Classifies one seed. Total: every input maps to exactly one status, and a
/// manual override from the seed file always wins.
pub fn classify_seed(
    domain: &DomainKey,
    fetched: &Result<FetchResult, FetchFailure>,
    cfg: &ClassifyConfig,
    override_status: Option<SeedStatus>,
) -> SeedStatus {
    if let Some(status) = override_status {
        return status;
    }
    let result = match fetched {
        Err(_) => return SeedStatus::Dead,
        Ok(r) => r,
    };
    if cfg.platform_blocklist.contains(domain.registrable()) {
        return SeedStatus::PlatformManaged;
    }
    let body_text = String::from_utf8_lossy(&result.body);
    if let Some(detection) = LanguageDetector::builtin().detect_html(&body_text) {
        if detection.lang != cfg.target_language && detection.confidence >= cfg.language_confidence {
            log::debug!(
                "{domain}: detected {} at {:.2}, target {}",
                detection.lang,
                detection.confidence,
                cfg.target_language
            );
            return SeedStatus::NonTargetLanguage;
        }
    }
    SeedStatus::Active
}

/// One parsed row of a seed-list CSV (`domain,category,override_status`).
#[derive(Debug, Clone)]
pub struct SeedRow {
    pub raw: String,
    pub domain: DomainKey,
    pub category: Option<String>,
    pub override_status: Option<SeedStatus>,
}

/// Reads a seed list. The header must name a `domain` column; `category` and
/// `override_status` are optional. Duplicate registrable domains keep the
/// first row.
pub fn read_seed_file(path: &std::path::Path) -> Result<Vec<SeedRow>, Error> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("seed file {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("seed file {}: {e}", path.display())))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let domain_col = col("domain")
        .ok_or_else(|| Error::Config(format!("seed file {}: missing 'domain' column", path.display())))?;
    let category_col = col("category");
    let override_col = col("override_status");

    let mut rows = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Config(format!("seed file {} row {}: {e}", path.display(), idx + 2)))?;
        let raw = match record.get(domain_col) {
            Some(v) if !v.is_empty() => v.to_string(),
            _ => continue,
        };
        let domain = registrable_domain(&raw)?;
        if !seen.insert(domain.registrable().to_string()) {
            log::warn!("seed file {}: duplicate domain {raw} ignored", path.display());
            continue;
        }
        let category = category_col
            .and_then(|c| record.get(c))
            .filter(|v| !v.is_empty())
            .map(str::to_string);
        let override_status = match override_col.and_then(|c| record.get(c)).filter(|v| !v.is_empty()) {
            Some(v) => Some(SeedStatus::parse(v).ok_or_else(|| {
                Error::Config(format!("seed file {} row {}: unknown override_status {v:?}", path.display(), idx + 2))
            })?),
            None => None,
        };
        rows.push(SeedRow { raw, domain, category, override_status });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dk(s: &str) -> DomainKey {
        registrable_domain(s).unwrap()
    }

    fn ok_result(body: &str) -> Result<FetchResult, FetchFailure> {
        Ok(FetchResult {
            final_url: "https://x.sk/".into(),
            status_code: 200,
            body: body.as_bytes().to_vec(),
            fetched_at: Utc::now(),
            redirect_chain: vec![],
            body_hash: content_hash(body.as_bytes()),
        })
    }

    const SLOVAK_PAGE: &str = "<html><body><p>Obecný úrad oznamuje, že v piatok sa uskutoční \
        verejné zasadnutie, na ktorom poslanci prerokujú rozpočet na budúci rok a opravu miestnych \
        komunikácií. Všetci obyvatelia sú srdečne vítaní.</p></body></html>";

    const CZECH_PAGE: &str = "<html><body><p>Městský úřad oznamuje, že v pátek se uskuteční \
        veřejné zasedání, na kterém zastupitelé projednají rozpočet na příští rok a opravu místních \
        komunikací. Všichni obyvatelé jsou srdečně zváni. Děkujeme, že třídíte odpad a chráníte \
        životní prostředí našeho města.</p></body></html>";

    #[test]
    fn override_wins_over_everything() {
        let status = classify_seed(
            &dk("zombie.sk"),
            &Err(FetchFailure::Dns),
            &ClassifyConfig::default(),
            Some(SeedStatus::Active),
        );
        assert_eq!(status, SeedStatus::Active);
    }

    #[test]
    fn hard_fetch_failure_is_dead() {
        for failure in [FetchFailure::Dns, FetchFailure::ConnectTimeout, FetchFailure::HttpStatus(503)] {
            let status = classify_seed(&dk("gone.sk"), &Err(failure), &ClassifyConfig::default(), None);
            assert_eq!(status, SeedStatus::Dead);
        }
    }

    #[test]
    fn platform_domains_flagged() {
        let status =
            classify_seed(&dk("someblog.livejournal.com"), &ok_result(SLOVAK_PAGE), &ClassifyConfig::default(), None);
        assert_eq!(status, SeedStatus::PlatformManaged);
    }

    #[test]
    fn czech_body_with_slovak_target_discarded() {
        let status = classify_seed(&dk("cesky.sk"), &ok_result(CZECH_PAGE), &ClassifyConfig::default(), None);
        assert_eq!(status, SeedStatus::NonTargetLanguage);
    }

    #[test]
    fn slovak_body_stays_active() {
        let status = classify_seed(&dk("domaci.sk"), &ok_result(SLOVAK_PAGE), &ClassifyConfig::default(), None);
        assert_eq!(status, SeedStatus::Active);
    }

    #[test]
    fn tiny_body_stays_active() {
        let status = classify_seed(&dk("prazdny.sk"), &ok_result("<html></html>"), &ClassifyConfig::default(), None);
        assert_eq!(status, SeedStatus::Active);
    }

    #[test]
    fn offline_fetcher_refuses_to_build() {
        let cfg = FetchConfig { offline: true, ..FetchConfig::default() };
        assert!(matches!(Fetcher::new(cfg), Err(Error::Offline(_))));
    }
}

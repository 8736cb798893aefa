//! Reverse-id expansion: asking a lookup provider which other domains have
//! carried a given tracking id, then filtering out data relics (parked
//! domains, infrastructure, stale index entries) before anything reaches the
//! graph.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Duration;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;
use tokio::sync::Mutex;

use crate::error::Error;
use crate::model::{DomainKey, IdKind, TrackingId};
use crate::psl::registrable_domain;
use crate::store::Store;

/// One domain a provider associates with an id, with its observation window
/// when the provider reports one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LookupDomain {
    pub domain: DomainKey,
    pub first_seen: Option<NaiveDate>,
    pub last_seen: Option<NaiveDate>,
}

/// Parsed, registrable-normalized provider answer for one id.
#[derive(Debug, Clone)]
pub struct LookupRecord {
    pub id: TrackingId,
    pub domains: Vec<LookupDomain>,
    pub provider: String,
    pub retrieved_at: DateTime<Utc>,
    /// Content hash of the verbatim payload, which is also stored as a blob
    /// so downstream observations reference real store content.
    pub raw_blob_hash: String,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProviderFailure {
    /// Credentials rejected; fatal for this provider.
    #[error("authentication failed")]
    Auth,
    /// Quota exhausted; the run continues and records a gap.
    #[error("quota exceeded")]
    Quota,
    #[error("provider unreachable: {0}")]
    Unreachable(String),
    #[error("malformed provider response: {0}")]
    Malformed(String),
}

/// Raw entry as parsed from a provider payload, before normalization.
#[derive(Debug, Clone)]
pub struct ProviderEntry {
    pub host: String,
    pub first_seen: Option<NaiveDate>,
    pub last_seen: Option<NaiveDate>,
}

/// A reverse-lookup backend. The request side of the contract is the
/// canonical id string; the response side is the provider-native payload,
/// kept verbatim, plus the parsed entries.
pub trait LookupProvider: Send + Sync {
    fn name(&self) -> &str;

    /// Fetches the provider-native payload for `id`. An unknown id is an
    /// empty payload, not an error.
    fn lookup_raw<'a>(
        &'a self,
        id: &'a TrackingId,
    ) -> std::pin::Pin<Box<dyn std::future::Future<Output = Result<Vec<u8>, ProviderFailure>> + Send + 'a>>;

    /// Parses a payload previously returned by `lookup_raw`.
    fn parse(&self, id: &TrackingId, payload: &[u8]) -> Result<Vec<ProviderEntry>, ProviderFailure>;
}

/// Parses the `{"status":…, "result":{"analytics"/"adsense":{"<id>":{"items":{host:date}}}}}`
/// payload shape used by spy-index APIs. Tolerant: missing sections mean an
/// empty answer.
fn parse_spy_payload(payload: &[u8]) -> Result<Vec<ProviderEntry>, ProviderFailure> {
    if payload.is_empty() {
        return Ok(Vec::new());
    }
    let value: Value =
        serde_json::from_slice(payload).map_err(|e| ProviderFailure::Malformed(format!("json: {e}")))?;
    if value.get("status").and_then(Value::as_str) == Some("not_found") {
        return Ok(Vec::new());
    }
    let mut entries = Vec::new();
    let Some(result) = value.get("result").and_then(Value::as_object) else {
        return Ok(entries);
    };
    for section in result.values() {
        let Some(ids) = section.as_object() else { continue };
        for id_block in ids.values() {
            let Some(items) = id_block.get("items").and_then(Value::as_object) else { continue };
            for (host, date) in items {
                let seen = date.as_str().and_then(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").ok());
                entries.push(ProviderEntry { host: host.clone(), first_seen: None, last_seen: seen });
            }
        }
    }
    Ok(entries)
}

/// Reads canned responses from a directory of files keyed by canonical id
/// (`<dir>/<id>.json`). A missing file is an unknown id.
pub struct FixtureProvider {
    dir: PathBuf,
}

impl FixtureProvider {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }
}

impl LookupProvider for FixtureProvider {
    fn name(&self) -> &str {
        "fixture"
    }

    fn lookup_raw<'a>(
        &'a self,
        id: &'a TrackingId,
    ) -> std::pin::Pin<Box<dyn std::future::Future<Output = Result<Vec<u8>, ProviderFailure>> + Send + 'a>> {
        Box::pin(async move {
            let path = self.dir.join(format!("{}.json", id.canonical()));
            match std::fs::read(&path) {
                Ok(bytes) => Ok(bytes),
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
                Err(e) => Err(ProviderFailure::Unreachable(format!("{}: {e}", path.display()))),
            }
        })
    }

    fn parse(&self, _id: &TrackingId, payload: &[u8]) -> Result<Vec<ProviderEntry>, ProviderFailure> {
        parse_spy_payload(payload)
    }
}

/// Environment variable holding the spy-index API token. Credentials come
/// from the environment only, never from the config file.
pub const SPYONWEB_TOKEN_ENV: &str = "LINKHOUND_SPYONWEB_TOKEN";

/// HTTP client for the SpyOnWeb-style reverse index.
pub struct SpyOnWebProvider {
    endpoint: String,
    client: reqwest::Client,
    /// Minimum spacing between requests to the provider.
    min_interval: Duration,
    last_request: Mutex<Option<tokio::time::Instant>>,
}

impl SpyOnWebProvider {
    pub fn new(endpoint: impl Into<String>, user_agent: &str, min_interval_ms: u64) -> Result<Self, Error> {
        let client = reqwest::Client::builder()
            .user_agent(user_agent.to_string())
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| Error::Config(format!("lookup http client: {e}")))?;
        Ok(Self {
            endpoint: endpoint.into(),
            client,
            min_interval: Duration::from_millis(min_interval_ms),
            last_request: Mutex::new(None),
        })
    }

    fn token() -> Result<String, ProviderFailure> {
        std::env::var(SPYONWEB_TOKEN_ENV).map_err(|_| ProviderFailure::Auth)
    }

    fn path_for(id: &TrackingId) -> &'static str {
        match id.kind() {
            IdKind::AdsensePub => "adsense",
            _ => "analytics",
        }
    }
}

impl LookupProvider for SpyOnWebProvider {
    fn name(&self) -> &str {
        "spyonweb"
    }

    fn lookup_raw<'a>(
        &'a self,
        id: &'a TrackingId,
    ) -> std::pin::Pin<Box<dyn std::future::Future<Output = Result<Vec<u8>, ProviderFailure>> + Send + 'a>> {
        Box::pin(async move {
            let token = Self::token()?;
            {
                // One in-flight request per provider, spaced by min_interval.
                let mut last = self.last_request.lock().await;
                if let Some(prev) = *last {
                    let due = prev + self.min_interval;
                    let now = tokio::time::Instant::now();
                    if due > now {
                        tokio::time::sleep(due - now).await;
                    }
                }
                *last = Some(tokio::time::Instant::now());
            }
            let url = format!(
                "{}/v1/{}/{}?access_token={token}",
                self.endpoint.trim_end_matches('/'),
                Self::path_for(id),
                id.canonical()
            );
            let resp = self.client.get(&url).send().await.map_err(|e| ProviderFailure::Unreachable(e.to_string()))?;
            match resp.status().as_u16() {
                401 | 403 => Err(ProviderFailure::Auth),
                402 | 429 => Err(ProviderFailure::Quota),
                s if s >= 400 => Err(ProviderFailure::Unreachable(format!("status {s}"))),
                _ => Ok(resp.bytes().await.map_err(|e| ProviderFailure::Unreachable(e.to_string()))?.to_vec()),
            }
        })
    }

    fn parse(&self, _id: &TrackingId, payload: &[u8]) -> Result<Vec<ProviderEntry>, ProviderFailure> {
        parse_spy_payload(payload)
    }
}

/// Cache freshness window for provider responses.
pub const DEFAULT_LOOKUP_TTL_DAYS: i64 = 30;

/// Looks up `id`, going through the store cache first. The raw payload is
/// persisted verbatim before parsing; entries are registrable-normalized and
/// collapsed per registrable domain keeping the widest seen-range.
pub async fn reverse_lookup(
    id: &TrackingId,
    provider: &dyn LookupProvider,
    store: &Store,
    ttl_days: i64,
) -> Result<LookupRecord, Error> {
    let cached = store.get_lookup_raw(provider.name(), id).filter(|(_, retrieved_at)| {
        Utc::now().signed_duration_since(*retrieved_at) <= chrono::Duration::days(ttl_days)
    });
    let (payload, retrieved_at) = match cached {
        Some((payload, at)) => {
            log::debug!("lookup cache hit for {} via {}", id.canonical(), provider.name());
            (payload, at)
        }
        None => {
            let payload = provider.lookup_raw(id).await.map_err(|failure| Error::Provider {
                provider: provider.name().to_string(),
                failure,
            })?;
            let now = Utc::now();
            store.put_lookup_raw(provider.name(), id, &payload, now)?;
            (payload, now)
        }
    };
    let raw_blob_hash = store.put_blob(&payload)?;
    let entries = provider.parse(id, &payload).map_err(|failure| Error::Provider {
        provider: provider.name().to_string(),
        failure,
    })?;

    let mut by_domain: std::collections::BTreeMap<DomainKey, LookupDomain> = std::collections::BTreeMap::new();
    for entry in entries {
        let Ok(domain) = registrable_domain(&entry.host) else {
            log::warn!("lookup entry with unusable host {:?}", entry.host);
            continue;
        };
        by_domain
            .entry(domain.clone())
            .and_modify(|existing| {
                existing.first_seen = merge_dates(existing.first_seen, entry.first_seen, false);
                existing.last_seen = merge_dates(existing.last_seen, entry.last_seen, true);
            })
            .or_insert(LookupDomain { domain, first_seen: entry.first_seen, last_seen: entry.last_seen });
    }
    Ok(LookupRecord {
        id: id.clone(),
        domains: by_domain.into_values().collect(),
        provider: provider.name().to_string(),
        retrieved_at,
        raw_blob_hash,
    })
}

fn merge_dates(a: Option<NaiveDate>, b: Option<NaiveDate>, take_max: bool) -> Option<NaiveDate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if take_max { x.max(y) } else { x.min(y) }),
        (x, y) => x.or(y),
    }
}

/// Why a looked-up domain was removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RemovalReason {
    Blocklist,
    Stale,
    SelfAlias,
    NotLive,
}

#[derive(Debug, Clone)]
pub struct Removal {
    pub domain: DomainKey,
    pub reason: RemovalReason,
}

/// Data-relic policy: which classes of spurious lookup results get dropped.
/// Each rule is independently switchable so the filter's effect is auditable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelicPolicy {
    /// Archive/platform/parking infrastructure that never evidences common
    /// administration.
    #[serde(default = "default_relic_blocklist")]
    pub blocklist: BTreeSet<String>,
    #[serde(default = "d_true")]
    pub blocklist_enabled: bool,
    /// Entries whose provider `last_seen` predates this horizon are stale.
    #[serde(default = "d_horizon")]
    pub horizon_years: i64,
    #[serde(default = "d_true")]
    pub staleness_enabled: bool,
    /// Drop the queried seed's own aliases (a self-link is not a network).
    #[serde(default = "d_true")]
    pub drop_self: bool,
    /// Probe domains and drop the unreachable ones (`--verify-live`).
    #[serde(default)]
    pub verify_live: bool,
}

fn default_relic_blocklist() -> BTreeSet<String> {
    [
        "archive.org",
        "archive.today",
        "livejournal.com",
        "blogspot.com",
        "wordpress.com",
        "sedoparking.com",
        "sedo.com",
        "parkingcrew.net",
        "bodis.com",
        "hugedomains.com",
        "dan.com",
        "afternic.com",
        "godaddy.com",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn d_true() -> bool {
    true
}
fn d_horizon() -> i64 {
    10
}

impl Default for RelicPolicy {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

/// The filtered record plus an audit trail of removals.
#[derive(Debug, Clone)]
pub struct FilteredLookup {
    pub record: LookupRecord,
    pub removals: Vec<Removal>,
}

/// Applies the relic policy to a lookup record. Non-destructive (the raw
/// response stays in the store), monotone (never adds domains) and
/// idempotent. `self_domains` are the queried id's already-known carriers
/// (the seed and its aliases); a self-link is not a network. The liveness
/// rule needs network access and is applied separately by the pipeline when
/// `verify_live` is set.
pub fn filter_relics(
    record: &LookupRecord,
    policy: &RelicPolicy,
    self_domains: &BTreeSet<DomainKey>,
) -> FilteredLookup {
    let horizon_cutoff = record
        .retrieved_at
        .date_naive()
        .checked_sub_months(chrono::Months::new((policy.horizon_years * 12).max(0) as u32));
    let mut kept = Vec::new();
    let mut removals = Vec::new();
    for entry in &record.domains {
        let reason = if policy.drop_self && self_domains.contains(&entry.domain) {
            Some(RemovalReason::SelfAlias)
        } else if policy.blocklist_enabled && policy.blocklist.contains(entry.domain.registrable()) {
            Some(RemovalReason::Blocklist)
        } else if policy.staleness_enabled
            && matches!((entry.last_seen, horizon_cutoff), (Some(seen), Some(cutoff)) if seen < cutoff)
        {
            Some(RemovalReason::Stale)
        } else {
            None
        };
        match reason {
            Some(reason) => {
                log::info!("relic filter removed {} ({reason:?})", entry.domain);
                removals.push(Removal { domain: entry.domain.clone(), reason });
            }
            None => kept.push(entry.clone()),
        }
    }
    FilteredLookup {
        record: LookupRecord { domains: kept, ..record.clone() },
        removals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::normalize_id;

    fn record(domains: &[(&str, Option<&str>)]) -> LookupRecord {
        LookupRecord {
            id: normalize_id("pub-9657897336906985").unwrap(),
            domains: domains
                .iter()
                .map(|(host, last)| LookupDomain {
                    domain: registrable_domain(host).unwrap(),
                    first_seen: None,
                    last_seen: last.map(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").unwrap()),
                })
                .collect(),
            provider: "fixture".into(),
            retrieved_at: "2021-04-20T10:00:00Z".parse().unwrap(),
            raw_blob_hash: crate::store::content_hash(b""),
        }
    }

    #[test]
    fn spy_payload_parses_items() {
        let payload = br#"{
            "status": "found",
            "result": {
                "adsense": {
                    "pub-9657897336906985": {
                        "fetched": 3, "found": 3,
                        "items": {
                            "zdravie-a-my.sk": "2019-03-01",
                            "www.zazracne-kvapky.sk": "2018-11-12",
                            "bylinky-pre-vsetkych.sk": "2019-01-20"
                        }
                    }
                }
            }
        }"#;
        let entries = parse_spy_payload(payload).unwrap();
        assert_eq!(entries.len(), 3);
        assert!(entries.iter().any(|e| e.host == "www.zazracne-kvapky.sk"));
    }

    #[test]
    fn unknown_id_empty_payload() {
        assert!(parse_spy_payload(b"").unwrap().is_empty());
        assert!(parse_spy_payload(br#"{"status":"not_found"}"#).unwrap().is_empty());
    }

    #[tokio::test]
    async fn fixture_provider_and_registrable_collapse() {
        let dir = tempfile::tempdir().unwrap();
        let id = normalize_id("UA-12857229-1").unwrap();
        std::fs::write(
            dir.path().join("UA-12857229.json"),
            br#"{"status":"found","result":{"analytics":{"UA-12857229":{"items":{
                "www.a.sk":"2019-05-01","a.sk":"2018-01-01","b.sk":"2019-02-02"}}}}}"#,
        )
        .unwrap();
        let provider = FixtureProvider::new(dir.path());
        let store_dir = tempfile::tempdir().unwrap();
        let store = Store::open(store_dir.path()).unwrap();
        let record = reverse_lookup(&id, &provider, &store, 30).await.unwrap();
        assert_eq!(record.domains.len(), 2); // www.a.sk + a.sk collapse
        let a = record.domains.iter().find(|d| d.domain.registrable() == "a.sk").unwrap();
        assert_eq!(a.last_seen, Some(NaiveDate::from_ymd_opt(2019, 5, 1).unwrap()));
        // Raw payload persisted verbatim.
        let (payload, _) = store.get_lookup_raw("fixture", &id).unwrap();
        assert!(payload.starts_with(b"{\"status\":\"found\""));
    }

    #[tokio::test]
    async fn fixture_provider_unknown_id_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let provider = FixtureProvider::new(dir.path());
        let store_dir = tempfile::tempdir().unwrap();
        let store = Store::open(store_dir.path()).unwrap();
        let id = normalize_id("UA-99999999").unwrap();
        let record = reverse_lookup(&id, &provider, &store, 30).await.unwrap();
        assert!(record.domains.is_empty());
    }

    #[test]
    fn blocklisted_domain_removed() {
        let rec = record(&[("sedoparking.com", None), ("poctivy.sk", None)]);
        let filtered = filter_relics(&rec, &RelicPolicy::default(), &BTreeSet::new());
        assert_eq!(filtered.record.domains.len(), 1);
        assert_eq!(filtered.removals.len(), 1);
        assert_eq!(filtered.removals[0].reason, RemovalReason::Blocklist);
    }

    #[test]
    fn stale_entry_removed_under_horizon() {
        // last_seen 2009 under a 10-year horizon at a 2021-dated record.
        let rec = record(&[("stary.sk", Some("2009-06-01")), ("cerstvy.sk", Some("2020-06-01"))]);
        let filtered = filter_relics(&rec, &RelicPolicy::default(), &BTreeSet::new());
        assert_eq!(filtered.record.domains.len(), 1);
        assert_eq!(filtered.record.domains[0].domain.registrable(), "cerstvy.sk");
        assert_eq!(filtered.removals[0].reason, RemovalReason::Stale);
    }

    #[test]
    fn unknown_last_seen_kept() {
        let rec = record(&[("nedatovany.sk", None)]);
        let filtered = filter_relics(&rec, &RelicPolicy::default(), &BTreeSet::new());
        assert_eq!(filtered.record.domains.len(), 1);
    }

    #[test]
    fn self_alias_removed_yields_empty_record() {
        let seeds: BTreeSet<DomainKey> = [registrable_domain("sam-sebe.sk").unwrap()].into();
        let rec = record(&[("www.sam-sebe.sk", None)]);
        let filtered = filter_relics(&rec, &RelicPolicy::default(), &seeds);
        assert!(filtered.record.domains.is_empty());
        assert_eq!(filtered.removals[0].reason, RemovalReason::SelfAlias);
    }

    #[test]
    fn filter_is_monotone_and_idempotent() {
        let rec = record(&[
            ("sedo.com", None),
            ("stary.sk", Some("2005-01-01")),
            ("dobry.sk", Some("2020-01-01")),
            ("druhy.sk", None),
        ]);
        let policy = RelicPolicy::default();
        let once = filter_relics(&rec, &policy, &BTreeSet::new());
        assert!(once.record.domains.len() <= rec.domains.len());
        let twice = filter_relics(&once.record, &policy, &BTreeSet::new());
        assert_eq!(once.record.domains, twice.record.domains);
        assert!(twice.removals.is_empty());
    }

    #[test]
    fn rules_independently_switchable() {
        let rec = record(&[("sedo.com", None), ("stary.sk", Some("2005-01-01"))]);
        let policy = RelicPolicy {
            blocklist_enabled: false,
            staleness_enabled: false,
            ..RelicPolicy::default()
        };
        let filtered = filter_relics(&rec, &policy, &BTreeSet::new());
        assert_eq!(filtered.record.domains.len(), 2);
        assert!(filtered.removals.is_empty());
    }
}

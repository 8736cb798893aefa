//! Shared domain vocabulary: tracking identifiers, domain keys, observations,
//! seed entries and scan waves, plus the normalization rules that make linking
//! between domains sound.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// The family a tracking identifier belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdKind {
    /// Universal Analytics property (`UA-<account>[-<property>]`).
    GaUa,
    /// Analytics 4 measurement id (`G-<token>`).
    Ga4,
    /// Tag Manager container (`GTM-<token>`).
    Gtm,
    /// AdSense publisher account (`pub-<16 digits>`).
    AdsensePub,
}

impl IdKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IdKind::GaUa => "ga_ua",
            IdKind::Ga4 => "ga4",
            IdKind::Gtm => "gtm",
            IdKind::AdsensePub => "adsense_pub",
        }
    }
}

impl fmt::Display for IdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A normalized analytics/ad identifier. Identity (equality, hashing,
/// ordering) is `(kind, account)` only: `UA-12857229-1` and `UA-12857229-2`
/// are the same account and therefore the same id. The property suffix is
/// retained for display.
#[derive(Debug, Clone)]
pub struct TrackingId {
    kind: IdKind,
    account: String,
    property_suffix: Option<u32>,
}

impl TrackingId {
    pub fn new(kind: IdKind, account: impl Into<String>, property_suffix: Option<u32>) -> Self {
        Self { kind, account: account.into(), property_suffix }
    }

    pub fn kind(&self) -> IdKind {
        self.kind
    }

    pub fn account(&self) -> &str {
        &self.account
    }

    pub fn property_suffix(&self) -> Option<u32> {
        self.property_suffix
    }

    /// Canonical text form: `UA-<account>`, `pub-<account>`, `G-<token>`,
    /// `GTM-<token>`. The property suffix is not part of the canonical form;
    /// `parse(canonical())` is a fixed point.
    pub fn canonical(&self) -> String {
        match self.kind {
            IdKind::GaUa => format!("UA-{}", self.account),
            IdKind::Ga4 => format!("G-{}", self.account),
            IdKind::Gtm => format!("GTM-{}", self.account),
            IdKind::AdsensePub => format!("pub-{}", self.account),
        }
    }

    /// Like [`canonical`](Self::canonical) but keeps the property suffix when
    /// one was observed, for display purposes.
    pub fn display_form(&self) -> String {
        match (self.kind, self.property_suffix) {
            (IdKind::GaUa, Some(sfx)) => format!("UA-{}-{}", self.account, sfx),
            _ => self.canonical(),
        }
    }
}

impl PartialEq for TrackingId {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.account == other.account
    }
}

impl Eq for TrackingId {}

impl Hash for TrackingId {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.account.hash(state);
    }
}

impl PartialOrd for TrackingId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TrackingId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kind, &self.account).cmp(&(other.kind, &other.account))
    }
}

impl fmt::Display for TrackingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

// Serialized as the canonical string form.
impl Serialize for TrackingId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

/// Why a raw token was not accepted as a [`TrackingId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// The account field contains a placeholder character (`X`).
    Placeholder,
    /// The token is on the configured literal blocklist.
    Blocklisted,
    /// The account field has the wrong length for its kind.
    BadLength,
    /// The account field is not purely numeric (UA/pub kinds).
    NonNumericAccount,
    /// A UA account may not start with `0`.
    LeadingZero,
    /// The property suffix is present but not numeric.
    BadSuffix,
    /// The id kind is valid but disabled by configuration.
    KindDisabled,
    /// The token does not match any known id shape.
    Unrecognized,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::Placeholder => "placeholder characters in account",
            RejectReason::Blocklisted => "token is blocklisted",
            RejectReason::BadLength => "account has invalid length",
            RejectReason::NonNumericAccount => "account is not numeric",
            RejectReason::LeadingZero => "account has a leading zero",
            RejectReason::BadSuffix => "property suffix is not numeric",
            RejectReason::KindDisabled => "id kind disabled by configuration",
            RejectReason::Unrecognized => "unrecognized token shape",
        };
        f.write_str(s)
    }
}

/// Normalization policy: which id kinds are accepted and which literal tokens
/// are treated as tutorial placeholders. The default matches the classic
/// Analytics + AdSense scope; `G-`/`GTM-` support is opt-in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdPolicy {
    #[serde(default)]
    pub enable_ga4: bool,
    #[serde(default)]
    pub enable_gtm: bool,
    /// Literal tokens rejected even though they parse, matched
    /// case-insensitively against both the raw token and its canonical form.
    /// Sample ids that circulate in setup tutorials belong here.
    #[serde(default = "default_blocklist")]
    pub blocklist: BTreeSet<String>,
}

fn default_blocklist() -> BTreeSet<String> {
    [
        // Widely copy-pasted sample ids from setup guides.
        "UA-12345-1",
        "UA-12345678-1",
        "UA-123456789-1",
        "pub-1234567890123456",
        // Web-archive infrastructure analytics; snapshots are requested in
        // raw form, this is a second guard against injected toolbar markup.
        "UA-6648363",
    ]
    .iter()
    .map(|s| s.to_uppercase())
    .collect()
}

impl Default for IdPolicy {
    fn default() -> Self {
        Self { enable_ga4: false, enable_gtm: false, blocklist: default_blocklist() }
    }
}

impl IdPolicy {
    fn is_blocklisted(&self, raw: &str, id: &TrackingId) -> bool {
        let raw_up = raw.trim().to_uppercase();
        self.blocklist.contains(&raw_up)
            || self.blocklist.contains(&id.canonical().to_uppercase())
            || self.blocklist.contains(&id.display_form().to_uppercase())
    }

    /// Normalizes a raw candidate token into a canonical [`TrackingId`].
    ///
    /// Input is case-insensitive; `ca-pub-…` and `pub-…` normalize
    /// identically; the UA property suffix is parsed but excluded from
    /// identity. Placeholders (`X` in digit positions), malformed lengths and
    /// non-numeric accounts are rejected.
    pub fn normalize(&self, raw: &str) -> Result<TrackingId, RejectReason> {
        let token = raw.trim();
        let lower = token.to_lowercase();

        let id = if let Some(rest) = lower.strip_prefix("ca-pub-").or_else(|| lower.strip_prefix("pub-")) {
            let account = check_numeric_account(rest)?;
            if account.len() != 16 {
                return Err(RejectReason::BadLength);
            }
            TrackingId::new(IdKind::AdsensePub, account, None)
        } else if let Some(rest) = lower.strip_prefix("ua-") {
            let (account_part, suffix_part) = match rest.split_once('-') {
                Some((acc, sfx)) => (acc, Some(sfx)),
                None => (rest, None),
            };
            let account = check_numeric_account(account_part)?;
            if !(4..=10).contains(&account.len()) {
                return Err(RejectReason::BadLength);
            }
            if account.starts_with('0') {
                return Err(RejectReason::LeadingZero);
            }
            let suffix = match suffix_part {
                Some(s) => Some(s.parse::<u32>().map_err(|_| RejectReason::BadSuffix)?),
                None => None,
            };
            TrackingId::new(IdKind::GaUa, account, suffix)
        } else if let Some(rest) = lower.strip_prefix("gtm-") {
            if !self.enable_gtm {
                return Err(RejectReason::KindDisabled);
            }
            let token = check_alnum_token(rest)?;
            TrackingId::new(IdKind::Gtm, token, None)
        } else if let Some(rest) = lower.strip_prefix("g-") {
            if !self.enable_ga4 {
                return Err(RejectReason::KindDisabled);
            }
            let token = check_alnum_token(rest)?;
            TrackingId::new(IdKind::Ga4, token, None)
        } else {
            return Err(RejectReason::Unrecognized);
        };

        if self.is_blocklisted(token, &id) {
            return Err(RejectReason::Blocklisted);
        }
        Ok(id)
    }
}

/// Convenience wrapper over [`IdPolicy::normalize`] with the default policy.
pub fn normalize_id(raw: &str) -> Result<TrackingId, RejectReason> {
    IdPolicy::default().normalize(raw)
}

fn check_numeric_account(s: &str) -> Result<String, RejectReason> {
    if s.is_empty() {
        return Err(RejectReason::BadLength);
    }
    if s.chars().any(|c| c == 'x') {
        return Err(RejectReason::Placeholder);
    }
    if !s.chars().all(|c| c.is_ascii_digit()) {
        return Err(RejectReason::NonNumericAccount);
    }
    Ok(s.to_string())
}

fn check_alnum_token(s: &str) -> Result<String, RejectReason> {
    if !(4..=15).contains(&s.len()) {
        return Err(RejectReason::BadLength);
    }
    if !s.chars().all(|c| c.is_ascii_alphanumeric()) {
        return Err(RejectReason::Unrecognized);
    }
    Ok(s.to_uppercase())
}

/// A website identified by its registrable domain. All subdomains of one
/// registrable domain map to the same key; equality, hashing and ordering
/// consider the registrable domain only. The host as originally observed is
/// kept for display.
#[derive(Debug, Clone)]
pub struct DomainKey {
    registrable: String,
    original_host: String,
}

impl DomainKey {
    pub(crate) fn from_parts(registrable: String, original_host: String) -> Self {
        Self { registrable, original_host }
    }

    pub fn registrable(&self) -> &str {
        &self.registrable
    }

    pub fn original_host(&self) -> &str {
        &self.original_host
    }
}

impl PartialEq for DomainKey {
    fn eq(&self, other: &Self) -> bool {
        self.registrable == other.registrable
    }
}

impl Eq for DomainKey {}

impl Hash for DomainKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.registrable.hash(state);
    }
}

impl PartialOrd for DomainKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DomainKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.registrable.cmp(&other.registrable)
    }
}

impl fmt::Display for DomainKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.registrable)
    }
}

// Serialized as the bare lowercase registrable domain.
impl Serialize for DomainKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.registrable)
    }
}

impl<'de> Deserialize<'de> for DomainKey {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(DomainKey::from_parts(s.clone(), s))
    }
}

/// Archive snapshot timestamp in `YYYYMMDDhhmmss` form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArchiveTimestamp(String);

impl ArchiveTimestamp {
    pub fn parse(s: &str) -> Result<Self, String> {
        if s.len() != 14 || !s.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("expected 14 digits, got {s:?}"));
        }
        // Must denote a real UTC instant.
        chrono::NaiveDateTime::parse_from_str(s, "%Y%m%d%H%M%S")
            .map_err(|e| format!("invalid instant {s:?}: {e}"))?;
        Ok(Self(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `YYYYMM` prefix, the sampling bucket for monthly policies.
    pub fn month_bucket(&self) -> &str {
        &self.0[..6]
    }

    pub fn to_utc(&self) -> DateTime<Utc> {
        chrono::NaiveDateTime::parse_from_str(&self.0, "%Y%m%d%H%M%S")
            .expect("validated at construction")
            .and_utc()
    }
}

impl fmt::Display for ArchiveTimestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// How an observation was made.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Seen on the live site.
    Live,
    /// Seen in an archived snapshot taken at `snapshot_ts`.
    Archive { snapshot_ts: ArchiveTimestamp },
    /// Reported by a reverse-lookup provider.
    ReverseLookup { provider: String },
}

/// Provenance with per-variant detail stripped; deduplication granularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceClass {
    Live,
    Archive,
    ReverseLookup,
}

impl Provenance {
    pub fn class(&self) -> ProvenanceClass {
        match self {
            Provenance::Live => ProvenanceClass::Live,
            Provenance::Archive { .. } => ProvenanceClass::Archive,
            Provenance::ReverseLookup { .. } => ProvenanceClass::ReverseLookup,
        }
    }
}

impl fmt::Display for ProvenanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProvenanceClass::Live => "live",
            ProvenanceClass::Archive => "archive",
            ProvenanceClass::ReverseLookup => "reverse_lookup",
        };
        f.write_str(s)
    }
}

/// One sighting of one tracking id on one domain at one time. Observations
/// are append-only facts; deduplication happens at query time on
/// `(domain, id, provenance class)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observation {
    pub domain: DomainKey,
    pub id: TrackingId,
    /// Wall clock of the run that made the observation. For archive
    /// provenance this is distinct from the snapshot timestamp.
    pub observed_at: DateTime<Utc>,
    pub provenance: Provenance,
    pub source_url: String,
    /// Content hash of the stored body / provider response this observation
    /// was extracted from, when it went through the store.
    pub blob_hash: Option<String>,
}

impl Observation {
    /// Query-time deduplication key.
    pub fn dedup_key(&self) -> (DomainKey, TrackingId, ProvenanceClass) {
        (self.domain.clone(), self.id.clone(), self.provenance.class())
    }
}

/// Availability/language classification of a seed-list entry. Only `Active`
/// seeds enter scanning; every discard carries exactly one non-active status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedStatus {
    Active,
    Dead,
    NonTargetLanguage,
    PlatformManaged,
}

impl SeedStatus {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "active" => Some(SeedStatus::Active),
            "dead" => Some(SeedStatus::Dead),
            "non_target_language" | "non-target-language" => Some(SeedStatus::NonTargetLanguage),
            "platform_managed" | "platform-managed" => Some(SeedStatus::PlatformManaged),
            _ => None,
        }
    }
}

impl fmt::Display for SeedStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeedStatus::Active => "active",
            SeedStatus::Dead => "dead",
            SeedStatus::NonTargetLanguage => "non_target_language",
            SeedStatus::PlatformManaged => "platform_managed",
        };
        f.write_str(s)
    }
}

/// One entry of the curated seed list, after classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub domain: DomainKey,
    pub status: SeedStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    pub wave: String,
}

/// A named, timestamped collection of observations over a seed list; the unit
/// of longitudinal comparison. A wave is immutable once finished.
#[derive(Debug, Clone)]
pub struct ScanWave {
    pub name: String,
    pub started_at: DateTime<Utc>,
    pub finished_at: Option<DateTime<Utc>>,
    pub seeds: Vec<SeedEntry>,
    pub observations: Vec<Observation>,
}

impl ScanWave {
    pub fn new(name: impl Into<String>, started_at: DateTime<Utc>) -> Self {
        Self { name: name.into(), started_at, finished_at: None, seeds: Vec::new(), observations: Vec::new() }
    }

    pub fn is_finished(&self) -> bool {
        self.finished_at.is_some()
    }

    /// Observations deduplicated on `(domain, id, provenance class)`,
    /// keeping the earliest sighting per key, in deterministic order.
    pub fn deduplicated_observations(&self) -> Vec<&Observation> {
        let mut sorted: Vec<&Observation> = self.observations.iter().collect();
        sorted.sort_by(|a, b| {
            a.dedup_key()
                .cmp(&b.dedup_key())
                .then_with(|| a.observed_at.cmp(&b.observed_at))
                .then_with(|| a.source_url.cmp(&b.source_url))
        });
        let mut out: Vec<&Observation> = Vec::with_capacity(sorted.len());
        for obs in sorted {
            if out.last().map(|prev| prev.dedup_key()) != Some(obs.dedup_key()) {
                out.push(obs);
            }
        }
        out
    }

    /// Domains present on the seed list regardless of status.
    pub fn seed_domains(&self) -> BTreeSet<DomainKey> {
        self.seeds.iter().map(|s| s.domain.clone()).collect()
    }

    pub fn active_seeds(&self) -> impl Iterator<Item = &SeedEntry> {
        self.seeds.iter().filter(|s| s.status == SeedStatus::Active)
    }

    /// Seed totals by status: `(active, dead, non_target_language,
    /// platform_managed)`. Always sums to the seed count.
    pub fn accounting(&self) -> SeedAccounting {
        let mut acc = SeedAccounting::default();
        for seed in &self.seeds {
            match seed.status {
                SeedStatus::Active => acc.active += 1,
                SeedStatus::Dead => acc.dead += 1,
                SeedStatus::NonTargetLanguage => acc.non_target_language += 1,
                SeedStatus::PlatformManaged => acc.platform_managed += 1,
            }
        }
        acc
    }
}

/// Pipeline accounting over a wave's seed list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SeedAccounting {
    pub active: usize,
    pub dead: usize,
    pub non_target_language: usize,
    pub platform_managed: usize,
}

impl SeedAccounting {
    pub fn total(&self) -> usize {
        self.active + self.dead + self.non_target_language + self.platform_managed
    }

    /// The compact equation form, e.g. `144 = 46 + 21 + 74 + 3`.
    pub fn equation(&self) -> String {
        format!(
            "{} = {} + {} + {} + {}",
            self.total(),
            self.active,
            self.dead,
            self.non_target_language,
            self.platform_managed
        )
    }
}

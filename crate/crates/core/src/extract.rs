//! Tracking-id extraction from fetched page bodies.
//!
//! Deliberately a full-text scan rather than a DOM walk: the ids live inside
//! script strings, JSON blobs and comments that a DOM parser treats as opaque
//! text anyway, and archived pages are full of malformed markup.

use std::sync::OnceLock;

use chrono::{DateTime, Utc};
use regex::Regex;
use serde::{Deserialize, Serialize};
use url::Url;

use crate::model::{DomainKey, IdPolicy, Observation, Provenance, TrackingId};

/// Default scanning window: tracking bootstrap code sits near the top of the
/// document, and archived pages can be pathologically large.
pub const DEFAULT_WINDOW_BYTES: usize = 5 * 1024 * 1024;

/// Extractor settings; part of the run configuration file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtractorConfig {
    /// Which id kinds are recognized and which literals are placeholders.
    #[serde(default)]
    pub id_policy: IdPolicy,
    /// Follow `<script src=…>` references on the same registrable domain.
    #[serde(default = "default_true")]
    pub follow_scripts: bool,
    /// Same-domain script references followed per page.
    #[serde(default = "default_script_cap")]
    pub script_cap: usize,
    /// Scan at most this many bytes of any body.
    #[serde(default = "default_window_bytes")]
    pub window_bytes: usize,
}

fn default_true() -> bool {
    true
}

fn default_script_cap() -> usize {
    20
}

fn default_window_bytes() -> usize {
    DEFAULT_WINDOW_BYTES
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        Self {
            id_policy: IdPolicy::default(),
            follow_scripts: true,
            script_cap: 20,
            window_bytes: DEFAULT_WINDOW_BYTES,
        }
    }
}

/// One candidate token found in a body, before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawIdHit {
    pub raw_token: String,
    /// Offset into the scanned (lossily decoded) text.
    pub byte_offset: usize,
    /// Up to 120 chars of surrounding text, always valid UTF-8.
    pub context_snippet: String,
    pub source_url: String,
}

fn ua_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bUA-[0-9X]{4,10}(?:-[0-9]{1,4})?\b").unwrap())
}

fn pub_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\b(?:ca-)?pub-[0-9X]{4,20}\b").unwrap())
}

fn ga4_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\bG-[A-Z0-9]{6,14}\b").unwrap())
}

fn gtm_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\bGTM-[A-Z0-9]{4,10}\b").unwrap())
}

fn script_src_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r#"(?is)<script\b[^>]*?\bsrc\s*=\s*["']([^"']+)["']"#).unwrap()
    })
}

/// Scans a body for candidate tracking-id tokens.
///
/// Pure function of `(body, config)`: every non-overlapping pattern match is
/// reported in document order with strictly increasing offsets. Undecodable
/// bytes are replaced, not fatal; an empty body yields an empty list.
pub fn extract_ids(body: &[u8], source_url: &str, config: &ExtractorConfig) -> Vec<RawIdHit> {
    let window = &body[..body.len().min(config.window_bytes)];
    let text = String::from_utf8_lossy(window);

    let mut patterns: Vec<&Regex> = vec![ua_pattern(), pub_pattern()];
    if config.id_policy.enable_ga4 {
        patterns.push(ga4_pattern());
    }
    if config.id_policy.enable_gtm {
        patterns.push(gtm_pattern());
    }

    let mut hits: Vec<RawIdHit> = Vec::new();
    for re in patterns {
        for m in re.find_iter(&text) {
            hits.push(RawIdHit {
                raw_token: m.as_str().to_string(),
                byte_offset: m.start(),
                context_snippet: context_snippet(&text, m.start(), m.end()),
                source_url: source_url.to_string(),
            });
        }
    }
    hits.sort_by_key(|h| (h.byte_offset, h.raw_token.len()));
    // Patterns have disjoint prefixes, but be safe about overlaps anyway.
    let mut out: Vec<RawIdHit> = Vec::with_capacity(hits.len());
    let mut covered_until = 0usize;
    for hit in hits {
        if hit.byte_offset >= covered_until {
            covered_until = hit.byte_offset + hit.raw_token.len();
            out.push(hit);
        }
    }
    out
}

/// Up to 120 chars centered on the match, clamped to char boundaries, with
/// newlines flattened.
fn context_snippet(text: &str, start: usize, end: usize) -> String {
    const MAX: usize = 120;
    let token_len = end - start;
    let each_side = MAX.saturating_sub(token_len) / 2;

    let mut lo = start.saturating_sub(each_side);
    while lo > 0 && !text.is_char_boundary(lo) {
        lo -= 1;
    }
    let mut hi = (end + each_side).min(text.len());
    while hi < text.len() && !text.is_char_boundary(hi) {
        hi += 1;
    }
    let mut snippet: String = text[lo..hi]
        .chars()
        .map(|c| if c == '\n' || c == '\r' || c == '\t' { ' ' } else { c })
        .collect();
    while snippet.chars().count() > MAX {
        snippet.pop();
    }
    snippet
}

/// Same-registrable-domain script URLs referenced by the page, resolved
/// against `base_url`, capped at `config.script_cap`, in document order.
pub fn extract_script_urls(body: &[u8], base_url: &str, config: &ExtractorConfig) -> Vec<String> {
    if !config.follow_scripts {
        return Vec::new();
    }
    let window = &body[..body.len().min(config.window_bytes)];
    let text = String::from_utf8_lossy(window);
    let base = match Url::parse(base_url) {
        Ok(u) => u,
        Err(_) => return Vec::new(),
    };
    let base_domain = match crate::psl::registrable_domain(base_url) {
        Ok(d) => d,
        Err(_) => return Vec::new(),
    };

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for cap in script_src_pattern().captures_iter(&text) {
        if out.len() >= config.script_cap {
            log::debug!("script cap {} reached for {base_url}", config.script_cap);
            break;
        }
        let src = &cap[1];
        let resolved = match base.join(src) {
            Ok(u) => u,
            Err(_) => continue,
        };
        if resolved.scheme() != "http" && resolved.scheme() != "https" {
            continue;
        }
        match crate::psl::registrable_domain(resolved.as_str()) {
            Ok(d) if d == base_domain => {
                let s = resolved.to_string();
                if seen.insert(s.clone()) {
                    out.push(s);
                }
            }
            _ => {}
        }
    }
    out
}

/// Result of turning raw hits into observations.
#[derive(Debug, Clone, Default)]
pub struct ExtractOutcome {
    pub observations: Vec<Observation>,
    /// Hits dropped by normalization (placeholders, bad lengths, …).
    pub rejected: usize,
}

/// Normalizes hits attributed to `domain` and deduplicates them on
/// `(domain, identity, provenance class)`. Rejects are counted, not errors.
pub fn hits_to_observations(
    hits: &[RawIdHit],
    domain: &DomainKey,
    provenance: &Provenance,
    observed_at: DateTime<Utc>,
    blob_hash: Option<String>,
    policy: &IdPolicy,
) -> ExtractOutcome {
    let mut outcome = ExtractOutcome::default();
    let mut seen: std::collections::HashSet<TrackingId> = std::collections::HashSet::new();
    for hit in hits {
        match policy.normalize(&hit.raw_token) {
            Ok(id) => {
                if seen.insert(id.clone()) {
                    outcome.observations.push(Observation {
                        domain: domain.clone(),
                        id,
                        observed_at,
                        provenance: provenance.clone(),
                        source_url: hit.source_url.clone(),
                        blob_hash: blob_hash.clone(),
                    });
                }
            }
            Err(reason) => {
                log::debug!("rejected token {:?} from {}: {reason}", hit.raw_token, hit.source_url);
                outcome.rejected += 1;
            }
        }
    }
    outcome
}

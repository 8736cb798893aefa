//! Registrable-domain extraction against a vendored public-suffix snapshot.
//!
//! The snapshot is compiled into the binary and never fetched at runtime, so
//! a [`DomainKey`] is deterministic for a given build. Matching implements
//! the standard public-suffix algorithm: the prevailing rule is the matching
//! rule with the most labels, exceptions beat wildcards, and an unlisted TLD
//! falls back to the implicit `*` rule.

use std::collections::HashMap;
use std::net::IpAddr;
use std::sync::OnceLock;

use url::Url;

use crate::error::Error;
use crate::model::DomainKey;

const SNAPSHOT: &str = include_str!("psl_snapshot.dat");

/// Version tag of the vendored snapshot, recorded in store metadata.
pub const SNAPSHOT_VERSION: &str = "2026-08-11.curated-1";

#[derive(Debug, Default)]
struct RuleSet {
    /// Exact rules, keyed by the full rule labels joined with '.'.
    exact: HashMap<String, usize>,
    /// Wildcard rules: key is the part after "*.", value is label count
    /// including the wildcard label.
    wildcard: HashMap<String, usize>,
    /// Exception rules, keyed without the leading '!'.
    exception: HashMap<String, usize>,
}

fn rules() -> &'static RuleSet {
    static RULES: OnceLock<RuleSet> = OnceLock::new();
    RULES.get_or_init(|| {
        let mut set = RuleSet::default();
        for line in SNAPSHOT.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            if let Some(rest) = line.strip_prefix('!') {
                set.exception.insert(rest.to_string(), rest.split('.').count());
            } else if let Some(rest) = line.strip_prefix("*.") {
                set.wildcard.insert(rest.to_string(), rest.split('.').count() + 1);
            } else {
                set.exact.insert(line.to_string(), line.split('.').count());
            }
        }
        set
    })
}

/// Number of labels in the public suffix of `host`, per the snapshot.
fn suffix_label_count(labels: &[&str]) -> usize {
    let set = rules();
    let mut best = 1; // implicit "*" rule
    for start in 0..labels.len() {
        let candidate = labels[start..].join(".");
        if let Some(&n) = set.exception.get(&candidate) {
            // Exception: drop the leftmost label of the rule.
            return n - 1;
        }
        if let Some(&n) = set.exact.get(&candidate) {
            best = best.max(n);
        }
        // A wildcard "*.<base>" matches when the labels after `start`
        // are "<anything>.<base>".
        if start + 1 < labels.len() {
            let base = labels[start + 1..].join(".");
            if let Some(&n) = set.wildcard.get(&base) {
                best = best.max(n);
            }
        }
    }
    best
}

/// Extracts the lowercase registrable domain from a URL or bare host.
///
/// IP literals are returned verbatim as their own key. A host that is itself
/// a public suffix (or a single label) maps to itself, so arbitrary inputs
/// still produce a stable key.
pub fn registrable_domain(url_or_host: &str) -> Result<DomainKey, Error> {
    let input = url_or_host.trim();
    if input.is_empty() {
        return Err(Error::InvalidDomain { input: input.to_string(), reason: "empty input".into() });
    }

    let host = extract_host(input)?;

    if host.parse::<IpAddr>().is_ok() {
        return Ok(DomainKey::from_parts(host.clone(), host));
    }

    let trimmed = host.trim_matches('.');
    if trimmed.is_empty() {
        return Err(Error::InvalidDomain { input: input.to_string(), reason: "no host labels".into() });
    }
    let labels: Vec<&str> = trimmed.split('.').collect();
    if labels.iter().any(|l| l.is_empty()) {
        return Err(Error::InvalidDomain { input: input.to_string(), reason: "empty label".into() });
    }

    let suffix_len = suffix_label_count(&labels);
    let take = (suffix_len + 1).min(labels.len());
    let registrable = labels[labels.len() - take..].join(".");
    Ok(DomainKey::from_parts(registrable, trimmed.to_string()))
}

fn extract_host(input: &str) -> Result<String, Error> {
    let with_scheme = if input.contains("://") {
        input.to_string()
    } else {
        format!("http://{input}")
    };
    let url = Url::parse(&with_scheme).map_err(|e| Error::InvalidDomain {
        input: input.to_string(),
        reason: e.to_string(),
    })?;
    match url.host() {
        Some(url::Host::Domain(d)) => Ok(d.to_ascii_lowercase()),
        Some(url::Host::Ipv4(ip)) => Ok(ip.to_string()),
        Some(url::Host::Ipv6(ip)) => Ok(ip.to_string()),
        None => Err(Error::InvalidDomain { input: input.to_string(), reason: "no host".into() }),
    }
}

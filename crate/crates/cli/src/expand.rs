use std::collections::BTreeSet;

use anyhow::{Context as _, Result};
use chrono::Utc;
use linkhound_core::extract::{extract_ids, hits_to_observations};
use linkhound_core::fetch::Fetcher;
use linkhound_core::lookup::{filter_relics, reverse_lookup, RemovalReason};
use linkhound_core::model::{DomainKey, Observation, Provenance, ProvenanceClass, TrackingId};
use linkhound_core::Error;

use crate::context::Context;

const MAX_DEPTH: u8 = 2;

/// Expands a wave through reverse-id lookup. Depth 1 looks up the ids the
/// wave already carries; depth 2 additionally scans the domains those
/// lookups surfaced and looks up the new ids found there.
pub async fn run(ctx: &Context, wave: Option<String>, depth: Option<u8>, verify_live: bool) -> Result<bool> {
    let wave_name = ctx.wave_name(wave)?;
    let store = ctx.open_store()?;
    let mut wave = store.load_wave(&wave_name).map_err(Error::from)?;

    let provider = ctx.provider()?;
    let depth = depth.unwrap_or(ctx.cfg.lookup.depth).clamp(1, MAX_DEPTH);
    let verify_live = verify_live || ctx.cfg.relic.verify_live;
    let fetcher = if verify_live || depth > 1 {
        Some(Fetcher::new(ctx.cfg.fetch.clone())?)
    } else {
        None
    };

    let writer = store.observation_writer().map_err(Error::from)?;
    let mut seen_keys: BTreeSet<_> = wave.observations.iter().map(|o| o.dedup_key()).collect();
    let mut looked_up: BTreeSet<TrackingId> = BTreeSet::new();
    let mut frontier: BTreeSet<TrackingId> = wave
        .observations
        .iter()
        .filter(|o| o.provenance.class() != ProvenanceClass::ReverseLookup)
        .map(|o| o.id.clone())
        .collect();

    let mut partial = false;
    let mut quota_gaps: Vec<String> = Vec::new();
    let mut domains_added = 0usize;

    for round in 1..=depth {
        let ids: Vec<TrackingId> = frontier.iter().filter(|id| !looked_up.contains(*id)).cloned().collect();
        if ids.is_empty() {
            break;
        }
        log::info!("expansion round {round}: {} ids to look up", ids.len());
        let mut new_domains: BTreeSet<DomainKey> = BTreeSet::new();

        for id in ids {
            looked_up.insert(id.clone());
            let record = match reverse_lookup(&id, provider.as_ref(), &store, ctx.cfg.lookup.cache_ttl_days).await {
                Ok(record) => record,
                Err(Error::Provider { failure, .. }) if failure == linkhound_core::lookup::ProviderFailure::Quota => {
                    log::warn!("quota exceeded at {}; recording gap and continuing", id.canonical());
                    quota_gaps.push(id.canonical());
                    partial = true;
                    continue;
                }
                Err(Error::Provider { failure, provider }) if failure == linkhound_core::lookup::ProviderFailure::Auth => {
                    writer.finish().map_err(Error::from)?;
                    return Err(Error::Provider { failure, provider }).context("provider authentication is fatal");
                }
                Err(e) => {
                    log::warn!("lookup {} failed: {e}", id.canonical());
                    partial = true;
                    continue;
                }
            };

            // Domains already carrying this id are the query's own aliases.
            let self_domains: BTreeSet<DomainKey> = wave
                .observations
                .iter()
                .filter(|o| o.id == id)
                .map(|o| o.domain.clone())
                .collect();
            let filtered = filter_relics(&record, &ctx.cfg.relic, &self_domains);
            for removal in &filtered.removals {
                log::info!("{}: removed {} ({:?})", id.canonical(), removal.domain, removal.reason);
            }

            for entry in &filtered.record.domains {
                if verify_live {
                    let fetcher = fetcher.as_ref().expect("fetcher built for verify_live");
                    if let Err(failure) = fetcher.fetch_live(&entry.domain).await {
                        log::info!(
                            "{}: removed {} ({:?}: {failure})",
                            id.canonical(),
                            entry.domain,
                            RemovalReason::NotLive
                        );
                        continue;
                    }
                }
                let obs = Observation {
                    domain: entry.domain.clone(),
                    id: id.clone(),
                    observed_at: record.retrieved_at,
                    provenance: Provenance::ReverseLookup { provider: record.provider.clone() },
                    source_url: format!("{}:{}", record.provider, id.canonical()),
                    blob_hash: Some(record.raw_blob_hash.clone()),
                };
                if seen_keys.insert(obs.dedup_key()) {
                    writer.append(obs.clone());
                    wave.observations.push(obs);
                    domains_added += 1;
                }
                if !wave.seed_domains().contains(&entry.domain) {
                    new_domains.insert(entry.domain.clone());
                }
            }
        }

        // Between rounds: scan the surfaced domains live so their other ids
        // can feed the next lookup round.
        frontier = BTreeSet::new();
        if round < depth && !new_domains.is_empty() {
            let fetcher = fetcher.as_ref().expect("fetcher built for depth > 1");
            for domain in &new_domains {
                let result = match fetcher.fetch_live(domain).await {
                    Ok(r) => r,
                    Err(failure) => {
                        log::debug!("{domain}: live fetch during expansion failed: {failure}");
                        continue;
                    }
                };
                let blob_hash = store.put_blob(&result.body).map_err(Error::from)?;
                let hits = extract_ids(&result.body, &result.final_url, &ctx.cfg.extract);
                let outcome = hits_to_observations(
                    &hits,
                    domain,
                    &Provenance::Live,
                    Utc::now(),
                    Some(blob_hash),
                    &ctx.cfg.extract.id_policy,
                );
                for obs in outcome.observations {
                    frontier.insert(obs.id.clone());
                    if seen_keys.insert(obs.dedup_key()) {
                        writer.append(obs.clone());
                        wave.observations.push(obs);
                    }
                }
            }
        }
    }
    writer.finish().map_err(Error::from)?;

    wave.finished_at = Some(Utc::now());
    store.write_wave(&wave).map_err(Error::from)?;

    println!(
        "expand {wave_name}: {} ids looked up, {domains_added} lookup observations added",
        looked_up.len()
    );
    if !quota_gaps.is_empty() {
        println!("quota gaps (lookups not performed): {}", quota_gaps.join(", "));
    }
    Ok(partial)
}

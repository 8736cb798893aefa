use std::collections::BTreeSet;

use anyhow::{bail, Result};
use chrono::Utc;
use linkhound_core::archive::ArchiveClient;
use linkhound_core::extract::{extract_ids, extract_script_urls, hits_to_observations};
use linkhound_core::fetch::FetchFailure;
use linkhound_core::model::{DomainKey, Provenance, ProvenanceClass};
use linkhound_core::Error;

use crate::context::Context;

/// Inclusive CDX range prefixes: pad a short prefix to a full 14-digit
/// timestamp at the early or late end of what it denotes.
fn pad_cdx(ts: &str, late: bool) -> Result<String> {
    if ts.is_empty() || ts.len() > 14 || ts.len() < 4 || !ts.chars().all(|c| c.is_ascii_digit()) {
        bail!(Error::Config(format!("timestamp {ts:?} must be 4-14 digits (YYYY[MMDDhhmmss])")));
    }
    let suffix = if late { "1231235959" } else { "0101000000" };
    let needed = 14 - ts.len();
    Ok(format!("{ts}{}", &suffix[suffix.len() - needed..]))
}

/// Appends archive observations for a wave's active seeds (and, with
/// `--expand`, domains added by reverse lookup).
pub async fn run(ctx: &Context, wave: Option<String>, from: &str, to: &str, expand: bool) -> Result<bool> {
    if pad_cdx(from, false)? > pad_cdx(to, true)? {
        bail!(Error::Config(format!("--from {from} is after --to {to}")));
    }
    let wave_name = ctx.wave_name(wave)?;
    let store = ctx.open_store()?;
    let mut wave = store.load_wave(&wave_name).map_err(Error::from)?;

    let client = ArchiveClient::new(ctx.cfg.archive.clone(), &ctx.cfg.fetch.user_agent)?;
    let writer = store.observation_writer().map_err(Error::from)?;

    let mut targets: BTreeSet<DomainKey> = wave.active_seeds().map(|s| s.domain.clone()).collect();
    if expand {
        targets.extend(
            wave.observations
                .iter()
                .filter(|o| o.provenance.class() == ProvenanceClass::ReverseLookup)
                .map(|o| o.domain.clone()),
        );
    }

    let mut seen_keys: BTreeSet<_> = wave.observations.iter().map(|o| o.dedup_key()).collect();
    let mut partial = false;
    let mut snapshots_fetched = 0usize;
    let mut added = 0usize;

    for domain in &targets {
        let refs = match client.list_snapshots(domain, from, to, ctx.cfg.archive.sampling).await {
            Ok(refs) => refs,
            Err(e) => {
                log::warn!("{domain}: cdx listing failed: {e}");
                partial = true;
                continue;
            }
        };
        log::info!("{domain}: {} snapshots in range", refs.len());
        for snapshot in refs {
            let result = match client.fetch_snapshot(&snapshot).await {
                Ok(r) => r,
                Err(FetchFailure::HttpStatus(404)) => {
                    log::debug!("snapshot {} gone, skipping", snapshot.snapshot_ts);
                    continue;
                }
                Err(failure) => {
                    log::warn!("snapshot {} fetch failed: {failure}", snapshot.snapshot_ts);
                    partial = true;
                    continue;
                }
            };
            snapshots_fetched += 1;
            let observed_at = Utc::now();
            let provenance = Provenance::Archive { snapshot_ts: snapshot.snapshot_ts.clone() };
            let blob_hash = store.put_blob(&result.body).map_err(Error::from)?;
            let source_url = client.snapshot_url(&snapshot);

            let mut outcomes = Vec::new();
            let hits = extract_ids(&result.body, &source_url, &ctx.cfg.extract);
            outcomes.push(hits_to_observations(
                &hits,
                domain,
                &provenance,
                observed_at,
                Some(blob_hash),
                &ctx.cfg.extract.id_policy,
            ));

            // Same-domain scripts as archived at this capture's timestamp.
            for script in extract_script_urls(&result.body, &snapshot.original_url, &ctx.cfg.extract) {
                let archived_script = client.asset_url(&snapshot.snapshot_ts, &script);
                match client.fetch_archived_url(&archived_script).await {
                    Ok(s) => {
                        let script_hash = store.put_blob(&s.body).map_err(Error::from)?;
                        let hits = extract_ids(&s.body, &archived_script, &ctx.cfg.extract);
                        outcomes.push(hits_to_observations(
                            &hits,
                            domain,
                            &provenance,
                            observed_at,
                            Some(script_hash),
                            &ctx.cfg.extract.id_policy,
                        ));
                    }
                    Err(failure) => log::debug!("archived script {archived_script}: {failure}"),
                }
            }

            for outcome in outcomes {
                for obs in outcome.observations {
                    if seen_keys.insert(obs.dedup_key()) {
                        writer.append(obs.clone());
                        wave.observations.push(obs);
                        added += 1;
                    }
                }
            }
        }
    }
    writer.finish().map_err(Error::from)?;

    wave.finished_at = Some(Utc::now());
    store.write_wave(&wave).map_err(Error::from)?;
    println!(
        "history {wave_name}: {} domains walked, {snapshots_fetched} snapshots fetched, {added} archive observations added",
        targets.len()
    );
    Ok(partial)
}

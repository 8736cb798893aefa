use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use chrono::Utc;
use linkhound_core::extract::{extract_ids, extract_script_urls, hits_to_observations};
use linkhound_core::fetch::{classify_seed, read_seed_file, FetchFailure, Fetcher, SeedRow};
use linkhound_core::model::{Observation, Provenance, ScanWave, SeedEntry, SeedStatus};
use linkhound_core::store::Store;
use linkhound_core::Error;

use crate::context::Context;

struct SeedOutcome {
    status: SeedStatus,
    observations: Vec<Observation>,
    rejected: usize,
    fetch_failed_while_active: bool,
}

/// classify → live fetch → extract → observations, with pipeline accounting.
pub async fn run(ctx: &Context, seeds: Option<PathBuf>, wave: Option<String>, no_robots: bool) -> Result<bool> {
    let seed_path = seeds
        .or_else(|| ctx.cfg.run.seed_file.clone())
        .ok_or_else(|| Error::Config("no seed file given (--seeds or config run.seed_file)".into()))?;
    let wave_name = ctx.wave_name(wave)?;
    let rows = read_seed_file(&seed_path)?;
    if rows.is_empty() {
        bail!(Error::Config(format!("seed file {} contains no seeds", seed_path.display())));
    }

    let store = ctx.open_store()?;
    let existing = match store.load_wave(&wave_name) {
        Ok(w) => Some(w),
        Err(linkhound_core::error::StoreError::WaveNotFound(_)) => None,
        Err(e) => return Err(Error::from(e).into()),
    };

    let mut wave = ScanWave::new(&wave_name, Utc::now());
    if let Some(prev) = &existing {
        wave.started_at = prev.started_at;
        wave.observations = prev.observations.clone();
    }

    let mut partial = false;
    let mut total_rejected = 0usize;

    if ctx.cfg.run.offline {
        // Classification without network needs an override on every row.
        for row in &rows {
            let Some(status) = row.override_status else {
                bail!(Error::Config(format!(
                    "offline scan requires override_status for every seed; {} has none",
                    row.raw
                )));
            };
            wave.seeds.push(SeedEntry {
                domain: row.domain.clone(),
                status,
                category: row.category.clone(),
                wave: wave_name.clone(),
            });
        }
    } else {
        let mut fetch_cfg = ctx.cfg.fetch.clone();
        if no_robots {
            log::warn!("robots.txt checks disabled by --no-robots");
            fetch_cfg.respect_robots = false;
        }
        let fetcher = Arc::new(Fetcher::new(fetch_cfg)?);
        let writer = store.observation_writer().map_err(Error::from)?;

        let mut handles = Vec::with_capacity(rows.len());
        for row in rows.clone() {
            let fetcher = fetcher.clone();
            let store = store.clone();
            let ctx_extract = ctx.cfg.extract.clone();
            let ctx_classify = ctx.cfg.classify.clone();
            handles.push(tokio::spawn(async move {
                process_seed(&row, &fetcher, &store, &ctx_extract, &ctx_classify).await
            }));
        }

        // Consume in input order: deterministic downstream behavior for a
        // given set of responses.
        let existing_keys: BTreeSet<_> = wave.observations.iter().map(|o| o.dedup_key()).collect();
        let mut seen_keys = existing_keys;
        for (row, handle) in rows.iter().zip(handles) {
            let outcome = handle.await.context("seed task panicked")?;
            partial |= outcome.fetch_failed_while_active;
            total_rejected += outcome.rejected;
            wave.seeds.push(SeedEntry {
                domain: row.domain.clone(),
                status: outcome.status,
                category: row.category.clone(),
                wave: wave_name.clone(),
            });
            for obs in outcome.observations {
                if seen_keys.insert(obs.dedup_key()) {
                    writer.append(obs.clone());
                    wave.observations.push(obs);
                }
            }
        }
        writer.finish().map_err(Error::from)?;
    }

    wave.finished_at = Some(Utc::now());
    store.write_wave(&wave).map_err(Error::from)?;

    let acc = wave.accounting();
    println!("wave {wave_name}: {} seeds from {}", acc.total(), seed_path.display());
    println!("accounting: {}", acc.equation());
    println!(
        "  active {} | dead {} | non-target-language {} | platform-managed {}",
        acc.active, acc.dead, acc.non_target_language, acc.platform_managed
    );
    let live_domains: BTreeSet<_> = wave
        .observations
        .iter()
        .filter(|o| o.provenance == Provenance::Live)
        .map(|o| o.domain.clone())
        .collect();
    println!(
        "observations: {} total ({} domains with live ids, {} tokens rejected)",
        wave.observations.len(),
        live_domains.len(),
        total_rejected
    );
    println!("wave manifest: {}", store.root().join("waves").join(format!("{wave_name}.json")).display());
    Ok(partial)
}

async fn process_seed(
    row: &SeedRow,
    fetcher: &Fetcher,
    store: &Store,
    extract_cfg: &linkhound_core::extract::ExtractorConfig,
    classify_cfg: &linkhound_core::fetch::ClassifyConfig,
) -> SeedOutcome {
    // A non-active override makes the fetch pointless; skip it politely.
    if let Some(status) = row.override_status {
        if status != SeedStatus::Active {
            return SeedOutcome { status, observations: vec![], rejected: 0, fetch_failed_while_active: false };
        }
    }

    let fetched = fetcher.fetch_live(&row.domain).await;
    let status = classify_seed(&row.domain, &fetched, classify_cfg, row.override_status);
    if status != SeedStatus::Active {
        return SeedOutcome { status, observations: vec![], rejected: 0, fetch_failed_while_active: false };
    }
    let result = match fetched {
        Ok(r) => r,
        Err(failure) => {
            // Only reachable when an override forced ACTIVE.
            log::warn!("{}: fetch failed while active: {failure}", row.domain);
            return SeedOutcome { status, observations: vec![], rejected: 0, fetch_failed_while_active: true };
        }
    };

    let mut observations = Vec::new();
    let mut rejected = 0usize;
    let observed_at = Utc::now();

    let blob_hash = store.put_blob(&result.body).ok();
    let hits = extract_ids(&result.body, &result.final_url, extract_cfg);
    let outcome = hits_to_observations(
        &hits,
        &row.domain,
        &Provenance::Live,
        observed_at,
        blob_hash,
        &extract_cfg.id_policy,
    );
    observations.extend(outcome.observations);
    rejected += outcome.rejected;

    for script_url in extract_script_urls(&result.body, &result.final_url, extract_cfg) {
        match fetcher.fetch_url(&script_url).await {
            Ok(script) => {
                let script_hash = store.put_blob(&script.body).ok();
                let hits = extract_ids(&script.body, &script_url, extract_cfg);
                let outcome = hits_to_observations(
                    &hits,
                    &row.domain,
                    &Provenance::Live,
                    observed_at,
                    script_hash,
                    &extract_cfg.id_policy,
                );
                observations.extend(outcome.observations);
                rejected += outcome.rejected;
            }
            Err(FetchFailure::RobotsDisallowed) => {
                log::debug!("script {script_url} disallowed by robots.txt");
            }
            Err(failure) => {
                log::debug!("script {script_url} fetch failed: {failure}");
            }
        }
    }

    // Page + script passes can re-find the same identity.
    let mut seen = BTreeSet::new();
    observations.retain(|o| seen.insert(o.dedup_key()));

    SeedOutcome { status: SeedStatus::Active, observations, rejected, fetch_failed_while_active: false }
}

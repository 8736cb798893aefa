use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use linkhound_core::export::{
    write_categories_csv, write_changes_csv, write_coverage_csv, write_graph, write_networks_csv, write_stats_csv,
    ExportOptions, GraphFormat,
};
use linkhound_core::graph::{
    build_graph, category_frequency, coverage_stats, diff_waves, network_stats, project_networks, CoverageStats,
    Network,
};
use linkhound_core::model::{IdKind, ProvenanceClass, ScanWave};
use linkhound_core::store::Store;
use linkhound_core::Error;

use crate::context::Context;

fn load_finished_wave(store: &Store, name: &str) -> Result<ScanWave> {
    let wave = store.load_wave(name).map_err(Error::from)?;
    if !wave.is_finished() {
        bail!(Error::Config(format!("wave {name:?} is not finished")));
    }
    Ok(wave)
}

fn write_output(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Build the graph, project networks, write machine-readable outputs.
pub fn link(ctx: &Context, wave: Option<String>, out: Option<PathBuf>) -> Result<bool> {
    let wave_name = ctx.wave_name(wave)?;
    let store = ctx.open_store()?;
    let wave = load_finished_wave(&store, &wave_name)?;
    let out_dir = ctx.output_dir(out)?;

    let graph = build_graph(&wave);
    let networks = project_networks(&graph);
    let opts = ExportOptions { timestamp: ctx.cfg.report.timestamp.clone() };

    println!(
        "wave {wave_name}: {} domains, {} ids, {} edges, {} networks",
        graph.domains.len(),
        graph.ids.len(),
        graph.edges.len(),
        networks.len()
    );
    for net in &networks {
        println!(
            "  network {} (dimension {}): {}",
            net.network_id,
            net.dimension,
            net.members.iter().map(|d| d.registrable()).collect::<Vec<_>>().join(", ")
        );
    }

    write_output(&out_dir.join(format!("{wave_name}.networks.csv")), &write_networks_csv(&networks))?;
    write_output(
        &out_dir.join(format!("{wave_name}.graph.json")),
        &write_graph(&graph, &networks, GraphFormat::Json, &opts),
    )?;
    Ok(false)
}

fn coverage_note(coverage: &CoverageStats, reference: Option<f64>) -> Option<String> {
    let reference = reference?;
    let reference_hundredths = (reference * 100.0).round() as u64;
    if reference_hundredths == coverage.percent_hundredths {
        return None;
    }
    let delta = coverage.percent_hundredths.abs_diff(reference_hundredths);
    Some(format!(
        "computed {}% differs from the published reference {:.2}% (delta 0.{:02}); the computed value is reported",
        coverage.percent_string(),
        reference,
        delta
    ))
}

/// Network statistics + coverage + category frequencies.
pub fn stats(ctx: &Context, wave: Option<String>, out: Option<PathBuf>, reference_coverage: Option<f64>) -> Result<bool> {
    let wave_name = ctx.wave_name(wave)?;
    let store = ctx.open_store()?;
    let wave = load_finished_wave(&store, &wave_name)?;
    let out_dir = ctx.output_dir(out)?;

    let graph = build_graph(&wave);
    let networks = project_networks(&graph);
    let stats = network_stats(&networks, ctx.cfg.report.sd_convention);
    let coverage = coverage_stats(&wave, ProvenanceClass::Live);
    let categories = category_frequency(&wave);
    let reference = reference_coverage.or(ctx.cfg.report.reference_coverage);
    let note = coverage_note(&coverage, reference);

    println!("wave {wave_name} statistics");
    println!(
        "networks: n={}  dimensions {}-{}  mean {:.3}  sd {:.3} ({}{})",
        stats.n,
        stats.min,
        stats.max,
        stats.mean,
        stats.sd,
        format!("{:?}", stats.sd_convention).to_lowercase(),
        if stats.sd_degenerate { ", degenerate: single network" } else { "" }
    );
    println!(
        "coverage: {}/{} active seeds carry a tracking id = {}%",
        coverage.seeds_with_id,
        coverage.active_seeds,
        coverage.percent_string()
    );
    if let Some(note) = &note {
        println!("  note: {note}");
    }
    println!("categories over active seeds:");
    for (label, count) in &categories {
        println!("  {label}: {count}");
    }

    let doc = serde_json::json!({
        "wave": wave_name,
        "networks": stats,
        "coverage": {
            "active_seeds": coverage.active_seeds,
            "seeds_with_id": coverage.seeds_with_id,
            "percent": coverage.percent_string(),
        },
        "coverage_note": note,
        "categories": categories,
    });
    write_output(&out_dir.join(format!("{wave_name}.stats.json")), &format!("{:#}\n", doc))?;
    write_output(&out_dir.join(format!("{wave_name}.stats.csv")), &write_stats_csv(&stats))?;
    write_output(&out_dir.join(format!("{wave_name}.networks.csv")), &write_networks_csv(&networks))?;
    write_output(
        &out_dir.join(format!("{wave_name}.coverage.csv")),
        &write_coverage_csv(&coverage, note.as_deref()),
    )?;
    write_output(&out_dir.join(format!("{wave_name}.categories.csv")), &write_categories_csv(&categories))?;
    Ok(false)
}

/// Wave-to-wave change report.
pub fn diff(ctx: &Context, wave_a: &str, wave_b: &str, out: Option<PathBuf>) -> Result<bool> {
    let store = ctx.open_store()?;
    let first = load_finished_wave(&store, wave_a)?;
    let second = load_finished_wave(&store, wave_b)?;
    let out_dir = ctx.output_dir(out)?;

    let report = diff_waves(&first, &second);
    println!("diff {wave_a} → {wave_b}");
    if report.is_empty() {
        println!("  no changes");
    }
    println!(
        "id deletions: {} adsense, {} analytics",
        report.deletions_of_kind(IdKind::AdsensePub),
        report.deletions_of_kind(IdKind::GaUa)
    );
    println!("domains adding a new id type: {}", report.kind_additions());
    println!("networks dissolved: {}", report.networks_dissolved.len());
    for name in &report.networks_dissolved {
        println!("  dissolved: {name}");
    }
    println!("networks new: {}", report.networks_new.len());
    for net in &report.networks_new {
        println!(
            "  new: {} via {}",
            net.network_id,
            net.linking_ids.iter().map(|i| i.canonical()).collect::<Vec<_>>().join(", ")
        );
    }

    let base = format!("{wave_a}-vs-{wave_b}");
    let mut json = serde_json::to_string_pretty(&report).context("serializing change report")?;
    json.push('\n');
    write_output(&out_dir.join(format!("{base}.changes.json")), &json)?;
    write_output(&out_dir.join(format!("{base}.changes.csv")), &write_changes_csv(&report))?;
    Ok(false)
}

/// Graph file export in a standard format.
pub fn export(
    ctx: &Context,
    wave: Option<String>,
    format: &str,
    out: Option<PathBuf>,
    timestamp: Option<String>,
) -> Result<bool> {
    let Some(format) = GraphFormat::parse(format) else {
        bail!(Error::Config(format!(
            "unknown format {format:?}: expected gexf, graphml, dot, json or csv-edges"
        )));
    };
    let wave_name = ctx.wave_name(wave)?;
    let store = ctx.open_store()?;
    let wave = load_finished_wave(&store, &wave_name)?;

    let graph = build_graph(&wave);
    let networks: Vec<Network> = project_networks(&graph);
    let opts = ExportOptions { timestamp: timestamp.or_else(|| ctx.cfg.report.timestamp.clone()) };
    let content = write_graph(&graph, &networks, format, &opts);

    let path = match out {
        Some(path) => path,
        None => ctx.output_dir(None)?.join(format!("{wave_name}.{}", format.extension())),
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    write_output(&path, &content)?;
    Ok(false)
}

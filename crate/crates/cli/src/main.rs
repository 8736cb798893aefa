mod context;
mod expand;
mod history;
mod reports;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use linkhound_core::Error;

use crate::context::Context;

/// Uncovers networks of websites that share analytics/ad tracking
/// identifiers, from live pages, web-archive history and reverse-id lookups.
#[derive(Parser, Debug)]
#[command(name = "linkhound", version, about)]
struct Cli {
    /// Run configuration file (TOML). Defaults apply when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Store directory (overrides the config).
    #[arg(long, global = true)]
    store: Option<PathBuf>,

    /// Refuse all network access; reporting works from the store alone.
    #[arg(long, global = true)]
    offline: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a seed list and collect live tracking ids into a wave.
    Scan {
        /// Seed list CSV with header `domain,category,override_status`.
        #[arg(long)]
        seeds: Option<PathBuf>,
        /// Wave name.
        #[arg(long)]
        wave: Option<String>,
        /// Skip robots.txt (logged).
        #[arg(long)]
        no_robots: bool,
    },
    /// Append web-archive observations for a wave's active seeds.
    History {
        #[arg(long)]
        wave: Option<String>,
        /// Range start, YYYYMMDD (or any CDX timestamp prefix).
        #[arg(long)]
        from: String,
        /// Range end, YYYYMMDD.
        #[arg(long)]
        to: String,
        /// Also walk domains added by reverse lookup.
        #[arg(long)]
        expand: bool,
    },
    /// Expand a wave through reverse-id lookup with relic filtering.
    Expand {
        #[arg(long)]
        wave: Option<String>,
        /// Expansion rounds (1 = seed ids only; hard ceiling 2).
        #[arg(long)]
        depth: Option<u8>,
        /// Probe looked-up domains and drop unreachable ones.
        #[arg(long)]
        verify_live: bool,
    },
    /// Build the attribution graph and report its networks.
    Link {
        #[arg(long)]
        wave: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Network statistics, coverage and category frequencies for a wave.
    Stats {
        #[arg(long)]
        wave: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Published figure to compare coverage against; differences are
        /// reported as an explicit deviation note.
        #[arg(long)]
        reference_coverage: Option<f64>,
    },
    /// Compare two finished waves and report id and network changes.
    Diff {
        #[arg(long)]
        wave_a: String,
        #[arg(long)]
        wave_b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the attribution graph in a standard graph format.
    Export {
        #[arg(long)]
        wave: Option<String>,
        /// gexf | graphml | dot | json | csv-edges
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Pinned export timestamp for byte-reproducible files.
        #[arg(long)]
        timestamp: Option<String>,
    },
}

/// Exit codes: 0 success, 1 partial failures, 2 usage/config errors.
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_)) | Some(Error::InvalidDomain { .. }) => 2,
        Some(Error::Store(linkhound_core::error::StoreError::WaveNotFound(_))) => 2,
        _ => 1,
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();

    let ctx = match Context::prepare(cli.config.as_deref(), cli.store, cli.offline) {
        Ok(ctx) => ctx,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(2);
        }
    };

    let outcome = match cli.command {
        Command::Scan { seeds, wave, no_robots } => scan::run(&ctx, seeds, wave, no_robots).await,
        Command::History { wave, from, to, expand } => history::run(&ctx, wave, &from, &to, expand).await,
        Command::Expand { wave, depth, verify_live } => expand::run(&ctx, wave, depth, verify_live).await,
        Command::Link { wave, out } => reports::link(&ctx, wave, out),
        Command::Stats { wave, out, reference_coverage } => reports::stats(&ctx, wave, out, reference_coverage),
        Command::Diff { wave_a, wave_b, out } => reports::diff(&ctx, &wave_a, &wave_b, out),
        Command::Export { wave, format, out, timestamp } => reports::export(&ctx, wave, &format, out, timestamp),
    };

    match outcome {
        Ok(partial) if partial => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

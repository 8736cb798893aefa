//! Batch attribution engine for uncovering networks of websites that share
//! analytics/ad tracking identifiers.
//!
//! The pipeline: classify a seed list (availability, platform, language),
//! collect tracking ids from live pages and from web-archive snapshots,
//! expand candidates through reverse-id lookup with relic filtering, then
//! link domains that share normalized identifiers into networks with
//! descriptive statistics and wave-to-wave diffs. Everything collected lands
//! in a content-addressed store so analysis reruns offline, byte-identically.

pub mod archive;
pub mod config;
pub mod error;
pub mod export;
pub mod extract;
pub mod fetch;
pub mod graph;
pub mod lang;
mod lang_samples;
pub mod lookup;
pub mod model;
pub mod psl;
pub mod robots;
pub mod store;
pub mod testserver;

pub use error::{Error, Result};
pub use model::{
    ArchiveTimestamp, DomainKey, IdKind, IdPolicy, Observation, Provenance, ProvenanceClass, RejectReason, ScanWave,
    SeedEntry, SeedStatus, TrackingId,
};
pub use psl::registrable_domain;

/// Tool version string, recorded in store metadata and exports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Run configuration: one TOML file covering every stage, fully
//! serializable, with a stable hash over the behavior-affecting parts
//! recorded in store metadata.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::archive::ArchiveConfig;
use crate::error::Error;
use crate::extract::ExtractorConfig;
use crate::fetch::{ClassifyConfig, FetchConfig};
use crate::graph::SdConvention;
use crate::lookup::RelicPolicy;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct RunConfig {
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub extract: ExtractorConfig,
    #[serde(default)]
    pub fetch: FetchConfig,
    #[serde(default)]
    pub classify: ClassifyConfig,
    #[serde(default)]
    pub archive: ArchiveConfig,
    #[serde(default)]
    pub lookup: LookupSection,
    #[serde(default)]
    pub relic: RelicPolicy,
    #[serde(default)]
    pub report: ReportSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSection {
    /// Seed list CSV (`domain,category,override_status`).
    pub seed_file: Option<PathBuf>,
    /// Wave name for collection commands.
    pub wave: Option<String>,
    #[serde(default = "d_store_dir")]
    pub store_dir: PathBuf,
    #[serde(default = "d_output_dir")]
    pub output_dir: PathBuf,
    /// Refuse all network access; reporting works from the store alone.
    #[serde(default)]
    pub offline: bool,
}

fn d_store_dir() -> PathBuf {
    PathBuf::from("store")
}

fn d_output_dir() -> PathBuf {
    PathBuf::from("reports")
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed_file: None,
            wave: None,
            store_dir: d_store_dir(),
            output_dir: d_output_dir(),
            offline: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LookupSection {
    /// `spyonweb` (HTTP, token from the environment) or `fixture`
    /// (directory of canned responses).
    #[serde(default = "d_provider")]
    pub provider: String,
    #[serde(default = "d_lookup_endpoint")]
    pub endpoint: String,
    /// Response directory for the fixture provider.
    pub fixture_dir: Option<PathBuf>,
    #[serde(default = "d_ttl")]
    pub cache_ttl_days: i64,
    #[serde(default = "d_interval")]
    pub min_interval_ms: u64,
    /// Expansion rounds: 1 = seed ids only, 2 = also ids found on looked-up
    /// domains. Hard ceiling of 2.
    #[serde(default = "d_depth")]
    pub depth: u8,
}

fn d_provider() -> String {
    "spyonweb".to_string()
}
fn d_lookup_endpoint() -> String {
    "https://api.spyonweb.com".to_string()
}
fn d_ttl() -> i64 {
    crate::lookup::DEFAULT_LOOKUP_TTL_DAYS
}
fn d_interval() -> u64 {
    1000
}
fn d_depth() -> u8 {
    1
}

impl Default for LookupSection {
    fn default() -> Self {
        toml::from_str("").expect("defaults deserialize")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportSection {
    #[serde(default = "d_sd")]
    pub sd_convention: SdConvention,
    /// Externally published coverage figure to compare against; when the
    /// computed value differs, reports carry an explicit deviation note
    /// instead of silently matching.
    pub reference_coverage: Option<f64>,
    /// Pinned export timestamp for reproducible files.
    pub timestamp: Option<String>,
}

fn d_sd() -> SdConvention {
    SdConvention::Sample
}

impl Default for ReportSection {
    fn default() -> Self {
        Self { sd_convention: d_sd(), reference_coverage: None, timestamp: None }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("config {}: {e}", path.display())))
    }

    /// Hash over the behavior-affecting configuration: everything except
    /// input/output paths, wave names and the offline switch. Recorded in
    /// store metadata; changes iff behavior-affecting config changes.
    pub fn behavior_hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("run");
            if let Some(fetch) = map.get_mut("fetch").and_then(|v| v.as_object_mut()) {
                fetch.remove("offline");
            }
            if let Some(archive) = map.get_mut("archive").and_then(|v| v.as_object_mut()) {
                archive.remove("offline");
            }
        }
        // serde_json maps are sorted by key, so this string is canonical.
        crate::store::content_hash(value.to_string().as_bytes())
    }
}

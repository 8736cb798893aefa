//! Content-addressed, append-only persistence: fetched bodies as hash-named
//! blobs, observations as a JSONL log, waves as JSON manifests, raw lookup
//! responses verbatim. Plain files throughout so a store can be archived,
//! diffed and inspected with standard tools.
//!
//! On-disk layout under the store root:
//!
//! ```text
//! blobs/<sha256-hex>            page/script/response bodies
//! observations.jsonl            append-only observation log
//! waves/<name>.json             wave manifests
//! lookups/<provider>/<id>.raw   provider responses, verbatim
//! lookups/<provider>/<id>.meta.json
//! meta.json                     tool version, config hash, suffix snapshot
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::thread::JoinHandle;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::StoreError;
use crate::model::{
    ArchiveTimestamp, DomainKey, IdKind, Observation, Provenance, ScanWave, SeedEntry, SeedStatus, TrackingId,
};

/// SHA-256 of `bytes`, lowercase hex. The store's content-addressing scheme.
pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Store metadata, recorded for reproducibility.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StoreMeta {
    pub tool_version: String,
    pub config_hash: String,
    pub psl_snapshot_version: String,
}

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    /// Opens (creating if needed) a store rooted at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let root = root.into();
        fs::create_dir_all(root.join("blobs"))?;
        fs::create_dir_all(root.join("waves"))?;
        fs::create_dir_all(root.join("lookups"))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn blob_path(&self, hash: &str) -> PathBuf {
        self.root.join("blobs").join(hash)
    }

    fn observations_path(&self) -> PathBuf {
        self.root.join("observations.jsonl")
    }

    fn wave_path(&self, name: &str) -> Result<PathBuf, StoreError> {
        validate_wave_name(name)?;
        Ok(self.root.join("waves").join(format!("{name}.json")))
    }

    /// Stores bytes content-addressed. Idempotent: same bytes, same hash,
    /// single copy on disk.
    pub fn put_blob(&self, bytes: &[u8]) -> Result<String, StoreError> {
        let hash = content_hash(bytes);
        let path = self.blob_path(&hash);
        if path.exists() {
            return Ok(hash);
        }
        let tmp = self.root.join("blobs").join(format!(
            ".tmp.{hash}.{}.{}",
            std::process::id(),
            Utc::now().timestamp_nanos_opt().unwrap_or_default()
        ));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &path)?;
        Ok(hash)
    }

    pub fn get_blob(&self, hash: &str) -> Result<Vec<u8>, StoreError> {
        let path = self.blob_path(hash);
        if !path.exists() {
            return Err(StoreError::BlobNotFound(hash.to_string()));
        }
        let bytes = fs::read(path)?;
        let actual = content_hash(&bytes);
        if actual != hash {
            return Err(StoreError::BlobCorrupt { hash: hash.to_string(), actual });
        }
        Ok(bytes)
    }

    pub fn has_blob(&self, hash: &str) -> bool {
        self.blob_path(hash).exists()
    }

    /// Appends one observation to the log. The line is written with a single
    /// write call in append mode, so concurrent appenders cannot tear it.
    pub fn append_observation(&self, obs: &Observation) -> Result<(), StoreError> {
        let mut line = serde_json::to_string(&ObservationRecord::from(obs))?;
        line.push('\n');
        let mut file = fs::OpenOptions::new().create(true).append(true).open(self.observations_path())?;
        file.write_all(line.as_bytes())?;
        Ok(())
    }

    /// Spawns the single-writer task for the observation log. Producers send
    /// observations through the returned handle from any thread; the writer
    /// serializes them to disk in arrival order.
    pub fn observation_writer(&self) -> Result<ObservationWriter, StoreError> {
        let path = self.observations_path();
        let file = fs::OpenOptions::new().create(true).append(true).open(&path)?;
        let (tx, rx) = mpsc::channel::<Observation>();
        let join = std::thread::spawn(move || -> Result<usize, StoreError> {
            let mut out = std::io::BufWriter::new(file);
            let mut written = 0usize;
            for obs in rx {
                let mut line = serde_json::to_string(&ObservationRecord::from(&obs))?;
                line.push('\n');
                out.write_all(line.as_bytes())?;
                out.flush()?;
                written += 1;
            }
            Ok(written)
        });
        Ok(ObservationWriter { tx: Some(tx), join: Some(join) })
    }

    /// Loads the full observation log. With `skip_corrupt`, unparsable lines
    /// are collected instead of failing the load.
    pub fn load_observations(&self, skip_corrupt: bool) -> Result<(Vec<Observation>, Vec<usize>), StoreError> {
        let path = self.observations_path();
        if !path.exists() {
            return Ok((Vec::new(), Vec::new()));
        }
        let reader = BufReader::new(fs::File::open(&path)?);
        let mut out = Vec::new();
        let mut corrupt = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<ObservationRecord>(&line).map_err(|e| e.to_string()).and_then(|r| r.try_into_observation()) {
                Ok(obs) => out.push(obs),
                Err(reason) => {
                    if skip_corrupt {
                        log::warn!("skipping corrupt observation at line {line_no}: {reason}");
                        corrupt.push(line_no);
                    } else {
                        return Err(StoreError::CorruptLine {
                            path: path.display().to_string(),
                            line: line_no,
                            reason,
                        });
                    }
                }
            }
        }
        Ok((out, corrupt))
    }

    /// Writes a wave manifest atomically, in deterministic order. A finished
    /// wave may only reference blobs that exist in this store.
    pub fn write_wave(&self, wave: &ScanWave) -> Result<(), StoreError> {
        if wave.is_finished() {
            for obs in &wave.observations {
                if let Some(hash) = &obs.blob_hash {
                    if !self.has_blob(hash) {
                        return Err(StoreError::DanglingBlob { wave: wave.name.clone(), hash: hash.clone() });
                    }
                }
            }
        }
        let path = self.wave_path(&wave.name)?;
        let manifest = WaveManifest::from(wave);
        let mut json = serde_json::to_string_pretty(&manifest)?;
        json.push('\n');
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, json)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn load_wave(&self, name: &str) -> Result<ScanWave, StoreError> {
        let path = self.wave_path(name)?;
        if !path.exists() {
            return Err(StoreError::WaveNotFound(name.to_string()));
        }
        let manifest: WaveManifest = serde_json::from_str(&fs::read_to_string(&path)?)?;
        manifest.try_into_wave()
    }

    pub fn list_waves(&self) -> Result<Vec<String>, StoreError> {
        let mut names = Vec::new();
        for entry in fs::read_dir(self.root.join("waves"))? {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().to_string();
            if let Some(stem) = name.strip_suffix(".json") {
                names.push(stem.to_string());
            }
        }
        names.sort();
        Ok(names)
    }

    /// Persists a provider response verbatim, with retrieval time alongside.
    pub fn put_lookup_raw(
        &self,
        provider: &str,
        id: &TrackingId,
        payload: &[u8],
        retrieved_at: DateTime<Utc>,
    ) -> Result<String, StoreError> {
        let dir = self.root.join("lookups").join(sanitize_component(provider));
        fs::create_dir_all(&dir)?;
        let base = sanitize_component(&id.canonical());
        fs::write(dir.join(format!("{base}.raw")), payload)?;
        let meta = LookupMeta { retrieved_at, content_hash: content_hash(payload) };
        let mut json = serde_json::to_string_pretty(&meta)?;
        json.push('\n');
        fs::write(dir.join(format!("{base}.meta.json")), json)?;
        Ok(meta.content_hash)
    }

    /// Returns a cached provider response and when it was retrieved.
    pub fn get_lookup_raw(&self, provider: &str, id: &TrackingId) -> Option<(Vec<u8>, DateTime<Utc>)> {
        let dir = self.root.join("lookups").join(sanitize_component(provider));
        let base = sanitize_component(&id.canonical());
        let payload = fs::read(dir.join(format!("{base}.raw"))).ok()?;
        let meta: LookupMeta = serde_json::from_str(&fs::read_to_string(dir.join(format!("{base}.meta.json"))).ok()?).ok()?;
        Some((payload, meta.retrieved_at))
    }

    pub fn write_meta(&self, meta: &StoreMeta) -> Result<(), StoreError> {
        let mut json = serde_json::to_string_pretty(meta)?;
        json.push('\n');
        let path = self.root.join("meta.json");
        let tmp = self.root.join("meta.json.tmp");
        fs::write(&tmp, json)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn read_meta(&self) -> Result<Option<StoreMeta>, StoreError> {
        let path = self.root.join("meta.json");
        if !path.exists() {
            return Ok(None);
        }
        Ok(Some(serde_json::from_str(&fs::read_to_string(path)?)?))
    }
}

/// Handle to the observation-log writer task. Producers clone the sender;
/// `finish` drains and joins the writer.
pub struct ObservationWriter {
    tx: Option<mpsc::Sender<Observation>>,
    join: Option<JoinHandle<Result<usize, StoreError>>>,
}

impl ObservationWriter {
    pub fn sender(&self) -> mpsc::Sender<Observation> {
        self.tx.as_ref().expect("writer still open").clone()
    }

    pub fn append(&self, obs: Observation) {
        let _ = self.tx.as_ref().expect("writer still open").send(obs);
    }

    /// Closes the channel and waits for everything to hit disk. Returns the
    /// number of lines written.
    pub fn finish(mut self) -> Result<usize, StoreError> {
        drop(self.tx.take());
        match self.join.take().expect("not yet joined").join() {
            Ok(result) => result,
            Err(_) => Err(StoreError::Io(std::io::Error::other("observation writer panicked"))),
        }
    }
}

impl Drop for ObservationWriter {
    fn drop(&mut self) {
        drop(self.tx.take());
        if let Some(join) = self.join.take() {
            let _ = join.join();
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct LookupMeta {
    retrieved_at: DateTime<Utc>,
    content_hash: String,
}

fn validate_wave_name(name: &str) -> Result<(), StoreError> {
    let ok = !name.is_empty()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !name.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(StoreError::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            format!("invalid wave name {name:?}: use letters, digits, '-', '_', '.'"),
        )))
    }
}

fn sanitize_component(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') { c } else { '_' }).collect()
}

/// Stable JSON shape of one observation-log line.
#[derive(Debug, Serialize, Deserialize)]
struct ObservationRecord {
    domain: String,
    id_kind: IdKind,
    id_account: String,
    observed_at: DateTime<Utc>,
    /// `live`, `archive`, or `reverse_lookup:<provider>`.
    provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snapshot_ts: Option<String>,
    source_url: String,
    blob_hash: Option<String>,
}

impl From<&Observation> for ObservationRecord {
    fn from(obs: &Observation) -> Self {
        let (provenance, snapshot_ts) = match &obs.provenance {
            Provenance::Live => ("live".to_string(), None),
            Provenance::Archive { snapshot_ts } => ("archive".to_string(), Some(snapshot_ts.as_str().to_string())),
            Provenance::ReverseLookup { provider } => (format!("reverse_lookup:{provider}"), None),
        };
        Self {
            domain: obs.domain.registrable().to_string(),
            id_kind: obs.id.kind(),
            id_account: obs.id.account().to_string(),
            observed_at: obs.observed_at,
            provenance,
            snapshot_ts,
            source_url: obs.source_url.clone(),
            blob_hash: obs.blob_hash.clone(),
        }
    }
}

impl ObservationRecord {
    fn try_into_observation(self) -> Result<Observation, String> {
        let provenance = if self.provenance == "live" {
            Provenance::Live
        } else if self.provenance == "archive" {
            let ts = self.snapshot_ts.as_deref().ok_or("archive record missing snapshot_ts")?;
            Provenance::Archive { snapshot_ts: ArchiveTimestamp::parse(ts)? }
        } else if let Some(provider) = self.provenance.strip_prefix("reverse_lookup:") {
            Provenance::ReverseLookup { provider: provider.to_string() }
        } else {
            return Err(format!("unknown provenance {:?}", self.provenance));
        };
        Ok(Observation {
            domain: DomainKey::from_parts(self.domain.clone(), self.domain),
            id: TrackingId::new(self.id_kind, self.id_account, None),
            observed_at: self.observed_at,
            provenance,
            source_url: self.source_url,
            blob_hash: self.blob_hash,
        })
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestSeed {
    domain: String,
    status: SeedStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct WaveManifest {
    name: String,
    started_at: DateTime<Utc>,
    finished_at: Option<DateTime<Utc>>,
    seeds: Vec<ManifestSeed>,
    observations: Vec<ObservationRecord>,
}

impl From<&ScanWave> for WaveManifest {
    fn from(wave: &ScanWave) -> Self {
        let mut seeds: Vec<ManifestSeed> = wave
            .seeds
            .iter()
            .map(|s| ManifestSeed {
                domain: s.domain.registrable().to_string(),
                status: s.status,
                category: s.category.clone(),
            })
            .collect();
        seeds.sort_by(|a, b| a.domain.cmp(&b.domain));

        let mut observations: Vec<&Observation> = wave.observations.iter().collect();
        observations.sort_by(|a, b| {
            a.dedup_key()
                .cmp(&b.dedup_key())
                .then_with(|| a.provenance.cmp(&b.provenance))
                .then_with(|| a.observed_at.cmp(&b.observed_at))
                .then_with(|| a.source_url.cmp(&b.source_url))
        });
        Self {
            name: wave.name.clone(),
            started_at: wave.started_at,
            finished_at: wave.finished_at,
            seeds,
            observations: observations.into_iter().map(ObservationRecord::from).collect(),
        }
    }
}

impl WaveManifest {
    fn try_into_wave(self) -> Result<ScanWave, StoreError> {
        let mut wave = ScanWave::new(self.name.clone(), self.started_at);
        wave.finished_at = self.finished_at;
        wave.seeds = self
            .seeds
            .into_iter()
            .map(|s| SeedEntry {
                domain: DomainKey::from_parts(s.domain.clone(), s.domain),
                status: s.status,
                category: s.category,
                wave: self.name.clone(),
            })
            .collect();
        wave.observations = self
            .observations
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.try_into_observation().map_err(|reason| StoreError::CorruptLine {
                    path: format!("waves/{}.json#observations", self.name),
                    line: i + 1,
                    reason,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(wave)
    }
}

/// Per-domain view used by reporting; here so store consumers can avoid
/// re-deriving it.
pub fn observations_by_domain(observations: &[Observation]) -> BTreeMap<DomainKey, Vec<&Observation>> {
    let mut map: BTreeMap<DomainKey, Vec<&Observation>> = BTreeMap::new();
    for obs in observations {
        map.entry(obs.domain.clone()).or_default().push(obs);
    }
    map
}

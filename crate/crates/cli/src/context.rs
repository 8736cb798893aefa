use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use linkhound_core::config::RunConfig;
use linkhound_core::lookup::{FixtureProvider, LookupProvider, SpyOnWebProvider};
use linkhound_core::store::{Store, StoreMeta};

/// Loaded configuration plus the opened store; shared by every command.
pub struct Context {
    pub cfg: RunConfig,
}

impl Context {
    pub fn prepare(config_path: Option<&Path>, store_override: Option<PathBuf>, offline: bool) -> Result<Self> {
        let mut cfg = match config_path {
            Some(path) => RunConfig::load(path).context("loading configuration")?,
            None => RunConfig::default(),
        };
        if let Some(dir) = store_override {
            cfg.run.store_dir = dir;
        }
        if offline {
            cfg.run.offline = true;
        }
        cfg.fetch.offline = cfg.run.offline;
        cfg.archive.offline = cfg.run.offline;
        Ok(Self { cfg })
    }

    /// Opens the store and records run metadata.
    pub fn open_store(&self) -> Result<Store> {
        let store = Store::open(&self.cfg.run.store_dir)
            .with_context(|| format!("opening store at {}", self.cfg.run.store_dir.display()))?;
        store.write_meta(&StoreMeta {
            tool_version: linkhound_core::VERSION.to_string(),
            config_hash: self.cfg.behavior_hash(),
            psl_snapshot_version: linkhound_core::psl::SNAPSHOT_VERSION.to_string(),
        })?;
        Ok(store)
    }

    pub fn wave_name(&self, flag: Option<String>) -> Result<String> {
        match flag.or_else(|| self.cfg.run.wave.clone()) {
            Some(name) => Ok(name),
            None => bail!(linkhound_core::Error::Config("no wave name given (--wave or config run.wave)".into())),
        }
    }

    pub fn output_dir(&self, flag: Option<PathBuf>) -> Result<PathBuf> {
        let dir = flag.unwrap_or_else(|| self.cfg.run.output_dir.clone());
        std::fs::create_dir_all(&dir).with_context(|| format!("creating output dir {}", dir.display()))?;
        Ok(dir)
    }

    pub fn provider(&self) -> Result<Box<dyn LookupProvider>> {
        match self.cfg.lookup.provider.as_str() {
            "fixture" => {
                let dir = self.cfg.lookup.fixture_dir.clone().ok_or_else(|| {
                    linkhound_core::Error::Config("lookup.fixture_dir required for the fixture provider".into())
                })?;
                Ok(Box::new(FixtureProvider::new(dir)))
            }
            "spyonweb" => {
                if self.cfg.run.offline {
                    bail!(linkhound_core::Error::Offline("reverse lookup".into()));
                }
                Ok(Box::new(SpyOnWebProvider::new(
                    self.cfg.lookup.endpoint.clone(),
                    &self.cfg.fetch.user_agent,
                    self.cfg.lookup.min_interval_ms,
                )?))
            }
            other => bail!(linkhound_core::Error::Config(format!("unknown lookup provider {other:?}"))),
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

/// Top-level error type for library operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tracking id {raw:?}: {reason}")]
    InvalidId { raw: String, reason: crate::model::RejectReason },

    #[error("invalid domain {input:?}: {reason}")]
    InvalidDomain { input: String, reason: String },

    #[error("fetch failed for {url}: {failure}")]
    Fetch { url: String, failure: crate::fetch::FetchFailure },

    #[error("archive index error: {0}")]
    Archive(String),

    #[error("lookup provider {provider}: {failure}")]
    Provider { provider: String, failure: crate::lookup::ProviderFailure },

    #[error("store: {0}")]
    Store(#[from] StoreError),

    #[error("config: {0}")]
    Config(String),

    #[error("network access attempted in offline mode: {0}")]
    Offline(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Errors raised by the on-disk store.
#[derive(Debug, Error)]
pub enum StoreError {
    #[error("store root {0} is not initialized")]
    NotInitialized(PathBuf),

    #[error("wave {0:?} not found")]
    WaveNotFound(String),

    #[error("blob {0} not found")]
    BlobNotFound(String),

    #[error("blob {hash} content mismatch (found {actual})")]
    BlobCorrupt { hash: String, actual: String },

    #[error("corrupt record at {path}:{line}: {reason}")]
    CorruptLine { path: String, line: usize, reason: String },

    #[error("wave {wave:?} references missing blob {hash}")]
    DanglingBlob { wave: String, hash: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

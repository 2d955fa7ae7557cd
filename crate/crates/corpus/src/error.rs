use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        source: serde_json::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("registry file is empty")]
    EmptyRegistry,
    #[error("duplicate language code '{0}' in registry")]
    DuplicateCode(String),
    #[error("unknown language code '{0}'")]
    UnknownLanguage(String),
    #[error("invalid record {id}: {reason}")]
    InvalidRecord { id: String, reason: String },
}

//! Single access point to translation, generation, and embedding
//! services: response caching, retry with backoff, rate limiting,
//! bounded parallelism, and deterministic mock backends.

mod backend;
mod cache;
mod clock;
mod gateway;
mod http;
mod limiter;
pub mod mocks;
mod registry;

pub use backend::{EmbedBackend, GenParams, GenerateBackend, TranslateBackend};
pub use cache::{cache_key, FileCache};
pub use clock::{Clock, SystemClock, VirtualClock};
pub use gateway::{Gateway, GatewayConfig};
pub use http::HttpBackend;
pub use limiter::{RateLimiter, Semaphore};
pub use registry::BackendRegistry;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("empty {0}")]
    EmptyInput(&'static str),
    #[error("source and target language are both {0:?}")]
    SameLanguagePair(String),
    #[error("unsupported language pair {src:?}->{tgt:?}")]
    UnsupportedPair { src: String, tgt: String },
    #[error("transient backend failure: {0}")]
    Transient(String),
    #[error("permanent backend failure: {0}")]
    Permanent(String),
    #[error("backend unreachable after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: String },
    #[error("embedding dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("failed to decode backend response: {0}")]
    Decode(String),
    #[error("unknown backend {0:?}")]
    UnknownBackend(String),
    #[error("missing environment variable {0}")]
    MissingEnv(&'static str),
    #[error("invalid backend options: {0}")]
    BadOptions(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

//! The gateway proper: precondition checks, cache lookup, bounded
//! parallelism, rate limiting, and retry around whichever backends are
//! attached.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::backend::{EmbedBackend, GenParams, GenerateBackend, TranslateBackend};
use crate::cache::{cache_key, FileCache};
use crate::clock::{Clock, SystemClock};
use crate::limiter::{RateLimiter, Semaphore};
use crate::GatewayError;

#[derive(Debug, Clone)]
pub struct GatewayConfig {
    pub max_parallel: usize,
    pub rate_per_minute: usize,
    pub max_attempts: u32,
    pub backoff_base_ms: u64,
    pub cache_dir: Option<PathBuf>,
    /// Seeds backoff jitter only; responses never depend on it.
    pub seed: u64,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        Self {
            max_parallel: 4,
            rate_per_minute: 600,
            max_attempts: 3,
            backoff_base_ms: 50,
            cache_dir: None,
            seed: 0,
        }
    }
}

pub struct Gateway {
    translator: Option<Box<dyn TranslateBackend>>,
    generator: Option<Box<dyn GenerateBackend>>,
    embedder: Option<Box<dyn EmbedBackend>>,
    cache: Option<FileCache>,
    limiter: RateLimiter,
    semaphore: Semaphore,
    clock: Arc<dyn Clock>,
    max_attempts: u32,
    backoff_base_ms: u64,
    jitter_rng: Mutex<ChaCha8Rng>,
    remote_calls: AtomicU64,
    calls_by_kind: Mutex<BTreeMap<String, u64>>,
}

impl Gateway {
    pub fn new(config: GatewayConfig) -> Result<Self, GatewayError> {
        Self::with_clock(config, Arc::new(SystemClock))
    }

    pub fn with_clock(config: GatewayConfig, clock: Arc<dyn Clock>) -> Result<Self, GatewayError> {
        assert!(config.max_parallel >= 1);
        assert!(config.max_attempts >= 1);
        let cache = match &config.cache_dir {
            Some(dir) => Some(FileCache::new(dir)?),
            None => None,
        };
        Ok(Self {
            translator: None,
            generator: None,
            embedder: None,
            cache,
            limiter: RateLimiter::new(config.rate_per_minute, clock.clone()),
            semaphore: Semaphore::new(config.max_parallel),
            clock,
            max_attempts: config.max_attempts,
            backoff_base_ms: config.backoff_base_ms,
            jitter_rng: Mutex::new(ChaCha8Rng::seed_from_u64(config.seed)),
            remote_calls: AtomicU64::new(0),
            calls_by_kind: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn with_translator(mut self, backend: Box<dyn TranslateBackend>) -> Self {
        self.translator = Some(backend);
        self
    }

    pub fn with_generator(mut self, backend: Box<dyn GenerateBackend>) -> Self {
        self.generator = Some(backend);
        self
    }

    pub fn with_embedder(mut self, backend: Box<dyn EmbedBackend>) -> Self {
        self.embedder = Some(backend);
        self
    }

    /// Remote (non-cache) calls issued so far.
    pub fn remote_calls(&self) -> u64 {
        self.remote_calls.load(Ordering::SeqCst)
    }

    /// Remote call counts per request kind, for manifests.
    pub fn calls_by_kind(&self) -> BTreeMap<String, u64> {
        self.calls_by_kind.lock().unwrap().clone()
    }

    pub fn translate(&self, text: &str, src: &str, tgt: &str) -> Result<String, GatewayError> {
        if text.is_empty() {
            return Err(GatewayError::EmptyInput("text"));
        }
        if src == tgt {
            return Err(GatewayError::SameLanguagePair(src.to_string()));
        }
        let backend = self
            .translator
            .as_ref()
            .ok_or_else(|| GatewayError::Permanent("no translate backend configured".into()))?;
        let request = json!({"text": text, "src": src, "tgt": tgt});
        let response = self.cached_call("translate", &backend.id(), &request, || {
            let text = backend.translate(text, src, tgt)?;
            Ok(json!({"text": text}))
        })?;
        decode_text(&response)
    }

    pub fn generate(&self, prompt: &str, params: &GenParams) -> Result<String, GatewayError> {
        if prompt.is_empty() {
            return Err(GatewayError::EmptyInput("prompt"));
        }
        if params.max_tokens == 0 {
            return Err(GatewayError::Permanent("max_tokens must be >= 1".into()));
        }
        let backend = self
            .generator
            .as_ref()
            .ok_or_else(|| GatewayError::Permanent("no generate backend configured".into()))?;
        let request = json!({
            "prompt": prompt,
            "max_tokens": params.max_tokens,
            "temperature": params.temperature,
            "seed": params.seed,
        });
        let response = self.cached_call("generate", &backend.id(), &request, || {
            let text = backend.generate(prompt, params)?;
            Ok(json!({"text": text}))
        })?;
        decode_text(&response)
    }

    pub fn embed(&self, text: &str) -> Result<Vec<f64>, GatewayError> {
        if text.is_empty() {
            return Err(GatewayError::EmptyInput("text"));
        }
        let backend = self
            .embedder
            .as_ref()
            .ok_or_else(|| GatewayError::Permanent("no embed backend configured".into()))?;
        let expected = backend.dim();
        let request = json!({"text": text});
        let response = self.cached_call("embed", &backend.id(), &request, || {
            let vector = backend.embed(text)?;
            if vector.len() != expected {
                return Err(GatewayError::DimensionMismatch { expected, got: vector.len() });
            }
            Ok(json!({"vector": vector}))
        })?;
        let vector: Vec<f64> = serde_json::from_value(
            response
                .get("vector")
                .cloned()
                .ok_or_else(|| GatewayError::Decode("missing vector field".into()))?,
        )
        .map_err(|e| GatewayError::Decode(e.to_string()))?;
        if vector.len() != expected {
            return Err(GatewayError::DimensionMismatch { expected, got: vector.len() });
        }
        Ok(vector)
    }

    /// Cache lookup, then rate-limited, parallelism-bounded, retried call.
    fn cached_call(
        &self,
        kind: &str,
        backend_id: &str,
        request: &serde_json::Value,
        call: impl Fn() -> Result<serde_json::Value, GatewayError>,
    ) -> Result<serde_json::Value, GatewayError> {
        let key = cache_key(backend_id, kind, request);
        if let Some(cache) = &self.cache {
            if let Some(bytes) = cache.get(&key) {
                return serde_json::from_slice(&bytes)
                    .map_err(|e| GatewayError::Decode(e.to_string()));
            }
        }
        let response = self.remote_call(kind, &call)?;
        if let Some(cache) = &self.cache {
            cache.put(&key, xllm_corpus::canonical_json(&response).as_bytes())?;
        }
        Ok(response)
    }

    fn remote_call(
        &self,
        kind: &str,
        call: &impl Fn() -> Result<serde_json::Value, GatewayError>,
    ) -> Result<serde_json::Value, GatewayError> {
        let _permit = self.semaphore.acquire();
        let mut last = String::new();
        for attempt in 1..=self.max_attempts {
            self.limiter.acquire();
            self.remote_calls.fetch_add(1, Ordering::SeqCst);
            *self.calls_by_kind.lock().unwrap().entry(kind.to_string()).or_insert(0) += 1;
            match call() {
                Ok(response) => return Ok(response),
                Err(GatewayError::Transient(reason)) => {
                    last = reason;
                    if attempt < self.max_attempts {
                        let base = self.backoff_base_ms << (attempt - 1);
                        let jitter =
                            self.jitter_rng.lock().unwrap().gen_range(0..=self.backoff_base_ms);
                        self.clock.sleep_ms(base + jitter);
                    }
                }
                // 4xx-class and contract errors are not retried.
                Err(other) => return Err(other),
            }
        }
        Err(GatewayError::Exhausted { attempts: self.max_attempts, last })
    }
}

fn decode_text(response: &serde_json::Value) -> Result<String, GatewayError> {
    response
        .get("text")
        .and_then(|v| v.as_str())
        .map(str::to_string)
        .ok_or_else(|| GatewayError::Decode("missing text field".into()))
}

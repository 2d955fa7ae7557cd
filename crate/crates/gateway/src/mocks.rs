//! Deterministic in-repo backends used by every test and by `--mock`
//! runs. All of them count their calls so cache behavior is observable.

use std::collections::{BTreeMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::backend::{EmbedBackend, GenParams, GenerateBackend, TranslateBackend};
use crate::GatewayError;

/// Returns the input unchanged for any language pair.
#[derive(Default)]
pub struct IdentityTranslator {
    calls: AtomicU64,
}

impl IdentityTranslator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl TranslateBackend for IdentityTranslator {
    fn id(&self) -> String {
        "mock:identity".into()
    }

    fn translate(&self, text: &str, _src: &str, _tgt: &str) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(text.to_string())
    }
}

/// Word-for-word substitution; unknown words pass through. The identity
/// string includes a digest of the table so different dictionaries never
/// share cache entries.
pub struct DictionaryTranslator {
    entries: BTreeMap<String, String>,
    calls: AtomicU64,
}

impl DictionaryTranslator {
    pub fn new(entries: BTreeMap<String, String>) -> Self {
        Self { entries, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl TranslateBackend for DictionaryTranslator {
    fn id(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in &self.entries {
            hasher.update(k.as_bytes());
            hasher.update([0]);
            hasher.update(v.as_bytes());
            hasher.update([0]);
        }
        format!("mock:dictionary:{}", &hex::encode(hasher.finalize())[..12])
    }

    fn translate(&self, text: &str, _src: &str, _tgt: &str) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let translated: Vec<&str> = text
            .split(' ')
            .map(|w| self.entries.get(w).map(String::as_str).unwrap_or(w))
            .collect();
        Ok(translated.join(" "))
    }
}

/// Always returns one fixed string, whatever the input.
pub struct ConstantTranslator {
    text: String,
    calls: AtomicU64,
}

impl ConstantTranslator {
    pub fn new(text: &str) -> Self {
        Self { text: text.to_string(), calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl TranslateBackend for ConstantTranslator {
    fn id(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.text.as_bytes());
        format!("mock:constant:{}", &hex::encode(hasher.finalize())[..12])
    }

    fn translate(&self, _text: &str, _src: &str, _tgt: &str) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(self.text.clone())
    }
}

/// Fails the first `failures` calls, then succeeds (identity). With
/// `permanent` set the failures are non-retryable.
pub struct FailingTranslator {
    failures: u64,
    permanent: bool,
    calls: AtomicU64,
}

impl FailingTranslator {
    pub fn new(failures: u64, permanent: bool) -> Self {
        Self { failures, permanent, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl TranslateBackend for FailingTranslator {
    fn id(&self) -> String {
        "mock:failing".into()
    }

    fn translate(&self, text: &str, _src: &str, _tgt: &str) -> Result<String, GatewayError> {
        let n = self.calls.fetch_add(1, Ordering::SeqCst);
        if n < self.failures {
            if self.permanent {
                Err(GatewayError::Permanent("scripted permanent failure".into()))
            } else {
                Err(GatewayError::Transient("scripted transient failure".into()))
            }
        } else {
            Ok(text.to_string())
        }
    }
}

/// Returns the prompt verbatim.
#[derive(Default)]
pub struct EchoGenerator {
    calls: AtomicU64,
}

impl EchoGenerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl GenerateBackend for EchoGenerator {
    fn id(&self) -> String {
        "mock:echo".into()
    }

    fn generate(&self, prompt: &str, _params: &GenParams) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(prompt.to_string())
    }
}

/// Echoes the prompt tagged with the sampling seed, so repeated
/// generation with different seeds yields distinct candidates.
#[derive(Default)]
pub struct SeededEchoGenerator {
    calls: AtomicU64,
}

impl SeededEchoGenerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl GenerateBackend for SeededEchoGenerator {
    fn id(&self) -> String {
        "mock:echo-seeded".into()
    }

    fn generate(&self, prompt: &str, params: &GenParams) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(format!("{prompt} [s{}]", params.seed))
    }
}

/// Pops queued replies in order; an exhausted queue is a permanent error.
pub struct ScriptedGenerator {
    queue: Mutex<VecDeque<String>>,
    calls: AtomicU64,
}

impl ScriptedGenerator {
    pub fn new(responses: Vec<String>) -> Self {
        Self { queue: Mutex::new(responses.into()), calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl GenerateBackend for ScriptedGenerator {
    fn id(&self) -> String {
        "mock:scripted".into()
    }

    fn generate(&self, _prompt: &str, _params: &GenParams) -> Result<String, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.queue
            .lock()
            .unwrap()
            .pop_front()
            .ok_or_else(|| GatewayError::Permanent("scripted queue exhausted".into()))
    }
}

/// Deterministic unit-norm embedding derived from a digest of the text;
/// identical texts always embed identically.
pub struct HashEmbedder {
    dim: usize,
    calls: AtomicU64,
}

impl HashEmbedder {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        Self { dim, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl EmbedBackend for HashEmbedder {
    fn id(&self) -> String {
        format!("mock:hash-embed:{}", self.dim)
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let mut vector = Vec::with_capacity(self.dim);
        let mut counter: u64 = 0;
        'outer: loop {
            let mut hasher = Sha256::new();
            hasher.update(text.as_bytes());
            hasher.update(counter.to_le_bytes());
            let digest = hasher.finalize();
            for chunk in digest.chunks_exact(8) {
                let raw = u64::from_le_bytes(chunk.try_into().unwrap());
                // Map to (-1, 1).
                vector.push(raw as f64 / u64::MAX as f64 * 2.0 - 1.0);
                if vector.len() == self.dim {
                    break 'outer;
                }
            }
            counter += 1;
        }
        let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(vector.into_iter().map(|x| x / norm).collect())
    }
}

/// Test-only embedder returning whatever vector it was built with.
pub struct FixedEmbedder {
    vectors: Mutex<VecDeque<Vec<f64>>>,
    dim: usize,
}

impl FixedEmbedder {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Self {
        Self { vectors: Mutex::new(vectors.into()), dim }
    }
}

impl EmbedBackend for FixedEmbedder {
    fn id(&self) -> String {
        "mock:fixed-embed".into()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn embed(&self, _text: &str) -> Result<Vec<f64>, GatewayError> {
        self.vectors
            .lock()
            .unwrap()
            .pop_front()
            .ok_or_else(|| GatewayError::Permanent("fixed embedder exhausted".into()))
    }
}

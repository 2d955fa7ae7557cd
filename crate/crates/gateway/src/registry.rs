//! Name-keyed backend registry: every backend variant sits behind the
//! common traits and is constructed from a (name, options) pair, so
//! configs and CLI flags can select implementations by string.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::backend::{EmbedBackend, GenerateBackend, TranslateBackend};
use crate::http::HttpBackend;
use crate::mocks::{
    ConstantTranslator, DictionaryTranslator, EchoGenerator, HashEmbedder, IdentityTranslator,
    ScriptedGenerator, SeededEchoGenerator,
};
use crate::GatewayError;

type TranslateCtor = Box<dyn Fn(&Value) -> Result<Box<dyn TranslateBackend>, GatewayError> + Send + Sync>;
type GenerateCtor = Box<dyn Fn(&Value) -> Result<Box<dyn GenerateBackend>, GatewayError> + Send + Sync>;
type EmbedCtor = Box<dyn Fn(&Value) -> Result<Box<dyn EmbedBackend>, GatewayError> + Send + Sync>;

pub struct BackendRegistry {
    translators: BTreeMap<String, TranslateCtor>,
    generators: BTreeMap<String, GenerateCtor>,
    embedders: BTreeMap<String, EmbedCtor>,
}

fn opt_u64(options: &Value, field: &str, default: u64) -> Result<u64, GatewayError> {
    match options.get(field) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_u64()
            .ok_or_else(|| GatewayError::BadOptions(format!("{field} must be an integer"))),
    }
}

impl BackendRegistry {
    pub fn empty() -> Self {
        Self {
            translators: BTreeMap::new(),
            generators: BTreeMap::new(),
            embedders: BTreeMap::new(),
        }
    }

    /// Registry with every bundled backend: mocks plus the HTTP client.
    pub fn with_defaults() -> Self {
        let mut registry = Self::empty();
        registry.register_translator("identity", |_| Ok(Box::new(IdentityTranslator::new())));
        registry.register_translator("dictionary", |options| {
            let entries: BTreeMap<String, String> = match options.get("entries") {
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| GatewayError::BadOptions(e.to_string()))?,
                None => BTreeMap::new(),
            };
            Ok(Box::new(DictionaryTranslator::new(entries)))
        });
        registry.register_translator("constant", |options| {
            let text = options
                .get("text")
                .and_then(|v| v.as_str())
                .ok_or_else(|| GatewayError::BadOptions("constant requires text".into()))?;
            Ok(Box::new(ConstantTranslator::new(text)))
        });
        registry.register_translator("http", |options| {
            let dim = opt_u64(options, "dim", 16)? as usize;
            Ok(Box::new(HttpBackend::from_env(dim)?))
        });

        registry.register_generator("echo", |_| Ok(Box::new(EchoGenerator::new())));
        registry.register_generator("echo-seeded", |_| Ok(Box::new(SeededEchoGenerator::new())));
        registry.register_generator("scripted", |options| {
            let responses: Vec<String> = match options.get("responses") {
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| GatewayError::BadOptions(e.to_string()))?,
                None => Vec::new(),
            };
            Ok(Box::new(ScriptedGenerator::new(responses)))
        });
        registry.register_generator("http", |options| {
            let dim = opt_u64(options, "dim", 16)? as usize;
            Ok(Box::new(HttpBackend::from_env(dim)?))
        });

        registry.register_embedder("hash", |options| {
            let dim = opt_u64(options, "dim", 16)? as usize;
            Ok(Box::new(HashEmbedder::new(dim)))
        });
        registry.register_embedder("http", |options| {
            let dim = opt_u64(options, "dim", 16)? as usize;
            Ok(Box::new(HttpBackend::from_env(dim)?))
        });
        registry
    }

    pub fn register_translator(
        &mut self,
        name: &str,
        ctor: impl Fn(&Value) -> Result<Box<dyn TranslateBackend>, GatewayError> + Send + Sync + 'static,
    ) {
        self.translators.insert(name.to_string(), Box::new(ctor));
    }

    pub fn register_generator(
        &mut self,
        name: &str,
        ctor: impl Fn(&Value) -> Result<Box<dyn GenerateBackend>, GatewayError> + Send + Sync + 'static,
    ) {
        self.generators.insert(name.to_string(), Box::new(ctor));
    }

    pub fn register_embedder(
        &mut self,
        name: &str,
        ctor: impl Fn(&Value) -> Result<Box<dyn EmbedBackend>, GatewayError> + Send + Sync + 'static,
    ) {
        self.embedders.insert(name.to_string(), Box::new(ctor));
    }

    pub fn translator(
        &self,
        name: &str,
        options: &Value,
    ) -> Result<Box<dyn TranslateBackend>, GatewayError> {
        let ctor = self
            .translators
            .get(name)
            .ok_or_else(|| GatewayError::UnknownBackend(name.to_string()))?;
        ctor(options)
    }

    pub fn generator(
        &self,
        name: &str,
        options: &Value,
    ) -> Result<Box<dyn GenerateBackend>, GatewayError> {
        let ctor = self
            .generators
            .get(name)
            .ok_or_else(|| GatewayError::UnknownBackend(name.to_string()))?;
        ctor(options)
    }

    pub fn embedder(
        &self,
        name: &str,
        options: &Value,
    ) -> Result<Box<dyn EmbedBackend>, GatewayError> {
        let ctor = self
            .embedders
            .get(name)
            .ok_or_else(|| GatewayError::UnknownBackend(name.to_string()))?;
        ctor(options)
    }

    pub fn translator_names(&self) -> Vec<&str> {
        self.translators.keys().map(String::as_str).collect()
    }
}

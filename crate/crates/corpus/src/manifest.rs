//! Per-run manifest written next to each pipeline's output.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub pipeline: String,
    pub config_digest: String,
    pub seed: u64,
    pub per_language_counts: BTreeMap<String, u64>,
    pub created_at: String,
    pub backend_calls: BTreeMap<String, u64>,
}

impl DatasetManifest {
    pub fn new(pipeline: &str, config_digest: String, seed: u64, deterministic_time: bool) -> Self {
        // Mock runs pin the timestamp so two runs are byte-identical.
        let created_at = if deterministic_time {
            "1970-01-01T00:00:00Z".to_string()
        } else {
            chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
        };
        Self {
            pipeline: pipeline.to_string(),
            config_digest,
            seed,
            per_language_counts: BTreeMap::new(),
            created_at,
            backend_calls: BTreeMap::new(),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), CorpusError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Deterministic digest of a full run configuration, derived from its
/// canonical JSON form.
pub fn config_digest<T: Serialize>(config: &T) -> String {
    let value = serde_json::to_value(config).expect("config serializes");
    let canonical = canonical_json(&value);
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// JSON with object keys sorted, no insignificant whitespace.
pub fn canonical_json(value: &serde_json::Value) -> String {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            let mut keys: Vec<_> = map.keys().collect();
            keys.sort();
            let body: Vec<String> = keys
                .into_iter()
                .map(|k| {
                    format!(
                        "{}:{}",
                        serde_json::to_string(k).unwrap(),
                        canonical_json(&map[k])
                    )
                })
                .collect();
            format!("{{{}}}", body.join(","))
        }
        Value::Array(items) => {
            let body: Vec<String> = items.iter().map(canonical_json).collect();
            format!("[{}]", body.join(","))
        }
        other => serde_json::to_string(other).unwrap(),
    }
}

//! Generic JSON-over-HTTP backend implementing all three service roles.
//!
//! Wire contract: POST /translate {"text","src","tgt"} -> {"text"};
//! POST /generate {"prompt","max_tokens","temperature","seed"} -> {"text"};
//! POST /embed {"text"} -> {"vector":[...]}.

use std::time::Duration;

use serde_json::json;

use crate::backend::{EmbedBackend, GenParams, GenerateBackend, TranslateBackend};
use crate::GatewayError;

pub struct HttpBackend {
    base_url: String,
    api_key: Option<String>,
    embed_dim: usize,
    client: reqwest::blocking::Client,
}

impl HttpBackend {
    pub fn new(base_url: &str, api_key: Option<String>, embed_dim: usize) -> Self {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(60))
            .build()
            .expect("client construction cannot fail with static options");
        Self { base_url: base_url.trim_end_matches('/').to_string(), api_key, embed_dim, client }
    }

    /// Reads XLLM_BACKEND_URL (required) and XLLM_API_KEY (optional).
    pub fn from_env(embed_dim: usize) -> Result<Self, GatewayError> {
        let url = std::env::var("XLLM_BACKEND_URL")
            .map_err(|_| GatewayError::MissingEnv("XLLM_BACKEND_URL"))?;
        let key = std::env::var("XLLM_API_KEY").ok();
        Ok(Self::new(&url, key, embed_dim))
    }

    fn post(&self, path: &str, body: serde_json::Value) -> Result<serde_json::Value, GatewayError> {
        let mut request = self.client.post(format!("{}{path}", self.base_url)).json(&body);
        if let Some(key) = &self.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().map_err(|e| GatewayError::Transient(e.to_string()))?;
        let status = response.status();
        if status.is_client_error() {
            return Err(GatewayError::Permanent(format!("{path} returned {status}")));
        }
        if !status.is_success() {
            return Err(GatewayError::Transient(format!("{path} returned {status}")));
        }
        response.json().map_err(|e| GatewayError::Decode(e.to_string()))
    }

    fn text_field(value: serde_json::Value) -> Result<String, GatewayError> {
        value
            .get("text")
            .and_then(|v| v.as_str())
            .map(str::to_string)
            .ok_or_else(|| GatewayError::Decode("missing text field".into()))
    }
}

impl TranslateBackend for HttpBackend {
    fn id(&self) -> String {
        format!("http:{}", self.base_url)
    }

    fn translate(&self, text: &str, src: &str, tgt: &str) -> Result<String, GatewayError> {
        Self::text_field(self.post("/translate", json!({"text": text, "src": src, "tgt": tgt}))?)
    }
}

impl GenerateBackend for HttpBackend {
    fn id(&self) -> String {
        format!("http:{}", self.base_url)
    }

    fn generate(&self, prompt: &str, params: &GenParams) -> Result<String, GatewayError> {
        Self::text_field(self.post(
            "/generate",
            json!({
                "prompt": prompt,
                "max_tokens": params.max_tokens,
                "temperature": params.temperature,
                "seed": params.seed,
            }),
        )?)
    }
}

impl EmbedBackend for HttpBackend {
    fn id(&self) -> String {
        format!("http:{}", self.base_url)
    }

    fn dim(&self) -> usize {
        self.embed_dim
    }

    fn embed(&self, text: &str) -> Result<Vec<f64>, GatewayError> {
        let value = self.post("/embed", json!({"text": text}))?;
        let vector: Vec<f64> = serde_json::from_value(
            value
                .get("vector")
                .cloned()
                .ok_or_else(|| GatewayError::Decode("missing vector field".into()))?,
        )
        .map_err(|e| GatewayError::Decode(e.to_string()))?;
        if vector.len() != self.embed_dim {
            return Err(GatewayError::DimensionMismatch {
                expected: self.embed_dim,
                got: vector.len(),
            });
        }
        Ok(vector)
    }
}

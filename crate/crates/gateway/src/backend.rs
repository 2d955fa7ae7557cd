use crate::GatewayError;

/// Generation parameters. Defaults are config, not claims about the
/// upstream services: temperature 0.7, max_tokens 512.
#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub max_tokens: u32,
    pub temperature: f64,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { max_tokens: 512, temperature: 0.7, seed: 0 }
    }
}

pub trait TranslateBackend: Send + Sync {
    /// Stable identity; part of the cache key.
    fn id(&self) -> String;
    fn translate(&self, text: &str, src: &str, tgt: &str) -> Result<String, GatewayError>;
}

pub trait GenerateBackend: Send + Sync {
    fn id(&self) -> String;
    fn generate(&self, prompt: &str, params: &GenParams) -> Result<String, GatewayError>;
}

pub trait EmbedBackend: Send + Sync {
    fn id(&self) -> String;
    /// Expected output dimension; replies of any other length are errors.
    fn dim(&self) -> usize;
    fn embed(&self, text: &str) -> Result<Vec<f64>, GatewayError>;
}

//! Off-Target Ratio: percentage of outputs identified as being in a
//! language other than the required target.

use std::collections::HashMap;

use crate::MetricError;

/// Pluggable language identifier; any detector satisfying this interface
/// can back the OTR metric.
pub trait LanguageIdentifier {
    /// Most likely language code for a nonempty text.
    fn identify(&self, text: &str) -> Option<String>;
    /// Whether this identifier carries a profile for `lang`.
    fn supports(&self, lang: &str) -> bool;
}

/// Test identifier replaying a fixed text -> language table.
#[derive(Debug, Default)]
pub struct ScriptedIdentifier {
    pub table: HashMap<String, String>,
    pub languages: Vec<String>,
}

impl LanguageIdentifier for ScriptedIdentifier {
    fn identify(&self, text: &str) -> Option<String> {
        self.table.get(text).cloned()
    }

    fn supports(&self, lang: &str) -> bool {
        self.languages.iter().any(|l| l == lang)
    }
}

/// Empty outputs count as off-target.
pub fn off_target_ratio(
    outputs: &[String],
    expected_lang: &str,
    identifier: &dyn LanguageIdentifier,
) -> Result<f64, MetricError> {
    if outputs.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    if !identifier.supports(expected_lang) {
        return Err(MetricError::UnsupportedLanguage(expected_lang.to_string()));
    }
    let off = outputs
        .iter()
        .filter(|output| {
            if output.trim().is_empty() {
                return true;
            }
            identifier.identify(output).as_deref() != Some(expected_lang)
        })
        .count();
    Ok(100.0 * off as f64 / outputs.len() as f64)
}

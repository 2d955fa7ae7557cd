//! Language registry: one entry per supported language with its resource
//! tier and pipeline backend assignments.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::CorpusError;

/// Resource tier used for aggregated reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceTier {
    Low,
    Mid,
    High,
}

/// Which machine-translation service translates this language's
/// instructions and inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrBackend {
    PrimaryMt,
    FallbackMt,
}

/// How this language's responses are produced: generated by the LLM
/// backend or machine-translated from the English responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResponseMode {
    Generate,
    Translate,
}

/// One registry row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageEntry {
    pub code: String,
    pub name: String,
    pub tier: ResourceTier,
    pub instr_backend: InstrBackend,
    pub response_mode: ResponseMode,
}

/// An ordered, duplicate-free set of language entries with code lookup.
#[derive(Debug, Clone)]
pub struct Registry {
    entries: Vec<LanguageEntry>,
    by_code: HashMap<String, usize>,
}

impl Registry {
    pub fn from_entries(entries: Vec<LanguageEntry>) -> Result<Self, CorpusError> {
        if entries.is_empty() {
            return Err(CorpusError::EmptyRegistry);
        }
        let mut by_code = HashMap::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if entry.code.is_empty() {
                return Err(CorpusError::InvalidRecord {
                    id: format!("registry[{i}]"),
                    reason: "empty language code".into(),
                });
            }
            if by_code.insert(entry.code.clone(), i).is_some() {
                return Err(CorpusError::DuplicateCode(entry.code.clone()));
            }
        }
        Ok(Self { entries, by_code })
    }

    /// Parses a registry file: either a JSON array or one JSON object per
    /// line. Order is preserved, duplicates rejected.
    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let trimmed = text.trim_start();
        if trimmed.is_empty() {
            return Err(CorpusError::EmptyRegistry);
        }
        let entries: Vec<LanguageEntry> = if trimmed.starts_with('[') {
            serde_json::from_str(trimmed)?
        } else {
            let mut out = Vec::new();
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let entry = serde_json::from_str(line)
                    .map_err(|source| CorpusError::Parse { line: i + 1, source })?;
                out.push(entry);
            }
            out
        };
        Self::from_entries(entries)
    }

    /// Total lookup over registered codes; fails loudly otherwise.
    pub fn get(&self, code: &str) -> Result<&LanguageEntry, CorpusError> {
        self.by_code
            .get(code)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| CorpusError::UnknownLanguage(code.to_string()))
    }

    pub fn contains(&self, code: &str) -> bool {
        self.by_code.contains_key(code)
    }

    pub fn entries(&self) -> &[LanguageEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.code.as_str())
    }
}

const REGISTRY_100: &str = include_str!("../data/registry_100.jsonl");
const FLORES_ALIASES: &str = include_str!("../data/flores_aliases.json");

/// The bundled 100-language registry.
pub fn bundled_registry() -> Registry {
    Registry::parse(REGISTRY_100).expect("bundled registry is valid")
}

fn alias_map() -> &'static HashMap<String, String> {
    static MAP: OnceLock<HashMap<String, String>> = OnceLock::new();
    MAP.get_or_init(|| serde_json::from_str(FLORES_ALIASES).expect("bundled alias map is valid"))
}

/// FLORES-style code for a bundled pipeline language name, if known.
pub fn flores_alias(pipeline_name: &str) -> Option<&'static str> {
    alias_map().get(pipeline_name).map(|s| s.as_str())
}

/// Reverse lookup: pipeline language name for a FLORES-style code.
pub fn pipeline_name_for_flores(flores_code: &str) -> Option<&'static str> {
    alias_map()
        .iter()
        .find(|(_, v)| v.as_str() == flores_code)
        .map(|(k, _)| k.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_registry_has_100_entries() {
        let reg = bundled_registry();
        assert_eq!(reg.len(), 100);
        assert_eq!(
            reg.get("amharic").unwrap().response_mode,
            ResponseMode::Translate
        );
        assert_eq!(
            reg.get("arabic").unwrap().response_mode,
            ResponseMode::Generate
        );
    }

    #[test]
    fn duplicate_code_rejected() {
        let row = r#"{"code":"arb_Arab","name":"Arabic","tier":"high","instr_backend":"primary_mt","response_mode":"generate"}"#;
        let text = format!("{row}\n{row}\n");
        match Registry::parse(&text) {
            Err(CorpusError::DuplicateCode(code)) => assert_eq!(code, "arb_Arab"),
            other => panic!("expected duplicate-code error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_rejected() {
        assert!(matches!(Registry::parse(""), Err(CorpusError::EmptyRegistry)));
        assert!(matches!(
            Registry::parse("  \n"),
            Err(CorpusError::EmptyRegistry)
        ));
    }

    #[test]
    fn unknown_tier_rejected() {
        let text = r#"{"code":"x","name":"X","tier":"medium","instr_backend":"primary_mt","response_mode":"generate"}"#;
        assert!(Registry::parse(text).is_err());
    }

    #[test]
    fn extra_fields_rejected() {
        let text = r#"{"code":"x","name":"X","tier":"low","instr_backend":"primary_mt","response_mode":"generate","extra":1}"#;
        assert!(Registry::parse(text).is_err());
    }

    #[test]
    fn lookup_fails_loudly() {
        let reg = bundled_registry();
        assert!(matches!(
            reg.get("klingon"),
            Err(CorpusError::UnknownLanguage(_))
        ));
    }

    #[test]
    fn alias_mapping_round_trips() {
        assert_eq!(flores_alias("arabic"), Some("arb_Arab"));
        assert_eq!(pipeline_name_for_flores("arb_Arab"), Some("arabic"));
        let reg = bundled_registry();
        for code in reg.codes() {
            assert!(flores_alias(code).is_some(), "missing alias for {code}");
        }
    }
}

//! Hybrid response routing: languages whose translation-quality score is
//! strictly below the threshold get machine-translated responses, the
//! rest get generated ones. An explicit override always wins.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use xllm_corpus::ResponseMode;

use crate::PipelineError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QualityRow {
    pub lang: String,
    /// Translation quality in BLEU units, >= 0.
    pub score: f64,
    pub override_mode: Option<ResponseMode>,
}

// Disk format keeps the short field name.
#[derive(Debug, Deserialize)]
struct RawRow {
    lang: String,
    score: f64,
    #[serde(default)]
    r#override: Option<ResponseMode>,
}

#[derive(Debug, Clone, Default)]
pub struct QualityTable {
    rows: BTreeMap<String, QualityRow>,
}

impl QualityTable {
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut rows = BTreeMap::new();
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            let raw: RawRow = serde_json::from_str(line)?;
            rows.insert(
                raw.lang.clone(),
                QualityRow { lang: raw.lang, score: raw.score, override_mode: raw.r#override },
            );
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn insert(&mut self, lang: &str, score: f64, override_mode: Option<ResponseMode>) {
        self.rows.insert(
            lang.to_string(),
            QualityRow { lang: lang.to_string(), score, override_mode },
        );
    }

    pub fn get(&self, lang: &str) -> Option<&QualityRow> {
        self.rows.get(lang)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The table backing the bundled 100-language registry. The underlying
/// per-language source scores are not public; this table encodes only
/// which side of the threshold each language falls on.
pub fn bundled_quality_table() -> QualityTable {
    QualityTable::parse(include_str!("../data/quality_table.jsonl"))
        .expect("bundled quality table is valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingDecision {
    pub lang: String,
    pub mode: ResponseMode,
    /// The quality score the decision rests on, unless overridden.
    pub basis: Basis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    Score(f64),
    Override,
}

/// Strictly below `threshold` routes to translation; ties go to
/// generation.
pub fn route_response_strategy(
    lang: &str,
    table: &QualityTable,
    threshold: f64,
) -> Result<RoutingDecision, PipelineError> {
    let row = table.get(lang).ok_or_else(|| PipelineError::LangNotInTable(lang.to_string()))?;
    let (mode, basis) = match row.override_mode {
        Some(mode) => (mode, Basis::Override),
        None => {
            let mode = if row.score < threshold {
                ResponseMode::Translate
            } else {
                ResponseMode::Generate
            };
            (mode, Basis::Score(row.score))
        }
    };
    Ok(RoutingDecision { lang: lang.to_string(), mode, basis })
}

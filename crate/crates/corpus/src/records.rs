//! Dataset record types: instruction triples and preference pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How an instruction record's output was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputProvenance {
    Generated,
    Translated,
    Original,
}

/// One (instruction, input, output) triple in one language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstructionRecord {
    pub id: String,
    pub lang: String,
    pub instruction: String,
    pub input: Option<String>,
    pub output: String,
    pub output_provenance: OutputProvenance,
    /// Id of the originating English record.
    pub source_id: String,
}

/// Per-factor scores for one response; keys are fixed to
/// correctness/coherence/naturalness by the scorer.
pub type FactorScores = BTreeMap<String, f64>;

/// A merged cross-lingual instruction with its chosen/rejected responses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferencePair {
    pub id: String,
    pub src_lang: String,
    pub tgt_lang: String,
    pub instruction: String,
    pub input: Option<String>,
    pub chosen: String,
    pub rejected: String,
    pub chosen_score: f64,
    pub rejected_score: f64,
    /// Map response role ("chosen"/"rejected") -> factor scores.
    pub factor_scores: BTreeMap<String, FactorScores>,
}

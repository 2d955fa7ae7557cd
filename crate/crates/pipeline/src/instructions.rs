//! 100-language instruction dataset builder: translates instructions and
//! inputs, leaves program text in English, and routes responses to
//! translation or generation per language.

use std::path::Path;

use serde_json::json;
use sha2::{Digest, Sha256};
use xllm_corpus::{
    config_digest, jsonl, DatasetManifest, InstructionRecord, OutputProvenance, Registry,
    ResponseMode,
};
use xllm_gateway::{GenParams, Gateway};

use crate::program::detect_program_text;
use crate::routing::{route_response_strategy, QualityTable};
use crate::PipelineError;

pub const ENGLISH: &str = "english";

#[derive(Debug, Clone)]
pub struct InstructionConfig {
    pub threshold: f64,
    pub seed: u64,
    pub parallel: usize,
    /// Pins the manifest timestamp for byte-reproducible runs.
    pub deterministic_time: bool,
    pub max_tokens: u32,
    pub temperature: f64,
}

impl InstructionConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            threshold: 10.0,
            seed,
            parallel: 4,
            deterministic_time: false,
            max_tokens: 512,
            temperature: 0.7,
        }
    }
}

/// Stable per-record generation seed.
fn record_seed(run_seed: u64, lang: &str, record_id: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(run_seed.to_le_bytes());
    hasher.update(lang.as_bytes());
    hasher.update([0]);
    hasher.update(record_id.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Builds one language's records from the English seed corpus. Program
/// text keeps its English instruction/input; outputs are translated or
/// generated per the routing decision.
pub fn build_language_corpus(
    seed_records: &[InstructionRecord],
    lang: &str,
    registry: &Registry,
    table: &QualityTable,
    gateway: &Gateway,
    config: &InstructionConfig,
) -> Result<Vec<InstructionRecord>, PipelineError> {
    let entry = registry
        .get(lang)
        .map_err(|_| PipelineError::LangNotInRegistry(lang.to_string()))?;
    if lang == ENGLISH {
        // The seed corpus already is the English dataset.
        return Ok(seed_records
            .iter()
            .map(|seed| InstructionRecord {
                id: format!("{}-{}", seed.id, lang),
                lang: lang.to_string(),
                instruction: seed.instruction.clone(),
                input: seed.input.clone(),
                output: seed.output.clone(),
                output_provenance: OutputProvenance::Original,
                source_id: seed.id.clone(),
            })
            .collect());
    }
    let decision = route_response_strategy(lang, table, config.threshold)?;
    let _ = entry; // registry membership is the precondition being enforced
    let mut records = Vec::with_capacity(seed_records.len());
    for seed in seed_records {
        let program = detect_program_text(&seed.instruction)
            || seed.input.as_deref().is_some_and(detect_program_text);
        let (instruction, input) = if program {
            (seed.instruction.clone(), seed.input.clone())
        } else {
            let instruction = gateway.translate(&seed.instruction, ENGLISH, lang)?;
            let input = match seed.input.as_deref() {
                Some(text) if !text.is_empty() => Some(gateway.translate(text, ENGLISH, lang)?),
                other => other.map(str::to_string),
            };
            (instruction, input)
        };
        let (output, provenance) = match decision.mode {
            ResponseMode::Translate => {
                (gateway.translate(&seed.output, ENGLISH, lang)?, OutputProvenance::Translated)
            }
            ResponseMode::Generate => {
                let prompt = match input.as_deref() {
                    Some(text) if !text.is_empty() => format!("{instruction}\n{text}"),
                    _ => instruction.clone(),
                };
                let params = GenParams {
                    max_tokens: config.max_tokens,
                    temperature: config.temperature,
                    seed: record_seed(config.seed, lang, &seed.id),
                };
                (gateway.generate(&prompt, &params)?, OutputProvenance::Generated)
            }
        };
        records.push(InstructionRecord {
            id: format!("{}-{}", seed.id, lang),
            lang: lang.to_string(),
            instruction,
            input,
            output,
            output_provenance: provenance,
            source_id: seed.id.clone(),
        });
    }
    Ok(records)
}

/// Runs the builder for every requested language with bounded-parallel
/// workers, writing one JSONL file per language plus a manifest.
/// Languages whose output file already exists with the expected record
/// count are skipped, which makes interrupted runs resumable.
pub fn run_instruction_pipeline(
    seed_records: &[InstructionRecord],
    langs: &[String],
    registry: &Registry,
    table: &QualityTable,
    gateway: &Gateway,
    config: &InstructionConfig,
    out_dir: &Path,
) -> Result<DatasetManifest, PipelineError> {
    if seed_records.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    std::fs::create_dir_all(out_dir)?;
    let counts = crate::par::for_each_language(langs, config.parallel, |lang| {
        build_language_file(seed_records, lang, registry, table, gateway, config, out_dir)
    })?;

    let digest = config_digest(&json!({
        "pipeline": "build-instructions",
        "threshold": config.threshold,
        "seed": config.seed,
        "langs": langs,
        "max_tokens": config.max_tokens,
        "temperature": config.temperature,
    }));
    let mut manifest =
        DatasetManifest::new("build-instructions", digest, config.seed, config.deterministic_time);
    manifest.per_language_counts = counts;
    manifest.backend_calls = gateway.calls_by_kind();
    manifest.save(&out_dir.join("manifest.json"))?;
    Ok(manifest)
}

fn build_language_file(
    seed_records: &[InstructionRecord],
    lang: &str,
    registry: &Registry,
    table: &QualityTable,
    gateway: &Gateway,
    config: &InstructionConfig,
    out_dir: &Path,
) -> Result<u64, PipelineError> {
    let path = out_dir.join(format!("{lang}.jsonl"));
    if path.exists() {
        // Resume: keep a complete per-language file from an earlier run.
        if let Ok(existing) = jsonl::read::<InstructionRecord>(&path) {
            if existing.len() == seed_records.len() {
                return Ok(existing.len() as u64);
            }
        }
    }
    let records = build_language_corpus(seed_records, lang, registry, table, gateway, config)?;
    jsonl::write(&path, &records)?;
    Ok(records.len() as u64)
}

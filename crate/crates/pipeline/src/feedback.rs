//! Cross-lingual preference dataset builder: per source language, sample
//! a target language, merge instructions, generate and rank candidate
//! responses, and emit accepted/rejected pairs.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};
use xllm_corpus::{config_digest, jsonl, DatasetManifest, InstructionRecord, PreferencePair, Registry};
use xllm_gateway::{GenParams, Gateway};

use crate::directives::{bundled_directives, merge_instructions};
use crate::instructions::ENGLISH;
use crate::PipelineError;

/// With k feedback languages, k(k-1) ordered (source, target) scenarios.
pub fn scenario_count(k: usize) -> usize {
    k * k.saturating_sub(1)
}

/// Uniform draw over the registry excluding the source language.
pub fn select_target_language(
    src: &str,
    registry30: &Registry,
    rng: &mut impl Rng,
) -> Result<String, PipelineError> {
    if registry30.len() < 2 {
        return Err(PipelineError::RegistryTooSmall { needed: 2, got: registry30.len() });
    }
    if !registry30.contains(src) {
        return Err(PipelineError::LangNotInRegistry(src.to_string()));
    }
    let candidates: Vec<&str> = registry30.codes().filter(|code| *code != src).collect();
    Ok(candidates[rng.gen_range(0..candidates.len())].to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedResponse {
    pub text: String,
    /// correctness / coherence / naturalness.
    pub factors: BTreeMap<String, f64>,
    /// Sum of the three factors.
    pub total: f64,
}

impl RankedResponse {
    pub fn new(text: &str, correctness: f64, coherence: f64, naturalness: f64) -> Self {
        let factors = BTreeMap::from([
            ("correctness".to_string(), correctness),
            ("coherence".to_string(), coherence),
            ("naturalness".to_string(), naturalness),
        ]);
        Self { text: text.to_string(), factors, total: correctness + coherence + naturalness }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairOutcome {
    Pair(PreferencePair),
    Discarded { reason: String },
}

/// Chosen = argmax total, rejected = argmin total; ties and identical
/// texts are discarded because a strict preference is required.
pub fn build_preference_pair(
    candidates: &[RankedResponse],
    id: &str,
    src_lang: &str,
    tgt_lang: &str,
    instruction: &str,
    input: Option<&str>,
) -> Result<PairOutcome, PipelineError> {
    if candidates.len() < 2 {
        return Err(PipelineError::TooFewCandidates(candidates.len()));
    }
    let mut best = 0;
    let mut worst = 0;
    for (i, candidate) in candidates.iter().enumerate() {
        if candidate.total > candidates[best].total {
            best = i;
        }
        if candidate.total < candidates[worst].total {
            worst = i;
        }
    }
    let (chosen, rejected) = (&candidates[best], &candidates[worst]);
    if chosen.total == rejected.total {
        return Ok(PairOutcome::Discarded { reason: "tie".into() });
    }
    if chosen.text == rejected.text {
        return Ok(PairOutcome::Discarded { reason: "identical responses".into() });
    }
    Ok(PairOutcome::Pair(PreferencePair {
        id: id.to_string(),
        src_lang: src_lang.to_string(),
        tgt_lang: tgt_lang.to_string(),
        instruction: instruction.to_string(),
        input: input.map(str::to_string),
        chosen: chosen.text.clone(),
        rejected: rejected.text.clone(),
        chosen_score: chosen.total,
        rejected_score: rejected.total,
        factor_scores: BTreeMap::from([
            ("chosen".to_string(), chosen.factors.clone()),
            ("rejected".to_string(), rejected.factors.clone()),
        ]),
    }))
}

/// Extracts the first three numbers from a scorer reply.
pub fn parse_factor_scores(text: &str) -> Option<(f64, f64, f64)> {
    let mut numbers = Vec::new();
    let mut current = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_digit() || ch == '.' || (ch == '-' && current.is_empty()) {
            current.push(ch);
        } else if !current.is_empty() {
            if let Ok(value) = current.parse::<f64>() {
                numbers.push(value);
                if numbers.len() == 3 {
                    return Some((numbers[0], numbers[1], numbers[2]));
                }
            }
            current.clear();
        }
    }
    None
}

/// Ranks one candidate response; `Ok(None)` drops the candidate.
pub trait ResponseScorer: Send + Sync {
    fn name(&self) -> &'static str;
    fn score(
        &self,
        gateway: &Gateway,
        instruction: &str,
        response: &str,
    ) -> Result<Option<(f64, f64, f64)>, PipelineError>;
}

/// Prompts the generation backend for three factor scores; unparseable
/// replies are retried once, then the candidate is dropped.
pub struct BackendScorer {
    pub seed: u64,
}

impl ResponseScorer for BackendScorer {
    fn name(&self) -> &'static str {
        "backend"
    }

    fn score(
        &self,
        gateway: &Gateway,
        instruction: &str,
        response: &str,
    ) -> Result<Option<(f64, f64, f64)>, PipelineError> {
        let prompt = format!(
            "Rate the response to the instruction on three factors \
             (correctness, coherence, naturalness), each from 1 to 10. \
             Reply with exactly three numbers.\n\
             Instruction: {instruction}\nResponse: {response}"
        );
        for attempt in 0..2u64 {
            let params =
                GenParams { max_tokens: 32, temperature: 0.0, seed: self.seed.wrapping_add(attempt) };
            let reply = gateway.generate(&prompt, &params)?;
            if let Some(scores) = parse_factor_scores(&reply) {
                return Ok(Some(scores));
            }
        }
        Ok(None)
    }
}

/// Deterministic pseudo-scorer for mock runs: factor scores derived from
/// a digest of (seed, instruction, response), each in [1, 10].
pub struct HashScorer {
    pub seed: u64,
}

impl ResponseScorer for HashScorer {
    fn name(&self) -> &'static str {
        "hash"
    }

    fn score(
        &self,
        _gateway: &Gateway,
        instruction: &str,
        response: &str,
    ) -> Result<Option<(f64, f64, f64)>, PipelineError> {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        hasher.update(instruction.as_bytes());
        hasher.update([0]);
        hasher.update(response.as_bytes());
        let digest = hasher.finalize();
        let factor = |byte: u8| 1.0 + (byte % 19) as f64 * 0.5;
        Ok(Some((factor(digest[0]), factor(digest[1]), factor(digest[2]))))
    }
}

/// Scorer variants selectable by name.
pub struct ScorerRegistry;

impl ScorerRegistry {
    pub fn create(name: &str, seed: u64) -> Result<Box<dyn ResponseScorer>, PipelineError> {
        match name {
            "backend" => Ok(Box::new(BackendScorer { seed })),
            "hash" => Ok(Box::new(HashScorer { seed })),
            other => Err(PipelineError::UnknownScorer(other.to_string())),
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["backend", "hash"]
    }
}

#[derive(Debug, Clone)]
pub struct FeedbackConfig {
    pub pairs_per_language: usize,
    pub candidates: usize,
    pub seed: u64,
    pub parallel: usize,
    pub deterministic_time: bool,
    pub max_tokens: u32,
    pub temperature: f64,
    pub scorer: String,
}

impl FeedbackConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            pairs_per_language: 2,
            candidates: 4,
            seed,
            parallel: 4,
            deterministic_time: false,
            max_tokens: 512,
            temperature: 0.7,
            scorer: "backend".into(),
        }
    }
}

pub(crate) fn derive_seed(parts: &[&[u8]]) -> u64 {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part);
        hasher.update([0]);
    }
    u64::from_le_bytes(hasher.finalize()[..8].try_into().unwrap())
}

/// The 30 feedback source languages (21 high-resource, 9 low-resource).
pub fn bundled_feedback_registry() -> Registry {
    Registry::parse(include_str!("../data/registry_30.jsonl"))
        .expect("bundled 30-language registry is valid")
}

/// Builds preference pairs for every source language in the registry,
/// writing one JSONL file per source plus a manifest. Existing complete
/// per-language files are kept, making interrupted runs resumable.
pub fn run_feedback_pipeline(
    seed_instructions: &[InstructionRecord],
    registry30: &Registry,
    gateway: &Gateway,
    scorer: &dyn ResponseScorer,
    config: &FeedbackConfig,
    out_dir: &Path,
) -> Result<DatasetManifest, PipelineError> {
    if seed_instructions.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    std::fs::create_dir_all(out_dir)?;
    let langs: Vec<String> = registry30.codes().map(str::to_string).collect();
    let counts = crate::par::for_each_language(&langs, config.parallel, |src| {
        build_source_language_file(seed_instructions, src, registry30, gateway, scorer, config, out_dir)
    })?;

    let digest = config_digest(&json!({
        "pipeline": "build-feedback",
        "seed": config.seed,
        "pairs_per_language": config.pairs_per_language,
        "candidates": config.candidates,
        "scorer": scorer.name(),
        "max_tokens": config.max_tokens,
        "temperature": config.temperature,
    }));
    let mut manifest =
        DatasetManifest::new("build-feedback", digest, config.seed, config.deterministic_time);
    manifest.per_language_counts = counts;
    manifest.backend_calls = gateway.calls_by_kind();
    manifest.save(&out_dir.join("manifest.json"))?;
    Ok(manifest)
}

fn build_source_language_file(
    seed_instructions: &[InstructionRecord],
    src: &str,
    registry30: &Registry,
    gateway: &Gateway,
    scorer: &dyn ResponseScorer,
    config: &FeedbackConfig,
    out_dir: &Path,
) -> Result<u64, PipelineError> {
    let path = out_dir.join(format!("{src}.jsonl"));
    if path.exists() {
        // Per-language files are written atomically, so existing means
        // complete; keep it on resume.
        if let Ok(existing) = jsonl::read::<PreferencePair>(&path) {
            return Ok(existing.len() as u64);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[&config.seed.to_le_bytes(), src.as_bytes()]));
    let directives = bundled_directives();
    let mut pairs = Vec::new();
    for i in 0..config.pairs_per_language {
        let seed_record = &seed_instructions[i % seed_instructions.len()];
        let base = if src == ENGLISH {
            seed_record.instruction.clone()
        } else {
            gateway.translate(&seed_record.instruction, ENGLISH, src)?
        };
        let input = match seed_record.input.as_deref() {
            Some(text) if !text.is_empty() && src != ENGLISH => {
                Some(gateway.translate(text, ENGLISH, src)?)
            }
            other => other.map(str::to_string),
        };
        let tgt = select_target_language(src, registry30, &mut rng)?;
        let merged = merge_instructions(&base, src, &tgt, directives)?;
        let prompt = match input.as_deref() {
            Some(text) => format!("{}\n{text}", merged.text),
            None => merged.text.clone(),
        };
        // Candidate generation is sequential within the worker so
        // scripted backends stay deterministic.
        let mut ranked = Vec::new();
        for c in 0..config.candidates {
            let sample_seed = derive_seed(&[
                &config.seed.to_le_bytes(),
                src.as_bytes(),
                &(i as u64).to_le_bytes(),
                &(c as u64).to_le_bytes(),
            ]);
            let params = GenParams {
                max_tokens: config.max_tokens,
                temperature: config.temperature,
                seed: sample_seed,
            };
            let text = gateway.generate(&prompt, &params)?;
            if let Some((correctness, coherence, naturalness)) =
                scorer.score(gateway, &merged.text, &text)?
            {
                ranked.push(RankedResponse::new(&text, correctness, coherence, naturalness));
            }
        }
        if ranked.len() < 2 {
            continue;
        }
        let id = format!("{src}-{tgt}-{i}");
        match build_preference_pair(&ranked, &id, src, &tgt, &merged.text, input.as_deref())? {
            PairOutcome::Pair(pair) => pairs.push(pair),
            PairOutcome::Discarded { .. } => {}
        }
    }
    jsonl::write(&path, &pairs)?;
    Ok(pairs.len() as u64)
}

//! Dataset construction, audit, and evaluation pipelines: the
//! 100-language instruction builder, the 30-language cross-lingual
//! preference builder, back-translation/content-preservation audits,
//! and the five-benchmark evaluation harness.

mod audit;
mod directives;
mod eval;
mod feedback;
mod instructions;
mod par;
mod program;
mod routing;

pub use audit::{audit_backtranslation, bin_scores, content_preservation, AuditReport, Histogram};
pub use directives::{bundled_directives, merge_instructions, DirectiveTable, MergedInstruction};
pub use eval::{
    aggregate_by_tier, parse_choice, render_prompt, run_benchmark, Benchmark, BenchmarkResult,
    BenchmarkSpec, EvalRecord, MetricKind, TierAverages,
};
pub use feedback::{
    build_preference_pair, bundled_feedback_registry, parse_factor_scores, run_feedback_pipeline,
    scenario_count, select_target_language,
    BackendScorer, FeedbackConfig, HashScorer, PairOutcome, RankedResponse, ResponseScorer,
    ScorerRegistry,
};
pub use instructions::{
    build_language_corpus, run_instruction_pipeline, InstructionConfig,
};
pub use program::detect_program_text;
pub use routing::{bundled_quality_table, route_response_strategy, QualityTable, RoutingDecision};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] xllm_corpus::CorpusError),
    #[error(transparent)]
    Gateway(#[from] xllm_gateway::GatewayError),
    #[error(transparent)]
    Metric(#[from] xllm_metrics::MetricError),
    #[error(transparent)]
    LangId(#[from] xllm_langid::LangIdError),
    #[error("language {0:?} missing from quality table")]
    LangNotInTable(String),
    #[error("registry needs at least {needed} languages, has {got}")]
    RegistryTooSmall { needed: usize, got: usize },
    #[error("language {0:?} not present in registry")]
    LangNotInRegistry(String),
    #[error("source and target language are both {0:?}")]
    SameLanguage(String),
    #[error("directive template for {0:?} lacks the target-language placeholder")]
    MissingPlaceholder(String),
    #[error("need at least 2 candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("no English original for record {0:?}")]
    MissingOriginal(String),
    #[error("score {score} for {lang:?} outside domain [{lo}, {hi}]")]
    ScoreOutOfDomain { lang: String, score: f64, lo: f64, hi: f64 },
    #[error("record {id:?} missing field {field:?}")]
    MissingField { id: String, field: String },
    #[error("unknown scorer {0:?}")]
    UnknownScorer(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

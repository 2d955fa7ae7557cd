//! `xllm`: one binary binding the dataset builders, audits, trainer,
//! evaluation harness, and report generation.
//!
//! Exit codes: 0 success, 1 pipeline failure (single-line error on
//! stderr), 2 bad flags (clap usage error).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use xllm_corpus::{bundled_registry, jsonl, InstructionRecord, PreferencePair, Registry};
use xllm_gateway::{BackendRegistry, Gateway, GatewayConfig};
use xllm_metrics::{democratization, EvalMode, ScoreKey, ScoreMatrix};
use xllm_pipeline::{
    audit_backtranslation, bundled_feedback_registry, bundled_quality_table,
    run_benchmark, run_feedback_pipeline, run_instruction_pipeline, Benchmark, BenchmarkSpec,
    EvalRecord, FeedbackConfig, InstructionConfig, QualityTable, ScorerRegistry,
};
use xllm_trainer::{
    load_checkpoint, save_checkpoint, Checkpoint, LoraAdapter, PreferenceExample, TinyLm,
    TrainStage, Trainer,
};

#[derive(Parser)]
#[command(name = "xllm", version, about = "Multilingual instruction-tuning pipelines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. With `--mock` all backends are
/// local deterministic mocks and no network is touched.
#[derive(Args)]
struct Common {
    /// Root seed for every random choice in the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use deterministic offline mock backends.
    #[arg(long)]
    mock: bool,
    /// Worker pool size for per-language parallelism.
    #[arg(long, default_value_t = 4)]
    parallel: usize,
    /// Response cache directory (resume and deduplication).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Translator backend name (default: http, or identity with --mock).
    #[arg(long)]
    translator: Option<String>,
    /// Generator backend name (default: http, or echo-seeded with --mock).
    #[arg(long)]
    generator: Option<String>,
    /// Embedder backend name (default: http, or hash with --mock).
    #[arg(long)]
    embedder: Option<String>,
}

impl Common {
    fn gateway(&self) -> Result<Gateway, String> {
        let registry = BackendRegistry::with_defaults();
        let fallback = |mock_name: &'static str| {
            if self.mock {
                mock_name.to_string()
            } else {
                "http".to_string()
            }
        };
        let options = json!({});
        let config = GatewayConfig {
            max_parallel: self.parallel.max(1),
            cache_dir: self.cache_dir.clone(),
            seed: self.seed,
            ..GatewayConfig::default()
        };
        let translator = self.translator.clone().unwrap_or_else(|| fallback("identity"));
        let generator = self.generator.clone().unwrap_or_else(|| fallback("echo-seeded"));
        let embedder = self.embedder.clone().unwrap_or_else(|| fallback("hash"));
        Ok(Gateway::new(config)
            .map_err(stringify)?
            .with_translator(registry.translator(&translator, &options).map_err(stringify)?)
            .with_generator(registry.generator(&generator, &options).map_err(stringify)?)
            .with_embedder(registry.embedder(&embedder, &options).map_err(stringify)?))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the per-language instruction dataset from English seeds.
    BuildInstructions {
        /// English seed records (JSONL).
        #[arg(long)]
        seeds: PathBuf,
        /// Output directory (one JSONL per language plus manifest).
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated language codes; defaults to the full registry.
        #[arg(long)]
        langs: Option<String>,
        /// Translation-quality threshold for response routing.
        #[arg(long, default_value_t = 10.0)]
        threshold: f64,
        /// Language registry JSONL (defaults to the bundled 100).
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Quality table JSONL (defaults to the bundled table).
        #[arg(long)]
        quality: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build the cross-lingual preference dataset.
    BuildFeedback {
        /// English seed records (JSONL).
        #[arg(long)]
        seeds: PathBuf,
        /// Output directory (one JSONL per source language plus manifest).
        #[arg(long)]
        out: PathBuf,
        /// Response scorer name (default: backend, or hash with --mock).
        #[arg(long)]
        scorer: Option<String>,
        #[arg(long, default_value_t = 2)]
        pairs_per_language: usize,
        #[arg(long, default_value_t = 4)]
        candidates: usize,
        /// Source-language registry JSONL (defaults to the bundled 30).
        #[arg(long)]
        registry: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Back-translation audit of one language's instruction file.
    Audit {
        /// The language's dataset file (JSONL).
        #[arg(long)]
        data: PathBuf,
        /// English originals (JSONL).
        #[arg(long)]
        originals: PathBuf,
        #[arg(long)]
        lang: String,
        #[arg(long, default_value_t = 50)]
        sample_size: usize,
        /// Write the full report as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Train a LoRA adapter over the tiny base model.
    Train {
        #[arg(long, value_enum)]
        stage: Stage,
        /// Training data: instruction JSONL for sft, preference JSONL for dpo.
        #[arg(long)]
        data: PathBuf,
        /// Checkpoint to continue from (required for dpo).
        #[arg(long)]
        init: Option<PathBuf>,
        /// Where to write the trained checkpoint.
        #[arg(long)]
        out: PathBuf,
        /// Training log CSV (step,loss,margin).
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = 8)]
        rank: usize,
        #[arg(long, default_value_t = 16.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.05)]
        dropout: f64,
        #[arg(long, default_value_t = 1)]
        epochs: usize,
        #[arg(long)]
        learning_rate: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        beta: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run one benchmark in one instruction-language mode.
    Eval {
        /// One of: pawsx, xcopa, flores_f, flores_t, xlsum, selfinstruct.
        #[arg(long)]
        benchmark: String,
        /// understanding or generating.
        #[arg(long)]
        mode: String,
        /// Benchmark records (JSONL).
        #[arg(long)]
        data: PathBuf,
        /// Model name recorded in the score matrix.
        #[arg(long, default_value = "model")]
        model: String,
        /// Score matrix CSV output (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Language-identifier profile directory for OTR scoring.
        #[arg(long)]
        profiles: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Aggregate reports over a score matrix CSV.
    Report {
        /// Score matrix CSV.
        #[arg(long)]
        scores: PathBuf,
        /// Print the democratization degree of one (model, benchmark, mode).
        #[arg(long)]
        democratization: bool,
        /// Print the mean of a per-language OTR CSV (language,otr).
        #[arg(long)]
        otr: Option<PathBuf>,
        #[arg(long, default_value = "model")]
        model: String,
        #[arg(long, default_value = "pawsx")]
        benchmark: String,
        #[arg(long, default_value = "understanding")]
        mode: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Sft,
    Dpo,
}

fn stringify(error: impl std::fmt::Display) -> String {
    // Single-line machine-parseable form.
    error.to_string().replace('\n', " ")
}

fn parse_langs(langs: &Option<String>, registry: &Registry) -> Vec<String> {
    match langs {
        Some(list) => list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
        None => registry.codes().map(str::to_string).collect(),
    }
}

fn load_registry(path: &Option<PathBuf>, bundled: fn() -> Registry) -> Result<Registry, String> {
    match path {
        Some(path) => Registry::load(path).map_err(stringify),
        None => Ok(bundled()),
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::BuildInstructions { seeds, out, langs, threshold, registry, quality, common } => {
            let seed_records: Vec<InstructionRecord> = jsonl::read(&seeds).map_err(stringify)?;
            let registry = load_registry(&registry, bundled_registry)?;
            let table = match quality {
                Some(path) => QualityTable::load(&path).map_err(stringify)?,
                None => bundled_quality_table(),
            };
            let langs = parse_langs(&langs, &registry);
            let mut config = InstructionConfig::new(common.seed);
            config.threshold = threshold;
            config.parallel = common.parallel;
            config.deterministic_time = common.mock;
            let gateway = common.gateway()?;
            let manifest = run_instruction_pipeline(
                &seed_records, &langs, &registry, &table, &gateway, &config, &out,
            )
            .map_err(stringify)?;
            println!(
                "build-instructions: {} languages, {} records",
                manifest.per_language_counts.len(),
                manifest.per_language_counts.values().sum::<u64>()
            );
            Ok(())
        }
        Command::BuildFeedback {
            seeds,
            out,
            scorer,
            pairs_per_language,
            candidates,
            registry,
            common,
        } => {
            let seed_records: Vec<InstructionRecord> = jsonl::read(&seeds).map_err(stringify)?;
            let registry = load_registry(&registry, bundled_feedback_registry)?;
            let scorer_name = scorer.unwrap_or_else(|| {
                if common.mock { "hash".into() } else { "backend".into() }
            });
            let scorer = ScorerRegistry::create(&scorer_name, common.seed).map_err(stringify)?;
            let mut config = FeedbackConfig::new(common.seed);
            config.pairs_per_language = pairs_per_language;
            config.candidates = candidates;
            config.parallel = common.parallel;
            config.deterministic_time = common.mock;
            config.scorer = scorer_name;
            let gateway = common.gateway()?;
            let manifest = run_feedback_pipeline(
                &seed_records, &registry, &gateway, scorer.as_ref(), &config, &out,
            )
            .map_err(stringify)?;
            println!(
                "build-feedback: {} source languages, {} pairs",
                manifest.per_language_counts.len(),
                manifest.per_language_counts.values().sum::<u64>()
            );
            Ok(())
        }
        Command::Audit { data, originals, lang, sample_size, out, common } => {
            let records: Vec<InstructionRecord> = jsonl::read(&data).map_err(stringify)?;
            let originals: Vec<InstructionRecord> = jsonl::read(&originals).map_err(stringify)?;
            let by_source: BTreeMap<String, InstructionRecord> =
                originals.into_iter().map(|r| (r.id.clone(), r)).collect();
            let gateway = common.gateway()?;
            let report = audit_backtranslation(
                &records, &by_source, &lang, sample_size, &gateway, common.seed,
            )
            .map_err(stringify)?;
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&report).map_err(stringify)?)
                    .map_err(stringify)?;
            }
            println!(
                "audit: lang={} n={} bleu={:.4}",
                report.lang, report.sample_size, report.backtranslation_bleu
            );
            Ok(())
        }
        Command::Train {
            stage,
            data,
            init,
            out,
            log,
            dim,
            rank,
            alpha,
            dropout,
            epochs,
            learning_rate,
            beta,
            common,
        } => train(
            stage, &data, init.as_deref(), &out, log.as_deref(), dim, rank, alpha, dropout,
            epochs, learning_rate, beta, &common,
        ),
        Command::Eval { benchmark, mode, data, model, out, profiles, common } => {
            let benchmark = Benchmark::parse(&benchmark)
                .ok_or_else(|| format!("unknown benchmark {benchmark:?}"))?;
            let mode =
                EvalMode::parse(&mode).ok_or_else(|| format!("unknown mode {mode:?}"))?;
            let spec = BenchmarkSpec::for_benchmark(benchmark);
            let dataset: Vec<EvalRecord> = jsonl::read(&data).map_err(stringify)?;
            let profiles = match profiles {
                Some(dir) => Some(xllm_langid::load_profiles(&dir, 512).map_err(stringify)?),
                None => None,
            };
            let gateway = common.gateway()?;
            let result = run_benchmark(
                &spec,
                &dataset,
                &gateway,
                mode,
                common.seed,
                profiles.as_ref().map(|p| p as &dyn xllm_metrics::LanguageIdentifier),
            )
            .map_err(stringify)?;
            let mut matrix = ScoreMatrix::new();
            for (lang, value) in &result.per_lang {
                matrix
                    .insert(
                        ScoreKey {
                            model: model.clone(),
                            benchmark: result.benchmark.clone(),
                            language: lang.clone(),
                            mode,
                        },
                        &result.metric,
                        *value,
                    )
                    .map_err(stringify)?;
            }
            let csv = matrix.to_csv();
            match &out {
                Some(path) => std::fs::write(path, &csv).map_err(stringify)?,
                None => print!("{csv}"),
            }
            if !result.otr.is_empty() {
                let mut otr_csv = String::from("language,otr\n");
                for (lang, value) in &result.otr {
                    otr_csv.push_str(&format!("{lang},{value}\n"));
                }
                match &out {
                    Some(path) => std::fs::write(path.with_extension("otr.csv"), &otr_csv)
                        .map_err(stringify)?,
                    None => print!("{otr_csv}"),
                }
            }
            Ok(())
        }
        Command::Report { scores, democratization: demo, otr, model, benchmark, mode } => {
            if let Some(path) = otr {
                let text = std::fs::read_to_string(&path).map_err(stringify)?;
                let mut values = Vec::new();
                for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
                    let value = line
                        .rsplit(',')
                        .next()
                        .and_then(|v| v.parse::<f64>().ok())
                        .ok_or_else(|| format!("bad otr line {line:?}"))?;
                    values.push(value);
                }
                if values.is_empty() {
                    return Err("empty otr file".into());
                }
                println!("otr-mean: {:.4}", values.iter().sum::<f64>() / values.len() as f64);
            }
            if demo {
                let text = std::fs::read_to_string(&scores).map_err(stringify)?;
                let matrix = ScoreMatrix::from_csv(&text).map_err(stringify)?;
                let mode = EvalMode::parse(&mode)
                    .ok_or_else(|| format!("unknown mode {mode:?}"))?;
                let slice = matrix.language_slice(&model, &benchmark, mode);
                let degree = democratization(&slice).map_err(stringify)?;
                println!("democratization: {degree:.2}");
            }
            Ok(())
        }
    }
}

/// Most frequent characters of the corpus, capped at the checkpoint
/// format's 64-symbol vocabulary, in stable (frequency, char) order.
fn build_vocab(texts: &[String]) -> Vec<char> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    for text in texts {
        for ch in text.chars() {
            *counts.entry(ch).or_default() += 1;
        }
    }
    let mut ranked: Vec<(char, u64)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(64);
    let mut vocab: Vec<char> = ranked.into_iter().map(|(ch, _)| ch).collect();
    vocab.sort_unstable();
    vocab
}

/// Encodes keeping only in-vocabulary characters.
fn encode_lossy(model: &TinyLm, text: &str) -> Vec<usize> {
    text.chars().filter_map(|ch| model.token_id(ch)).collect()
}

#[allow(clippy::too_many_arguments)]
fn train(
    stage: Stage,
    data: &Path,
    init: Option<&Path>,
    out: &Path,
    log: Option<&Path>,
    dim: usize,
    rank: usize,
    alpha: f64,
    dropout: f64,
    epochs: usize,
    learning_rate: Option<f64>,
    beta: f64,
    common: &Common,
) -> Result<(), String> {
    let mut log_lines = String::from("step,loss,margin\n");
    let mut step = 0u64;
    let checkpoint = match stage {
        Stage::Sft => {
            let records: Vec<InstructionRecord> = jsonl::read(data).map_err(stringify)?;
            if records.is_empty() {
                return Err("empty dataset".into());
            }
            let texts: Vec<String> = records
                .iter()
                .map(|r| match &r.input {
                    Some(input) if !input.is_empty() => {
                        format!("{}\n{}\n{}", r.instruction, input, r.output)
                    }
                    _ => format!("{}\n{}", r.instruction, r.output),
                })
                .collect();
            let (model, mut adapter) = match init {
                Some(path) => {
                    let ckpt = load_checkpoint(path).map_err(stringify)?;
                    (ckpt.model, ckpt.adapter)
                }
                None => {
                    let vocab = build_vocab(&texts);
                    let model = TinyLm::random(vocab, dim, common.seed);
                    let adapter = LoraAdapter::new(
                        dim,
                        model.vocab_size(),
                        rank,
                        alpha,
                        dropout,
                        common.seed.wrapping_add(1),
                    );
                    (model, adapter)
                }
            };
            let sequences: Vec<Vec<usize>> = texts
                .iter()
                .map(|t| encode_lossy(&model, t))
                .filter(|seq| seq.len() >= 2)
                .collect();
            if sequences.is_empty() {
                return Err("no trainable sequences after encoding".into());
            }
            let lr = learning_rate.unwrap_or(1e-4);
            let mut trainer = Trainer::new(common.seed);
            trainer.dropout_active = dropout > 0.0;
            for _ in 0..epochs {
                for batch in sequences.chunks(4) {
                    let loss =
                        trainer.sft_step(&model, &mut adapter, batch, lr).map_err(stringify)?;
                    step += 1;
                    log_lines.push_str(&format!("{step},{loss},\n"));
                }
            }
            Checkpoint { model, adapter, stage: TrainStage::Sft, seed: common.seed }
        }
        Stage::Dpo => {
            let init = init.ok_or("dpo requires --init with an sft checkpoint")?;
            let ckpt = load_checkpoint(init).map_err(stringify)?;
            let pairs: Vec<PreferencePair> = jsonl::read(data).map_err(stringify)?;
            if pairs.is_empty() {
                return Err("empty dataset".into());
            }
            let model = ckpt.model;
            let ref_adapter = ckpt.adapter.clone();
            let mut adapter = ckpt.adapter;
            let examples: Vec<PreferenceExample> = pairs
                .iter()
                .filter_map(|pair| {
                    let prompt = match &pair.input {
                        Some(input) if !input.is_empty() => {
                            format!("{}\n{}", pair.instruction, input)
                        }
                        _ => pair.instruction.clone(),
                    };
                    let example = PreferenceExample {
                        prompt: encode_lossy(&model, &prompt),
                        chosen: encode_lossy(&model, &pair.chosen),
                        rejected: encode_lossy(&model, &pair.rejected),
                    };
                    (!example.prompt.is_empty()
                        && !example.chosen.is_empty()
                        && !example.rejected.is_empty())
                    .then_some(example)
                })
                .collect();
            if examples.is_empty() {
                return Err("no trainable pairs after encoding".into());
            }
            let lr = learning_rate.unwrap_or(5e-4);
            let mut trainer = Trainer::new(common.seed);
            trainer.dropout_active = adapter.dropout > 0.0;
            for _ in 0..epochs {
                for batch in examples.chunks(8) {
                    let loss = trainer
                        .dpo_step(&model, &mut adapter, &model, Some(&ref_adapter), batch, lr, beta)
                        .map_err(stringify)?;
                    step += 1;
                    log_lines.push_str(&format!("{step},{loss},\n"));
                }
            }
            Checkpoint { model, adapter, stage: TrainStage::Dpo, seed: common.seed }
        }
    };
    save_checkpoint(out, &checkpoint).map_err(stringify)?;
    if let Some(path) = log {
        std::fs::write(path, log_lines).map_err(stringify)?;
    }
    println!("train: {step} steps, checkpoint {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

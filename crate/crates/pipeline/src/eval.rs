//! Five-benchmark evaluation harness: prompt rendering in both
//! instruction-language modes, answer extraction, per-language scoring,
//! and resource-tier aggregation.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use xllm_corpus::Registry;
use xllm_gateway::{Gateway, GenParams};
use xllm_metrics::{
    accuracy, bleu, off_target_ratio, rouge1, BleuConfig, EvalMode, LanguageIdentifier,
};

use crate::feedback::derive_seed;
use crate::instructions::ENGLISH;
use crate::PipelineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Pawsx,
    Xcopa,
    /// Translation out of English into the task language.
    FloresF,
    /// Translation from the task language into English.
    FloresT,
    Xlsum,
    Selfinstruct,
}

impl Benchmark {
    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::Pawsx => "pawsx",
            Benchmark::Xcopa => "xcopa",
            Benchmark::FloresF => "flores_f",
            Benchmark::FloresT => "flores_t",
            Benchmark::Xlsum => "xlsum",
            Benchmark::Selfinstruct => "selfinstruct",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "pawsx" => Some(Benchmark::Pawsx),
            "xcopa" => Some(Benchmark::Xcopa),
            "flores_f" => Some(Benchmark::FloresF),
            "flores_t" => Some(Benchmark::FloresT),
            "xlsum" => Some(Benchmark::Xlsum),
            "selfinstruct" => Some(Benchmark::Selfinstruct),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Accuracy,
    Bleu,
    Rouge1,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Accuracy => "accuracy",
            MetricKind::Bleu => "bleu",
            MetricKind::Rouge1 => "rouge1",
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub benchmark: Benchmark,
    pub metric: MetricKind,
    /// English prompt template; placeholders are `{field}` names looked
    /// up in each record.
    pub template: String,
    pub sample_cap: Option<usize>,
}

const PAWSX_TEMPLATE: &str = "The following are two {lang_name} sentences. \
Sentence 1: {sentence1} Sentence 2: {sentence2} \
Does sentence 1 paraphrase sentence 2? yes or no?";
const XCOPA_TEMPLATE: &str = "Here is a premise: {premise}. What is the {question}? \
Help me to pick the more plausible option -A: {choice1}, -B: {choice2}";
const SELFINSTRUCT_TEMPLATE: &str = "Instruction: {instruction}";
const XLSUM_TEMPLATE: &str = "The following is an article. Article: {article} \
Please summarize the provided article.";
const FLORES_TEMPLATE: &str = "Translate the following {source_lang} sentence from \
{source_lang} to {target_lang}. {source_lang} Sentence: {source_sentence} \
Please only return the translated {target_lang} text";

impl BenchmarkSpec {
    pub fn for_benchmark(benchmark: Benchmark) -> Self {
        let (metric, template, sample_cap) = match benchmark {
            Benchmark::Pawsx => (MetricKind::Accuracy, PAWSX_TEMPLATE, None),
            Benchmark::Xcopa => (MetricKind::Accuracy, XCOPA_TEMPLATE, None),
            Benchmark::FloresF | Benchmark::FloresT => {
                (MetricKind::Bleu, FLORES_TEMPLATE, Some(200))
            }
            Benchmark::Xlsum => (MetricKind::Rouge1, XLSUM_TEMPLATE, Some(250)),
            Benchmark::Selfinstruct => (MetricKind::Rouge1, SELFINSTRUCT_TEMPLATE, None),
        };
        BenchmarkSpec { benchmark, metric, template: template.to_string(), sample_cap }
    }

    /// Whether outputs are free-form text (eligible for OTR scoring).
    pub fn is_generation(&self) -> bool {
        self.metric != MetricKind::Accuracy
    }

    /// The language the model's output is expected to be in.
    pub fn output_lang<'a>(&self, task_lang: &'a str) -> &'a str {
        match self.benchmark {
            Benchmark::FloresT => ENGLISH,
            _ => task_lang,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    pub lang: String,
    pub fields: BTreeMap<String, String>,
    pub gold: String,
}

/// Instantiates `template` with the record's fields. Placeholders are
/// `{name}`; a missing field is an error.
pub fn render_prompt(
    spec: &BenchmarkSpec,
    record: &EvalRecord,
    template: &str,
) -> Result<String, PipelineError> {
    let _ = spec;
    let mut out = String::with_capacity(template.len());
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after.find('}').ok_or_else(|| PipelineError::MissingField {
            id: record.id.clone(),
            field: after.to_string(),
        })?;
        let name = &after[..close];
        let value = record.fields.get(name).ok_or_else(|| PipelineError::MissingField {
            id: record.id.clone(),
            field: name.to_string(),
        })?;
        out.push_str(value);
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

/// Extracts a classification label from free-form model output:
/// case-insensitive standalone "yes"/"no" tokens for pawsx, uppercase
/// standalone "A"/"B" tokens or "-A:"/"-B:" echoes for xcopa; earliest
/// occurrence wins. `None` means unparsed (scored as incorrect).
pub fn parse_choice(output: &str, spec: &BenchmarkSpec) -> Option<String> {
    match spec.benchmark {
        Benchmark::Pawsx => first_token_match(output, &["yes", "no"], false).map(|(_, l)| l),
        Benchmark::Xcopa => {
            let token = first_token_match(output, &["A", "B"], true);
            let echo = ["-A:", "-B:"]
                .iter()
                .filter_map(|marker| {
                    output.to_lowercase().find(&marker.to_lowercase()).map(|at| (at, *marker))
                })
                .min();
            match (token, echo) {
                (Some((at, label)), Some((echo_at, marker))) => {
                    Some(if at <= echo_at { label } else { marker[1..2].to_string() })
                }
                (Some((_, label)), None) => Some(label),
                (None, Some((_, marker))) => Some(marker[1..2].to_string()),
                (None, None) => None,
            }
        }
        _ => None,
    }
}

/// First standalone alphanumeric token equal to one of `labels`,
/// returned with its byte offset.
fn first_token_match(
    output: &str,
    labels: &[&str],
    case_sensitive: bool,
) -> Option<(usize, String)> {
    let mut start = None;
    let mut chars = output.char_indices().peekable();
    loop {
        let boundary = match chars.next() {
            Some((i, c)) if c.is_alphanumeric() => {
                start.get_or_insert(i);
                if chars.peek().is_some() {
                    continue;
                }
                output.len()
            }
            Some((i, _)) => i,
            None => output.len(),
        };
        if let Some(s) = start.take() {
            let token = &output[s..boundary];
            for label in labels {
                let hit = if case_sensitive {
                    token == *label
                } else {
                    token.eq_ignore_ascii_case(label)
                };
                if hit {
                    return Some((s, (*label).to_string()));
                }
            }
        }
        if boundary == output.len() {
            return None;
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchmarkResult {
    pub benchmark: String,
    pub metric: String,
    pub mode: String,
    pub per_lang: BTreeMap<String, f64>,
    pub otr: BTreeMap<String, f64>,
}

/// Runs `spec` over the dataset: groups by language, applies the seeded
/// sample cap, renders prompts per mode, generates through the gateway,
/// and scores per language (plus OTR for generation benchmarks when an
/// identifier is supplied).
pub fn run_benchmark(
    spec: &BenchmarkSpec,
    dataset: &[EvalRecord],
    gateway: &Gateway,
    mode: EvalMode,
    seed: u64,
    lang_id: Option<&dyn LanguageIdentifier>,
) -> Result<BenchmarkResult, PipelineError> {
    if dataset.is_empty() {
        return Err(PipelineError::EmptyDataset);
    }
    let mut by_lang: BTreeMap<&str, Vec<&EvalRecord>> = BTreeMap::new();
    for record in dataset {
        by_lang.entry(&record.lang).or_default().push(record);
    }
    // Understanding-mode templates are translated once per language and
    // reused; generating mode always uses the English template.
    let template_cache: Mutex<BTreeMap<String, String>> = Mutex::new(BTreeMap::new());
    let mut per_lang = BTreeMap::new();
    let mut otr = BTreeMap::new();
    for (lang, mut records) in by_lang {
        if let Some(cap) = spec.sample_cap {
            if records.len() > cap {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(&[
                    &seed.to_le_bytes(),
                    spec.benchmark.name().as_bytes(),
                    lang.as_bytes(),
                ]));
                records.shuffle(&mut rng);
                records.truncate(cap);
                records.sort_by(|a, b| a.id.cmp(&b.id));
            }
        }
        let template = match mode {
            EvalMode::Generating => spec.template.clone(),
            EvalMode::Understanding => {
                if lang == ENGLISH {
                    spec.template.clone()
                } else {
                    let mut cache = template_cache.lock().unwrap();
                    match cache.get(lang) {
                        Some(t) => t.clone(),
                        None => {
                            let t = gateway.translate(&spec.template, ENGLISH, lang)?;
                            cache.insert(lang.to_string(), t.clone());
                            t
                        }
                    }
                }
            }
        };
        let mut outputs = Vec::with_capacity(records.len());
        let mut golds = Vec::with_capacity(records.len());
        for record in &records {
            let prompt = render_prompt(spec, record, &template)?;
            let params = GenParams {
                temperature: 0.0,
                seed: derive_seed(&[&seed.to_le_bytes(), record.id.as_bytes()]),
                ..GenParams::default()
            };
            outputs.push(gateway.generate(&prompt, &params)?);
            golds.push(record.gold.clone());
        }
        let score = match spec.metric {
            MetricKind::Accuracy => {
                let predictions: Vec<String> = outputs
                    .iter()
                    .map(|o| parse_choice(o, spec).unwrap_or_default())
                    .collect();
                let golds: Vec<String> = golds.iter().map(|g| g.to_lowercase()).collect();
                let predictions: Vec<String> =
                    predictions.iter().map(|p| p.to_lowercase()).collect();
                accuracy(&predictions, &golds)?
            }
            MetricKind::Bleu => bleu(&outputs, &golds, BleuConfig::default())?.score,
            MetricKind::Rouge1 => {
                let total: f64 =
                    outputs.iter().zip(&golds).map(|(o, g)| rouge1(o, g).f1).sum();
                total / outputs.len() as f64
            }
        };
        per_lang.insert(lang.to_string(), score);
        if spec.is_generation() {
            if let Some(identifier) = lang_id {
                let expected = spec.output_lang(lang);
                otr.insert(
                    lang.to_string(),
                    off_target_ratio(&outputs, expected, identifier)?,
                );
            }
        }
    }
    Ok(BenchmarkResult {
        benchmark: spec.benchmark.name().to_string(),
        metric: spec.metric.name().to_string(),
        mode: mode.as_str().to_string(),
        per_lang,
        otr,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierAverages {
    pub low: Option<f64>,
    pub mid: Option<f64>,
    pub high: Option<f64>,
}

/// Arithmetic mean per resource tier; tiers with no languages in the
/// slice are omitted.
pub fn aggregate_by_tier(
    per_lang: &BTreeMap<String, f64>,
    registry: &Registry,
) -> Result<TierAverages, PipelineError> {
    use xllm_corpus::ResourceTier;
    let mut sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (lang, &score) in per_lang {
        let entry = registry
            .get(lang)
            .map_err(|_| PipelineError::LangNotInRegistry(lang.clone()))?;
        let slot = sums
            .entry(match entry.tier {
                ResourceTier::Low => "low",
                ResourceTier::Mid => "mid",
                ResourceTier::High => "high",
            })
            .or_insert((0.0, 0));
        slot.0 += score;
        slot.1 += 1;
    }
    let mean = |tier: &str| sums.get(tier).map(|(sum, n)| sum / *n as f64);
    Ok(TierAverages { low: mean("low"), mid: mean("mid"), high: mean("high") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use xllm_corpus::bundled_registry;
    use xllm_gateway::mocks::{ConstantTranslator, EchoGenerator, ScriptedGenerator};
    use xllm_gateway::GatewayConfig;
    use xllm_langid::{train_profiles, TrainParams};

    fn record(id: &str, lang: &str, fields: &[(&str, &str)], gold: &str) -> EvalRecord {
        EvalRecord {
            id: id.into(),
            lang: lang.into(),
            fields: fields.iter().map(|(k, v)| ((*k).to_string(), (*v).to_string())).collect(),
            gold: gold.into(),
        }
    }

    fn scripted(outputs: &[&str]) -> Gateway {
        Gateway::new(GatewayConfig::default())
            .unwrap()
            .with_generator(Box::new(ScriptedGenerator::new(
                outputs.iter().map(|s| s.to_string()).collect(),
            )))
    }

    #[test]
    fn flores_prompt_matches_the_documented_rendering() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::FloresF);
        let rec = record(
            "r1",
            "german",
            &[
                ("source_lang", "English"),
                ("target_lang", "German"),
                ("source_sentence", "Hello."),
            ],
            "Hallo.",
        );
        let prompt = render_prompt(&spec, &rec, &spec.template).unwrap();
        assert_eq!(
            prompt,
            "Translate the following English sentence from English to German. \
             English Sentence: Hello. Please only return the translated German text"
        );
    }

    #[test]
    fn pawsx_prompt_starts_with_the_documented_opening() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Pawsx);
        let rec = record(
            "r1",
            "french",
            &[("lang_name", "French"), ("sentence1", "s1"), ("sentence2", "s2")],
            "yes",
        );
        let prompt = render_prompt(&spec, &rec, &spec.template).unwrap();
        assert!(prompt.starts_with("The following are two French sentences."), "{prompt}");
        assert!(prompt.ends_with("Does sentence 1 paraphrase sentence 2? yes or no?"));
    }

    #[test]
    fn missing_field_is_an_error() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Xlsum);
        let rec = record("r1", "french", &[], "summary");
        assert!(matches!(
            render_prompt(&spec, &rec, &spec.template),
            Err(PipelineError::MissingField { ref field, .. }) if field == "article"
        ));
    }

    #[test]
    fn parse_choice_yes_no_rules() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Pawsx);
        assert_eq!(parse_choice("Yes, they are paraphrases.", &spec).as_deref(), Some("yes"));
        assert_eq!(parse_choice("Definitely NO here", &spec).as_deref(), Some("no"));
        assert_eq!(parse_choice("I cannot decide.", &spec), None);
    }

    #[test]
    fn parse_choice_a_b_rules() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Xcopa);
        assert_eq!(parse_choice("The answer is B.", &spec).as_deref(), Some("B"));
        assert_eq!(parse_choice("-A: the first option", &spec).as_deref(), Some("A"));
        assert_eq!(parse_choice("a lowercase article only", &spec), None);
        assert_eq!(parse_choice("B first, then -A: later", &spec).as_deref(), Some("B"));
    }

    #[test]
    fn metric_assignments_and_caps_are_fixed() {
        assert_eq!(BenchmarkSpec::for_benchmark(Benchmark::Pawsx).metric, MetricKind::Accuracy);
        assert_eq!(BenchmarkSpec::for_benchmark(Benchmark::Xcopa).metric, MetricKind::Accuracy);
        assert_eq!(BenchmarkSpec::for_benchmark(Benchmark::FloresF).sample_cap, Some(200));
        assert_eq!(BenchmarkSpec::for_benchmark(Benchmark::Xlsum).sample_cap, Some(250));
        assert_eq!(
            BenchmarkSpec::for_benchmark(Benchmark::Selfinstruct).metric,
            MetricKind::Rouge1
        );
    }

    #[test]
    fn echo_reference_mock_attains_every_maximum() {
        // Choice benchmark: gold echoed verbatim parses back to itself.
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Pawsx);
        let dataset = vec![
            record("p1", "german", &[("lang_name", "German"), ("sentence1", "x"), ("sentence2", "y")], "yes"),
            record("p2", "german", &[("lang_name", "German"), ("sentence1", "x"), ("sentence2", "z")], "no"),
        ];
        let gateway = scripted(&["yes", "no"]);
        let result =
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Generating, 1, None).unwrap();
        assert_eq!(result.per_lang["german"], 1.0);

        // Translation benchmark: gold echoed verbatim scores BLEU 100.
        let spec = BenchmarkSpec::for_benchmark(Benchmark::FloresF);
        let gold = "der Hund rennt schnell durch den Park";
        let dataset = vec![record(
            "f1",
            "german",
            &[("source_lang", "English"), ("target_lang", "German"), ("source_sentence", "x")],
            gold,
        )];
        let gateway = scripted(&[gold]);
        let result =
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Generating, 1, None).unwrap();
        assert!((result.per_lang["german"] - 100.0).abs() < 1e-9);

        // Summarization: identical texts give ROUGE-1 F1 of 1.
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Xlsum);
        let dataset =
            vec![record("x1", "french", &[("article", "long text")], "the summary here")];
        let gateway = scripted(&["the summary here"]);
        let result =
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Generating, 1, None).unwrap();
        assert!((result.per_lang["french"] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn echo_reference_maximum_holds_in_understanding_mode() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Pawsx);
        let dataset = vec![record(
            "p1",
            "german",
            &[("lang_name", "German"), ("sentence1", "x"), ("sentence2", "y")],
            "yes",
        )];
        let gateway = Gateway::new(GatewayConfig::default())
            .unwrap()
            .with_translator(Box::new(xllm_gateway::mocks::IdentityTranslator::new()))
            .with_generator(Box::new(ScriptedGenerator::new(vec!["yes".into()])));
        let result =
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Understanding, 1, None).unwrap();
        assert_eq!(result.per_lang["german"], 1.0);
    }

    #[test]
    fn constant_wrong_mock_scores_zero() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Pawsx);
        let dataset = vec![record(
            "p1",
            "german",
            &[("lang_name", "German"), ("sentence1", "x"), ("sentence2", "y")],
            "yes",
        )];
        let gateway = scripted(&["I cannot decide."]);
        let result =
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Generating, 1, None).unwrap();
        assert_eq!(result.per_lang["german"], 0.0);
    }

    #[test]
    fn understanding_mode_with_identity_translator_equals_english_template() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Xlsum);
        let rec = record("r1", "german", &[("article", "ein Artikel")], "g");
        // The identity mock leaves the template untouched, so rendering
        // with the "translated" template matches the English rendering.
        let gateway = Gateway::new(GatewayConfig::default())
            .unwrap()
            .with_translator(Box::new(xllm_gateway::mocks::IdentityTranslator::new()));
        let translated = gateway.translate(&spec.template, ENGLISH, "german").unwrap();
        assert_eq!(
            render_prompt(&spec, &rec, &translated).unwrap(),
            render_prompt(&spec, &rec, &spec.template).unwrap()
        );
    }

    #[test]
    fn understanding_mode_translates_template_once_per_language() {
        let spec = BenchmarkSpec::for_benchmark(Benchmark::Xlsum);
        let dataset = vec![
            record("a", "german", &[("article", "eins")], "x"),
            record("b", "german", &[("article", "zwei")], "y"),
        ];
        let gateway = Gateway::new(GatewayConfig::default())
            .unwrap()
            .with_translator(Box::new(ConstantTranslator::new("Artikel: {article}")))
            .with_generator(Box::new(EchoGenerator::new()));
        run_benchmark(&spec, &dataset, &gateway, EvalMode::Understanding, 1, None).unwrap();
        let calls = gateway.calls_by_kind();
        assert_eq!(calls.get("translate"), Some(&1));
        assert_eq!(calls.get("generate"), Some(&2));
    }

    #[test]
    fn english_emitting_mock_on_german_flores_gives_otr_100() {
        let corpora = std::collections::BTreeMap::from([
            (
                "english".to_string(),
                "the quick brown fox jumps over the lazy dog and then the \
                 weather was quite pleasant this morning near the harbour"
                    .to_string(),
            ),
            (
                "german".to_string(),
                "der schnelle braune Fuchs springt über den faulen Hund und \
                 dann war das Wetter heute Morgen am Hafen recht angenehm"
                    .to_string(),
            ),
        ]);
        let profiles = train_profiles(&corpora, TrainParams::default()).unwrap();
        let spec = BenchmarkSpec::for_benchmark(Benchmark::FloresF);
        let dataset = vec![record(
            "f1",
            "german",
            &[("source_lang", "English"), ("target_lang", "German"), ("source_sentence", "x")],
            "irrelevant",
        )];
        let gateway = scripted(&["the quick brown fox jumps over the lazy dog"]);
        let result = run_benchmark(
            &spec,
            &dataset,
            &gateway,
            EvalMode::Generating,
            1,
            Some(&profiles),
        )
        .unwrap();
        assert_eq!(result.otr["german"], 100.0);
    }

    #[test]
    fn sample_cap_is_seeded_and_stable() {
        let mut spec = BenchmarkSpec::for_benchmark(Benchmark::Xlsum);
        spec.sample_cap = Some(2);
        let dataset: Vec<EvalRecord> = (0..5)
            .map(|i| record(&format!("r{i}"), "french", &[("article", "a")], "gold text"))
            .collect();
        let run = || {
            let gateway = Gateway::new(GatewayConfig::default())
                .unwrap()
                .with_generator(Box::new(EchoGenerator::new()));
            run_benchmark(&spec, &dataset, &gateway, EvalMode::Generating, 9, None).unwrap()
        };
        let first = run();
        let second = run();
        assert_eq!(first.per_lang, second.per_lang);
    }

    #[test]
    fn tier_aggregation_matches_hand_arithmetic() {
        let registry = bundled_registry();
        // Pick known-tier languages from the registry itself.
        let mut low = None;
        let mut high = Vec::new();
        for entry in registry.entries() {
            match entry.tier {
                xllm_corpus::ResourceTier::Low if low.is_none() => {
                    low = Some(entry.code.clone())
                }
                xllm_corpus::ResourceTier::High if high.len() < 2 => {
                    high.push(entry.code.clone())
                }
                _ => {}
            }
        }
        let scores = BTreeMap::from([
            (low.clone().unwrap(), 2.0),
            (high[0].clone(), 4.0),
            (high[1].clone(), 10.0),
        ]);
        let tiers = aggregate_by_tier(&scores, &registry).unwrap();
        assert_eq!(tiers.low, Some(2.0));
        assert_eq!(tiers.high, Some(7.0));
        assert_eq!(tiers.mid, None);
    }

    #[test]
    fn unregistered_language_fails_aggregation() {
        let registry = bundled_registry();
        let scores = BTreeMap::from([("klingon".to_string(), 1.0)]);
        assert!(matches!(
            aggregate_by_tier(&scores, &registry),
            Err(PipelineError::LangNotInRegistry(_))
        ));
    }
}

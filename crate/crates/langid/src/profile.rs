use std::collections::{BTreeMap, HashMap};

use sha2::{Digest, Sha256};
use xllm_metrics::LanguageIdentifier;

use crate::LangIdError;

#[derive(Debug, Clone, Copy)]
pub struct TrainParams {
    /// n-gram order.
    pub n: usize,
    /// Add-alpha smoothing constant.
    pub alpha: f64,
    /// Scoring looks at the first `max_chars` characters only.
    pub max_chars: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self { n: 3, alpha: 0.5, max_chars: 512 }
    }
}

#[derive(Debug, Clone)]
pub struct LangProfile {
    pub lang: String,
    pub n: usize,
    pub alpha: f64,
    /// Log-probability per seen n-gram, add-alpha smoothed.
    pub log_probs: BTreeMap<String, f64>,
    /// Log-probability assigned to any unseen n-gram.
    pub fallback_log_prob: f64,
    pub corpus_digest: String,
}

fn char_ngrams(text: &str, n: usize) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() < n {
        return vec![chars.iter().collect()];
    }
    chars.windows(n).map(|w| w.iter().collect()).collect()
}

/// One profile per language; deterministic given inputs.
pub fn train_profiles(
    corpora: &BTreeMap<String, String>,
    params: TrainParams,
) -> Result<ProfileSet, LangIdError> {
    if corpora.len() < 2 {
        return Err(LangIdError::TooFewLanguages(corpora.len()));
    }
    let mut profiles = Vec::with_capacity(corpora.len());
    for (lang, corpus) in corpora {
        if corpus.is_empty() {
            return Err(LangIdError::EmptyCorpus(lang.clone()));
        }
        let mut counts: HashMap<String, u64> = HashMap::new();
        for gram in char_ngrams(corpus, params.n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
        let total: u64 = counts.values().sum();
        // One extra vocabulary slot reserves smoothing mass for unseen grams.
        let denom = total as f64 + params.alpha * (counts.len() as f64 + 1.0);
        let log_probs: BTreeMap<String, f64> = counts
            .into_iter()
            .map(|(gram, count)| (gram, ((count as f64 + params.alpha) / denom).ln()))
            .collect();
        profiles.push(LangProfile {
            lang: lang.clone(),
            n: params.n,
            alpha: params.alpha,
            log_probs,
            fallback_log_prob: (params.alpha / denom).ln(),
            corpus_digest: hex::encode(Sha256::digest(corpus.as_bytes())),
        });
    }
    Ok(ProfileSet { profiles, max_chars: params.max_chars })
}

#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub profiles: Vec<LangProfile>,
    pub max_chars: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    pub lang: String,
    /// Best minus second-best average log-likelihood.
    pub margin: f64,
}

impl ProfileSet {
    pub fn languages(&self) -> impl Iterator<Item = &str> {
        self.profiles.iter().map(|p| p.lang.as_str())
    }
}

fn avg_log_likelihood(profile: &LangProfile, text: &str, max_chars: usize) -> f64 {
    let truncated: String = text.chars().take(max_chars).collect();
    let grams = char_ngrams(&truncated, profile.n);
    let sum: f64 = grams
        .iter()
        .map(|g| profile.log_probs.get(g).copied().unwrap_or(profile.fallback_log_prob))
        .sum();
    sum / grams.len() as f64
}

/// Argmax average log-likelihood; ties broken by lexicographic language
/// code.
pub fn identify(text: &str, profiles: &ProfileSet) -> Result<Identification, LangIdError> {
    if text.is_empty() {
        return Err(LangIdError::EmptyText);
    }
    if profiles.profiles.is_empty() {
        return Err(LangIdError::NoProfiles);
    }
    let mut scored: Vec<(f64, &str)> = profiles
        .profiles
        .iter()
        .map(|p| (avg_log_likelihood(p, text, profiles.max_chars), p.lang.as_str()))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(b.1)));
    let margin = if scored.len() > 1 { scored[0].0 - scored[1].0 } else { f64::INFINITY };
    Ok(Identification { lang: scored[0].1.to_string(), margin })
}

impl LanguageIdentifier for ProfileSet {
    fn identify(&self, text: &str) -> Option<String> {
        identify(text, self).ok().map(|id| id.lang)
    }

    fn supports(&self, lang: &str) -> bool {
        self.profiles.iter().any(|p| p.lang == lang)
    }
}

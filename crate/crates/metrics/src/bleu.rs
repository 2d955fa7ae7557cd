//! Corpus-level BLEU-4 with a 13a-style tokenizer, case preserved.

use std::collections::HashMap;

use crate::MetricError;

/// Zero-count handling for the modified n-gram precisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Smoothing {
    /// Any zero n-gram count forces the score to 0.
    None,
    /// Exponential smoothing: each zero count n halves the floor
    /// 1/(2^k * total_n).
    #[default]
    Exp,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BleuConfig {
    pub smoothing: Smoothing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BleuReport {
    /// 0..100.
    pub score: f64,
    /// Modified precisions p1..p4.
    pub precisions: [f64; 4],
    pub brevity_penalty: f64,
    pub hypothesis_len: usize,
    pub reference_len: usize,
}

/// 13a-style tokenization: unescape the four XML entities, put spaces
/// around every char that is not alphanumeric or whitespace except a
/// period/comma flanked by digits, then collapse whitespace.
pub fn tokenize_13a(text: &str) -> Vec<String> {
    let unescaped = text
        .replace("&quot;", "\"")
        .replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">");
    let chars: Vec<char> = unescaped.chars().collect();
    let mut spaced = String::with_capacity(unescaped.len() + 16);
    for (i, &ch) in chars.iter().enumerate() {
        if ch.is_alphanumeric() || ch.is_whitespace() {
            spaced.push(ch);
        } else if (ch == '.' || ch == ',')
            && i > 0
            && i + 1 < chars.len()
            && chars[i - 1].is_ascii_digit()
            && chars[i + 1].is_ascii_digit()
        {
            spaced.push(ch);
        } else {
            spaced.push(' ');
            spaced.push(ch);
            spaced.push(' ');
        }
    }
    spaced.split_whitespace().map(str::to_string).collect()
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts: HashMap<&[String], u64> = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

pub fn bleu(
    hypotheses: &[String],
    references: &[String],
    config: BleuConfig,
) -> Result<BleuReport, MetricError> {
    if hypotheses.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    if hypotheses.len() != references.len() {
        return Err(MetricError::LengthMismatch(hypotheses.len(), references.len()));
    }
    let mut correct = [0u64; 4];
    let mut total = [0u64; 4];
    let mut hyp_len = 0usize;
    let mut ref_len = 0usize;
    for (i, (hyp, reference)) in hypotheses.iter().zip(references).enumerate() {
        if reference.trim().is_empty() {
            return Err(MetricError::EmptyReference(i));
        }
        let hyp_tokens = tokenize_13a(hyp);
        let ref_tokens = tokenize_13a(reference);
        hyp_len += hyp_tokens.len();
        ref_len += ref_tokens.len();
        for n in 1..=4 {
            let hyp_grams = ngram_counts(&hyp_tokens, n);
            let ref_grams = ngram_counts(&ref_tokens, n);
            for (gram, &count) in &hyp_grams {
                total[n - 1] += count;
                let clip = ref_grams.get(gram).copied().unwrap_or(0);
                correct[n - 1] += count.min(clip);
            }
        }
    }
    let mut precisions = [0.0f64; 4];
    let mut smooth = 1.0f64;
    let mut any_zero = false;
    for n in 0..4 {
        let denom = total[n].max(1) as f64;
        if correct[n] == 0 {
            any_zero = true;
            smooth *= 2.0;
            precisions[n] = 1.0 / (smooth * denom);
        } else {
            precisions[n] = correct[n] as f64 / denom;
        }
    }
    let brevity_penalty = if hyp_len == 0 {
        0.0
    } else if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    let score = if hyp_len == 0 || (any_zero && config.smoothing == Smoothing::None) {
        0.0
    } else {
        let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / 4.0;
        brevity_penalty * log_mean.exp() * 100.0
    };
    // Report raw zero precisions under none-smoothing.
    if config.smoothing == Smoothing::None {
        for n in 0..4 {
            if correct[n] == 0 {
                precisions[n] = 0.0;
            }
        }
    }
    Ok(BleuReport {
        score,
        precisions,
        brevity_penalty,
        hypothesis_len: hyp_len,
        reference_len: ref_len,
    })
}

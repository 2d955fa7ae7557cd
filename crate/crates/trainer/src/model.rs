//! Tiny next-character bigram language model with frozen base weights.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use sha2::{Digest, Sha256};

use crate::lora::LoraAdapter;
use crate::matrix::Matrix;
use crate::TrainError;

#[derive(Debug, Clone)]
pub struct TinyLm {
    pub vocab: Vec<char>,
    pub dim: usize,
    /// Embedding matrix, V x d. Frozen.
    pub embed: Matrix,
    /// Output matrix, d x V. Frozen; LoRA adapts it.
    pub output: Matrix,
}

impl TinyLm {
    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Random Gaussian init, deterministic per seed.
    pub fn random(vocab: Vec<char>, dim: usize, seed: u64) -> Self {
        assert!(vocab.len() <= 64, "vocabulary capped at 64 characters");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 0.5).unwrap();
        let v = vocab.len();
        let embed = Matrix::from_fn(v, dim, |_, _| normal.sample(&mut rng));
        let output = Matrix::from_fn(dim, v, |_, _| normal.sample(&mut rng));
        Self { vocab, dim, embed, output }
    }

    /// All-zero weights: the next-token distribution is uniform.
    pub fn uniform(vocab: Vec<char>, dim: usize) -> Self {
        let v = vocab.len();
        Self { vocab, dim, embed: Matrix::zeros(v, dim), output: Matrix::zeros(dim, v) }
    }

    pub fn token_id(&self, ch: char) -> Option<usize> {
        self.vocab.iter().position(|&c| c == ch)
    }

    pub fn encode(&self, text: &str) -> Result<Vec<usize>, TrainError> {
        text.chars()
            .map(|ch| self.token_id(ch).ok_or(TrainError::OutOfVocab(usize::MAX, self.vocab.len())))
            .collect()
    }

    /// Effective output matrix with the adapter applied (dropout off).
    pub fn effective_output(&self, adapter: Option<&LoraAdapter>) -> Matrix {
        match adapter {
            None => self.output.clone(),
            Some(a) => {
                let mut merged = self.output.clone();
                merged.add_assign(&a.delta());
                merged
            }
        }
    }

    /// Logits for the next token given context token `id`, under the
    /// provided effective output matrix.
    pub fn logits_with(&self, effective: &Matrix, id: usize) -> Vec<f64> {
        let h = self.embed.row(id);
        let v = self.vocab_size();
        let mut logits = vec![0.0; v];
        for (k, &hk) in h.iter().enumerate() {
            if hk == 0.0 {
                continue;
            }
            let row = effective.row(k);
            for (c, l) in logits.iter_mut().enumerate() {
                *l += hk * row[c];
            }
        }
        logits
    }

    /// Digest over the base weight bytes; used by freeze-contract tests.
    pub fn weight_digest(&self) -> String {
        let mut hasher = Sha256::new();
        for value in self.embed.data.iter().chain(&self.output.data) {
            hasher.update(value.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Numerically stable log-softmax.
pub fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::MIN, f64::max);
    let log_sum = logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln() + max;
    logits.iter().map(|l| l - log_sum).collect()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    log_softmax(logits).iter().map(|l| l.exp()).collect()
}

/// Sum over positions t of log p(x_{t+1} | x_t); always <= 0.
pub fn sequence_logprob(
    model: &TinyLm,
    adapter: Option<&LoraAdapter>,
    ids: &[usize],
) -> Result<f64, TrainError> {
    if ids.len() < 2 {
        return Err(TrainError::SequenceTooShort(ids.len()));
    }
    let v = model.vocab_size();
    if let Some(&bad) = ids.iter().find(|&&id| id >= v) {
        return Err(TrainError::OutOfVocab(bad, v));
    }
    let effective = model.effective_output(adapter);
    let mut total = 0.0;
    for window in ids.windows(2) {
        let logits = model.logits_with(&effective, window[0]);
        total += log_softmax(&logits)[window[1]];
    }
    Ok(total)
}

//! Low-rank adapter over the model's output matrix:
//! W' = W + (alpha/r) * B * A with A: r x V, B: d x r.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::matrix::Matrix;
use crate::model::TinyLm;
use crate::TrainError;

#[derive(Debug, Clone)]
pub struct LoraAdapter {
    pub rank: usize,
    pub alpha: f64,
    pub dropout: f64,
    /// r x V, Gaussian(0, 0.02) at init.
    pub down: Matrix,
    /// d x r, zero at init so the adapted model starts identical to base.
    pub up: Matrix,
}

impl LoraAdapter {
    pub fn new(dim: usize, vocab_size: usize, rank: usize, alpha: f64, dropout: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, 0.02).unwrap();
        Self {
            rank,
            alpha,
            dropout,
            down: Matrix::from_fn(rank, vocab_size, |_, _| normal.sample(&mut rng)),
            up: Matrix::zeros(dim, rank),
        }
    }

    pub fn scale(&self) -> f64 {
        self.alpha / self.rank as f64
    }

    /// Delta W = (alpha/r) * B * A, shaped d x V.
    pub fn delta(&self) -> Matrix {
        self.up.matmul(&self.down).scaled(self.scale())
    }

    pub fn param_count(&self) -> usize {
        self.down.data.len() + self.up.data.len()
    }

    /// Flattened trainable parameters: A then B.
    pub fn flatten(&self) -> Vec<f64> {
        let mut params = self.down.data.clone();
        params.extend_from_slice(&self.up.data);
        params
    }

    pub fn unflatten(&mut self, params: &[f64]) {
        assert_eq!(params.len(), self.param_count());
        let split = self.down.data.len();
        self.down.data.copy_from_slice(&params[..split]);
        self.up.data.copy_from_slice(&params[split..]);
    }
}

/// W + (alpha/r) * B * A. The merged model with no adapter produces
/// logits identical to base + adapter (dropout disabled).
pub fn merge_lora(model: &TinyLm, adapter: &LoraAdapter) -> Result<TinyLm, TrainError> {
    if adapter.down.cols != model.vocab_size() || adapter.up.rows != model.dim {
        return Err(TrainError::ShapeMismatch(format!(
            "adapter ({}x{} / {}x{}) vs model d={} V={}",
            adapter.up.rows,
            adapter.up.cols,
            adapter.down.rows,
            adapter.down.cols,
            model.dim,
            model.vocab_size()
        )));
    }
    let mut merged = model.clone();
    merged.output.add_assign(&adapter.delta());
    Ok(merged)
}

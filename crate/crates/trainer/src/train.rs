//! SFT and DPO steps over a frozen base model; only the adapter moves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lora::LoraAdapter;
use crate::matrix::Matrix;
use crate::model::{log_softmax, softmax, TinyLm};
use crate::TrainError;

/// Training hyper-parameters. Defaults mirror the multilingual-tuning
/// recipe where transferable: r=8, alpha=16, dropout 0.05, one epoch,
/// SFT lr 1e-4, DPO lr 5e-4, beta 0.1.
#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub beta: f64,
    pub max_seq_len: usize,
    pub seed: u64,
}

impl TrainConfig {
    pub fn sft_default(seed: u64) -> Self {
        Self { learning_rate: 1e-4, batch_size: 4, epochs: 1, beta: 0.1, max_seq_len: 1024, seed }
    }

    pub fn dpo_default(seed: u64) -> Self {
        Self { learning_rate: 5e-4, batch_size: 8, epochs: 1, beta: 0.1, max_seq_len: 1024, seed }
    }
}

#[derive(Debug, Clone)]
pub struct PreferenceExample {
    pub prompt: Vec<usize>,
    pub chosen: Vec<usize>,
    pub rejected: Vec<usize>,
}

/// Log-probability of `continuation` after `prompt` (prompt transitions
/// are conditioning only, not scored).
pub fn continuation_logprob(
    model: &TinyLm,
    adapter: Option<&LoraAdapter>,
    prompt: &[usize],
    continuation: &[usize],
) -> Result<f64, TrainError> {
    if prompt.is_empty() {
        return Err(TrainError::EmptyPrompt);
    }
    if continuation.is_empty() {
        return Err(TrainError::EmptyContinuation);
    }
    let effective = model.effective_output(adapter);
    Ok(continuation_logprob_with(model, &effective, prompt, continuation))
}

fn continuation_logprob_with(
    model: &TinyLm,
    effective: &Matrix,
    prompt: &[usize],
    continuation: &[usize],
) -> f64 {
    let mut context = prompt[prompt.len() - 1];
    let mut total = 0.0;
    for &target in continuation {
        let logits = model.logits_with(effective, context);
        total += log_softmax(&logits)[target];
        context = target;
    }
    total
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// -ln(sigmoid(x)), computed without overflow.
fn softplus_neg(x: f64) -> f64 {
    // -ln sigmoid(x) = softplus(-x)
    let t = -x;
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// DPO loss for one preference pair. Returns (loss, margin) where margin
/// is the bracketed policy-vs-reference log-ratio difference.
pub fn dpo_loss(
    policy_model: &TinyLm,
    policy_adapter: Option<&LoraAdapter>,
    ref_model: &TinyLm,
    ref_adapter: Option<&LoraAdapter>,
    pair: &PreferenceExample,
    beta: f64,
) -> Result<(f64, f64), TrainError> {
    let pol_w = continuation_logprob(policy_model, policy_adapter, &pair.prompt, &pair.chosen)?;
    let pol_l = continuation_logprob(policy_model, policy_adapter, &pair.prompt, &pair.rejected)?;
    let ref_w = continuation_logprob(ref_model, ref_adapter, &pair.prompt, &pair.chosen)?;
    let ref_l = continuation_logprob(ref_model, ref_adapter, &pair.prompt, &pair.rejected)?;
    let margin = (pol_w - pol_l) - (ref_w - ref_l);
    let loss = softplus_neg(beta * margin);
    if !loss.is_finite() {
        return Err(TrainError::NonFiniteLoss);
    }
    Ok((loss, margin))
}

/// Owns the training rng; dropout on the adapter path is active only
/// when `dropout_active` is set.
pub struct Trainer {
    rng: ChaCha8Rng,
    pub dropout_active: bool,
}

impl Trainer {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), dropout_active: false }
    }

    /// Inverted-dropout mask over the adapter delta, or None when inactive.
    fn dropout_mask(&mut self, adapter: &LoraAdapter, dim: usize, vocab: usize) -> Option<Matrix> {
        if !self.dropout_active || adapter.dropout <= 0.0 {
            return None;
        }
        let keep = 1.0 - adapter.dropout;
        Some(Matrix::from_fn(dim, vocab, |_, _| {
            if self.rng.gen::<f64>() < keep {
                1.0 / keep
            } else {
                0.0
            }
        }))
    }

    fn effective_with_mask(
        model: &TinyLm,
        adapter: &LoraAdapter,
        mask: Option<&Matrix>,
    ) -> Matrix {
        let mut delta = adapter.delta();
        if let Some(mask) = mask {
            for (d, m) in delta.data.iter_mut().zip(&mask.data) {
                *d *= m;
            }
        }
        let mut effective = model.output.clone();
        effective.add_assign(&delta);
        effective
    }

    /// Chain a d x V gradient on the effective output matrix down to the
    /// adapter factors and apply one gradient-descent step.
    fn apply_delta_grad(
        adapter: &mut LoraAdapter,
        mut grad_effective: Matrix,
        mask: Option<&Matrix>,
        lr: f64,
    ) {
        if let Some(mask) = mask {
            for (g, m) in grad_effective.data.iter_mut().zip(&mask.data) {
                *g *= m;
            }
        }
        let scale = adapter.scale();
        let grad_down = adapter.up.transpose().matmul(&grad_effective).scaled(scale);
        let grad_up = grad_effective.matmul(&adapter.down.transpose()).scaled(scale);
        for (param, grad) in adapter.down.data.iter_mut().zip(&grad_down.data) {
            *param -= lr * grad;
        }
        for (param, grad) in adapter.up.data.iter_mut().zip(&grad_up.data) {
            *param -= lr * grad;
        }
    }

    /// One plain gradient-descent step on the adapter for a batch of
    /// token sequences. Returns the pre-step mean per-token
    /// cross-entropy. Base weights are untouched.
    pub fn sft_step(
        &mut self,
        model: &TinyLm,
        adapter: &mut LoraAdapter,
        batch: &[Vec<usize>],
        lr: f64,
    ) -> Result<f64, TrainError> {
        if batch.is_empty() {
            return Err(TrainError::EmptyBatch);
        }
        let v = model.vocab_size();
        for seq in batch {
            if seq.len() < 2 {
                return Err(TrainError::SequenceTooShort(seq.len()));
            }
            if let Some(&bad) = seq.iter().find(|&&id| id >= v) {
                return Err(TrainError::OutOfVocab(bad, v));
            }
        }
        let mask = self.dropout_mask(adapter, model.dim, v);
        let effective = Self::effective_with_mask(model, adapter, mask.as_ref());

        let mut grad = Matrix::zeros(model.dim, v);
        let mut loss_sum = 0.0;
        let mut transitions = 0usize;
        for seq in batch {
            for window in seq.windows(2) {
                let (context, target) = (window[0], window[1]);
                let logits = model.logits_with(&effective, context);
                let log_probs = log_softmax(&logits);
                loss_sum -= log_probs[target];
                transitions += 1;
                let probs: Vec<f64> = log_probs.iter().map(|l| l.exp()).collect();
                let h = model.embed.row(context);
                for (k, &hk) in h.iter().enumerate() {
                    if hk == 0.0 {
                        continue;
                    }
                    for (c, &p) in probs.iter().enumerate() {
                        let indicator = if c == target { 1.0 } else { 0.0 };
                        grad.add_at(k, c, hk * (p - indicator));
                    }
                }
            }
        }
        let inv = 1.0 / transitions as f64;
        let grad = grad.scaled(inv);
        Self::apply_delta_grad(adapter, grad, mask.as_ref(), lr);
        Ok(loss_sum * inv)
    }

    /// One DPO gradient-descent step on the policy adapter; the reference
    /// (base and adapter) stays frozen. Returns the pre-step mean loss.
    #[allow(clippy::too_many_arguments)]
    pub fn dpo_step(
        &mut self,
        policy_model: &TinyLm,
        policy_adapter: &mut LoraAdapter,
        ref_model: &TinyLm,
        ref_adapter: Option<&LoraAdapter>,
        batch: &[PreferenceExample],
        lr: f64,
        beta: f64,
    ) -> Result<f64, TrainError> {
        if batch.is_empty() {
            return Err(TrainError::EmptyBatch);
        }
        let v = policy_model.vocab_size();
        let mask = self.dropout_mask(policy_adapter, policy_model.dim, v);
        let effective = Self::effective_with_mask(policy_model, policy_adapter, mask.as_ref());
        let ref_effective = ref_model.effective_output(ref_adapter);

        let mut grad = Matrix::zeros(policy_model.dim, v);
        let mut loss_sum = 0.0;
        for pair in batch {
            if pair.prompt.is_empty() {
                return Err(TrainError::EmptyPrompt);
            }
            if pair.chosen.is_empty() || pair.rejected.is_empty() {
                return Err(TrainError::EmptyContinuation);
            }
            let pol_w =
                continuation_logprob_with(policy_model, &effective, &pair.prompt, &pair.chosen);
            let pol_l =
                continuation_logprob_with(policy_model, &effective, &pair.prompt, &pair.rejected);
            let ref_w =
                continuation_logprob_with(ref_model, &ref_effective, &pair.prompt, &pair.chosen);
            let ref_l =
                continuation_logprob_with(ref_model, &ref_effective, &pair.prompt, &pair.rejected);
            let margin = (pol_w - pol_l) - (ref_w - ref_l);
            loss_sum += softplus_neg(beta * margin);
            // dL/dmargin = -beta * sigmoid(-beta * margin).
            let coeff = -beta * sigmoid(-beta * margin);
            accumulate_logprob_grad(policy_model, &effective, pair, &mut grad, coeff);
        }
        if !loss_sum.is_finite() {
            return Err(TrainError::NonFiniteLoss);
        }
        let inv = 1.0 / batch.len() as f64;
        let grad = grad.scaled(inv);
        Self::apply_delta_grad(policy_adapter, grad, mask.as_ref(), lr);
        Ok(loss_sum * inv)
    }
}

/// Adds coeff * d(margin)/dW' for one pair, where margin's policy terms
/// are log p(chosen) - log p(rejected).
fn accumulate_logprob_grad(
    model: &TinyLm,
    effective: &Matrix,
    pair: &PreferenceExample,
    grad: &mut Matrix,
    coeff: f64,
) {
    for (continuation, sign) in [(&pair.chosen, 1.0), (&pair.rejected, -1.0)] {
        let mut context = pair.prompt[pair.prompt.len() - 1];
        for &target in continuation.iter() {
            let logits = model.logits_with(effective, context);
            let probs = softmax(&logits);
            let h = model.embed.row(context);
            for (k, &hk) in h.iter().enumerate() {
                if hk == 0.0 {
                    continue;
                }
                for (c, &p) in probs.iter().enumerate() {
                    let indicator = if c == target { 1.0 } else { 0.0 };
                    grad.add_at(k, c, coeff * sign * hk * (indicator - p));
                }
            }
            context = target;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model_and_adapter(seed: u64) -> (TinyLm, LoraAdapter) {
        let model = TinyLm::random("abcdef".chars().collect(), 4, seed);
        let adapter = LoraAdapter::new(model.dim, model.vocab_size(), 2, 16.0, 0.05, seed + 1);
        (model, adapter)
    }

    #[test]
    fn uniform_model_initial_loss_is_ln_v() {
        let model = TinyLm::uniform("abcd".chars().collect(), 3);
        let mut adapter = LoraAdapter::new(3, 4, 2, 16.0, 0.0, 1);
        let mut trainer = Trainer::new(0);
        let batch = vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]];
        let loss = trainer.sft_step(&model, &mut adapter, &batch, 0.0).unwrap();
        assert!((loss - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sft_two_hundred_steps_halves_loss() {
        let (model, mut adapter) = model_and_adapter(3);
        let mut trainer = Trainer::new(3);
        let corpus: Vec<Vec<usize>> = vec![
            vec![0, 1, 0, 1, 0, 1, 0, 1],
            vec![2, 3, 2, 3, 2, 3],
            vec![0, 1, 0, 1, 2, 3],
            vec![4, 5, 4, 5, 4, 5],
            vec![1, 0, 1, 0, 1, 0],
        ];
        let initial = trainer.sft_step(&model, &mut adapter, &corpus, 0.5).unwrap();
        let mut last = initial;
        for _ in 0..199 {
            last = trainer.sft_step(&model, &mut adapter, &corpus, 0.5).unwrap();
        }
        assert!(last < 0.5 * initial, "initial {initial}, final {last}");
    }

    #[test]
    fn base_weights_frozen_through_training() {
        let (model, mut adapter) = model_and_adapter(9);
        let digest_before = model.weight_digest();
        let mut trainer = Trainer::new(9);
        trainer.dropout_active = true;
        let batch = vec![vec![0, 2, 4, 1], vec![5, 3, 1, 0]];
        for _ in 0..50 {
            trainer.sft_step(&model, &mut adapter, &batch, 0.1).unwrap();
        }
        assert_eq!(model.weight_digest(), digest_before);
    }

    #[test]
    fn dpo_loss_is_ln_two_at_initialization() {
        let (model, adapter) = model_and_adapter(21);
        // Policy identical to reference.
        let pair = PreferenceExample { prompt: vec![0, 1], chosen: vec![2, 3], rejected: vec![4, 5] };
        let (loss, margin) =
            dpo_loss(&model, Some(&adapter), &model, Some(&adapter), &pair, 0.1).unwrap();
        assert!(margin.abs() < 1e-12);
        assert!((loss - 2.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn dpo_loss_monotone_in_margin() {
        // -ln sigmoid(beta m) must strictly decrease along a margin grid.
        let beta = 0.37;
        let mut last = f64::INFINITY;
        for i in -20..=20 {
            let margin = i as f64 * 0.5;
            let loss = softplus_neg(beta * margin);
            assert!(loss > 0.0);
            assert!(loss < last);
            last = loss;
        }
    }

    #[test]
    fn dpo_loss_matches_compositional_oracle() {
        let (policy_model, mut policy_adapter) = model_and_adapter(33);
        let (ref_model, ref_adapter) = model_and_adapter(77);
        for value in policy_adapter.up.data.iter_mut() {
            *value = 0.1;
        }
        let pair = PreferenceExample { prompt: vec![1, 2], chosen: vec![3, 0, 4], rejected: vec![5, 5] };
        let beta = 0.25;
        let (loss, margin) = dpo_loss(
            &policy_model,
            Some(&policy_adapter),
            &ref_model,
            Some(&ref_adapter),
            &pair,
            beta,
        )
        .unwrap();
        let lp = |m: &TinyLm, a: Option<&LoraAdapter>, c: &[usize]| {
            continuation_logprob(m, a, &pair.prompt, c).unwrap()
        };
        let expected_margin = (lp(&policy_model, Some(&policy_adapter), &pair.chosen)
            - lp(&policy_model, Some(&policy_adapter), &pair.rejected))
            - (lp(&ref_model, Some(&ref_adapter), &pair.chosen)
                - lp(&ref_model, Some(&ref_adapter), &pair.rejected));
        let expected_loss = -(1.0 / (1.0 + (-beta * expected_margin).exp())).ln();
        assert!((margin - expected_margin).abs() < 1e-9);
        assert!((loss - expected_loss).abs() < 1e-9);
    }

    #[test]
    fn zero_lr_step_is_a_no_op() {
        let (model, mut adapter) = model_and_adapter(8);
        let (ref_model, ref_adapter) = model_and_adapter(8);
        let before = adapter.flatten();
        let batch =
            vec![PreferenceExample { prompt: vec![0], chosen: vec![1, 2], rejected: vec![3] }];
        let mut trainer = Trainer::new(0);
        let loss = trainer
            .dpo_step(&model, &mut adapter, &ref_model, Some(&ref_adapter), &batch, 0.0, 0.1)
            .unwrap();
        assert_eq!(adapter.flatten(), before);
        assert!((loss - 2.0f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn dpo_training_increases_held_out_margin() {
        let model = TinyLm::random("abcdef".chars().collect(), 4, 7);
        let ref_adapter = LoraAdapter::new(model.dim, model.vocab_size(), 2, 16.0, 0.0, 7);
        let mut policy_adapter = ref_adapter.clone();
        let ref_digest = model.weight_digest();

        // Synthetic preferences: chosen continuations repeat "ab",
        // rejected repeat "cd".
        let make = |offset: usize| PreferenceExample {
            prompt: vec![offset % 6],
            chosen: vec![0, 1, 0, 1],
            rejected: vec![2, 3, 2, 3],
        };
        let train: Vec<PreferenceExample> = (0..8).map(make).collect();
        let held_out: Vec<PreferenceExample> = (3..9).map(make).collect();

        let mean_margin = |adapter: &LoraAdapter| {
            held_out
                .iter()
                .map(|p| {
                    dpo_loss(&model, Some(adapter), &model, Some(&ref_adapter), p, 0.1)
                        .unwrap()
                        .1
                })
                .sum::<f64>()
                / held_out.len() as f64
        };
        let initial = mean_margin(&policy_adapter);
        let mut trainer = Trainer::new(7);
        for _ in 0..200 {
            trainer
                .dpo_step(&model, &mut policy_adapter, &model, Some(&ref_adapter), &train, 0.5, 0.1)
                .unwrap();
        }
        let final_margin = mean_margin(&policy_adapter);
        assert!(final_margin > initial, "margin {initial} -> {final_margin}");
        assert_eq!(model.weight_digest(), ref_digest);
    }
}

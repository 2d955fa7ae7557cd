//! Desk-scale training math: a tiny next-character language model, LoRA
//! adapters over its frozen output weights, supervised fine-tuning, and
//! DPO preference alignment, all verifiable against finite differences.

mod checkpoint;
mod gradcheck;
mod lora;
mod matrix;
mod model;
mod train;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, TrainStage};
pub use gradcheck::grad_check;
pub use lora::{merge_lora, LoraAdapter};
pub use matrix::Matrix;
pub use model::{sequence_logprob, TinyLm};
pub use train::{
    continuation_logprob, dpo_loss, PreferenceExample, TrainConfig, Trainer,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("token id {0} out of vocabulary (V={1})")]
    OutOfVocab(usize, usize),
    #[error("sequence too short: need at least 2 tokens, got {0}")]
    SequenceTooShort(usize),
    #[error("empty batch")]
    EmptyBatch,
    #[error("empty continuation")]
    EmptyContinuation,
    #[error("empty prompt")]
    EmptyPrompt,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("non-finite loss")]
    NonFiniteLoss,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed checkpoint: {0}")]
    MalformedCheckpoint(String),
}

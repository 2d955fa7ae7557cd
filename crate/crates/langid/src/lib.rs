//! Trainable character n-gram language identifier.
//!
//! Profiles hold add-alpha smoothed log-probabilities over character
//! n-grams; identification is argmax average log-likelihood over the
//! scored text. A stronger external identifier can replace this one
//! anywhere the `LanguageIdentifier` interface is accepted.

mod profile;
mod store;

pub use profile::{identify, train_profiles, Identification, LangProfile, ProfileSet, TrainParams};
pub use store::{load_profiles, save_profiles};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LangIdError {
    #[error("empty training corpus for language '{0}'")]
    EmptyCorpus(String),
    #[error("need at least two languages, got {0}")]
    TooFewLanguages(usize),
    #[error("empty text")]
    EmptyText,
    #[error("no profiles loaded")]
    NoProfiles,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed profile file: {0}")]
    MalformedProfile(String),
}

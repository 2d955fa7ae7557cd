//! Dataset record types, the language registry, and artifact validation.
//!
//! Everything the pipelines read or write on disk is defined here: the
//! language registry, instruction records, preference pairs, and run
//! manifests, together with their JSONL/JSON serialized forms.

mod error;
mod lang;
mod manifest;
mod records;
mod validate;

pub mod jsonl;

pub use error::CorpusError;
pub use lang::{
    bundled_registry, flores_alias, pipeline_name_for_flores, InstrBackend, LanguageEntry,
    Registry, ResourceTier, ResponseMode,
};
pub use manifest::{canonical_json, config_digest, DatasetManifest};
pub use records::{InstructionRecord, OutputProvenance, PreferencePair};
pub use validate::{validate_dataset, ValidationReport, Violation};

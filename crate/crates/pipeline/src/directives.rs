//! Merged cross-lingual instructions: a source-language instruction plus
//! a source-language directive demanding output in the target language.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::PipelineError;

pub const TARGET_PLACEHOLDER: &str = "{target_language}";

/// Per-source-language directive templates plus language-name tables.
/// Sources without a template fall back to the English default, and
/// target names fall back to the English name table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirectiveTable {
    pub separator: String,
    pub default_template: String,
    pub templates: BTreeMap<String, String>,
    pub language_names: BTreeMap<String, BTreeMap<String, String>>,
}

impl DirectiveTable {
    fn template_for(&self, src_lang: &str) -> &str {
        self.templates.get(src_lang).map(String::as_str).unwrap_or(&self.default_template)
    }

    /// Localized target name if the source has one, else the English
    /// name, else the capitalized code.
    fn target_name(&self, src_lang: &str, tgt_lang: &str) -> String {
        for table_lang in [src_lang, "english"] {
            if let Some(name) =
                self.language_names.get(table_lang).and_then(|names| names.get(tgt_lang))
            {
                return name.clone();
            }
        }
        let mut chars = tgt_lang.chars();
        match chars.next() {
            Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
            None => String::new(),
        }
    }
}

/// The bundled table covering the 30 cross-lingual feedback languages.
pub fn bundled_directives() -> &'static DirectiveTable {
    static TABLE: OnceLock<DirectiveTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        serde_json::from_str(include_str!("../data/directives_30.json"))
            .expect("bundled directive table is valid")
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedInstruction {
    pub src_lang: String,
    pub tgt_lang: String,
    /// Base instruction first, then the directive.
    pub text: String,
}

pub fn merge_instructions(
    base_instruction: &str,
    src_lang: &str,
    tgt_lang: &str,
    table: &DirectiveTable,
) -> Result<MergedInstruction, PipelineError> {
    if src_lang == tgt_lang {
        return Err(PipelineError::SameLanguage(src_lang.to_string()));
    }
    let template = table.template_for(src_lang);
    if !template.contains(TARGET_PLACEHOLDER) {
        return Err(PipelineError::MissingPlaceholder(src_lang.to_string()));
    }
    let directive = template.replace(TARGET_PLACEHOLDER, &table.target_name(src_lang, tgt_lang));
    Ok(MergedInstruction {
        src_lang: src_lang.to_string(),
        tgt_lang: tgt_lang.to_string(),
        text: format!("{base_instruction}{}{directive}", table.separator),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_default_template_substitutes_name() {
        let merged =
            merge_instructions("Summarize the text.", "english", "chinese", bundled_directives())
                .unwrap();
        assert_eq!(merged.text, "Summarize the text. Please respond in Chinese.");
        assert_eq!(merged.src_lang, "english");
        assert_eq!(merged.tgt_lang, "chinese");
    }

    #[test]
    fn same_language_rejected() {
        assert!(matches!(
            merge_instructions("x", "french", "french", bundled_directives()),
            Err(PipelineError::SameLanguage(_))
        ));
    }

    #[test]
    fn base_instruction_comes_first() {
        let merged =
            merge_instructions("Décrivez la photo.", "french", "german", bundled_directives())
                .unwrap();
        assert!(merged.text.starts_with("Décrivez la photo. "));
        assert!(merged.text.contains("German"));
    }

    #[test]
    fn all_30_languages_have_usable_templates() {
        let table = bundled_directives();
        let registry = xllm_corpus::Registry::parse(include_str!("../data/registry_30.jsonl"))
            .unwrap();
        assert_eq!(registry.len(), 30);
        for src in registry.codes() {
            assert!(
                table.templates.get(src).is_some(),
                "missing directive template for {src}"
            );
            for tgt in registry.codes().filter(|t| *t != src) {
                let merged = merge_instructions("base", src, tgt, table).unwrap();
                assert!(merged.text.starts_with("base"));
            }
        }
    }

    #[test]
    fn unknown_source_falls_back_to_english_template() {
        let merged =
            merge_instructions("Do it.", "klingon", "french", bundled_directives()).unwrap();
        assert_eq!(merged.text, "Do it. Please respond in French.");
    }

    #[test]
    fn template_without_placeholder_rejected() {
        let mut table = bundled_directives().clone();
        table.templates.insert("english".into(), "Respond, please.".into());
        assert!(matches!(
            merge_instructions("x", "english", "french", &table),
            Err(PipelineError::MissingPlaceholder(_))
        ));
    }
}

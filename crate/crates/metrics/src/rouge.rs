//! Unigram ROUGE with language-aware tokenization.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn is_space_free_script(ch: char) -> bool {
    // Han, Hiragana, Katakana, Thai, Lao, Khmer, Myanmar: each character
    // counts as its own token.
    matches!(ch,
        '\u{4E00}'..='\u{9FFF}'
        | '\u{3400}'..='\u{4DBF}'
        | '\u{F900}'..='\u{FAFF}'
        | '\u{3040}'..='\u{309F}'
        | '\u{30A0}'..='\u{30FF}'
        | '\u{0E00}'..='\u{0E7F}'
        | '\u{0E80}'..='\u{0EFF}'
        | '\u{1780}'..='\u{17FF}'
        | '\u{1000}'..='\u{109F}')
}

/// Whitespace + punctuation word splitting; characters of space-free
/// scripts are emitted as single-character tokens.
pub fn tokenize_multilingual(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for ch in text.chars() {
        if is_space_free_script(ch) {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            tokens.push(ch.to_string());
        } else if ch.is_alphanumeric() {
            word.push(ch);
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

fn counts(tokens: &[String]) -> HashMap<&str, u64> {
    let mut map: HashMap<&str, u64> = HashMap::new();
    for token in tokens {
        *map.entry(token.as_str()).or_insert(0) += 1;
    }
    map
}

/// Unigram overlap; an empty hypothesis scores P=R=F1=0.
pub fn rouge1(hypothesis: &str, reference: &str) -> RougeReport {
    let hyp_tokens = tokenize_multilingual(hypothesis);
    let ref_tokens = tokenize_multilingual(reference);
    if hyp_tokens.is_empty() || ref_tokens.is_empty() {
        return RougeReport { precision: 0.0, recall: 0.0, f1: 0.0 };
    }
    let hyp_counts = counts(&hyp_tokens);
    let ref_counts = counts(&ref_tokens);
    let overlap: u64 = hyp_counts
        .iter()
        .map(|(token, &count)| count.min(ref_counts.get(token).copied().unwrap_or(0)))
        .sum();
    let precision = overlap as f64 / hyp_tokens.len() as f64;
    let recall = overlap as f64 / ref_tokens.len() as f64;
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    RougeReport { precision, recall, f1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_texts_score_one() {
        let report = rouge1("the cat sat", "the cat sat");
        assert_eq!(report, RougeReport { precision: 1.0, recall: 1.0, f1: 1.0 });
    }

    #[test]
    fn disjoint_vocabularies_score_zero() {
        assert_eq!(rouge1("aa bb cc", "dd ee ff").f1, 0.0);
    }

    #[test]
    fn partial_overlap_hand_counts() {
        let report = rouge1("the cat sat", "the cat sat down");
        assert!((report.precision - 1.0).abs() < 1e-12);
        assert!((report.recall - 0.75).abs() < 1e-12);
        assert!((report.f1 - 6.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn han_characters_are_single_tokens() {
        assert_eq!(tokenize_multilingual("我爱猫"), vec!["我", "爱", "猫"]);
        let report = rouge1("我爱猫", "我爱狗");
        assert!((report.precision - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn thai_and_mixed_script() {
        assert_eq!(tokenize_multilingual("cat แมว"), vec!["cat", "แ", "ม", "ว"]);
    }

    #[test]
    fn empty_hypothesis_is_zero_not_error() {
        assert_eq!(rouge1("", "the cat").f1, 0.0);
    }
}

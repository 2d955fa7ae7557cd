//! Accuracy, cosine similarity, language democratization, and token
//! statistics.

use std::collections::BTreeMap;

use crate::MetricError;

pub fn accuracy(predictions: &[String], golds: &[String]) -> Result<f64, MetricError> {
    if predictions.is_empty() {
        return Err(MetricError::EmptyCorpus);
    }
    if predictions.len() != golds.len() {
        return Err(MetricError::LengthMismatch(predictions.len(), golds.len()));
    }
    let matches = predictions.iter().zip(golds).filter(|(p, g)| p == g).count();
    Ok(matches as f64 / predictions.len() as f64)
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::DimensionMismatch(a.len(), b.len()));
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let norm_a: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_b: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm_a == 0.0 || norm_b == 0.0 {
        return Err(MetricError::ZeroVector);
    }
    Ok(dot / (norm_a * norm_b))
}

/// Mean, over languages, of each score as a percentage of the best
/// language's score.
pub fn democratization(per_lang_scores: &BTreeMap<String, f64>) -> Result<f64, MetricError> {
    if per_lang_scores.is_empty() {
        return Err(MetricError::EmptyScores);
    }
    let max = per_lang_scores.values().cloned().fold(f64::MIN, f64::max);
    if max <= 0.0 {
        return Err(MetricError::AllZeroScores);
    }
    let sum: f64 = per_lang_scores.values().map(|&s| 100.0 * s / max).sum();
    Ok(sum / per_lang_scores.len() as f64)
}

/// Instruction/input/output texts of one record, for token statistics.
#[derive(Debug, Clone, Default)]
pub struct FieldTexts {
    pub instruction: String,
    pub input: Option<String>,
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TokenStats {
    pub instruction_avg: f64,
    pub input_avg: f64,
    pub output_avg: f64,
    pub records: usize,
}

/// Arithmetic mean token count per field; an empty or missing field
/// contributes 0 tokens.
pub fn token_stats<F>(records: &[FieldTexts], tokenizer: F) -> TokenStats
where
    F: Fn(&str) -> usize,
{
    let n = records.len();
    if n == 0 {
        return TokenStats { instruction_avg: 0.0, input_avg: 0.0, output_avg: 0.0, records: 0 };
    }
    let mut totals = [0usize; 3];
    for record in records {
        totals[0] += tokenizer(&record.instruction);
        totals[1] += record.input.as_deref().map(&tokenizer).unwrap_or(0);
        totals[2] += tokenizer(&record.output);
    }
    TokenStats {
        instruction_avg: totals[0] as f64 / n as f64,
        input_avg: totals[1] as f64 / n as f64,
        output_avg: totals[2] as f64 / n as f64,
        records: n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(items: &[&str]) -> Vec<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn accuracy_basics() {
        let golds = strs(&["a", "b", "c", "d"]);
        assert_eq!(accuracy(&golds, &golds).unwrap(), 1.0);
        assert_eq!(accuracy(&strs(&["x", "x", "x", "x"]), &golds).unwrap(), 0.0);
        assert_eq!(accuracy(&strs(&["a", "b", "c", "x"]), &golds).unwrap(), 0.75);
        assert!(accuracy(&[], &[]).is_err());
        assert!(accuracy(&golds, &golds[..2]).is_err());
    }

    #[test]
    fn cosine_basics() {
        let v = vec![0.3, -1.2, 4.0];
        assert!((cosine_similarity(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap()).abs() < 1e-12);
        let angled = cosine_similarity(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        assert!((angled - 0.7071).abs() < 1e-4);
        assert_eq!(cosine_similarity(&[0.0], &[1.0]), Err(MetricError::ZeroVector));
        assert!(cosine_similarity(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn democratization_basics() {
        let mut scores = BTreeMap::new();
        scores.insert("a".to_string(), 50.0);
        scores.insert("b".to_string(), 25.0);
        assert!((democratization(&scores).unwrap() - 75.0).abs() < 1e-12);
        scores.insert("b".to_string(), 50.0);
        assert!((democratization(&scores).unwrap() - 100.0).abs() < 1e-12);
        assert!(democratization(&BTreeMap::new()).is_err());
        let zeros: BTreeMap<_, _> = [("a".to_string(), 0.0)].into_iter().collect();
        assert_eq!(democratization(&zeros), Err(MetricError::AllZeroScores));
    }

    #[test]
    fn democratization_scale_invariant() {
        let scores: BTreeMap<String, f64> =
            [("a", 31.27), ("b", 70.68), ("c", 63.49)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect();
        let scaled: BTreeMap<String, f64> =
            scores.iter().map(|(k, v)| (k.clone(), v * 3.7)).collect();
        let base = democratization(&scores).unwrap();
        assert!((base - democratization(&scaled).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn token_stats_whitespace() {
        let ws = |text: &str| text.split_whitespace().count();
        let records = vec![
            FieldTexts { instruction: "do it".into(), input: None, output: "a b".into() },
            FieldTexts { instruction: "go".into(), input: Some("x y z".into()), output: "a b c".into() },
        ];
        let stats = token_stats(&records, ws);
        assert_eq!(stats.instruction_avg, 1.5);
        assert_eq!(stats.input_avg, 1.5);
        assert_eq!(stats.output_avg, 2.5);
    }
}

//! Model x benchmark x language x mode score matrix, serialized as CSV.

use std::collections::BTreeMap;

use crate::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EvalMode {
    Understanding,
    Generating,
}

impl EvalMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalMode::Understanding => "understanding",
            EvalMode::Generating => "generating",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "understanding" => Some(EvalMode::Understanding),
            "generating" => Some(EvalMode::Generating),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScoreKey {
    pub model: String,
    pub benchmark: String,
    pub language: String,
    pub mode: EvalMode,
}

#[derive(Debug, Clone, Default)]
pub struct ScoreMatrix {
    entries: BTreeMap<ScoreKey, (String, f64)>,
}

impl ScoreMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Each key may appear at most once.
    pub fn insert(&mut self, key: ScoreKey, metric: &str, value: f64) -> Result<(), MetricError> {
        if self.entries.contains_key(&key) {
            return Err(MetricError::DuplicateEntry(format!(
                "{}/{}/{}/{}",
                key.model,
                key.benchmark,
                key.language,
                key.mode.as_str()
            )));
        }
        self.entries.insert(key, (metric.to_string(), value));
        Ok(())
    }

    pub fn get(&self, key: &ScoreKey) -> Option<f64> {
        self.entries.get(key).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ScoreKey, &str, f64)> {
        self.entries.iter().map(|(k, (m, v))| (k, m.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Per-language scores for one (model, benchmark, mode) slice.
    pub fn language_slice(
        &self,
        model: &str,
        benchmark: &str,
        mode: EvalMode,
    ) -> BTreeMap<String, f64> {
        self.entries
            .iter()
            .filter(|(k, _)| k.model == model && k.benchmark == benchmark && k.mode == mode)
            .map(|(k, (_, v))| (k.language.clone(), *v))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,benchmark,language,mode,metric,value\n");
        for (key, metric, value) in self.iter() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                key.model,
                key.benchmark,
                key.language,
                key.mode.as_str(),
                metric,
                value
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, MetricError> {
        let mut matrix = Self::new();
        for (i, line) in text.lines().enumerate() {
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(MetricError::MalformedRow(line.to_string()));
            }
            let mode = EvalMode::parse(fields[3])
                .ok_or_else(|| MetricError::MalformedRow(line.to_string()))?;
            let value: f64 = fields[5]
                .parse()
                .map_err(|_| MetricError::MalformedRow(line.to_string()))?;
            matrix.insert(
                ScoreKey {
                    model: fields[0].to_string(),
                    benchmark: fields[1].to_string(),
                    language: fields[2].to_string(),
                    mode,
                },
                fields[4],
                value,
            )?;
        }
        Ok(matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(lang: &str) -> ScoreKey {
        ScoreKey {
            model: "m".into(),
            benchmark: "pawsx".into(),
            language: lang.into(),
            mode: EvalMode::Understanding,
        }
    }

    #[test]
    fn duplicate_key_rejected() {
        let mut matrix = ScoreMatrix::new();
        matrix.insert(key("de"), "accuracy", 0.5).unwrap();
        assert!(matrix.insert(key("de"), "accuracy", 0.6).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut matrix = ScoreMatrix::new();
        matrix.insert(key("de"), "accuracy", 31.27).unwrap();
        matrix.insert(key("en"), "accuracy", 70.68).unwrap();
        let csv = matrix.to_csv();
        let back = ScoreMatrix::from_csv(&csv).unwrap();
        assert_eq!(back.to_csv(), csv);
        assert_eq!(back.get(&key("en")), Some(70.68));
    }

    #[test]
    fn language_slice_filters() {
        let mut matrix = ScoreMatrix::new();
        matrix.insert(key("de"), "accuracy", 1.0).unwrap();
        let mut other = key("fr");
        other.mode = EvalMode::Generating;
        matrix.insert(other, "accuracy", 2.0).unwrap();
        let slice = matrix.language_slice("m", "pawsx", EvalMode::Understanding);
        assert_eq!(slice.len(), 1);
        assert_eq!(slice["de"], 1.0);
    }
}

//! Invariant checks over preference datasets. Violations are data, not
//! failures: the report lists every violated invariant with record id.

use crate::PreferencePair;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub record_id: String,
    pub rule: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub count_ok: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Factor-score range; the scoring scale is configuration, defaulting to
/// [1, 10].
#[derive(Debug, Clone, Copy)]
pub struct ScoreRange {
    pub min: f64,
    pub max: f64,
}

impl Default for ScoreRange {
    fn default() -> Self {
        Self { min: 1.0, max: 10.0 }
    }
}

pub fn validate_dataset<'a, I>(records: I) -> ValidationReport
where
    I: IntoIterator<Item = &'a PreferencePair>,
{
    validate_dataset_with_range(records, ScoreRange::default())
}

pub fn validate_dataset_with_range<'a, I>(records: I, range: ScoreRange) -> ValidationReport
where
    I: IntoIterator<Item = &'a PreferencePair>,
{
    let mut report = ValidationReport::default();
    for pair in records {
        let before = report.violations.len();
        let mut fail = |rule: &str| {
            report.violations.push(Violation {
                record_id: pair.id.clone(),
                rule: rule.to_string(),
            });
        };
        if pair.src_lang == pair.tgt_lang {
            fail("src equals tgt");
        }
        if pair.chosen == pair.rejected {
            fail("chosen equals rejected");
        }
        if pair.chosen_score < pair.rejected_score {
            fail("score order");
        }
        for (role, factors) in &pair.factor_scores {
            for (factor, &score) in factors {
                if score < range.min || score > range.max {
                    report.violations.push(Violation {
                        record_id: pair.id.clone(),
                        rule: format!("factor {role}.{factor} out of range"),
                    });
                }
            }
        }
        if report.violations.len() == before {
            report.count_ok += 1;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn pair() -> PreferencePair {
        PreferencePair {
            id: "p0".into(),
            src_lang: "english".into(),
            tgt_lang: "french".into(),
            instruction: "Summarize. Please respond in French.".into(),
            input: None,
            chosen: "bon".into(),
            rejected: "mauvais".into(),
            chosen_score: 7.5,
            rejected_score: 4.0,
            factor_scores: BTreeMap::new(),
        }
    }

    #[test]
    fn src_equals_tgt_flagged() {
        let mut p = pair();
        p.src_lang = "french".into();
        let report = validate_dataset(std::iter::once(&p));
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].rule, "src equals tgt");
    }

    #[test]
    fn score_order_flagged() {
        let mut p = pair();
        p.chosen_score = 4.0;
        p.rejected_score = 7.5;
        let report = validate_dataset(std::iter::once(&p));
        assert_eq!(report.violations[0].rule, "score order");
    }

    #[test]
    fn clean_fixture_yields_empty_report() {
        let pairs: Vec<_> = (0..10)
            .map(|i| {
                let mut p = pair();
                p.id = format!("p{i}");
                p
            })
            .collect();
        let report = validate_dataset(pairs.iter());
        assert!(report.is_clean());
        assert_eq!(report.count_ok, 10);
    }

    #[test]
    fn factor_out_of_range_flagged() {
        let mut p = pair();
        let mut factors = BTreeMap::new();
        factors.insert("correctness".to_string(), 11.0);
        p.factor_scores.insert("chosen".to_string(), factors);
        let report = validate_dataset(std::iter::once(&p));
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].rule.contains("out of range"));
    }
}

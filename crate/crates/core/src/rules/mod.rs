//! Unordered if-then rule sets over cue patterns.
//!
//! A rule tests cue=value equalities and carries the class-count
//! distribution of the patterns its condition covers in the full training
//! table. Prediction sums the distributions of every matching rule and
//! takes the argmax, so rule order never matters.

mod induce;

pub use induce::{induce_rules, InduceOptions};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cues::{CuePattern, CueSchema, PatternTable};

/// One cue=value equality test. `cue` is the schema position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RuleTest {
    pub cue: usize,
    pub value: u16,
}

/// A conjunction of tests, at most one per cue; the empty complex matches
/// every pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Complex {
    /// Sorted by cue position.
    pub tests: Vec<RuleTest>,
}

/// An induced rule: condition, target class and the class-count
/// distribution over the full training table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub complex: Complex,
    pub target_class: usize,
    pub distribution: Vec<u64>,
}

/// An unordered rule set; `default_class` answers patterns no rule
/// matches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleSet {
    pub schema_id: String,
    pub class_count: usize,
    pub default_class: usize,
    pub rules: Vec<Rule>,
}

/// Outcome of applying a rule set to one pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub probabilities: Vec<f64>,
    /// Indices of the matching rules, in rule-set order.
    pub matched_rules: Vec<usize>,
    /// True when no rule matched and the default class was used.
    pub defaulted: bool,
}

/// Per-rule coverage statistics over some table.
#[derive(Debug, Clone)]
pub struct RuleStats {
    pub coverage: u64,
    pub class_counts: Vec<u64>,
    pub laplace: f64,
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("pattern schema `{pattern}` does not match rule set schema `{ruleset}`")]
    SchemaMismatch { pattern: String, ruleset: String },
    #[error("target class {target} out of range for {classes} classes")]
    TargetOutOfRange { target: usize, classes: usize },
    #[error("table has unlabeled rows")]
    UnlabeledRows,
    #[error("pattern table is empty")]
    EmptyTable,
}

/// Laplace accuracy of a covered-count vector for a target class:
/// `(covered[target] + 1) / (sum covered + class_count)`.
pub fn laplace_accuracy(
    covered: &[u64],
    target: usize,
    class_count: usize,
) -> Result<f64, RuleError> {
    if target >= class_count || target >= covered.len() {
        return Err(RuleError::TargetOutOfRange {
            target,
            classes: class_count,
        });
    }
    let total: u64 = covered.iter().sum();
    Ok((covered[target] as f64 + 1.0) / (total as f64 + class_count as f64))
}

impl Complex {
    pub fn empty() -> Complex {
        Complex::default()
    }

    /// Extend with one more test; `None` if the cue is already tested.
    pub fn specialize(&self, test: RuleTest) -> Option<Complex> {
        if self.tests.iter().any(|t| t.cue == test.cue) {
            return None;
        }
        let mut tests = self.tests.clone();
        let pos = tests.partition_point(|t| t.cue < test.cue);
        tests.insert(pos, test);
        Some(Complex { tests })
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }
}

/// True iff every test's value equals the pattern's value for that cue.
pub fn matches(complex: &Complex, pattern: &CuePattern) -> bool {
    complex
        .tests
        .iter()
        .all(|t| pattern.values[t.cue] == t.value)
}

impl RuleSet {
    fn check_pattern(&self, pattern: &CuePattern) -> Result<(), RuleError> {
        if pattern.schema_id != self.schema_id {
            return Err(RuleError::SchemaMismatch {
                pattern: pattern.schema_id.clone(),
                ruleset: self.schema_id.clone(),
            });
        }
        Ok(())
    }

    /// Sum the distributions of all matching rules and take the argmax
    /// (ties toward the lowest class). With no match the default class is
    /// returned with a flagged uniform probability vector.
    pub fn predict(&self, pattern: &CuePattern) -> Result<Prediction, RuleError> {
        self.check_pattern(pattern)?;
        let mut summed = vec![0u64; self.class_count];
        let mut matched = Vec::new();
        for (i, rule) in self.rules.iter().enumerate() {
            if matches(&rule.complex, pattern) {
                matched.push(i);
                for (s, &d) in summed.iter_mut().zip(&rule.distribution) {
                    *s += d;
                }
            }
        }
        let total: u64 = summed.iter().sum();
        if matched.is_empty() || total == 0 {
            return Ok(Prediction {
                class: self.default_class,
                probabilities: vec![1.0 / self.class_count as f64; self.class_count],
                matched_rules: Vec::new(),
                defaulted: true,
            });
        }
        let probabilities: Vec<f64> = summed
            .iter()
            .map(|&s| s as f64 / total as f64)
            .collect();
        let mut class = 0;
        for (j, &s) in summed.iter().enumerate() {
            if s > summed[class] {
                class = j;
            }
        }
        Ok(Prediction {
            class,
            probabilities,
            matched_rules: matched,
            defaulted: false,
        })
    }

    /// Coverage, per-class counts and Laplace accuracy of every rule on
    /// the given table.
    pub fn rule_stats(&self, table: &PatternTable) -> Result<Vec<RuleStats>, RuleError> {
        let mut out = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let mut class_counts = vec![0u64; self.class_count];
            let mut coverage = 0u64;
            for row in table.rows() {
                self.check_pattern(&row.pattern)?;
                if matches(&rule.complex, &row.pattern) {
                    coverage += 1;
                    if let Some(c) = row.class {
                        class_counts[c] += 1;
                    }
                }
            }
            let laplace =
                laplace_accuracy(&class_counts, rule.target_class, self.class_count)?;
            out.push(RuleStats {
                coverage,
                class_counts,
                laplace,
            });
        }
        Ok(out)
    }

    /// Text rendering, one block per rule:
    ///
    /// ```text
    /// IF    ST = e
    ///   AND QM = +
    /// THEN  CLASS = 2  [0 0 96 0 0 0 0]
    /// ```
    pub fn to_text(&self, schema: &CueSchema) -> String {
        let mut out = String::new();
        for rule in &self.rules {
            if rule.complex.is_empty() {
                out.push_str("IF    TRUE\n");
            } else {
                for (i, t) in rule.complex.tests.iter().enumerate() {
                    let head = if i == 0 { "IF   " } else { "  AND" };
                    out.push_str(&format!(
                        "{head} {} = {}\n",
                        schema.cues()[t.cue].id.as_str().to_uppercase(),
                        schema.code(t.cue, t.value)
                    ));
                }
            }
            let dist: Vec<String> = rule.distribution.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!(
                "THEN  CLASS = {}  [{}]\n\n",
                rule.target_class,
                dist.join(" ")
            ));
        }
        out.push_str(&format!("DEFAULT CLASS = {}\n", self.default_class));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule set serializes")
    }

    pub fn from_json(text: &str) -> Result<RuleSet, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(values: Vec<u16>) -> CuePattern {
        CuePattern {
            schema_id: "s".into(),
            values,
        }
    }

    /// The two-rule set from the worked summing example: one rule keyed on
    /// subject type + question mark, one on a nominal utterance type.
    fn paper_rules() -> RuleSet {
        RuleSet {
            schema_id: "s".into(),
            class_count: 7,
            default_class: 0,
            rules: vec![
                Rule {
                    // cue 1 = st (value 2 = second person), cue 3 = qm (+)
                    complex: Complex {
                        tests: vec![
                            RuleTest { cue: 1, value: 2 },
                            RuleTest { cue: 3, value: 1 },
                        ],
                    },
                    target_class: 2,
                    distribution: vec![0, 0, 96, 0, 0, 0, 0],
                },
                Rule {
                    // cue 0 = ut (value 5 = noun/noun phrase)
                    complex: Complex {
                        tests: vec![RuleTest { cue: 0, value: 5 }],
                    },
                    target_class: 0,
                    distribution: vec![109, 0, 0, 0, 0, 0, 0],
                },
            ],
        }
    }

    #[test]
    fn laplace_accuracy_arithmetic() {
        let l = laplace_accuracy(&[2, 0, 0, 0, 0, 0, 0], 0, 7).unwrap();
        assert!((l - 3.0 / 9.0).abs() < 1e-12);

        // zero coverage: the class prior 1/K
        let l = laplace_accuracy(&[0, 0, 0], 1, 3).unwrap();
        assert!((l - 1.0 / 3.0).abs() < 1e-12);

        let l = laplace_accuracy(&[0, 0, 96, 0, 0, 0, 0], 2, 7).unwrap();
        assert!((l - 97.0 / 103.0).abs() < 1e-12);

        assert!(matches!(
            laplace_accuracy(&[1, 2], 5, 2),
            Err(RuleError::TargetOutOfRange { .. })
        ));
    }

    #[test]
    fn empty_complex_matches_everything() {
        let c = Complex::empty();
        assert!(matches(&c, &pattern(vec![0, 1, 2, 3])));
        assert!(matches(&c, &pattern(vec![5])));
    }

    #[test]
    fn complex_matching_is_equality_on_tested_cues() {
        let c = Complex {
            tests: vec![RuleTest { cue: 1, value: 2 }, RuleTest { cue: 3, value: 1 }],
        };
        assert!(matches(&c, &pattern(vec![9, 2, 9, 1])));
        assert!(!matches(&c, &pattern(vec![9, 2, 9, 0])));
        let ut = Complex {
            tests: vec![RuleTest { cue: 0, value: 5 }],
        };
        assert!(!matches(&ut, &pattern(vec![0, 2, 9, 1])));
    }

    #[test]
    fn specialize_refuses_duplicate_cue() {
        let c = Complex::empty()
            .specialize(RuleTest { cue: 2, value: 1 })
            .unwrap();
        assert!(c.specialize(RuleTest { cue: 2, value: 0 }).is_none());
        let c2 = c.specialize(RuleTest { cue: 0, value: 3 }).unwrap();
        assert_eq!(c2.tests[0].cue, 0, "tests stay sorted by cue");
    }

    #[test]
    fn summing_matches_worked_example() {
        let rs = paper_rules();
        // pattern matching both rules: ut = 5, st = 2, qm = +
        let p = pattern(vec![5, 2, 0, 1]);
        let pred = rs.predict(&p).unwrap();
        assert_eq!(pred.class, 0);
        assert_eq!(pred.probabilities[0], 109.0 / 205.0);
        assert_eq!(pred.probabilities[2], 96.0 / 205.0);
        assert_eq!(pred.matched_rules, vec![0, 1]);
        assert!(!pred.defaulted);
    }

    #[test]
    fn single_matching_rule_gives_probability_one() {
        let rs = paper_rules();
        // matches only the st/qm rule
        let p = pattern(vec![0, 2, 0, 1]);
        let pred = rs.predict(&p).unwrap();
        assert_eq!(pred.class, 2);
        assert_eq!(pred.probabilities[2], 1.0);
    }

    #[test]
    fn no_match_defaults_and_flags() {
        let rs = paper_rules();
        let p = pattern(vec![0, 0, 0, 0]);
        let pred = rs.predict(&p).unwrap();
        assert!(pred.defaulted);
        assert_eq!(pred.class, 0);
        for &p in &pred.probabilities {
            assert!((p - 1.0 / 7.0).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_is_order_insensitive() {
        let mut rs = paper_rules();
        let p = pattern(vec![5, 2, 0, 1]);
        let a = rs.predict(&p).unwrap();
        rs.rules.reverse();
        let b = rs.predict(&p).unwrap();
        assert_eq!(a.class, b.class);
        assert_eq!(a.probabilities, b.probabilities);
    }

    #[test]
    fn predict_rejects_schema_mismatch() {
        let rs = paper_rules();
        let p = CuePattern {
            schema_id: "other".into(),
            values: vec![0, 0, 0, 0],
        };
        assert!(matches!(
            rs.predict(&p),
            Err(RuleError::SchemaMismatch { .. })
        ));
    }

    #[test]
    fn rule_set_json_round_trips() {
        let rs = paper_rules();
        let back = RuleSet::from_json(&rs.to_json()).unwrap();
        assert_eq!(rs, back);
    }
}

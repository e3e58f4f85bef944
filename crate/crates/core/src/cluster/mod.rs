//! Unsupervised discovery of utterance classes.
//!
//! The model is a finite mixture of per-cue categorical distributions (a
//! naive-Bayes mixture over discrete attributes) fitted by EM to a local
//! maximum of the Dirichlet-smoothed posterior. Class strength and cue
//! influence reports summarise a fitted model the way an analyst would
//! read them: normalised so the strongest entry is 1.000.

mod em;
mod report;
mod synthetic;

pub use em::{fit_mixture, fit_mixture_traced, fit_with_init, select_models, FitOptions, FitTrace};
pub use report::{class_strength, cue_influence, cluster_report, ClusterReport};
pub use synthetic::generate_synthetic;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cues::{CuePattern, CueSchema, PatternTable};

/// Mixing weights plus per-class per-cue categorical parameters.
///
/// Invariants: `weights` sums to 1, every `params[k][c]` sums to 1, all
/// probabilities are strictly positive (the Dirichlet prior keeps them
/// proper), and `k >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureModel {
    pub schema_id: String,
    pub k: usize,
    pub weights: Vec<f64>,
    /// `params[class][cue][value]` — class-conditional value probabilities.
    pub params: Vec<Vec<Vec<f64>>>,
    pub alpha: f64,
    pub seed: u64,
    /// Model-selection score: best log-posterior minus the dimension
    /// penalty `(d / 2) ln n`.
    pub score: f64,
}

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("pattern table is empty")]
    EmptyTable,
    #[error("alpha must be positive, got {0}")]
    NonPositiveAlpha(f64),
    #[error("k must be >= 1")]
    ZeroClasses,
    #[error("restarts must be >= 1")]
    ZeroRestarts,
    #[error("k range {0}..={1} is empty")]
    EmptyKRange(usize, usize),
    #[error("pattern schema `{pattern}` does not match model schema `{model}`")]
    SchemaMismatch { pattern: String, model: String },
    #[error("pattern value {value} out of range for cue {cue}")]
    ValueOutOfRange { cue: usize, value: u16 },
}

impl MixtureModel {
    /// Number of free parameters: `(k - 1) + k * sum_c (|alphabet_c| - 1)`.
    pub fn dimension(&self) -> usize {
        let per_class: usize = self.params[0].iter().map(|theta| theta.len() - 1).sum();
        (self.k - 1) + self.k * per_class
    }

    fn check_pattern(&self, pattern: &CuePattern) -> Result<(), ClusterError> {
        if pattern.schema_id != self.schema_id || pattern.values.len() != self.params[0].len() {
            return Err(ClusterError::SchemaMismatch {
                pattern: pattern.schema_id.clone(),
                model: self.schema_id.clone(),
            });
        }
        for (c, &v) in pattern.values.iter().enumerate() {
            if v as usize >= self.params[0][c].len() {
                return Err(ClusterError::ValueOutOfRange { cue: c, value: v });
            }
        }
        Ok(())
    }

    /// Log of `p(pattern | class)`: the product of the class-conditional
    /// value probabilities.
    pub fn log_likelihood_in_class(&self, class: usize, pattern: &CuePattern) -> f64 {
        pattern
            .values
            .iter()
            .enumerate()
            .map(|(c, &v)| self.params[class][c][v as usize].ln())
            .sum()
    }

    /// Serialize to the model JSON layout. Floats use the shortest
    /// representation that round-trips exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<MixtureModel, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Per-pattern class membership probabilities: `r_k ∝ π_k Π_c θ_{k,c,v_c}`,
/// normalised to sum to 1.
pub fn responsibilities(
    model: &MixtureModel,
    pattern: &CuePattern,
) -> Result<Vec<f64>, ClusterError> {
    model.check_pattern(pattern)?;
    let mut log_r: Vec<f64> = (0..model.k)
        .map(|k| model.weights[k].ln() + model.log_likelihood_in_class(k, pattern))
        .collect();
    let max = log_r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for lr in &mut log_r {
        *lr = (*lr - max).exp();
        sum += *lr;
    }
    for lr in &mut log_r {
        *lr /= sum;
    }
    Ok(log_r)
}

/// Most probable class per row; ties break toward the lowest class index.
pub fn hard_assign(
    model: &MixtureModel,
    table: &PatternTable,
) -> Result<Vec<usize>, ClusterError> {
    table
        .rows()
        .iter()
        .map(|row| {
            let r = responsibilities(model, &row.pattern)?;
            Ok(argmax(&r))
        })
        .collect()
}

/// First index attaining the maximum.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

/// Check that a schema matches the model's schema id and shape.
pub fn check_schema(model: &MixtureModel, schema: &CueSchema) -> Result<(), ClusterError> {
    if schema.id() != model.schema_id || schema.arity() != model.params[0].len() {
        return Err(ClusterError::SchemaMismatch {
            pattern: schema.id().to_string(),
            model: model.schema_id.clone(),
        });
    }
    for (c, spec) in schema.cues().iter().enumerate() {
        if spec.alphabet.len() != model.params[0][c].len() {
            return Err(ClusterError::SchemaMismatch {
                pattern: schema.id().to_string(),
                model: model.schema_id.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A hand-built model over one binary cue.
    fn two_class_single_cue() -> MixtureModel {
        MixtureModel {
            schema_id: "wh".into(),
            k: 2,
            weights: vec![0.5, 0.5],
            params: vec![vec![vec![0.9, 0.1]], vec![vec![0.1, 0.9]]],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        }
    }

    fn pattern(schema_id: &str, values: Vec<u16>) -> CuePattern {
        CuePattern {
            schema_id: schema_id.into(),
            values,
        }
    }

    #[test]
    fn responsibilities_single_class_are_one() {
        let model = MixtureModel {
            schema_id: "wh".into(),
            k: 1,
            weights: vec![1.0],
            params: vec![vec![vec![0.5, 0.5]]],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        let r = responsibilities(&model, &pattern("wh", vec![0])).unwrap();
        assert_eq!(r, vec![1.0]);
    }

    #[test]
    fn responsibilities_uniform_model_are_uniform() {
        let model = MixtureModel {
            schema_id: "wh".into(),
            k: 4,
            weights: vec![0.25; 4],
            params: vec![vec![vec![0.5, 0.5]]; 4],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        let r = responsibilities(&model, &pattern("wh", vec![1])).unwrap();
        for x in r {
            assert!((x - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn responsibilities_match_hand_arithmetic() {
        let model = two_class_single_cue();
        let r = responsibilities(&model, &pattern("wh", vec![0])).unwrap();
        assert!((r[0] - 0.9).abs() < 1e-12);
        assert!((r[1] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn responsibilities_reject_schema_mismatch() {
        let model = two_class_single_cue();
        assert!(matches!(
            responsibilities(&model, &pattern("qm", vec![0])),
            Err(ClusterError::SchemaMismatch { .. })
        ));
        assert!(matches!(
            responsibilities(&model, &pattern("wh", vec![7])),
            Err(ClusterError::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax(&[0.9, 0.1]), 0);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.1, 0.5, 0.5]), 1);
        // invariant under positive rescaling
        assert_eq!(argmax(&[0.2, 1.0, 1.0]), argmax(&[0.4, 2.0, 2.0]));
    }

    #[test]
    fn model_json_round_trips_exactly() {
        let model = two_class_single_cue();
        let text = model.to_json();
        let back = MixtureModel::from_json(&text).unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn dimension_counts_free_parameters() {
        let model = MixtureModel {
            schema_id: "x".into(),
            k: 3,
            weights: vec![1.0 / 3.0; 3],
            params: vec![vec![vec![0.25; 4], vec![0.5; 2]]; 3],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        // (3-1) + 3 * ((4-1) + (2-1)) = 2 + 12 = 14
        assert_eq!(model.dimension(), 14);
    }
}

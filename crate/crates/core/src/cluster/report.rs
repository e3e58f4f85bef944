//! Cluster diagnostics: class strength, cue influence, class profiles.

use crate::cues::PatternTable;

use super::{hard_assign, ClusterError, MixtureModel};

/// Analyst-facing summary of a fitted model over a table.
///
/// `class_strength` and `cue_influence` are normalised so their maximum
/// entry reads 1.000; `hard_counts` sums to the table's row count.
#[derive(Debug, Clone)]
pub struct ClusterReport {
    pub class_strength: Vec<f64>,
    /// Classes with no hard-assigned members; their strength reads 0.
    pub empty_classes: Vec<usize>,
    pub cue_influence: Vec<f64>,
    /// `value_influence[cue][value]`.
    pub value_influence: Vec<Vec<f64>>,
    /// `class_profiles[class][cue][value]` — the model's class-conditional
    /// value distributions.
    pub class_profiles: Vec<Vec<Vec<f64>>>,
    pub hard_counts: Vec<usize>,
}

/// Relative class strength: the geometric mean of `p(pattern | class)`
/// over a class's hard-assigned members, normalised by the strongest
/// class. Empty classes read 0 and are flagged by the caller's report.
pub fn class_strength(
    model: &MixtureModel,
    table: &PatternTable,
) -> Result<Vec<f64>, ClusterError> {
    let labels = hard_assign(model, table)?;
    let mut log_sum = vec![0.0f64; model.k];
    let mut counts = vec![0usize; model.k];
    for (row, &label) in table.rows().iter().zip(&labels) {
        log_sum[label] += model.log_likelihood_in_class(label, &row.pattern);
        counts[label] += 1;
    }
    let raw: Vec<f64> = (0..model.k)
        .map(|j| {
            if counts[j] == 0 {
                0.0
            } else {
                (log_sum[j] / counts[j] as f64).exp()
            }
        })
        .collect();
    let max = raw.iter().cloned().fold(0.0f64, f64::max);
    if max == 0.0 {
        return Ok(raw);
    }
    Ok(raw.iter().map(|&x| x / max).collect())
}

/// Global alpha-smoothed empirical distribution of each cue.
fn global_distributions(model: &MixtureModel, table: &PatternTable) -> Vec<Vec<f64>> {
    let sizes: Vec<usize> = model.params[0].iter().map(|t| t.len()).collect();
    let mut counts: Vec<Vec<f64>> = sizes.iter().map(|&s| vec![0.0; s]).collect();
    for row in table.rows() {
        for (c, &v) in row.pattern.values.iter().enumerate() {
            counts[c][v as usize] += 1.0;
        }
    }
    let n = table.len() as f64;
    counts
        .iter()
        .zip(&sizes)
        .map(|(cnt, &s)| {
            cnt.iter()
                .map(|&x| (x + model.alpha) / (n + s as f64 * model.alpha))
                .collect()
        })
        .collect()
}

/// Relative cue influence: the mixture-weighted KL divergence of each
/// cue's class-conditional distributions from the cue's global
/// distribution, normalised by the most influential cue. Also returns the
/// per-value contributions.
pub fn cue_influence(
    model: &MixtureModel,
    table: &PatternTable,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), ClusterError> {
    let global = global_distributions(model, table);
    let n_cues = model.params[0].len();
    let mut raw = vec![0.0f64; n_cues];
    let mut value_infl: Vec<Vec<f64>> = global.iter().map(|g| vec![0.0; g.len()]).collect();
    for c in 0..n_cues {
        for j in 0..model.k {
            let theta = &model.params[j][c];
            let mut kl = 0.0;
            for v in 0..theta.len() {
                let term = theta[v] * (theta[v] / global[c][v]).ln();
                kl += term;
                value_infl[c][v] += model.weights[j] * term;
            }
            raw[c] += model.weights[j] * kl;
        }
    }
    let max = raw.iter().cloned().fold(0.0f64, f64::max);
    let influence = if max == 0.0 {
        raw
    } else {
        raw.iter().map(|&x| x / max).collect()
    };
    Ok((influence, value_infl))
}

/// Assemble the full [`ClusterReport`].
pub fn cluster_report(
    model: &MixtureModel,
    table: &PatternTable,
) -> Result<ClusterReport, ClusterError> {
    let labels = hard_assign(model, table)?;
    let mut hard_counts = vec![0usize; model.k];
    for &l in &labels {
        hard_counts[l] += 1;
    }
    let strength = class_strength(model, table)?;
    let empty_classes = (0..model.k).filter(|&j| hard_counts[j] == 0).collect();
    let (influence, value_influence) = cue_influence(model, table)?;
    Ok(ClusterReport {
        class_strength: strength,
        empty_classes,
        cue_influence: influence,
        value_influence,
        class_profiles: model.params.clone(),
        hard_counts,
    })
}

impl ClusterReport {
    /// Text rendering: class-strength and cue-influence tables plus the
    /// per-class hard counts.
    pub fn to_text(&self, cue_names: &[String]) -> String {
        let mut out = String::new();
        out.push_str("Class  Relative class strength  Members\n");
        for (j, (&s, &n)) in self.class_strength.iter().zip(&self.hard_counts).enumerate() {
            let flag = if self.empty_classes.contains(&j) {
                "  (empty)"
            } else {
                ""
            };
            out.push_str(&format!("{j:<5}  {s:>23.3}  {n:>7}{flag}\n"));
        }
        out.push('\n');
        out.push_str("Cue      Relative influence\n");
        for (c, &infl) in self.cue_influence.iter().enumerate() {
            out.push_str(&format!("{:<7}  {infl:>18.3}\n", cue_names[c]));
        }
        out
    }
}

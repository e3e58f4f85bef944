//! Rule-set generality and classification quality measures.
//!
//! The specificity index relates rule count to distinct-pattern count:
//! `SI = (#rules - (#classes - 1)) / (#CPTs - (#classes - 1))`; values
//! near zero mean few rules describe many pattern types. Classification
//! quality is an actual-by-predicted confusion matrix with the row-wise
//! accuracy `100 * diagonal / row total`. (The row-wise ratio is
//! sometimes called precision in the literature despite rows being
//! actual classes; this module keeps the row-wise definition and the
//! name `per_class_accuracy`.)

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("specificity index denominator must be positive: cpts={cpts}, classes={classes}")]
    BadDenominator { cpts: usize, classes: usize },
    #[error("label lists differ in length: {actual} vs {predicted}")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },
}

/// `SI = (n_rules - (n_classes - 1)) / (n_cpts - (n_classes - 1))`.
pub fn specificity_index(
    n_rules: usize,
    n_classes: usize,
    n_cpts: usize,
) -> Result<f64, MetricsError> {
    let base = n_classes.saturating_sub(1);
    if n_cpts <= base {
        return Err(MetricsError::BadDenominator {
            cpts: n_cpts,
            classes: n_classes,
        });
    }
    Ok((n_rules as f64 - base as f64) / (n_cpts as f64 - base as f64))
}

/// Actual-by-predicted counts: `counts[actual][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
    k: usize,
}

impl ConfusionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> ConfusionMatrix {
        let k = counts.len();
        assert!(counts.iter().all(|row| row.len() == k), "matrix is square");
        ConfusionMatrix { counts, k }
    }

    pub fn class_count(&self) -> usize {
        self.k
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn get(&self, actual: usize, predicted: usize) -> u64 {
        self.counts[actual][predicted]
    }

    pub fn row_sum(&self, actual: usize) -> u64 {
        self.counts[actual].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.k).map(|i| self.counts[i][i]).sum()
    }

    /// Overall accuracy in percent: `100 * trace / total`.
    pub fn overall_accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        100.0 * self.trace() as f64 / total as f64
    }
}

/// Count actual/predicted pairs into a k-by-k matrix.
pub fn confusion_matrix(
    actual: &[usize],
    predicted: &[usize],
    k: usize,
) -> Result<ConfusionMatrix, MetricsError> {
    if actual.len() != predicted.len() {
        return Err(MetricsError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    let mut counts = vec![vec![0u64; k]; k];
    for (&a, &p) in actual.iter().zip(predicted) {
        if a >= k {
            return Err(MetricsError::LabelOutOfRange { label: a, classes: k });
        }
        if p >= k {
            return Err(MetricsError::LabelOutOfRange { label: p, classes: k });
        }
        counts[a][p] += 1;
    }
    Ok(ConfusionMatrix { counts, k })
}

/// Row-wise accuracy in percent, full precision; `None` marks an empty
/// (undefined) row.
pub fn per_class_accuracy(matrix: &ConfusionMatrix) -> Vec<Option<f64>> {
    (0..matrix.class_count())
        .map(|i| {
            let total = matrix.row_sum(i);
            if total == 0 {
                None
            } else {
                Some(100.0 * matrix.get(i, i) as f64 / total as f64)
            }
        })
        .collect()
}

/// Half-up rounding to one decimal, the display convention for accuracy
/// percentages.
pub fn round_half_up_1(x: f64) -> f64 {
    (x * 10.0 + 0.5).floor() / 10.0
}

/// Evaluation summary: the confusion matrix plus the quality and
/// generality figures around it.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub matrix: ConfusionMatrix,
    /// Full-precision percentages; rounding happens at display time.
    pub per_class_accuracy: Vec<Option<f64>>,
    pub overall_accuracy: f64,
    pub specificity_index: f64,
    pub rule_count: usize,
    pub cpt_count: usize,
    pub class_count: usize,
}

impl EvalReport {
    pub fn new(
        matrix: ConfusionMatrix,
        rule_count: usize,
        cpt_count: usize,
    ) -> Result<EvalReport, MetricsError> {
        let class_count = matrix.class_count();
        let si = specificity_index(rule_count, class_count, cpt_count)?;
        Ok(EvalReport {
            per_class_accuracy: per_class_accuracy(&matrix),
            overall_accuracy: matrix.overall_accuracy(),
            specificity_index: si,
            rule_count,
            cpt_count,
            class_count,
            matrix,
        })
    }

    /// Aligned text table: actual-by-predicted grid with an accuracy
    /// column, plus the summary line.
    pub fn to_text(&self) -> String {
        let k = self.class_count;
        let mut out = String::new();
        out.push_str("Actual\\Predicted");
        for j in 0..k {
            out.push_str(&format!("{j:>7}"));
        }
        out.push_str("   Accuracy\n");
        for i in 0..k {
            out.push_str(&format!("{i:<16}"));
            for j in 0..k {
                out.push_str(&format!("{:>7}", self.matrix.get(i, j)));
            }
            match self.per_class_accuracy[i] {
                Some(acc) => out.push_str(&format!("{:>9.1} %\n", round_half_up_1(acc))),
                None => out.push_str("        - %\n"),
            }
        }
        out.push_str(&format!(
            "\nOverall accuracy: {:.1} %\nSI: {:.2}  (rules={}, CPTs={}, classes={})\n",
            round_half_up_1(self.overall_accuracy),
            self.specificity_index,
            self.rule_count,
            self.cpt_count,
            self.class_count
        ));
        out
    }

    /// TSV twin: matrix rows then the summary fields at full precision.
    pub fn to_tsv(&self) -> String {
        let k = self.class_count;
        let mut out = String::from("actual");
        for j in 0..k {
            out.push_str(&format!("\tpred_{j}"));
        }
        out.push_str("\taccuracy\n");
        for i in 0..k {
            out.push_str(&i.to_string());
            for j in 0..k {
                out.push_str(&format!("\t{}", self.matrix.get(i, j)));
            }
            match self.per_class_accuracy[i] {
                Some(acc) => out.push_str(&format!("\t{acc}\n")),
                None => out.push_str("\t-\n"),
            }
        }
        out.push_str(&format!(
            "overall_accuracy\t{}\nspecificity_index\t{}\nrule_count\t{}\ncpt_count\t{}\nclass_count\t{}\n",
            self.overall_accuracy,
            self.specificity_index,
            self.rule_count,
            self.cpt_count,
            self.class_count
        ));
        out
    }
}

/// Adjusted Rand index between two labelings: chance-corrected pair
/// agreement, 1 for identical partitions, near 0 for independent ones.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "label lists must align");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let mut contingency: HashMap<(usize, usize), u64> = HashMap::new();
    let mut a_counts: HashMap<usize, u64> = HashMap::new();
    let mut b_counts: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *contingency.entry((x, y)).or_insert(0) += 1;
        *a_counts.entry(x).or_insert(0) += 1;
        *b_counts.entry(y).or_insert(0) += 1;
    }
    let comb2 = |x: u64| (x * x.saturating_sub(1)) as f64 / 2.0;
    let sum_ab: f64 = contingency.values().map(|&c| comb2(c)).sum();
    let sum_a: f64 = a_counts.values().map(|&c| comb2(c)).sum();
    let sum_b: f64 = b_counts.values().map(|&c| comb2(c)).sum();
    let total = comb2(n as u64);
    let expected = sum_a * sum_b / total;
    let max_index = (sum_a + sum_b) / 2.0;
    if (max_index - expected).abs() < f64::EPSILON {
        return 1.0;
    }
    (sum_ab - expected) / (max_index - expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The published seven-class evaluation grid used as an arithmetic
    /// anchor throughout the tests.
    pub(crate) fn anchor_matrix() -> ConfusionMatrix {
        ConfusionMatrix::from_counts(vec![
            vec![146, 0, 0, 1, 0, 0, 0],
            vec![3, 131, 0, 0, 0, 0, 0],
            vec![0, 0, 75, 0, 0, 0, 0],
            vec![2, 0, 0, 66, 0, 1, 0],
            vec![6, 0, 0, 0, 78, 2, 0],
            vec![1, 0, 0, 0, 0, 43, 0],
            vec![0, 0, 0, 0, 0, 0, 33],
        ])
    }

    #[test]
    fn si_anchor_is_exact() {
        let si = specificity_index(44, 7, 206).unwrap();
        assert_eq!(si, 0.19);
        assert_eq!(si, 38.0 / 200.0);
    }

    #[test]
    fn si_boundaries() {
        assert_eq!(specificity_index(206, 7, 206).unwrap(), 1.0);
        let one_per_class = specificity_index(7, 7, 206).unwrap();
        assert_eq!(one_per_class, 1.0 / 200.0);
        assert!(matches!(
            specificity_index(5, 7, 6),
            Err(MetricsError::BadDenominator { .. })
        ));
    }

    #[test]
    fn si_increases_with_rules() {
        let mut prev = f64::NEG_INFINITY;
        for rules in [0, 7, 44, 100, 206] {
            let si = specificity_index(rules, 7, 206).unwrap();
            assert!(si > prev);
            prev = si;
        }
    }

    #[test]
    fn confusion_matrix_counts_pairs() {
        let m = confusion_matrix(&[0, 1, 1, 2], &[0, 1, 0, 2], 3).unwrap();
        assert_eq!(m.get(0, 0), 1);
        assert_eq!(m.get(1, 1), 1);
        assert_eq!(m.get(1, 0), 1);
        assert_eq!(m.get(2, 2), 1);
        assert_eq!(m.total(), 4);

        let perfect = confusion_matrix(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        assert_eq!(perfect.trace(), 3);

        let empty = confusion_matrix(&[], &[], 3).unwrap();
        assert_eq!(empty.total(), 0);
    }

    #[test]
    fn confusion_matrix_rejects_bad_input() {
        assert!(matches!(
            confusion_matrix(&[0, 1], &[0], 2),
            Err(MetricsError::LengthMismatch { .. })
        ));
        assert!(matches!(
            confusion_matrix(&[0, 5], &[0, 1], 2),
            Err(MetricsError::LabelOutOfRange { label: 5, .. })
        ));
    }

    #[test]
    fn anchor_row_reconstruction() {
        let m = anchor_matrix();
        assert_eq!(m.counts()[0], vec![146, 0, 0, 1, 0, 0, 0]);
        assert_eq!(m.row_sum(0), 147);
    }

    #[test]
    fn anchor_percentages_round_as_published() {
        let m = anchor_matrix();
        let acc = per_class_accuracy(&m);
        let rounded: Vec<f64> = acc
            .iter()
            .map(|a| round_half_up_1(a.unwrap()))
            .collect();
        assert_eq!(rounded, vec![99.3, 97.8, 100.0, 95.7, 90.7, 97.7, 100.0]);
    }

    #[test]
    fn identity_matrix_is_all_hundred() {
        let m = confusion_matrix(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        for acc in per_class_accuracy(&m) {
            assert_eq!(acc, Some(100.0));
        }
        assert_eq!(m.overall_accuracy(), 100.0);
    }

    #[test]
    fn empty_row_is_undefined() {
        let m = confusion_matrix(&[0, 0], &[0, 1], 3).unwrap();
        let acc = per_class_accuracy(&m);
        assert!(acc[0].is_some());
        assert_eq!(acc[1], None);
        assert_eq!(acc[2], None);
    }

    #[test]
    fn accuracy_is_100_iff_row_diagonal() {
        let m = confusion_matrix(&[0, 0, 1], &[0, 0, 0], 2).unwrap();
        let acc = per_class_accuracy(&m);
        assert_eq!(acc[0], Some(100.0));
        assert_eq!(acc[1], Some(0.0));
    }

    #[test]
    fn eval_report_text_contains_anchor_figures() {
        let report = EvalReport::new(anchor_matrix(), 44, 206).unwrap();
        let text = report.to_text();
        assert!(text.contains("99.3 %"), "text was:\n{text}");
        assert!(text.contains("90.7 %"));
        assert!(text.contains("SI: 0.19"));
    }

    #[test]
    fn ari_perfect_and_permuted() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[0, 0, 1, 1]), 1.0);
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
    }

    #[test]
    fn ari_partial_agreement_is_between_zero_and_one() {
        let ari = adjusted_rand_index(&[0, 0, 1, 1, 2, 2], &[0, 0, 0, 1, 1, 1]);
        assert!(ari > 0.0 && ari < 1.0, "ari = {ari}");
    }

    #[test]
    fn ari_against_hand_computed_value() {
        // contingency [[2,1],[0,3]]: sum_ab = 1 + 3 = 4; sum_a = 3 + 3 = 6;
        // sum_b = 1 + 6 = 7; total = 15; expected = 2.8; max = 6.5.
        let ari = adjusted_rand_index(&[0, 0, 0, 1, 1, 1], &[0, 0, 1, 1, 1, 1]);
        let expected = (4.0 - 2.8) / (6.5 - 2.8);
        assert!((ari - expected).abs() < 1e-12);
    }
}

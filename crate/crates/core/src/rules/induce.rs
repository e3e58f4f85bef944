//! Unordered sequential-covering induction with beam search.
//!
//! For each class in index order the learner repeatedly beam-searches
//! for the complex with the best Laplace accuracy toward that class on
//! the current working set, accepts it if it clears the significance and
//! coverage thresholds, and removes the covered examples *of the target
//! class only* (standard unordered semantics, so other classes keep
//! their counter-evidence). A rule's stored distribution is counted over
//! the full original table, which makes the prediction arithmetic
//! independent of induction order.
//!
//! Tie-breaks are fully specified so induction is deterministic: higher
//! Laplace accuracy, then higher coverage, then fewer tests, then
//! lexicographically smaller tests.

use std::collections::HashSet;

use crate::cues::{CueSchema, PatternTable};

use super::{laplace_accuracy, matches, Complex, Rule, RuleError, RuleSet, RuleTest};

/// Induction parameters. The significance threshold is the
/// likelihood-ratio statistic cutoff; 0 disables the test, 6.64
/// corresponds to the 1% chi-square level with one degree of freedom.
#[derive(Debug, Clone)]
pub struct InduceOptions {
    pub beam_width: usize,
    pub sig_threshold: f64,
    pub min_coverage: u64,
}

impl Default for InduceOptions {
    fn default() -> Self {
        InduceOptions {
            beam_width: 5,
            sig_threshold: 0.0,
            min_coverage: 1,
        }
    }
}

/// A candidate complex with its quality statistics on the working set.
#[derive(Debug, Clone)]
struct Candidate {
    complex: Complex,
    covered: Vec<u64>,
    coverage: u64,
    laplace: f64,
}

impl Candidate {
    /// Beam ordering: better Laplace accuracy first, then higher
    /// coverage, then fewer tests, then lexicographic tests.
    fn beats(&self, other: &Candidate) -> bool {
        if self.laplace != other.laplace {
            return self.laplace > other.laplace;
        }
        if self.coverage != other.coverage {
            return self.coverage > other.coverage;
        }
        if self.complex.len() != other.complex.len() {
            return self.complex.len() < other.complex.len();
        }
        self.complex.tests < other.complex.tests
    }
}

fn evaluate(
    complex: Complex,
    working: &[(usize, &[u16])],
    labels: &[usize],
    target: usize,
    class_count: usize,
) -> Candidate {
    let mut covered = vec![0u64; class_count];
    for &(row, values) in working {
        if complex
            .tests
            .iter()
            .all(|t| values[t.cue] == t.value)
        {
            covered[labels[row]] += 1;
        }
    }
    let coverage = covered.iter().sum();
    let laplace = laplace_accuracy(&covered, target, class_count)
        .expect("target checked by caller");
    Candidate {
        complex,
        covered,
        coverage,
        laplace,
    }
}

/// Likelihood-ratio significance of the covered distribution against the
/// working set's class prior: `2 * sum_i f_i ln(f_i / e_i)`.
fn significance(covered: &[u64], prior: &[f64]) -> f64 {
    let total: u64 = covered.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mut stat = 0.0;
    for (i, &f) in covered.iter().enumerate() {
        if f == 0 {
            continue;
        }
        let e = total as f64 * prior[i];
        stat += 2.0 * f as f64 * (f as f64 / e).ln();
    }
    stat
}

/// Beam search for the best complex toward `target` on the working set.
/// Zero-coverage complexes are pruned: their specialisations stay empty.
fn best_complex(
    working: &[(usize, &[u16])],
    labels: &[usize],
    target: usize,
    class_count: usize,
    schema: &CueSchema,
    beam_width: usize,
) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    let mut star = vec![Complex::empty()];
    let empty = evaluate(Complex::empty(), working, labels, target, class_count);
    if empty.coverage > 0 {
        best = Some(empty);
    }

    while !star.is_empty() {
        let mut seen: HashSet<Complex> = HashSet::new();
        let mut next: Vec<Candidate> = Vec::new();
        for complex in &star {
            for (cue, spec) in schema.cues().iter().enumerate() {
                for value in 0..spec.alphabet.len() as u16 {
                    let Some(specialized) = complex.specialize(RuleTest { cue, value }) else {
                        continue;
                    };
                    if !seen.insert(specialized.clone()) {
                        continue;
                    }
                    let cand = evaluate(specialized, working, labels, target, class_count);
                    if cand.coverage == 0 {
                        continue;
                    }
                    if best.as_ref().map_or(true, |b| cand.beats(b)) {
                        best = Some(cand.clone());
                    }
                    next.push(cand);
                }
            }
        }
        next.sort_by(|a, b| {
            if a.beats(b) {
                std::cmp::Ordering::Less
            } else if b.beats(a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        next.truncate(beam_width);
        star = next.into_iter().map(|c| c.complex).collect();
    }
    best
}

/// Count a complex's class distribution over the full table.
fn full_distribution(
    complex: &Complex,
    table: &PatternTable,
    class_count: usize,
) -> Vec<u64> {
    let mut dist = vec![0u64; class_count];
    for row in table.rows() {
        if matches(complex, &row.pattern) {
            dist[row.class.expect("labeled table")] += 1;
        }
    }
    dist
}

/// Induce an unordered rule set from a labeled pattern table.
pub fn induce_rules(
    table: &PatternTable,
    schema: &CueSchema,
    opts: &InduceOptions,
) -> Result<RuleSet, RuleError> {
    if table.is_empty() {
        return Err(RuleError::EmptyTable);
    }
    if !table.is_labeled() {
        return Err(RuleError::UnlabeledRows);
    }
    assert!(opts.beam_width >= 1, "beam_width must be >= 1");

    let labels: Vec<usize> = table.rows().iter().map(|r| r.class.unwrap()).collect();
    let class_count = labels.iter().max().unwrap() + 1;
    let class_count = class_count.max(2);

    // Majority class of the full table, ties toward the lowest index.
    let mut totals = vec![0u64; class_count];
    for &l in &labels {
        totals[l] += 1;
    }
    let mut default_class = 0;
    for (j, &t) in totals.iter().enumerate() {
        if t > totals[default_class] {
            default_class = j;
        }
    }

    let values: Vec<&[u16]> = table
        .rows()
        .iter()
        .map(|r| r.pattern.values.as_slice())
        .collect();

    let mut rules = Vec::new();
    for target in 0..class_count {
        // Working set: all rows, shrunk by removing covered target rows.
        let mut working: Vec<(usize, &[u16])> =
            (0..table.len()).map(|i| (i, values[i])).collect();
        loop {
            let remaining_targets = working
                .iter()
                .filter(|&&(row, _)| labels[row] == target)
                .count();
            if remaining_targets == 0 {
                break;
            }
            let total = working.len() as f64;
            let mut prior = vec![0.0f64; class_count];
            for &(row, _) in &working {
                prior[labels[row]] += 1.0 / total;
            }

            let Some(cand) = best_complex(
                &working,
                &labels,
                target,
                class_count,
                schema,
                opts.beam_width,
            ) else {
                break;
            };
            if cand.covered[target] == 0 {
                break;
            }
            if cand.coverage < opts.min_coverage {
                break;
            }
            if opts.sig_threshold > 0.0
                && significance(&cand.covered, &prior) < opts.sig_threshold
            {
                break;
            }

            rules.push(Rule {
                distribution: full_distribution(&cand.complex, table, class_count),
                target_class: target,
                complex: cand.complex.clone(),
            });
            working.retain(|&(row, values)| {
                !(labels[row] == target
                    && cand.complex.tests.iter().all(|t| values[t.cue] == t.value))
            });
        }
    }

    Ok(RuleSet {
        schema_id: table.schema().id().to_string(),
        class_count,
        default_class,
        rules,
    })
}

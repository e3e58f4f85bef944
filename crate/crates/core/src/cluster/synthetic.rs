//! Sampling pattern tables from a mixture model, used as a testing
//! oracle: the generating labels come back alongside the table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cues::{CuePattern, CueSchema, PatternRow, PatternTable};

use super::{check_schema, ClusterError, MixtureModel};

fn sample_categorical(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Draw `n` i.i.d. patterns: class from the mixing weights, then each cue
/// value from the class's categorical. Deterministic per seed. Returns
/// the table and the true class labels.
pub fn generate_synthetic(
    model: &MixtureModel,
    schema: &CueSchema,
    n: usize,
    seed: u64,
) -> Result<(PatternTable, Vec<usize>), ClusterError> {
    check_schema(model, schema)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = sample_categorical(&model.weights, &mut rng);
        let values: Vec<u16> = model.params[class]
            .iter()
            .map(|theta| sample_categorical(theta, &mut rng) as u16)
            .collect();
        rows.push(PatternRow {
            utterance_id: format!("g{i:06}"),
            pattern: CuePattern {
                schema_id: schema.id().to_string(),
                values,
            },
            class: None,
        });
        labels.push(class);
    }
    let table = PatternTable::new(schema.clone(), rows).expect("generated rows conform");
    Ok((table, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cues::{CueId, CueSpec};

    fn schema(sizes: &[usize]) -> CueSchema {
        let ids = [CueId::Ut, CueId::St, CueId::Fvt];
        CueSchema::new(
            sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| CueSpec {
                    id: ids[i],
                    alphabet: (0..s).map(|v| format!("v{v}")).collect(),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn k1_frequencies_approach_theta() {
        let s = schema(&[3]);
        let model = MixtureModel {
            schema_id: s.id().to_string(),
            k: 1,
            weights: vec![1.0],
            params: vec![vec![vec![0.6, 0.3, 0.1]]],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        let (table, _) = generate_synthetic(&model, &s, 1000, 42).unwrap();
        let mut counts = [0usize; 3];
        for row in table.rows() {
            counts[row.pattern.values[0] as usize] += 1;
        }
        for (v, &expect) in [0.6, 0.3, 0.1].iter().enumerate() {
            let freq = counts[v] as f64 / 1000.0;
            assert!(
                (freq - expect).abs() < 0.05,
                "value {v}: {freq} vs {expect}"
            );
        }
    }

    #[test]
    fn same_seed_same_table() {
        let s = schema(&[2, 2]);
        let model = MixtureModel {
            schema_id: s.id().to_string(),
            k: 2,
            weights: vec![0.5, 0.5],
            params: vec![
                vec![vec![0.9, 0.1], vec![0.8, 0.2]],
                vec![vec![0.1, 0.9], vec![0.2, 0.8]],
            ],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        let (a, la) = generate_synthetic(&model, &s, 200, 7).unwrap();
        let (b, lb) = generate_synthetic(&model, &s, 200, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(la, lb);
        let (c, _) = generate_synthetic(&model, &s, 200, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn label_histogram_approaches_weights() {
        let s = schema(&[2]);
        let model = MixtureModel {
            schema_id: s.id().to_string(),
            k: 3,
            weights: vec![0.5, 0.3, 0.2],
            params: vec![
                vec![vec![0.9, 0.1]],
                vec![vec![0.5, 0.5]],
                vec![vec![0.1, 0.9]],
            ],
            alpha: 1.0,
            seed: 0,
            score: 0.0,
        };
        let (_, labels) = generate_synthetic(&model, &s, 10_000, 3).unwrap();
        let mut hist = [0usize; 3];
        for &l in &labels {
            hist[l] += 1;
        }
        for (j, &w) in model.weights.iter().enumerate() {
            let freq = hist[j] as f64 / 10_000.0;
            assert!((freq - w).abs() < 0.05, "class {j}: {freq} vs {w}");
        }
    }
}

//! MAP EM for the categorical mixture.
//!
//! The objective maximised is the smoothed log-posterior
//!
//! ```text
//! J = sum_i log sum_k pi_k prod_c theta_{k,c,x_ic}
//!       + alpha * sum_k log pi_k
//!       + alpha * sum_{k,c,v} log theta_{k,c,v}
//! ```
//!
//! whose M-step is the add-alpha update `theta = (N + alpha) / (N_k +
//! |V| alpha)`; with the default `alpha = 1` this is add-one smoothing and
//! keeps every probability strictly positive. EM is monotone in `J`.
//!
//! Duplicate patterns are folded into distinct rows with multiplicities;
//! the objective and updates are weighted accordingly, which is
//! arithmetically identical to iterating over raw rows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cues::PatternTable;

use super::{ClusterError, MixtureModel};

/// Tuning knobs for [`fit_mixture`].
#[derive(Debug, Clone)]
pub struct FitOptions {
    pub seed: u64,
    pub restarts: usize,
    pub alpha: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            seed: 0,
            restarts: 20,
            alpha: 1.0,
            tol: 1e-8,
            max_iter: 500,
        }
    }
}

/// Per-restart diagnostics captured by [`fit_mixture_traced`].
#[derive(Debug, Clone)]
pub struct FitTrace {
    /// Smoothed log-posterior after every iteration.
    pub log_posteriors: Vec<f64>,
    /// Largest `|sum(weights) - 1|` seen after any M-step.
    pub max_weight_err: f64,
    /// Largest `|sum(theta_row) - 1|` seen after any M-step.
    pub max_theta_err: f64,
    /// Largest `|sum(resp_row) - 1|` seen after any E-step.
    pub max_resp_err: f64,
}

struct DenseTable {
    /// Distinct pattern rows, values by cue.
    values: Vec<Vec<u16>>,
    /// Multiplicity of each distinct row.
    counts: Vec<f64>,
    /// Original row index -> distinct row index.
    row_map: Vec<usize>,
    alphabet_sizes: Vec<usize>,
    n: f64,
}

fn densify(table: &PatternTable) -> DenseTable {
    let mut index: std::collections::HashMap<&[u16], usize> = std::collections::HashMap::new();
    let mut values: Vec<Vec<u16>> = Vec::new();
    let mut counts: Vec<f64> = Vec::new();
    let mut row_map = Vec::with_capacity(table.len());
    for row in table.rows() {
        let idx = *index.entry(&row.pattern.values).or_insert_with(|| {
            values.push(row.pattern.values.clone());
            counts.push(0.0);
            values.len() - 1
        });
        counts[idx] += 1.0;
        row_map.push(idx);
    }
    DenseTable {
        values,
        counts,
        row_map,
        alphabet_sizes: table.schema().cues().iter().map(|c| c.alphabet.len()).collect(),
        n: table.len() as f64,
    }
}

/// splitmix64: deterministic per-restart seed derivation.
fn derive_seed(seed: u64, restart: usize) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E3779B97F4A7C15u64.wrapping_mul(restart as u64 + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

struct EmState {
    weights: Vec<f64>,
    /// params[k][c][v]
    params: Vec<Vec<Vec<f64>>>,
    log_weights: Vec<f64>,
    log_params: Vec<Vec<Vec<f64>>>,
}

impl EmState {
    fn new(k: usize, alphabet_sizes: &[usize]) -> EmState {
        let params: Vec<Vec<Vec<f64>>> = (0..k)
            .map(|_| alphabet_sizes.iter().map(|&s| vec![0.0; s]).collect())
            .collect();
        EmState {
            weights: vec![0.0; k],
            log_weights: vec![0.0; k],
            log_params: params.clone(),
            params,
        }
    }

    /// Add-alpha M-step from (distinct-row) responsibilities. Returns the
    /// largest normalisation error for the trace.
    fn m_step(&mut self, data: &DenseTable, resp: &[Vec<f64>], alpha: f64) -> (f64, f64) {
        let k = self.weights.len();
        let mut class_mass = vec![0.0; k];
        for c in self.params.iter_mut().flatten() {
            c.iter_mut().for_each(|v| *v = 0.0);
        }
        for (row, r) in resp.iter().enumerate() {
            let w = data.counts[row];
            for j in 0..k {
                let m = w * r[j];
                class_mass[j] += m;
                for (c, &v) in data.values[row].iter().enumerate() {
                    self.params[j][c][v as usize] += m;
                }
            }
        }
        let mut weight_err = 0.0f64;
        let mut theta_err = 0.0f64;
        let denom = data.n + k as f64 * alpha;
        for j in 0..k {
            self.weights[j] = (class_mass[j] + alpha) / denom;
            self.log_weights[j] = self.weights[j].ln();
        }
        weight_err = weight_err.max((self.weights.iter().sum::<f64>() - 1.0).abs());
        for j in 0..k {
            for (c, &size) in data.alphabet_sizes.iter().enumerate() {
                let row_denom = class_mass[j] + size as f64 * alpha;
                let theta = &mut self.params[j][c];
                for v in 0..size {
                    theta[v] = (theta[v] + alpha) / row_denom;
                    self.log_params[j][c][v] = theta[v].ln();
                }
                theta_err = theta_err.max((theta.iter().sum::<f64>() - 1.0).abs());
            }
        }
        (weight_err, theta_err)
    }

    /// E-step: refresh responsibilities in place, return (J, resp_err).
    fn e_step(&self, data: &DenseTable, resp: &mut [Vec<f64>], alpha: f64) -> (f64, f64) {
        let k = self.weights.len();
        let mut data_ll = 0.0;
        let mut resp_err = 0.0f64;
        for (row, r) in resp.iter_mut().enumerate() {
            for (j, rj) in r.iter_mut().enumerate() {
                let mut s = self.log_weights[j];
                for (c, &v) in data.values[row].iter().enumerate() {
                    s += self.log_params[j][c][v as usize];
                }
                *rj = s;
            }
            let max = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut sum = 0.0;
            for rj in r.iter_mut() {
                *rj = (*rj - max).exp();
                sum += *rj;
            }
            for rj in r.iter_mut() {
                *rj /= sum;
            }
            resp_err = resp_err.max((r.iter().sum::<f64>() - 1.0).abs());
            data_ll += data.counts[row] * (max + sum.ln());
        }
        let mut prior = 0.0;
        for j in 0..k {
            prior += alpha * self.log_weights[j];
            for c in &self.log_params[j] {
                prior += alpha * c.iter().sum::<f64>();
            }
        }
        (data_ll + prior, resp_err)
    }
}

fn run_em(
    data: &DenseTable,
    mut resp: Vec<Vec<f64>>,
    k: usize,
    opts: &FitOptions,
) -> (EmState, f64, FitTrace) {
    let mut state = EmState::new(k, &data.alphabet_sizes);
    let mut trace = FitTrace {
        log_posteriors: Vec::new(),
        max_weight_err: 0.0,
        max_theta_err: 0.0,
        max_resp_err: 0.0,
    };
    let mut prev = f64::NEG_INFINITY;
    for _ in 0..opts.max_iter {
        let (w_err, t_err) = state.m_step(data, &resp, opts.alpha);
        let (j, r_err) = state.e_step(data, &mut resp, opts.alpha);
        trace.max_weight_err = trace.max_weight_err.max(w_err);
        trace.max_theta_err = trace.max_theta_err.max(t_err);
        trace.max_resp_err = trace.max_resp_err.max(r_err);
        trace.log_posteriors.push(j);
        if prev.is_finite() {
            let rel = (j - prev) / prev.abs().max(1e-12);
            if rel < opts.tol {
                break;
            }
        }
        prev = j;
    }
    let j = *trace.log_posteriors.last().expect("max_iter >= 1");
    (state, j, trace)
}

fn dirichlet_init(rows: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| {
            let mut r: Vec<f64> = (0..k)
                .map(|_| -(rng.gen::<f64>().max(f64::MIN_POSITIVE)).ln())
                .collect();
            let sum: f64 = r.iter().sum();
            r.iter_mut().for_each(|x| *x /= sum);
            r
        })
        .collect()
}

fn validate(table: &PatternTable, k: usize, opts: &FitOptions) -> Result<(), ClusterError> {
    if table.is_empty() {
        return Err(ClusterError::EmptyTable);
    }
    if k == 0 {
        return Err(ClusterError::ZeroClasses);
    }
    if !(opts.alpha > 0.0) {
        return Err(ClusterError::NonPositiveAlpha(opts.alpha));
    }
    if opts.restarts == 0 {
        return Err(ClusterError::ZeroRestarts);
    }
    Ok(())
}

fn score_of(j: f64, k: usize, data: &DenseTable) -> f64 {
    let per_class: usize = data.alphabet_sizes.iter().map(|&s| s - 1).sum();
    let d = (k - 1) + k * per_class;
    j - (d as f64 / 2.0) * data.n.ln()
}

fn build_model(state: EmState, table: &PatternTable, j: f64, k: usize, opts: &FitOptions, data: &DenseTable) -> MixtureModel {
    MixtureModel {
        schema_id: table.schema().id().to_string(),
        k,
        weights: state.weights,
        params: state.params,
        alpha: opts.alpha,
        seed: opts.seed,
        score: score_of(j, k, data),
    }
}

/// Fit a `k`-class mixture by EM with seeded multi-restart. Per-restart
/// seeds derive deterministically from `(seed, restart index)`; the best
/// restart by final log-posterior wins, ties toward the lower index.
pub fn fit_mixture(
    table: &PatternTable,
    k: usize,
    opts: &FitOptions,
) -> Result<MixtureModel, ClusterError> {
    fit_mixture_traced(table, k, opts).map(|(m, _)| m)
}

/// Like [`fit_mixture`], also returning one [`FitTrace`] per restart.
pub fn fit_mixture_traced(
    table: &PatternTable,
    k: usize,
    opts: &FitOptions,
) -> Result<(MixtureModel, Vec<FitTrace>), ClusterError> {
    validate(table, k, opts)?;
    let data = densify(table);
    let mut traces = Vec::with_capacity(opts.restarts);
    let mut best: Option<(EmState, f64)> = None;
    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, restart));
        let resp = dirichlet_init(data.values.len(), k, &mut rng);
        let (state, j, trace) = run_em(&data, resp, k, opts);
        traces.push(trace);
        if best.as_ref().map_or(true, |(_, bj)| j > *bj) {
            best = Some((state, j));
        }
    }
    let (state, j) = best.expect("restarts >= 1");
    Ok((build_model(state, table, j, k, opts, &data), traces))
}

/// Run EM from explicit per-row initial responsibilities (one probability
/// vector per table row). Used to study initialisation effects.
pub fn fit_with_init(
    table: &PatternTable,
    init: &[Vec<f64>],
    opts: &FitOptions,
) -> Result<(MixtureModel, FitTrace), ClusterError> {
    let k = init.first().map(|r| r.len()).unwrap_or(0);
    validate(table, k.max(1), opts)?;
    assert_eq!(init.len(), table.len(), "one init vector per row");
    let data = densify(table);
    // Fold duplicate rows by averaging their initial responsibilities.
    let mut resp = vec![vec![0.0; k]; data.values.len()];
    for (row, r) in init.iter().enumerate() {
        let d = data.row_map[row];
        for j in 0..k {
            resp[d][j] += r[j] / data.counts[d];
        }
    }
    let (state, j, trace) = run_em(&data, resp, k, opts);
    Ok((build_model(state, table, j, k, opts, &data), trace))
}

/// Fit every `k` in `k_range` (inclusive) and rank the models by
/// `score = best log-posterior - (d/2) ln n`, descending; score ties
/// break toward the smaller `k`.
pub fn select_models(
    table: &PatternTable,
    k_range: (usize, usize),
    opts: &FitOptions,
) -> Result<Vec<MixtureModel>, ClusterError> {
    let (lo, hi) = k_range;
    if lo == 0 || lo > hi {
        return Err(ClusterError::EmptyKRange(lo, hi));
    }
    let mut models = Vec::with_capacity(hi - lo + 1);
    for k in lo..=hi {
        models.push(fit_mixture(table, k, opts)?);
    }
    models.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.k.cmp(&b.k))
    });
    Ok(models)
}

/// Hard-assignment log-posterior: the J attained by the params the M-step
/// would produce from a fixed partition. Test-only helper.
#[cfg(test)]
pub(crate) fn hard_partition_posterior(
    table: &PatternTable,
    labels: &[usize],
    k: usize,
    alpha: f64,
) -> f64 {
    let data = densify(table);
    let mut resp = vec![vec![0.0; k]; data.values.len()];
    for (row, &label) in labels.iter().enumerate() {
        let d = data.row_map[row];
        resp[d][label] += 1.0 / data.counts[d];
    }
    let mut state = EmState::new(k, &data.alphabet_sizes);
    state.m_step(&data, &resp, alpha);
    let (j, _) = state.e_step(&data, &mut resp, alpha);
    j
}

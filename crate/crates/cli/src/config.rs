//! Pipeline configuration: one JSON file drives every stage.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cueclass::cues::CueId;

use crate::CliError;

/// Train/test split parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitConfig {
    pub ratio: f64,
    pub seed: u64,
}

/// Clustering parameters. `k_range` is inclusive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub k_range: (usize, usize),
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    pub seed: u64,
}

fn default_restarts() -> usize {
    20
}
fn default_alpha() -> f64 {
    1.0
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    500
}

/// Rule-induction parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RulesConfig {
    #[serde(default = "default_beam")]
    pub beam_width: usize,
    #[serde(default)]
    pub sig_threshold: f64,
    #[serde(default = "default_min_coverage")]
    pub min_coverage: u64,
}

fn default_beam() -> usize {
    5
}
fn default_min_coverage() -> u64 {
    1
}

impl Default for RulesConfig {
    fn default() -> Self {
        RulesConfig {
            beam_width: default_beam(),
            sig_threshold: 0.0,
            min_coverage: default_min_coverage(),
        }
    }
}

/// Synthetic-corpus generator parameters (the `gen` stage).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenConfig {
    #[serde(default = "default_n_utterances")]
    pub n_utterances: usize,
    #[serde(default = "default_n_dialogues")]
    pub n_dialogues: usize,
    /// Probability that an utterance keeps its family's template instead
    /// of a template drawn from the global pool.
    #[serde(default = "default_purity")]
    pub purity: f64,
    pub seed: u64,
}

fn default_n_utterances() -> usize {
    2400
}
fn default_n_dialogues() -> usize {
    64
}
fn default_purity() -> f64 {
    0.92
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_utterances: default_n_utterances(),
            n_dialogues: default_n_dialogues(),
            purity: default_purity(),
            seed: 0,
        }
    }
}

/// The whole pipeline configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub corpus_path: PathBuf,
    /// `None` selects the bundled Dutch lexicon.
    #[serde(default)]
    pub lexicon_path: Option<PathBuf>,
    /// Cue ids in schema order, e.g. `["speaker","ut","st","fvt","qm"]`.
    pub schema: Vec<String>,
    pub split: SplitConfig,
    pub cluster: ClusterConfig,
    #[serde(default)]
    pub rules: RulesConfig,
    #[serde(default)]
    pub context_cue: bool,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub gen: Option<GenConfig>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<PipelineConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.split.ratio > 0.0 && self.split.ratio <= 1.0) {
            return Err(CliError::Usage(format!(
                "split.ratio {} out of range (0, 1]",
                self.split.ratio
            )));
        }
        let (lo, hi) = self.cluster.k_range;
        if lo == 0 || lo > hi {
            return Err(CliError::Usage(format!("cluster.k_range {lo}..={hi} is empty")));
        }
        if !(self.cluster.alpha > 0.0) {
            return Err(CliError::Usage("cluster.alpha must be positive".into()));
        }
        if self.cluster.restarts == 0 {
            return Err(CliError::Usage("cluster.restarts must be >= 1".into()));
        }
        if self.rules.beam_width == 0 {
            return Err(CliError::Usage("rules.beam_width must be >= 1".into()));
        }
        self.cue_ids()?;
        Ok(())
    }

    /// The configured schema's cue ids. `prev_class` is rejected: the
    /// context cue enters through `context_cue`, not the schema list.
    pub fn cue_ids(&self) -> Result<Vec<CueId>, CliError> {
        if self.schema.is_empty() {
            return Err(CliError::Usage("schema must list at least one cue".into()));
        }
        self.schema
            .iter()
            .map(|name| match CueId::parse(name) {
                Some(CueId::PrevClass) => Err(CliError::Usage(
                    "prev_class is driven by context_cue, not the schema list".into(),
                )),
                Some(id) => Ok(id),
                None => Err(CliError::Usage(format!("unknown cue id `{name}`"))),
            })
            .collect()
    }

    /// Canonical JSON used for the manifest's config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        serde_json::json!({
            "corpus_path": "corpus.jsonl",
            "schema": ["ut", "st", "fvt", "qm"],
            "split": {"ratio": 0.75, "seed": 17},
            "cluster": {"k_range": [7, 7], "seed": 23},
            "output_dir": "out"
        })
        .to_string()
    }

    #[test]
    fn defaults_fill_in() {
        let config: PipelineConfig = serde_json::from_str(&minimal_json()).unwrap();
        config.validate().unwrap();
        assert_eq!(config.cluster.restarts, 20);
        assert_eq!(config.cluster.alpha, 1.0);
        assert_eq!(config.rules.beam_width, 5);
        assert!(!config.context_cue);
        assert!(config.lexicon_path.is_none());
        assert_eq!(config.cue_ids().unwrap().len(), 4);
    }

    #[test]
    fn bad_ratio_is_usage_error() {
        let mut config: PipelineConfig = serde_json::from_str(&minimal_json()).unwrap();
        config.split.ratio = 1.5;
        assert!(matches!(config.validate(), Err(CliError::Usage(_))));
    }

    #[test]
    fn prev_class_in_schema_is_rejected() {
        let mut config: PipelineConfig = serde_json::from_str(&minimal_json()).unwrap();
        config.schema.push("prev_class".into());
        assert!(matches!(config.validate(), Err(CliError::Usage(_))));
    }

    #[test]
    fn unknown_cue_is_rejected() {
        let mut config: PipelineConfig = serde_json::from_str(&minimal_json()).unwrap();
        config.schema.push("mood".into());
        assert!(matches!(config.validate(), Err(CliError::Usage(_))));
    }
}

//! Corpus-to-rules toolkit for dialogue utterance classification.
//!
//! The pipeline works on *cue patterns*: tuples of shallow surface features
//! (utterance type, subject type, verb types, question mark, ...) read off
//! annotated utterances. Classes of patterns are discovered with a finite
//! mixture of per-cue categorical distributions, a compact unordered rule
//! set is induced over those classes, and the result is scored with a
//! confusion matrix and a specificity index.
//!
//! The crate is organised in five modules, mirroring the stages:
//!
//! * [`corpus`] — load, validate and split annotated dialogue corpora;
//! * [`cues`] — lexicon, cue schema and per-utterance pattern extraction;
//! * [`cluster`] — categorical mixture fitting (EM), model selection and
//!   cluster diagnostics;
//! * [`rules`] — unordered if-then rule induction and prediction;
//! * [`metrics`] — specificity index, confusion matrix, per-class accuracy.
//!
//! All operations are deterministic given their seeds; nothing reads the
//! clock or the environment.

pub mod cluster;
pub mod corpus;
pub mod cues;
pub mod metrics;
pub mod rules;

pub use cluster::{ClusterReport, MixtureModel};
pub use corpus::{AnnotatedToken, Corpus, Pos, Speaker, SplitResult, Utterance};
pub use cues::{CueId, CueLexicon, CuePattern, CueSchema, PatternTable};
pub use metrics::{ConfusionMatrix, EvalReport};
pub use rules::{Complex, Rule, RuleSet, RuleTest};

//! Annotated dialogue corpora: loading, validation and train/test splitting.
//!
//! A corpus is a flat list of utterances in document order. Each utterance
//! carries token-level annotations (POS, person, number, pronoun subtype and
//! an optional shallow-chunk index); the cue extractor reads every feature
//! from these annotations, so no tagger or parser lives in this crate.
//!
//! The on-disk format is JSON lines: one utterance object per line, field
//! names in `lower_snake_case`, enum values as uppercase strings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Part-of-speech tag of an annotated token. Closed alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pos {
    FinV,
    InfV,
    Noun,
    Proper,
    Pron,
    Prep,
    Det,
    Adj,
    Adv,
    Num,
    Conj,
    Intj,
    Punct,
    Other,
}

/// Grammatical person annotation for finite verbs and pronouns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Person {
    P1,
    P2,
    P3,
}

/// Grammatical number annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Number {
    Sg,
    Pl,
}

/// Pronoun subtype; present exactly when `pos == Pron`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PronSubtype {
    Personal,
    Demonstrative,
    Interrogative,
    Other,
}

/// Which side of the dialogue produced an utterance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Speaker {
    Client,
    System,
}

/// One token with the linguistic annotations a tagger/parser would supply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub person: Option<Person>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub number: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pron_subtype: Option<PronSubtype>,
    /// Shallow constituent index, 0-based, non-decreasing left to right.
    /// Present on all tokens of an utterance or on none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chunk_index: Option<u32>,
}

/// One dialogue utterance with its annotated tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    pub id: String,
    pub dialogue_id: String,
    pub turn_index: u32,
    pub position_in_turn: u32,
    pub speaker: Speaker,
    pub tokens: Vec<AnnotatedToken>,
}

/// An ordered utterance list plus a dialogue index derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    utterances: Vec<Utterance>,
    dialogues: BTreeMap<String, Vec<String>>,
}

/// Outcome of [`split_corpus`]: a train/test partition of the utterances.
#[derive(Debug, Clone)]
pub struct SplitResult {
    pub train: Corpus,
    pub test: Corpus,
    pub seed: u64,
    pub ratio: f64,
}

/// Errors raised while reading or splitting corpora.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: malformed record: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate utterance id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: utterance `{id}` has an empty token list")]
    EmptyTokens { line: usize, id: String },
    #[error("corpus invariant violated: {0}")]
    Invalid(String),
    #[error("split ratio {0} out of range (0, 1]")]
    RatioOutOfRange(f64),
    #[error("cannot split an empty corpus")]
    EmptyCorpus,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// One invariant violation found by [`validate_corpus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub utterance_id: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateId,
    DuplicatePosition,
    EmptyTokens,
    PersonNumberOnWrongPos,
    PronSubtypeMismatch,
    ChunkIndexPartial,
    ChunkIndexDecreasing,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::DuplicateId => "duplicate_id",
            ViolationKind::DuplicatePosition => "duplicate_position",
            ViolationKind::EmptyTokens => "empty_tokens",
            ViolationKind::PersonNumberOnWrongPos => "person_number_on_wrong_pos",
            ViolationKind::PronSubtypeMismatch => "pron_subtype_mismatch",
            ViolationKind::ChunkIndexPartial => "chunk_index_partial",
            ViolationKind::ChunkIndexDecreasing => "chunk_index_decreasing",
        }
    }
}

/// Violations found in a corpus; empty iff the corpus is valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Render as TSV: `violation_kind<TAB>utterance_id<TAB>detail`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("violation_kind\tutterance_id\tdetail\n");
        for v in &self.violations {
            out.push_str(&format!(
                "{}\t{}\t{}\n",
                v.kind.as_str(),
                v.utterance_id,
                v.detail
            ));
        }
        out
    }

    /// Render as human-readable text, one line per violation.
    pub fn to_text(&self) -> String {
        if self.is_valid() {
            return "corpus is valid\n".to_string();
        }
        let mut out = format!("{} violation(s) found:\n", self.violations.len());
        for v in &self.violations {
            out.push_str(&format!(
                "  [{}] {}: {}\n",
                v.kind.as_str(),
                v.utterance_id,
                v.detail
            ));
        }
        out
    }
}

impl Corpus {
    /// Build a corpus from utterances in document order. No validation is
    /// performed; call [`validate_corpus`] to check invariants.
    pub fn from_utterances(utterances: Vec<Utterance>) -> Self {
        let mut dialogues: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for u in &utterances {
            dialogues
                .entry(u.dialogue_id.clone())
                .or_default()
                .push(u.id.clone());
        }
        Corpus {
            utterances,
            dialogues,
        }
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    /// Dialogue index: dialogue id to utterance ids in document order.
    pub fn dialogues(&self) -> &BTreeMap<String, Vec<String>> {
        &self.dialogues
    }

    pub fn len(&self) -> usize {
        self.utterances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.utterances.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Utterance> {
        self.utterances.iter().find(|u| u.id == id)
    }

    /// The sample corpus bundled with the crate (theater-domain Dutch
    /// utterances with full annotations).
    pub fn bundled_sample() -> Corpus {
        parse_corpus(include_str!("../assets/sample_corpus.jsonl").as_bytes())
            .expect("bundled sample corpus parses")
    }

    /// Serialize to the JSON-lines corpus format.
    pub fn write<W: std::io::Write>(&self, mut w: W) -> Result<(), CorpusError> {
        for u in &self.utterances {
            let line = serde_json::to_string(u)
                .map_err(|e| CorpusError::Invalid(format!("serialize {}: {e}", u.id)))?;
            w.write_all(line.as_bytes())?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("write to vec cannot fail");
        String::from_utf8(buf).expect("corpus serializes to utf-8")
    }
}

/// Parse the JSON-lines corpus format. Rejects malformed records (with the
/// offending line number), duplicate ids, empty token lists and any
/// annotation-invariant violation.
pub fn parse_corpus<R: std::io::Read>(source: R) -> Result<Corpus, CorpusError> {
    let reader = std::io::BufReader::new(source);
    let mut utterances = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let u: Utterance = serde_json::from_str(&line).map_err(|e| CorpusError::Malformed {
            line: line_no,
            message: e.to_string(),
        })?;
        if u.tokens.is_empty() {
            return Err(CorpusError::EmptyTokens {
                line: line_no,
                id: u.id,
            });
        }
        if seen.insert(u.id.clone(), line_no).is_some() {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: u.id,
            });
        }
        utterances.push(u);
    }
    let corpus = Corpus::from_utterances(utterances);
    let report = validate_corpus(&corpus);
    if let Some(v) = report.violations.first() {
        let line = corpus
            .utterances
            .iter()
            .position(|u| u.id == v.utterance_id)
            .and_then(|i| seen.get(&corpus.utterances[i].id))
            .copied()
            .unwrap_or(0);
        return Err(CorpusError::Malformed {
            line,
            message: format!("{}: {}", v.kind.as_str(), v.detail),
        });
    }
    Ok(corpus)
}

/// Check every corpus invariant and report violations as data. Never fails
/// and never mutates its input.
pub fn validate_corpus(corpus: &Corpus) -> ValidationReport {
    let mut violations = Vec::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut positions: HashSet<(&str, u32, u32)> = HashSet::new();

    for (i, u) in corpus.utterances.iter().enumerate() {
        if let Some(first) = ids.insert(&u.id, i) {
            violations.push(Violation {
                kind: ViolationKind::DuplicateId,
                utterance_id: u.id.clone(),
                detail: format!(
                    "id `{}` appears at positions {} and {}",
                    u.id, first, i
                ),
            });
        }
        if !positions.insert((&u.dialogue_id, u.turn_index, u.position_in_turn)) {
            violations.push(Violation {
                kind: ViolationKind::DuplicatePosition,
                utterance_id: u.id.clone(),
                detail: format!(
                    "(dialogue {}, turn {}, position {}) is not unique",
                    u.dialogue_id, u.turn_index, u.position_in_turn
                ),
            });
        }
        if u.tokens.is_empty() {
            violations.push(Violation {
                kind: ViolationKind::EmptyTokens,
                utterance_id: u.id.clone(),
                detail: "utterance has no tokens".to_string(),
            });
            continue;
        }
        for (t_idx, tok) in u.tokens.iter().enumerate() {
            let person_ok = matches!(tok.pos, Pos::FinV | Pos::Pron);
            if (tok.person.is_some() || tok.number.is_some()) && !person_ok {
                violations.push(Violation {
                    kind: ViolationKind::PersonNumberOnWrongPos,
                    utterance_id: u.id.clone(),
                    detail: format!(
                        "token {} (`{}`) has person/number but pos {:?}",
                        t_idx, tok.surface, tok.pos
                    ),
                });
            }
            let is_pron = tok.pos == Pos::Pron;
            if tok.pron_subtype.is_some() != is_pron {
                violations.push(Violation {
                    kind: ViolationKind::PronSubtypeMismatch,
                    utterance_id: u.id.clone(),
                    detail: format!(
                        "token {} (`{}`): pron_subtype present iff pos = PRON",
                        t_idx, tok.surface
                    ),
                });
            }
        }
        let with_chunk = u.tokens.iter().filter(|t| t.chunk_index.is_some()).count();
        if with_chunk > 0 && with_chunk < u.tokens.len() {
            violations.push(Violation {
                kind: ViolationKind::ChunkIndexPartial,
                utterance_id: u.id.clone(),
                detail: format!(
                    "chunk_index on {} of {} tokens",
                    with_chunk,
                    u.tokens.len()
                ),
            });
        } else if with_chunk == u.tokens.len() {
            let decreasing = u
                .tokens
                .windows(2)
                .any(|w| w[0].chunk_index.unwrap() > w[1].chunk_index.unwrap());
            if decreasing {
                violations.push(Violation {
                    kind: ViolationKind::ChunkIndexDecreasing,
                    utterance_id: u.id.clone(),
                    detail: "chunk_index decreases left to right".to_string(),
                });
            }
        }
    }
    ValidationReport { violations }
}

/// Split a corpus into train and test halves by a uniformly random,
/// seed-deterministic permutation of the utterances.
///
/// The shuffle is a Fisher-Yates pass driven by ChaCha8 seeded with `seed`,
/// so the same (corpus, ratio, seed) always yields the same split. The
/// first `floor(ratio * n)` shuffled utterances form the train half;
/// document order is restored within each half.
pub fn split_corpus(corpus: &Corpus, ratio: f64, seed: u64) -> Result<SplitResult, CorpusError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(CorpusError::RatioOutOfRange(ratio));
    }
    if corpus.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let n = corpus.len();
    let train_len = (ratio * n as f64).floor() as usize;

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }

    let mut train_idx: Vec<usize> = order[..train_len].to_vec();
    let mut test_idx: Vec<usize> = order[train_len..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();

    let pick = |idxs: &[usize]| {
        Corpus::from_utterances(idxs.iter().map(|&i| corpus.utterances[i].clone()).collect())
    };
    Ok(SplitResult {
        train: pick(&train_idx),
        test: pick(&test_idx),
        seed,
        ratio,
    })
}

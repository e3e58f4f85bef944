//! Surface cue patterns: the empirical basis for all classification.
//!
//! A *cue* is any aspect of the surface syntax or morphology used as a
//! classification feature; a *cue pattern* is the tuple of one utterance's
//! cue values, positionally aligned with a [`CueSchema`]. Extraction is
//! purely positional and lexicon-driven: it reads POS tags, person/number
//! annotations and lemma lookups, never a full parse.
//!
//! Value codes are short strings chosen for report readability (`d` for a
//! declarative utterance type, `i` for a first-person-pronoun subject,
//! `w` for a wish verb, `+`/`-` for booleans).

mod extract;
mod lexicon;
mod schema;

pub use extract::{
    extract_pattern, lexical_cues, strip_leading_conjunction, subject_type, utterance_type,
    verb_types,
};
pub use lexicon::CueLexicon;
pub use schema::{
    add_context_cue, read_pattern_table, tabulate, write_pattern_table, CuePattern, CueSchema,
    CueSpec, PatternRow, PatternTable, PREV_CLASS_START,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a cue within a schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CueId {
    Speaker,
    Ut,
    Wh,
    St,
    Cw,
    Fvt,
    Svt,
    Qm,
    PrevClass,
}

impl CueId {
    pub fn as_str(&self) -> &'static str {
        match self {
            CueId::Speaker => "speaker",
            CueId::Ut => "ut",
            CueId::Wh => "wh",
            CueId::St => "st",
            CueId::Cw => "cw",
            CueId::Fvt => "fvt",
            CueId::Svt => "svt",
            CueId::Qm => "qm",
            CueId::PrevClass => "prev_class",
        }
    }

    pub fn parse(s: &str) -> Option<CueId> {
        Some(match s {
            "speaker" => CueId::Speaker,
            "ut" => CueId::Ut,
            "wh" => CueId::Wh,
            "st" => CueId::St,
            "cw" => CueId::Cw,
            "fvt" => CueId::Fvt,
            "svt" => CueId::Svt,
            "qm" => CueId::Qm,
            "prev_class" => CueId::PrevClass,
            _ => return None,
        })
    }
}

/// The mood-like type of an utterance, or its syntactic category for
/// phrasal utterances. Closed alphabet of twelve values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtteranceType {
    /// Finite verb in second sentence position, no wh-word before it.
    Dec,
    /// Wh-word in initial position (before any finite verb).
    Whq,
    /// Finite verb in initial position with a subject right after it.
    Ynq,
    /// Verb-initial imperative (1sg/3sg finite or infinitive form).
    Imp,
    /// Prepositional phrase(s) only.
    Pre,
    /// Nouns, noun phrases or proper names only.
    Nom,
    /// Adjectives, adverbs or numbers only.
    Adj,
    /// Thanking formula.
    Tha,
    /// Greeting formula.
    Gre,
    /// Confirmation or negation.
    Con,
    /// Interjections, emotives, exclamations.
    Exc,
    /// Garbage collector for everything else.
    Mis,
}

impl UtteranceType {
    pub const ALL: [UtteranceType; 12] = [
        UtteranceType::Dec,
        UtteranceType::Whq,
        UtteranceType::Ynq,
        UtteranceType::Imp,
        UtteranceType::Pre,
        UtteranceType::Nom,
        UtteranceType::Adj,
        UtteranceType::Tha,
        UtteranceType::Gre,
        UtteranceType::Con,
        UtteranceType::Exc,
        UtteranceType::Mis,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            UtteranceType::Dec => "d",
            UtteranceType::Whq => "w",
            UtteranceType::Ynq => "y",
            UtteranceType::Imp => "i",
            UtteranceType::Pre => "p",
            UtteranceType::Nom => "n",
            UtteranceType::Adj => "a",
            UtteranceType::Tha => "t",
            UtteranceType::Gre => "g",
            UtteranceType::Con => "c",
            UtteranceType::Exc => "x",
            UtteranceType::Mis => "m",
        }
    }
}

/// The type of the grammatical subject, when one applies.
///
/// `None` is used both when no subject is found and when the utterance
/// type is outside {WHQ, YNQ, DEC}, where the cue is not applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubjectType {
    None,
    /// First-person pronoun.
    P1,
    /// Second-person pronoun.
    P2,
    /// Third-person pronoun.
    P3,
    /// Interrogative pronoun.
    Int,
    /// Demonstrative pronoun.
    Dem,
    Artist,
    Performance,
    /// Other domain object (tickets, discounts, ...).
    DomainOther,
    Other,
}

impl SubjectType {
    pub const ALL: [SubjectType; 10] = [
        SubjectType::None,
        SubjectType::P1,
        SubjectType::P2,
        SubjectType::P3,
        SubjectType::Int,
        SubjectType::Dem,
        SubjectType::Artist,
        SubjectType::Performance,
        SubjectType::DomainOther,
        SubjectType::Other,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            SubjectType::None => "n",
            SubjectType::P1 => "i",
            SubjectType::P2 => "e",
            SubjectType::P3 => "h",
            SubjectType::Int => "q",
            SubjectType::Dem => "t",
            SubjectType::Artist => "a",
            SubjectType::Performance => "p",
            SubjectType::DomainOther => "d",
            SubjectType::Other => "o",
        }
    }
}

/// The lexical class of a verb. `None` means no such verb occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerbType {
    None,
    Be,
    Have,
    KnowCognitive,
    Want,
    Reserve,
    /// Verbs whose arguments are domain objects only.
    Domain,
    /// Verbs with at least one dialogue-partner argument.
    Task,
    Aux,
}

impl VerbType {
    pub const ALL: [VerbType; 9] = [
        VerbType::None,
        VerbType::Be,
        VerbType::Have,
        VerbType::KnowCognitive,
        VerbType::Want,
        VerbType::Reserve,
        VerbType::Domain,
        VerbType::Task,
        VerbType::Aux,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            VerbType::None => "n",
            VerbType::Be => "z",
            VerbType::Have => "h",
            VerbType::KnowCognitive => "e",
            VerbType::Want => "w",
            VerbType::Reserve => "r",
            VerbType::Domain => "d",
            VerbType::Task => "t",
            VerbType::Aux => "a",
        }
    }

    pub fn from_code(code: &str) -> Option<VerbType> {
        VerbType::ALL.iter().copied().find(|v| v.code() == code)
    }
}

/// Errors raised by lexicon parsing and pattern-table operations.
#[derive(Debug, Error)]
pub enum CuesError {
    #[error("lexicon line {line}: {message}")]
    LexiconParse { line: usize, message: String },
    #[error("lexicon: lemma `{lemma}` appears in both {first} and {second}")]
    LexiconOverlap {
        lemma: String,
        first: &'static str,
        second: &'static str,
    },
    #[error("schema `{0}` must not contain the prev_class cue here")]
    PrevClassNotAllowed(String),
    #[error("unknown cue id `{0}`")]
    UnknownCueId(String),
    #[error("duplicate cue id `{0}` in schema")]
    DuplicateCueId(String),
    #[error("pattern schema `{pattern}` does not match table schema `{table}`")]
    SchemaMismatch { pattern: String, table: String },
    #[error("pattern table line {line}: {message}")]
    TableParse { line: usize, message: String },
    #[error("row `{0}` has no class label")]
    MissingClassLabel(String),
    #[error("utterance `{0}` not found in the corpus")]
    UnknownUtterance(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

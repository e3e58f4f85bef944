//! Per-utterance cue extraction.
//!
//! Every operation here is a pure function of (utterance, lexicon); the
//! utterance type is decided by a fixed decision list so that overlapping
//! descriptions resolve the same way every time:
//!
//! 1. whole-content lexical types: CON, THA, GRE, EXC (punctuation ignored);
//! 2. clausal moods: WHQ, YNQ, IMP, DEC;
//! 3. phrasal types: PRE, NOM, ADJ;
//! 4. MIS as the total fallback.
//!
//! "Content token" means any non-punctuation token after leading
//! conjunctions have been stripped. "Second sentence position" uses the
//! shallow chunk annotation when the corpus carries it and the second
//! content-token position otherwise.

use crate::corpus::{AnnotatedToken, Number, Person, Pos, PronSubtype, Speaker, Utterance};

use super::{
    CueId, CueLexicon, CuePattern, CueSchema, CuesError, SubjectType, UtteranceType, VerbType,
};

/// Drop leading tokens whose lemma is a conjunction; the original
/// utterance is untouched. An all-conjunction utterance yields an empty
/// view, which callers must handle.
pub fn strip_leading_conjunction<'a>(
    utterance: &'a Utterance,
    lexicon: &CueLexicon,
) -> &'a [AnnotatedToken] {
    let mut start = 0;
    for tok in &utterance.tokens {
        if lexicon.conjunctions.contains(&tok.lemma) {
            start += 1;
        } else {
            break;
        }
    }
    &utterance.tokens[start..]
}

fn content<'a>(view: &'a [AnnotatedToken]) -> Vec<&'a AnnotatedToken> {
    view.iter().filter(|t| t.pos != Pos::Punct).collect()
}

fn all_lemmas_in(
    tokens: &[&AnnotatedToken],
    test: impl Fn(&str) -> bool,
) -> bool {
    !tokens.is_empty() && tokens.iter().all(|t| test(&t.lemma))
}

fn first_finite_verb(tokens: &[&AnnotatedToken]) -> Option<usize> {
    tokens.iter().position(|t| t.pos == Pos::FinV)
}

fn is_wh(tok: &AnnotatedToken, lexicon: &CueLexicon) -> bool {
    lexicon.wh_words.contains(&tok.lemma)
}

/// Can this token open a subject expression? Numerals are excluded: in
/// this domain a post-verbal numeral is an object count ("reserveer twee
/// kaartjes"), not a subject.
fn is_subject_expr(tok: &AnnotatedToken) -> bool {
    matches!(tok.pos, Pos::Pron | Pos::Noun | Pos::Proper | Pos::Det)
}

fn has_personal_pronoun(tokens: &[&AnnotatedToken]) -> bool {
    tokens
        .iter()
        .any(|t| t.pos == Pos::Pron && t.pron_subtype == Some(PronSubtype::Personal))
}

/// Distinct chunk ids of content tokens, in left-to-right order. Empty
/// when the utterance carries no chunk annotation.
fn content_chunks(tokens: &[&AnnotatedToken]) -> Vec<u32> {
    let mut chunks = Vec::new();
    for t in tokens {
        if let Some(c) = t.chunk_index {
            if chunks.last() != Some(&c) {
                chunks.push(c);
            }
        }
    }
    chunks
}

/// Classify an utterance into one of the twelve utterance types.
pub fn utterance_type(utterance: &Utterance, lexicon: &CueLexicon) -> UtteranceType {
    let view = strip_leading_conjunction(utterance, lexicon);
    let toks = content(view);
    if toks.is_empty() {
        return UtteranceType::Mis;
    }

    // Lexical short forms: the whole content must match the word list.
    if all_lemmas_in(&toks, |l| {
        lexicon.confirm_words.contains(l) || lexicon.negate_words.contains(l)
    }) {
        return UtteranceType::Con;
    }
    if all_lemmas_in(&toks, |l| lexicon.thanking_words.contains(l)) {
        return UtteranceType::Tha;
    }
    if all_lemmas_in(&toks, |l| lexicon.greeting_words.contains(l)) {
        return UtteranceType::Gre;
    }
    if all_lemmas_in(&toks, |l| lexicon.interjections.contains(l)) {
        return UtteranceType::Exc;
    }

    let fin = first_finite_verb(&toks);

    // WHQ: a wh-word before the first finite verb (or anywhere, verbless).
    let first_wh = toks.iter().position(|t| is_wh(t, lexicon));
    if let Some(w) = first_wh {
        if fin.map_or(true, |f| w < f) {
            return UtteranceType::Whq;
        }
    }

    // YNQ: finite verb first, subject expression second.
    if fin == Some(0) && toks.len() >= 2 && is_subject_expr(toks[1]) {
        return UtteranceType::Ynq;
    }

    // IMP: verb-initial, 1sg/3sg finite or infinitive form, and no
    // personal pronoun anywhere that could act as a subject.
    if !toks.is_empty() && !has_personal_pronoun(&toks) {
        let head = toks[0];
        let imp_finite = head.pos == Pos::FinV
            && matches!(head.person, Some(Person::P1) | Some(Person::P3))
            && head.number == Some(Number::Sg);
        if imp_finite || head.pos == Pos::InfV {
            return UtteranceType::Imp;
        }
    }

    // DEC: finite verb in second sentence position, no wh-word before it.
    if let Some(f) = fin {
        let chunks = content_chunks(&toks);
        let in_second_position = if chunks.len() >= 2 {
            toks[f].chunk_index == Some(chunks[1])
        } else if chunks.is_empty() {
            f == 1
        } else {
            false
        };
        let wh_before = toks[..f].iter().any(|t| is_wh(t, lexicon));
        if in_second_position && !wh_before {
            return UtteranceType::Dec;
        }
    }

    // PRE: every chunk opens with a preposition. Without chunk
    // annotation the whole content counts as one chunk.
    let chunks = content_chunks(&toks);
    let pre = if chunks.is_empty() {
        toks[0].pos == Pos::Prep
    } else {
        chunks.iter().all(|&c| {
            toks.iter()
                .find(|t| t.chunk_index == Some(c))
                .map_or(false, |t| t.pos == Pos::Prep)
        })
    };
    if pre {
        return UtteranceType::Pre;
    }

    if toks
        .iter()
        .all(|t| matches!(t.pos, Pos::Noun | Pos::Proper | Pos::Det))
    {
        return UtteranceType::Nom;
    }
    if toks
        .iter()
        .all(|t| matches!(t.pos, Pos::Adj | Pos::Adv | Pos::Num))
    {
        return UtteranceType::Adj;
    }

    UtteranceType::Mis
}

fn classify_pronoun(tok: &AnnotatedToken) -> SubjectType {
    match tok.pron_subtype {
        Some(PronSubtype::Interrogative) => SubjectType::Int,
        Some(PronSubtype::Demonstrative) => SubjectType::Dem,
        _ => match tok.person {
            Some(Person::P1) => SubjectType::P1,
            Some(Person::P2) => SubjectType::P2,
            Some(Person::P3) => SubjectType::P3,
            None => SubjectType::Other,
        },
    }
}

fn classify_nominal(tok: &AnnotatedToken, lexicon: &CueLexicon) -> SubjectType {
    lexicon
        .domain_nouns
        .get(&tok.lemma)
        .copied()
        .unwrap_or(SubjectType::Other)
}

/// Classify the first subject-capable token of a region: a pronoun by its
/// person/subtype, a nominal through the domain-noun lexicon.
fn classify_region(region: &[&AnnotatedToken], lexicon: &CueLexicon) -> SubjectType {
    for tok in region {
        match tok.pos {
            Pos::Pron => return classify_pronoun(tok),
            Pos::Noun | Pos::Proper => return classify_nominal(tok, lexicon),
            _ => continue,
        }
    }
    SubjectType::None
}

/// The type of the grammatical subject, located positionally. Applicable
/// only to WHQ, YNQ and DEC utterances; `None` otherwise.
pub fn subject_type(
    utterance: &Utterance,
    ut: UtteranceType,
    lexicon: &CueLexicon,
) -> SubjectType {
    if !matches!(ut, UtteranceType::Whq | UtteranceType::Ynq | UtteranceType::Dec) {
        return SubjectType::None;
    }
    let view = strip_leading_conjunction(utterance, lexicon);
    let toks = content(view);
    let fin = first_finite_verb(&toks);
    match ut {
        UtteranceType::Dec => {
            let f = match fin {
                Some(f) => f,
                None => return SubjectType::None,
            };
            classify_region(&toks[..f], lexicon)
        }
        UtteranceType::Ynq => {
            let f = match fin {
                Some(f) => f,
                None => return SubjectType::None,
            };
            classify_region(&toks[f + 1..], lexicon)
        }
        UtteranceType::Whq => {
            let wh = toks.iter().position(|t| is_wh(t, lexicon));
            if let Some(w) = wh {
                if toks[w].pos == Pos::Pron {
                    return classify_pronoun(toks[w]);
                }
            }
            match fin {
                Some(f) => classify_region(&toks[f + 1..], lexicon),
                None => SubjectType::None,
            }
        }
        _ => unreachable!(),
    }
}

/// Lexical classes of the first two verb tokens, in surface order. A verb
/// lemma missing from the lexicon counts as a domain verb.
pub fn verb_types(utterance: &Utterance, lexicon: &CueLexicon) -> (VerbType, VerbType) {
    let mut found = [VerbType::None, VerbType::None];
    let mut n = 0;
    for tok in &utterance.tokens {
        if matches!(tok.pos, Pos::FinV | Pos::InfV) {
            found[n] = lexicon
                .verb_classes
                .get(&tok.lemma)
                .copied()
                .unwrap_or(VerbType::Domain);
            n += 1;
            if n == 2 {
                break;
            }
        }
    }
    (found[0], found[1])
}

/// The three lexical cues: wh-word presence, final question mark, and the
/// first matching cue word (`None` when absent).
pub fn lexical_cues<'a>(
    utterance: &'a Utterance,
    lexicon: &CueLexicon,
) -> (bool, bool, Option<&'a str>) {
    let wh = utterance
        .tokens
        .iter()
        .any(|t| lexicon.wh_words.contains(&t.lemma));
    let qm = utterance
        .tokens
        .iter()
        .rev()
        .find(|t| t.pos == Pos::Punct)
        .map_or(false, |t| t.surface == "?");
    let cw = utterance
        .tokens
        .iter()
        .find(|t| lexicon.cue_words.contains(&t.lemma))
        .map(|t| t.lemma.as_str());
    (wh, qm, cw)
}

/// Extract one utterance's cue pattern, projected onto exactly the
/// schema's cues in schema order. Total for every well-formed utterance.
pub fn extract_pattern(
    utterance: &Utterance,
    schema: &CueSchema,
    lexicon: &CueLexicon,
) -> Result<CuePattern, CuesError> {
    if schema.has_prev_class() {
        return Err(CuesError::PrevClassNotAllowed(schema.id().to_string()));
    }
    let ut = utterance_type(utterance, lexicon);
    let st = subject_type(utterance, ut, lexicon);
    let (fvt, svt) = verb_types(utterance, lexicon);
    let (wh, qm, cw) = lexical_cues(utterance, lexicon);

    let mut values = Vec::with_capacity(schema.arity());
    for (c, spec) in schema.cues().iter().enumerate() {
        let code: &str = match spec.id {
            CueId::Speaker => match utterance.speaker {
                Speaker::Client => "c",
                Speaker::System => "s",
            },
            CueId::Ut => ut.code(),
            CueId::Wh => {
                if wh {
                    "+"
                } else {
                    "-"
                }
            }
            CueId::St => st.code(),
            CueId::Cw => cw.unwrap_or("-"),
            CueId::Fvt => fvt.code(),
            CueId::Svt => svt.code(),
            CueId::Qm => {
                if qm {
                    "+"
                } else {
                    "-"
                }
            }
            CueId::PrevClass => unreachable!("rejected above"),
        };
        let v = schema
            .value_index(c, code)
            .expect("standard alphabets cover every extracted code");
        values.push(v);
    }
    Ok(CuePattern {
        schema_id: schema.id().to_string(),
        values,
    })
}

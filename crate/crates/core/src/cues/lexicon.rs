//! The cue lexicon: the word lists and lemma maps extraction relies on.
//!
//! File format: sectioned plain text. A `[section]` header starts a word
//! class; each following non-empty line is one lemma. The `verb_classes`
//! and `domain_nouns` sections take `lemma<TAB>code` lines instead, using
//! the single-letter value codes of [`VerbType`](super::VerbType) and the
//! subject-type codes `a` (artist), `p` (performance), `d` (other domain
//! object). `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};

use super::{CuesError, SubjectType, VerbType};

/// Word lists and lemma maps that parameterise cue extraction.
///
/// The set-valued fields are pairwise disjoint; a verb lemma maps to
/// exactly one verb class.
#[derive(Debug, Clone, Default)]
pub struct CueLexicon {
    pub wh_words: BTreeSet<String>,
    pub cue_words: BTreeSet<String>,
    pub greeting_words: BTreeSet<String>,
    pub thanking_words: BTreeSet<String>,
    pub confirm_words: BTreeSet<String>,
    pub negate_words: BTreeSet<String>,
    pub interjections: BTreeSet<String>,
    pub conjunctions: BTreeSet<String>,
    pub verb_classes: BTreeMap<String, VerbType>,
    pub domain_nouns: BTreeMap<String, SubjectType>,
}

const SECTIONS: [&str; 10] = [
    "wh_words",
    "cue_words",
    "greeting_words",
    "thanking_words",
    "confirm_words",
    "negate_words",
    "interjections",
    "conjunctions",
    "verb_classes",
    "domain_nouns",
];

impl CueLexicon {
    /// The Dutch lexicon bundled with the crate.
    pub fn default_dutch() -> CueLexicon {
        CueLexicon::parse(include_str!("../../assets/lexicon_nl.txt"))
            .expect("bundled lexicon parses")
    }

    /// Parse the sectioned lexicon text format.
    pub fn parse(text: &str) -> Result<CueLexicon, CuesError> {
        let mut lex = CueLexicon::default();
        let mut section: Option<&str> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = Some(SECTIONS.iter().find(|&&s| s == name).copied().ok_or(
                    CuesError::LexiconParse {
                        line: line_no,
                        message: format!("unknown section `{name}`"),
                    },
                )?);
                continue;
            }
            let section = section.ok_or(CuesError::LexiconParse {
                line: line_no,
                message: "entry before any [section] header".to_string(),
            })?;
            match section {
                "verb_classes" => {
                    let (lemma, code) = split_tabbed(line, line_no)?;
                    let vt = VerbType::from_code(code).ok_or(CuesError::LexiconParse {
                        line: line_no,
                        message: format!("unknown verb class code `{code}`"),
                    })?;
                    lex.verb_classes.insert(lemma.to_string(), vt);
                }
                "domain_nouns" => {
                    let (lemma, code) = split_tabbed(line, line_no)?;
                    let st = match code {
                        "a" => SubjectType::Artist,
                        "p" => SubjectType::Performance,
                        "d" => SubjectType::DomainOther,
                        _ => {
                            return Err(CuesError::LexiconParse {
                                line: line_no,
                                message: format!("unknown domain noun code `{code}`"),
                            })
                        }
                    };
                    lex.domain_nouns.insert(lemma.to_string(), st);
                }
                name => {
                    lex.word_set_mut(name).insert(line.to_string());
                }
            }
        }
        lex.check_disjoint()?;
        Ok(lex)
    }

    /// Serialize back to the sectioned text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut set = |name: &str, words: &BTreeSet<String>| {
            out.push_str(&format!("[{name}]\n"));
            for w in words {
                out.push_str(w);
                out.push('\n');
            }
            out.push('\n');
        };
        set("wh_words", &self.wh_words);
        set("cue_words", &self.cue_words);
        set("greeting_words", &self.greeting_words);
        set("thanking_words", &self.thanking_words);
        set("confirm_words", &self.confirm_words);
        set("negate_words", &self.negate_words);
        set("interjections", &self.interjections);
        set("conjunctions", &self.conjunctions);
        out.push_str("[verb_classes]\n");
        for (lemma, vt) in &self.verb_classes {
            out.push_str(&format!("{lemma}\t{}\n", vt.code()));
        }
        out.push_str("\n[domain_nouns]\n");
        for (lemma, st) in &self.domain_nouns {
            out.push_str(&format!("{lemma}\t{}\n", st.code()));
        }
        out
    }

    fn word_set_mut(&mut self, name: &str) -> &mut BTreeSet<String> {
        match name {
            "wh_words" => &mut self.wh_words,
            "cue_words" => &mut self.cue_words,
            "greeting_words" => &mut self.greeting_words,
            "thanking_words" => &mut self.thanking_words,
            "confirm_words" => &mut self.confirm_words,
            "negate_words" => &mut self.negate_words,
            "interjections" => &mut self.interjections,
            "conjunctions" => &mut self.conjunctions,
            other => unreachable!("section `{other}` handled elsewhere"),
        }
    }

    fn word_sets(&self) -> [(&'static str, &BTreeSet<String>); 8] {
        [
            ("wh_words", &self.wh_words),
            ("cue_words", &self.cue_words),
            ("greeting_words", &self.greeting_words),
            ("thanking_words", &self.thanking_words),
            ("confirm_words", &self.confirm_words),
            ("negate_words", &self.negate_words),
            ("interjections", &self.interjections),
            ("conjunctions", &self.conjunctions),
        ]
    }

    fn check_disjoint(&self) -> Result<(), CuesError> {
        let sets = self.word_sets();
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                if let Some(lemma) = sets[i].1.intersection(sets[j].1).next() {
                    return Err(CuesError::LexiconOverlap {
                        lemma: lemma.clone(),
                        first: sets[i].0,
                        second: sets[j].0,
                    });
                }
            }
        }
        Ok(())
    }
}

fn split_tabbed(line: &str, line_no: usize) -> Result<(&str, &str), CuesError> {
    line.split_once('\t')
        .map(|(l, c)| (l.trim(), c.trim()))
        .ok_or(CuesError::LexiconParse {
            line: line_no,
            message: "expected `lemma<TAB>code`".to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_dutch_has_the_core_entries() {
        let lex = CueLexicon::default_dutch();
        assert!(lex.cue_words.contains("graag"));
        assert!(lex.wh_words.contains("wie"));
        assert!(lex.conjunctions.contains("en"));
        assert!(lex.conjunctions.contains("of"));
        assert_eq!(lex.verb_classes.get("willen"), Some(&VerbType::Want));
        assert_eq!(lex.verb_classes.get("weten"), Some(&VerbType::KnowCognitive));
        assert_eq!(lex.verb_classes.get("zijn"), Some(&VerbType::Be));
        assert_eq!(
            lex.domain_nouns.get("voorstelling"),
            Some(&SubjectType::Performance)
        );
    }

    #[test]
    fn round_trip_through_text() {
        let lex = CueLexicon::default_dutch();
        let text = lex.to_text();
        let reparsed = CueLexicon::parse(&text).unwrap();
        assert_eq!(lex.wh_words, reparsed.wh_words);
        assert_eq!(lex.verb_classes, reparsed.verb_classes);
        assert_eq!(lex.domain_nouns, reparsed.domain_nouns);
    }

    #[test]
    fn overlapping_sets_are_rejected() {
        let text = "[confirm_words]\nja\n[negate_words]\nja\n";
        assert!(matches!(
            CueLexicon::parse(text),
            Err(CuesError::LexiconOverlap { .. })
        ));
    }

    #[test]
    fn bad_verb_code_is_rejected() {
        let text = "[verb_classes]\nfoo\tq\n";
        assert!(matches!(
            CueLexicon::parse(text),
            Err(CuesError::LexiconParse { line: 2, .. })
        ));
    }
}

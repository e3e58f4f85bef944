//! Cue schemas, cue patterns and pattern tables.
//!
//! A schema fixes the ordered cue set and each cue's value alphabet; a
//! pattern stores one value index per schema position. Tables are written
//! as TSV with a header row (`utterance_id`, one column per cue, optional
//! trailing `class`); values appear as their schema codes.

use std::collections::HashMap;
use std::io::BufRead;

use crate::corpus::Corpus;

use super::{CueId, CueLexicon, CuesError, SubjectType, UtteranceType, VerbType};

/// Code used for the context cue of the first utterance in a dialogue.
pub const PREV_CLASS_START: &str = "start";

/// One cue with its ordered value alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CueSpec {
    pub id: CueId,
    pub alphabet: Vec<String>,
}

/// The ordered cue set patterns are aligned with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CueSchema {
    id: String,
    cues: Vec<CueSpec>,
}

/// One utterance's tuple of cue values, stored as alphabet indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuePattern {
    pub schema_id: String,
    pub values: Vec<u16>,
}

/// A pattern table row: the pattern of one utterance, optionally labeled.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternRow {
    pub utterance_id: String,
    pub pattern: CuePattern,
    pub class: Option<usize>,
}

/// Patterns of many utterances under one schema.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternTable {
    schema: CueSchema,
    rows: Vec<PatternRow>,
}

impl CueSchema {
    /// Assemble a schema from explicit cue specs. The id is the joined cue
    /// names; cue ids must be unique.
    pub fn new(cues: Vec<CueSpec>) -> Result<CueSchema, CuesError> {
        let mut seen = Vec::new();
        for c in &cues {
            if seen.contains(&c.id) {
                return Err(CuesError::DuplicateCueId(c.id.as_str().to_string()));
            }
            seen.push(c.id);
        }
        let id = cues
            .iter()
            .map(|c| c.id.as_str())
            .collect::<Vec<_>>()
            .join("+");
        Ok(CueSchema { id, cues })
    }

    /// Build a schema over the standard alphabets for the given cues. The
    /// cue-word alphabet is `-` plus the lexicon's cue words in sorted
    /// order. `prev_class` is not allowed here; it only enters a schema
    /// through [`add_context_cue`].
    pub fn standard(cue_ids: &[CueId], lexicon: &CueLexicon) -> Result<CueSchema, CuesError> {
        let mut cues = Vec::with_capacity(cue_ids.len());
        for &id in cue_ids {
            let alphabet: Vec<String> = match id {
                CueId::Speaker => vec!["c".into(), "s".into()],
                CueId::Ut => UtteranceType::ALL.iter().map(|v| v.code().into()).collect(),
                CueId::Wh | CueId::Qm => vec!["-".into(), "+".into()],
                CueId::St => SubjectType::ALL.iter().map(|v| v.code().into()).collect(),
                CueId::Cw => std::iter::once("-".to_string())
                    .chain(lexicon.cue_words.iter().cloned())
                    .collect(),
                CueId::Fvt | CueId::Svt => {
                    VerbType::ALL.iter().map(|v| v.code().into()).collect()
                }
                CueId::PrevClass => {
                    return Err(CuesError::PrevClassNotAllowed("standard".to_string()))
                }
            };
            cues.push(CueSpec { id, alphabet });
        }
        CueSchema::new(cues)
    }

    /// The seven-cue schema: ut, wh, st, cw, fvt, svt, qm.
    pub fn full(lexicon: &CueLexicon) -> CueSchema {
        CueSchema::standard(
            &[
                CueId::Ut,
                CueId::Wh,
                CueId::St,
                CueId::Cw,
                CueId::Fvt,
                CueId::Svt,
                CueId::Qm,
            ],
            lexicon,
        )
        .expect("full schema is well-formed")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cues(&self) -> &[CueSpec] {
        &self.cues
    }

    pub fn arity(&self) -> usize {
        self.cues.len()
    }

    pub fn position_of(&self, id: CueId) -> Option<usize> {
        self.cues.iter().position(|c| c.id == id)
    }

    /// Look up a value code within one cue's alphabet.
    pub fn value_index(&self, cue: usize, code: &str) -> Option<u16> {
        self.cues[cue]
            .alphabet
            .iter()
            .position(|v| v == code)
            .map(|i| i as u16)
    }

    /// The code string for a stored value index.
    pub fn code(&self, cue: usize, value: u16) -> &str {
        &self.cues[cue].alphabet[value as usize]
    }

    /// Render a pattern as its code strings, in schema order.
    pub fn codes<'a>(&'a self, pattern: &CuePattern) -> Vec<&'a str> {
        pattern
            .values
            .iter()
            .enumerate()
            .map(|(c, &v)| self.code(c, v))
            .collect()
    }

    pub fn has_prev_class(&self) -> bool {
        self.position_of(CueId::PrevClass).is_some()
    }
}

impl CuePattern {
    /// True when every value index lies inside its cue's alphabet.
    pub fn conforms_to(&self, schema: &CueSchema) -> bool {
        self.schema_id == schema.id()
            && self.values.len() == schema.arity()
            && self
                .values
                .iter()
                .zip(schema.cues())
                .all(|(&v, c)| (v as usize) < c.alphabet.len())
    }
}

impl PatternTable {
    /// Build a table, checking every row against the schema.
    pub fn new(schema: CueSchema, rows: Vec<PatternRow>) -> Result<PatternTable, CuesError> {
        for row in &rows {
            if !row.pattern.conforms_to(&schema) {
                return Err(CuesError::SchemaMismatch {
                    pattern: row.pattern.schema_id.clone(),
                    table: schema.id().to_string(),
                });
            }
        }
        Ok(PatternTable { schema, rows })
    }

    pub fn schema(&self) -> &CueSchema {
        &self.schema
    }

    pub fn rows(&self) -> &[PatternRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.class.is_some())
    }

    /// Replace the class labels, one per row in order.
    pub fn with_classes(&self, classes: &[usize]) -> PatternTable {
        assert_eq!(classes.len(), self.rows.len());
        let rows = self
            .rows
            .iter()
            .zip(classes)
            .map(|(r, &c)| PatternRow {
                class: Some(c),
                ..r.clone()
            })
            .collect();
        PatternTable {
            schema: self.schema.clone(),
            rows,
        }
    }

    /// The distinct patterns with their multiplicities, ordered
    /// lexicographically by value codes. The counts sum to the row count.
    pub fn distinct(&self) -> Vec<(CuePattern, usize)> {
        let mut counts: HashMap<&CuePattern, usize> = HashMap::new();
        for row in &self.rows {
            *counts.entry(&row.pattern).or_insert(0) += 1;
        }
        let mut out: Vec<(CuePattern, usize)> =
            counts.into_iter().map(|(p, n)| (p.clone(), n)).collect();
        out.sort_by(|a, b| self.schema.codes(&a.0).cmp(&self.schema.codes(&b.0)));
        out
    }

    /// Number of distinct cue pattern types.
    pub fn cpt_count(&self) -> usize {
        self.distinct().len()
    }
}

/// Collect per-utterance patterns into a table under one schema. Errors if
/// any pattern was extracted under a different schema.
pub fn tabulate(
    schema: &CueSchema,
    patterns: Vec<(String, CuePattern)>,
) -> Result<PatternTable, CuesError> {
    let rows = patterns
        .into_iter()
        .map(|(utterance_id, pattern)| PatternRow {
            utterance_id,
            pattern,
            class: None,
        })
        .collect();
    PatternTable::new(schema.clone(), rows)
}

/// Extend a labeled table with the context cue: each pattern gains the
/// class of the previous utterance in the same dialogue, or
/// [`PREV_CLASS_START`] for a dialogue's first utterance. Order within a
/// dialogue is the document order supplied by `corpus`.
pub fn add_context_cue(
    table: &PatternTable,
    corpus: &Corpus,
    class_count: usize,
) -> Result<PatternTable, CuesError> {
    let mut by_id: HashMap<&str, &PatternRow> = HashMap::new();
    for row in table.rows() {
        if row.class.is_none() {
            return Err(CuesError::MissingClassLabel(row.utterance_id.clone()));
        }
        by_id.insert(&row.utterance_id, row);
    }
    for row in table.rows() {
        if corpus.get(&row.utterance_id).is_none() {
            return Err(CuesError::UnknownUtterance(row.utterance_id.clone()));
        }
    }

    let mut alphabet = vec![PREV_CLASS_START.to_string()];
    alphabet.extend((0..class_count).map(|c| c.to_string()));
    let mut cues = table.schema().cues().to_vec();
    if table.schema().has_prev_class() {
        return Err(CuesError::PrevClassNotAllowed(
            table.schema().id().to_string(),
        ));
    }
    cues.push(CueSpec {
        id: CueId::PrevClass,
        alphabet,
    });
    let schema = CueSchema::new(cues)?;

    // Walk each dialogue in document order; rows absent from the table
    // (e.g. utterances in the other split half) do not carry context.
    let mut rows = Vec::with_capacity(table.len());
    for ids in corpus.dialogues().values() {
        let mut prev_class: Option<usize> = None;
        for id in ids {
            let Some(row) = by_id.get(id.as_str()) else {
                continue;
            };
            let prev_value = match prev_class {
                None => 0u16,
                Some(c) => (c + 1) as u16,
            };
            let mut values = row.pattern.values.clone();
            values.push(prev_value);
            rows.push(PatternRow {
                utterance_id: row.utterance_id.clone(),
                pattern: CuePattern {
                    schema_id: schema.id().to_string(),
                    values,
                },
                class: row.class,
            });
            prev_class = row.class;
        }
    }
    PatternTable::new(schema, rows)
}

/// Write a pattern table as TSV.
pub fn write_pattern_table<W: std::io::Write>(
    table: &PatternTable,
    mut w: W,
) -> Result<(), CuesError> {
    let mut header = vec!["utterance_id".to_string()];
    header.extend(table.schema().cues().iter().map(|c| c.id.as_str().to_string()));
    let labeled = table.rows().iter().any(|r| r.class.is_some());
    if labeled {
        header.push("class".to_string());
    }
    writeln!(w, "{}", header.join("\t"))?;
    for row in table.rows() {
        let mut fields = vec![row.utterance_id.clone()];
        fields.extend(table.schema().codes(&row.pattern).iter().map(|s| s.to_string()));
        if labeled {
            fields.push(
                row.class
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "-".to_string()),
            );
        }
        writeln!(w, "{}", fields.join("\t"))?;
    }
    Ok(())
}

/// Read a pattern table from TSV. The header's cue columns must match the
/// given schema's cues in order; a trailing `class` column is optional.
pub fn read_pattern_table<R: std::io::Read>(
    schema: &CueSchema,
    r: R,
) -> Result<PatternTable, CuesError> {
    let reader = std::io::BufReader::new(r);
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines.next().ok_or(CuesError::TableParse {
        line: 0,
        message: "empty file".to_string(),
    })?;
    let header = header?;
    let cols: Vec<&str> = header.trim_end().split('\t').collect();
    if cols.first() != Some(&"utterance_id") {
        return Err(CuesError::TableParse {
            line: 1,
            message: "first column must be utterance_id".to_string(),
        });
    }
    let has_class = cols.last() == Some(&"class");
    let cue_cols = &cols[1..cols.len() - usize::from(has_class)];
    let expected: Vec<&str> = schema.cues().iter().map(|c| c.id.as_str()).collect();
    if cue_cols != expected.as_slice() {
        return Err(CuesError::TableParse {
            line: 1,
            message: format!(
                "cue columns {:?} do not match schema `{}`",
                cue_cols,
                schema.id()
            ),
        });
    }

    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim_end_matches('\n').split('\t').collect();
        if fields.len() != cols.len() {
            return Err(CuesError::TableParse {
                line: line_no,
                message: format!("expected {} fields, got {}", cols.len(), fields.len()),
            });
        }
        let mut values = Vec::with_capacity(schema.arity());
        for (c, &code) in fields[1..1 + schema.arity()].iter().enumerate() {
            let v = schema.value_index(c, code).ok_or(CuesError::TableParse {
                line: line_no,
                message: format!(
                    "value `{code}` not in alphabet of cue `{}`",
                    schema.cues()[c].id.as_str()
                ),
            })?;
            values.push(v);
        }
        let class = if has_class {
            let raw = fields[cols.len() - 1];
            if raw == "-" {
                None
            } else {
                Some(raw.parse::<usize>().map_err(|_| CuesError::TableParse {
                    line: line_no,
                    message: format!("bad class label `{raw}`"),
                })?)
            }
        } else {
            None
        };
        rows.push(PatternRow {
            utterance_id: fields[0].to_string(),
            pattern: CuePattern {
                schema_id: schema.id().to_string(),
                values,
            },
            class,
        });
    }
    PatternTable::new(schema.clone(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AnnotatedToken, Pos, Speaker, Utterance};

    fn pattern(schema: &CueSchema, values: Vec<u16>) -> CuePattern {
        CuePattern {
            schema_id: schema.id().to_string(),
            values,
        }
    }

    fn binary_schema() -> CueSchema {
        CueSchema::new(vec![
            CueSpec {
                id: CueId::Wh,
                alphabet: vec!["-".into(), "+".into()],
            },
            CueSpec {
                id: CueId::Qm,
                alphabet: vec!["-".into(), "+".into()],
            },
        ])
        .unwrap()
    }

    #[test]
    fn standard_schema_alphabets() {
        let lex = CueLexicon::default_dutch();
        let schema = CueSchema::full(&lex);
        assert_eq!(schema.arity(), 7);
        assert_eq!(schema.id(), "ut+wh+st+cw+fvt+svt+qm");
        assert_eq!(schema.cues()[0].alphabet.len(), 12);
        assert_eq!(schema.cues()[2].alphabet.len(), 10);
        assert!(schema.cues()[3].alphabet.contains(&"graag".to_string()));
        assert_eq!(schema.cues()[3].alphabet[0], "-");
    }

    #[test]
    fn prev_class_rejected_in_standard() {
        let lex = CueLexicon::default_dutch();
        assert!(matches!(
            CueSchema::standard(&[CueId::Ut, CueId::PrevClass], &lex),
            Err(CuesError::PrevClassNotAllowed(_))
        ));
    }

    #[test]
    fn tabulate_counts_distinct_patterns() {
        let schema = binary_schema();
        let p = pattern(&schema, vec![0, 1]);
        let q = pattern(&schema, vec![1, 1]);
        let table = tabulate(
            &schema,
            vec![
                ("u1".into(), p.clone()),
                ("u2".into(), p.clone()),
                ("u3".into(), q.clone()),
            ],
        )
        .unwrap();
        let distinct = table.distinct();
        assert_eq!(distinct.len(), 2);
        assert_eq!(distinct.iter().map(|(_, n)| n).sum::<usize>(), 3);
        // lexicographic by code strings: ("+","+") sorts before ("-","+")
        assert_eq!(distinct[0], (q, 1));
        assert_eq!(distinct[1], (p, 2));
    }

    #[test]
    fn tabulate_empty_is_empty() {
        let schema = binary_schema();
        let table = tabulate(&schema, vec![]).unwrap();
        assert_eq!(table.cpt_count(), 0);
    }

    #[test]
    fn tabulate_rejects_mixed_schemas() {
        let schema = binary_schema();
        let other = CueSchema::new(vec![CueSpec {
            id: CueId::Qm,
            alphabet: vec!["-".into(), "+".into()],
        }])
        .unwrap();
        let bad = pattern(&other, vec![0]);
        assert!(matches!(
            tabulate(&schema, vec![("u1".into(), bad)]),
            Err(CuesError::SchemaMismatch { .. })
        ));
    }

    fn one_token_utterance(id: &str, dialogue: &str, turn: u32) -> Utterance {
        Utterance {
            id: id.into(),
            dialogue_id: dialogue.into(),
            turn_index: turn,
            position_in_turn: 0,
            speaker: Speaker::Client,
            tokens: vec![AnnotatedToken {
                surface: "ja".into(),
                lemma: "ja".into(),
                pos: Pos::Other,
                person: None,
                number: None,
                pron_subtype: None,
                chunk_index: None,
            }],
        }
    }

    #[test]
    fn context_cue_threads_previous_class() {
        let schema = binary_schema();
        let corpus = Corpus::from_utterances(vec![
            one_token_utterance("u1", "d1", 0),
            one_token_utterance("u2", "d1", 1),
            one_token_utterance("u3", "d2", 0),
        ]);
        let table = PatternTable::new(
            schema.clone(),
            vec![
                PatternRow {
                    utterance_id: "u1".into(),
                    pattern: pattern(&schema, vec![0, 0]),
                    class: Some(2),
                },
                PatternRow {
                    utterance_id: "u2".into(),
                    pattern: pattern(&schema, vec![1, 0]),
                    class: Some(0),
                },
                PatternRow {
                    utterance_id: "u3".into(),
                    pattern: pattern(&schema, vec![1, 1]),
                    class: Some(1),
                },
            ],
        )
        .unwrap();
        let extended = add_context_cue(&table, &corpus, 3).unwrap();
        assert_eq!(extended.schema().arity(), 3);
        let by_id: HashMap<&str, &PatternRow> = extended
            .rows()
            .iter()
            .map(|r| (r.utterance_id.as_str(), r))
            .collect();
        let code = |id: &str| {
            let row = by_id[id];
            extended.schema().code(2, row.pattern.values[2]).to_string()
        };
        assert_eq!(code("u1"), "start");
        assert_eq!(code("u2"), "2");
        assert_eq!(code("u3"), "start");
        for row in extended.rows() {
            assert_eq!(row.pattern.values.len(), 3);
        }
    }

    #[test]
    fn context_cue_requires_labels() {
        let schema = binary_schema();
        let corpus = Corpus::from_utterances(vec![one_token_utterance("u1", "d1", 0)]);
        let table = PatternTable::new(
            schema.clone(),
            vec![PatternRow {
                utterance_id: "u1".into(),
                pattern: pattern(&schema, vec![0, 0]),
                class: None,
            }],
        )
        .unwrap();
        assert!(matches!(
            add_context_cue(&table, &corpus, 2),
            Err(CuesError::MissingClassLabel(_))
        ));
    }

    #[test]
    fn context_cue_requires_known_utterances() {
        let schema = binary_schema();
        let corpus = Corpus::from_utterances(vec![one_token_utterance("u1", "d1", 0)]);
        let table = PatternTable::new(
            schema.clone(),
            vec![PatternRow {
                utterance_id: "zz".into(),
                pattern: pattern(&schema, vec![0, 0]),
                class: Some(0),
            }],
        )
        .unwrap();
        assert!(matches!(
            add_context_cue(&table, &corpus, 2),
            Err(CuesError::UnknownUtterance(_))
        ));
    }

    #[test]
    fn tsv_round_trip() {
        let schema = binary_schema();
        let table = PatternTable::new(
            schema.clone(),
            vec![
                PatternRow {
                    utterance_id: "u1".into(),
                    pattern: pattern(&schema, vec![0, 1]),
                    class: Some(4),
                },
                PatternRow {
                    utterance_id: "u2".into(),
                    pattern: pattern(&schema, vec![1, 0]),
                    class: Some(0),
                },
            ],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_pattern_table(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("utterance_id\twh\tqm\tclass\n"));
        let reparsed = read_pattern_table(&schema, text.as_bytes()).unwrap();
        assert_eq!(table, reparsed);
    }

    #[test]
    fn tsv_rejects_unknown_value() {
        let schema = binary_schema();
        let text = "utterance_id\twh\tqm\nu1\t?\t+\n";
        assert!(matches!(
            read_pattern_table(&schema, text.as_bytes()),
            Err(CuesError::TableParse { line: 2, .. })
        ));
    }
}

//! Cross-module property tests: partition and determinism of the split,
//! totality of extraction, decision-list precedence, and rule-set
//! order-insensitivity.

use proptest::prelude::*;

use cueclass::corpus::{
    parse_corpus, split_corpus, validate_corpus, AnnotatedToken, Corpus, Number, Person, Pos,
    PronSubtype, Speaker, Utterance,
};
use cueclass::cues::{
    extract_pattern, subject_type, utterance_type, CueLexicon, CueSchema, SubjectType,
    UtteranceType,
};
use cueclass::rules::{Complex, Rule, RuleSet, RuleTest};

fn pos_strategy() -> impl Strategy<Value = Pos> {
    prop::sample::select(vec![
        Pos::FinV,
        Pos::InfV,
        Pos::Noun,
        Pos::Proper,
        Pos::Pron,
        Pos::Prep,
        Pos::Det,
        Pos::Adj,
        Pos::Adv,
        Pos::Num,
        Pos::Conj,
        Pos::Intj,
        Pos::Punct,
        Pos::Other,
    ])
}

/// Lemmas drawn from a pool that overlaps every lexicon word class, so
/// random utterances exercise the lexical branches too.
fn lemma_strategy() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "ik", "u", "wie", "wat", "dat", "en", "of", "graag", "ja", "nee", "hallo", "bedankt",
        "oh", "willen", "weten", "zijn", "hebben", "reserveren", "voorstelling", "kaartje",
        "stuk", "op", "de", "morgen", "twee", "?", ".", "xyzzy",
    ])
    .prop_map(str::to_string)
}

fn token_strategy() -> impl Strategy<Value = AnnotatedToken> {
    (
        lemma_strategy(),
        pos_strategy(),
        prop::option::of(prop::sample::select(vec![Person::P1, Person::P2, Person::P3])),
        prop::option::of(prop::sample::select(vec![Number::Sg, Number::Pl])),
        prop::sample::select(vec![
            PronSubtype::Personal,
            PronSubtype::Demonstrative,
            PronSubtype::Interrogative,
            PronSubtype::Other,
        ]),
    )
        .prop_map(|(lemma, pos, person, number, subtype)| {
            // Re-establish the annotation invariants for the drawn POS.
            let allows_person = matches!(pos, Pos::FinV | Pos::Pron);
            AnnotatedToken {
                surface: lemma.clone(),
                lemma,
                pos,
                person: if allows_person { person } else { None },
                number: if allows_person { number } else { None },
                pron_subtype: if pos == Pos::Pron { Some(subtype) } else { None },
                chunk_index: None,
            }
        })
}

fn utterance_strategy(id: usize) -> impl Strategy<Value = Utterance> {
    (
        prop::collection::vec(token_strategy(), 1..8),
        prop::bool::ANY,
        prop::bool::ANY,
    )
        .prop_map(move |(mut tokens, chunked, client)| {
            if chunked {
                // Non-decreasing chunk indices over all tokens.
                let mut chunk = 0u32;
                for (i, t) in tokens.iter_mut().enumerate() {
                    if i > 0 && i % 2 == 0 {
                        chunk += 1;
                    }
                    t.chunk_index = Some(chunk);
                }
            }
            Utterance {
                id: format!("u{id:05}"),
                dialogue_id: format!("d{:03}", id / 10),
                turn_index: (id % 10) as u32,
                position_in_turn: 0,
                speaker: if client { Speaker::Client } else { Speaker::System },
                tokens,
            }
        })
}

fn corpus_strategy(max: usize) -> impl Strategy<Value = Corpus> {
    prop::collection::vec(any::<u8>(), 1..max).prop_flat_map(|seeds| {
        let strategies: Vec<_> = seeds
            .iter()
            .enumerate()
            .map(|(i, _)| utterance_strategy(i))
            .collect();
        strategies.prop_map(Corpus::from_utterances)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_partitions_exactly(corpus in corpus_strategy(60), ratio in 0.05f64..1.0, seed in any::<u64>()) {
        let split = split_corpus(&corpus, ratio, seed).unwrap();
        prop_assert_eq!(split.train.len(), (ratio * corpus.len() as f64).floor() as usize);
        prop_assert_eq!(split.train.len() + split.test.len(), corpus.len());
        let mut ids: Vec<&str> = split
            .train
            .utterances()
            .iter()
            .chain(split.test.utterances())
            .map(|u| u.id.as_str())
            .collect();
        ids.sort_unstable();
        let mut expected: Vec<&str> = corpus.utterances().iter().map(|u| u.id.as_str()).collect();
        expected.sort_unstable();
        prop_assert_eq!(ids, expected);
    }

    #[test]
    fn split_is_reproducible(corpus in corpus_strategy(40), seed in any::<u64>()) {
        let a = split_corpus(&corpus, 0.75, seed).unwrap();
        let b = split_corpus(&corpus, 0.75, seed).unwrap();
        let ids = |c: &Corpus| c.utterances().iter().map(|u| u.id.clone()).collect::<Vec<_>>();
        prop_assert_eq!(ids(&a.train), ids(&b.train));
        prop_assert_eq!(ids(&a.test), ids(&b.test));
    }

    #[test]
    fn corpus_round_trips_through_jsonl(corpus in corpus_strategy(20)) {
        prop_assume!(validate_corpus(&corpus).is_valid());
        let text = corpus.to_jsonl();
        let back = parse_corpus(text.as_bytes()).unwrap();
        prop_assert_eq!(corpus, back);
    }

    /// Totality and determinism: every generated utterance yields a valid
    /// pattern under the full schema, twice over.
    #[test]
    fn extraction_is_total(utterance in utterance_strategy(0)) {
        let lexicon = CueLexicon::default_dutch();
        let schema = CueSchema::full(&lexicon);
        let a = extract_pattern(&utterance, &schema, &lexicon).unwrap();
        prop_assert!(a.conforms_to(&schema));
        let b = extract_pattern(&utterance, &schema, &lexicon).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Applicability: ST is NONE whenever UT is outside {WHQ, YNQ, DEC}.
    #[test]
    fn subject_type_applicability(utterance in utterance_strategy(0)) {
        let lexicon = CueLexicon::default_dutch();
        let ut = utterance_type(&utterance, &lexicon);
        let st = subject_type(&utterance, ut, &lexicon);
        if !matches!(ut, UtteranceType::Whq | UtteranceType::Ynq | UtteranceType::Dec) {
            prop_assert_eq!(st, SubjectType::None);
        }
    }

    /// Summed-distribution prediction never depends on rule order.
    #[test]
    fn predict_is_permutation_invariant(
        values in prop::collection::vec(0u16..4, 3),
        perm_seed in any::<u64>(),
    ) {
        let rules: Vec<Rule> = (0..6)
            .map(|i| Rule {
                complex: Complex {
                    tests: vec![RuleTest { cue: i % 3, value: (i % 4) as u16 }],
                },
                target_class: i % 3,
                distribution: vec![(i as u64 * 7) % 13, (i as u64 * 3) % 11, (i as u64 * 5) % 9],
            })
            .collect();
        let mut shuffled = rules.clone();
        // cheap seeded permutation
        let mut s = perm_seed | 1;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s as usize) % (i + 1));
        }
        let a = RuleSet { schema_id: "s".into(), class_count: 3, default_class: 0, rules };
        let b = RuleSet { schema_id: "s".into(), class_count: 3, default_class: 0, rules: shuffled };
        let pattern = cueclass::cues::CuePattern { schema_id: "s".into(), values };
        let pa = a.predict(&pattern).unwrap();
        let pb = b.predict(&pattern).unwrap();
        prop_assert_eq!(pa.class, pb.class);
        prop_assert_eq!(pa.probabilities, pb.probabilities);
        prop_assert_eq!(pa.defaulted, pb.defaulted);
    }
}

/// Decision-list precedence on utterances deliberately satisfying two
/// type descriptions at once.
#[test]
fn type_precedence_pairs() {
    let lexicon = CueLexicon::default_dutch();
    let tok = |lemma: &str, pos: Pos| AnnotatedToken {
        surface: lemma.to_string(),
        lemma: lemma.to_string(),
        pos,
        person: None,
        number: None,
        pron_subtype: None,
        chunk_index: None,
    };
    let utt = |tokens: Vec<AnnotatedToken>| Utterance {
        id: "t".into(),
        dialogue_id: "d".into(),
        turn_index: 0,
        position_in_turn: 0,
        speaker: Speaker::Client,
        tokens,
    };

    // WHQ beats DEC: wh-word initial and a question mark.
    let mut fin = tok("komen", Pos::FinV);
    fin.person = Some(Person::P3);
    fin.number = Some(Number::Sg);
    let mut wie = tok("wie", Pos::Pron);
    wie.pron_subtype = Some(PronSubtype::Interrogative);
    let whq_dec = utt(vec![wie.clone(), fin.clone(), tok("?", Pos::Punct)]);
    assert_eq!(utterance_type(&whq_dec, &lexicon), UtteranceType::Whq);

    // CON beats ADJ: "goed" is a confirm word and an adjective.
    let con_adj = utt(vec![tok("goed", Pos::Adj), tok(".", Pos::Punct)]);
    assert_eq!(utterance_type(&con_adj, &lexicon), UtteranceType::Con);

    // NOM beats nothing below it, but PRE beats NOM on preposition-initial
    // content even when the rest is nominal.
    let pre_nom = utt(vec![tok("op", Pos::Prep), tok("maart", Pos::Noun)]);
    assert_eq!(utterance_type(&pre_nom, &lexicon), UtteranceType::Pre);

    // YNQ beats IMP when the second position holds a subject expression.
    let mut u_pron = tok("u", Pos::Pron);
    u_pron.person = Some(Person::P2);
    u_pron.number = Some(Number::Sg);
    u_pron.pron_subtype = Some(PronSubtype::Personal);
    let mut weet = tok("weten", Pos::FinV);
    weet.person = Some(Person::P2);
    weet.number = Some(Number::Sg);
    let ynq_imp = utt(vec![weet, u_pron, tok("?", Pos::Punct)]);
    assert_eq!(utterance_type(&ynq_imp, &lexicon), UtteranceType::Ynq);
}

/// The bundled corpus contains an utterance with a wh-word and UT = YNQ:
/// the extractor must not force WHQ whenever wh is true.
#[test]
fn wh_and_ut_are_independent() {
    let lexicon = CueLexicon::default_dutch();
    let corpus = Corpus::bundled_sample();
    let found = corpus.utterances().iter().any(|u| {
        let ut = utterance_type(u, &lexicon);
        let has_wh = u
            .tokens
            .iter()
            .any(|t| lexicon.wh_words.contains(&t.lemma));
        ut == UtteranceType::Ynq && has_wh
    });
    assert!(found, "no YNQ utterance with a wh-word in the sample corpus");
}

/// Distinct-pattern counting agrees with an independent set-based oracle.
#[test]
fn cpt_count_matches_hash_set_oracle() {
    use std::collections::HashSet;
    let lexicon = CueLexicon::default_dutch();
    let schema = CueSchema::full(&lexicon);
    let corpus = Corpus::bundled_sample();
    let patterns: Vec<(String, cueclass::cues::CuePattern)> = corpus
        .utterances()
        .iter()
        .map(|u| {
            (
                u.id.clone(),
                extract_pattern(u, &schema, &lexicon).unwrap(),
            )
        })
        .collect();
    let oracle: HashSet<Vec<u16>> = patterns.iter().map(|(_, p)| p.values.clone()).collect();
    let table = cueclass::cues::tabulate(&schema, patterns).unwrap();
    assert_eq!(table.cpt_count(), oracle.len());
    let total: usize = table.distinct().iter().map(|(_, n)| n).sum();
    assert_eq!(total, corpus.len());
}

//! Synthetic corpus generation: a stand-in for a real annotated corpus.
//!
//! Utterances are realised from a bank of annotated templates grouped
//! into seven families with distinct cue signatures (bare NPs, domain
//! statements, second-person questions, wh-questions, second-person
//! statements, first-person wishes, short forms). Every template carries
//! the same annotations a tagger would supply, so the cue extractor reads
//! the intended pattern back out.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cueclass::corpus::{
    AnnotatedToken, Corpus, Number, Person, Pos, PronSubtype, Speaker, Utterance,
};

use crate::config::GenConfig;

fn tok(surface: &str, lemma: &str, pos: Pos) -> AnnotatedToken {
    AnnotatedToken {
        surface: surface.into(),
        lemma: lemma.into(),
        pos,
        person: None,
        number: None,
        pron_subtype: None,
        chunk_index: None,
    }
}

fn fin(surface: &str, lemma: &str, person: Person) -> AnnotatedToken {
    AnnotatedToken {
        person: Some(person),
        number: Some(Number::Sg),
        ..tok(surface, lemma, Pos::FinV)
    }
}

fn pron(surface: &str, lemma: &str, person: Person) -> AnnotatedToken {
    AnnotatedToken {
        person: Some(person),
        number: Some(Number::Sg),
        pron_subtype: Some(PronSubtype::Personal),
        ..tok(surface, lemma, Pos::Pron)
    }
}

fn er() -> AnnotatedToken {
    AnnotatedToken {
        person: Some(Person::P3),
        number: Some(Number::Sg),
        pron_subtype: Some(PronSubtype::Other),
        ..tok("er", "er", Pos::Pron)
    }
}

fn chunked(mut tokens: Vec<AnnotatedToken>, chunks: &[u32]) -> Vec<AnnotatedToken> {
    for (t, &c) in tokens.iter_mut().zip(chunks) {
        t.chunk_index = Some(c);
    }
    tokens
}

fn punct() -> AnnotatedToken {
    tok(".", ".", Pos::Punct)
}

struct Family {
    templates: Vec<fn() -> Vec<AnnotatedToken>>,
    qm_prob: f64,
    client_prob: f64,
    weight: f64,
}

fn families() -> Vec<Family> {
    // F0: bare noun phrases.
    let noms: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || vec![tok("Antigone", "antigone", Pos::Proper), punct()],
        || vec![tok("de", "de", Pos::Det), tok("zaal", "zaal", Pos::Noun), punct()],
        || vec![tok("het", "het", Pos::Det), tok("concert", "concert", Pos::Noun), punct()],
        || {
            vec![
                tok("de", "de", Pos::Det),
                tok("voorstelling", "voorstelling", Pos::Noun),
                tok("Antigone", "antigone", Pos::Proper),
                punct(),
            ]
        },
    ];
    // F1: declarative domain statements.
    let dec_domain: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || {
            chunked(
                vec![
                    tok("de", "de", Pos::Det),
                    tok("voorstelling", "voorstelling", Pos::Noun),
                    fin("begint", "beginnen", Person::P3),
                    tok("om", "om", Pos::Prep),
                    tok("acht", "acht", Pos::Num),
                    tok("uur", "uur", Pos::Noun),
                    punct(),
                ],
                &[0, 0, 1, 2, 2, 2, 2],
            )
        },
        || {
            chunked(
                vec![
                    tok("het", "het", Pos::Det),
                    tok("stuk", "stuk", Pos::Noun),
                    fin("duurt", "duren", Person::P3),
                    tok("twee", "twee", Pos::Num),
                    tok("uur", "uur", Pos::Noun),
                    punct(),
                ],
                &[0, 0, 1, 2, 2, 2],
            )
        },
        || {
            chunked(
                vec![
                    tok("de", "de", Pos::Det),
                    tok("kaartjes", "kaartje", Pos::Noun),
                    fin("kosten", "kosten", Person::P3),
                    tok("twintig", "twintig", Pos::Num),
                    tok("gulden", "gulden", Pos::Noun),
                    punct(),
                ],
                &[0, 0, 1, 2, 2, 2],
            )
        },
        || {
            vec![
                er(),
                fin("is", "zijn", Person::P3),
                tok("nog", "nog", Pos::Adv),
                tok("plaats", "plaats", Pos::Noun),
                punct(),
            ]
        },
    ];
    // F2: second-person yes/no questions.
    let ynq: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || {
            vec![
                fin("kunt", "kunnen", Person::P2),
                pron("u", "u", Person::P2),
                pron("mij", "ik", Person::P1),
                tok("helpen", "helpen", Pos::InfV),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            vec![
                fin("weet", "weten", Person::P2),
                pron("u", "u", Person::P2),
                tok("de", "de", Pos::Det),
                tok("prijs", "prijs", Pos::Noun),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            vec![
                fin("heeft", "hebben", Person::P2),
                pron("u", "u", Person::P2),
                tok("een", "een", Pos::Det),
                tok("kortingskaart", "kortingskaart", Pos::Noun),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            vec![
                fin("wilt", "willen", Person::P2),
                pron("u", "u", Person::P2),
                tok("reserveren", "reserveren", Pos::InfV),
                tok("?", "?", Pos::Punct),
            ]
        },
    ];
    // F3: wh-questions.
    let whq: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || {
            let mut wat = tok("wat", "wat", Pos::Pron);
            wat.pron_subtype = Some(PronSubtype::Interrogative);
            vec![
                wat,
                fin("kost", "kosten", Person::P3),
                tok("een", "een", Pos::Det),
                tok("kaartje", "kaartje", Pos::Noun),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            vec![
                tok("wanneer", "wanneer", Pos::Adv),
                fin("begint", "beginnen", Person::P3),
                tok("de", "de", Pos::Det),
                tok("voorstelling", "voorstelling", Pos::Noun),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            let mut wie = tok("wie", "wie", Pos::Pron);
            wie.pron_subtype = Some(PronSubtype::Interrogative);
            vec![
                wie,
                fin("heeft", "hebben", Person::P3),
                tok("het", "het", Pos::Det),
                tok("stuk", "stuk", Pos::Noun),
                tok("geschreven", "schrijven", Pos::InfV),
                tok("?", "?", Pos::Punct),
            ]
        },
        || {
            vec![
                tok("welke", "welke", Pos::Det),
                tok("voorstellingen", "voorstelling", Pos::Noun),
                fin("zijn", "zijn", Person::P3),
                er(),
                tok("?", "?", Pos::Punct),
            ]
        },
    ];
    // F4: second-person declaratives.
    let dec_p2: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || {
            vec![
                pron("u", "u", Person::P2),
                fin("heeft", "hebben", Person::P2),
                tok("twee", "twee", Pos::Num),
                tok("kaartjes", "kaartje", Pos::Noun),
                tok("gereserveerd", "reserveren", Pos::InfV),
                punct(),
            ]
        },
        || {
            vec![
                pron("u", "u", Person::P2),
                fin("kunt", "kunnen", Person::P2),
                tok("de", "de", Pos::Det),
                tok("kaartjes", "kaartje", Pos::Noun),
                tok("afhalen", "afhalen", Pos::InfV),
                punct(),
            ]
        },
        || {
            vec![
                pron("u", "u", Person::P2),
                fin("krijgt", "krijgen", Person::P2),
                tok("tien", "tien", Pos::Num),
                tok("procent", "procent", Pos::Noun),
                tok("korting", "korting", Pos::Noun),
                punct(),
            ]
        },
    ];
    // F5: first-person wishes.
    let wish: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || {
            vec![
                pron("ik", "ik", Person::P1),
                fin("wil", "willen", Person::P1),
                tok("graag", "graag", Pos::Adv),
                tok("reserveren", "reserveren", Pos::InfV),
                punct(),
            ]
        },
        || {
            vec![
                pron("ik", "ik", Person::P1),
                fin("wil", "willen", Person::P1),
                tok("graag", "graag", Pos::Adv),
                tok("twee", "twee", Pos::Num),
                tok("kaartjes", "kaartje", Pos::Noun),
                punct(),
            ]
        },
        || {
            vec![
                pron("ik", "ik", Person::P1),
                fin("wil", "willen", Person::P1),
                tok("graag", "graag", Pos::Adv),
                tok("meer", "meer", Pos::Adv),
                tok("weten", "weten", Pos::InfV),
                punct(),
            ]
        },
        || {
            vec![
                pron("ik", "ik", Person::P1),
                fin("zou", "zullen", Person::P1),
                tok("graag", "graag", Pos::Adv),
                tok("kaartjes", "kaartje", Pos::Noun),
                tok("willen", "willen", Pos::InfV),
                punct(),
            ]
        },
    ];
    // F6: short forms.
    let short: Vec<fn() -> Vec<AnnotatedToken>> = vec![
        || vec![tok("ja", "ja", Pos::Intj), punct()],
        || vec![tok("nee", "nee", Pos::Intj), punct()],
        || vec![tok("prima", "prima", Pos::Adj), punct()],
        || vec![tok("akkoord", "akkoord", Pos::Intj), punct()],
        || vec![tok("bedankt", "bedankt", Pos::Intj), punct()],
        || vec![tok("hallo", "hallo", Pos::Intj), punct()],
        || vec![tok("dag", "dag", Pos::Intj), punct()],
    ];

    vec![
        Family { templates: noms, qm_prob: 0.10, client_prob: 0.6, weight: 0.15 },
        Family { templates: dec_domain, qm_prob: 0.05, client_prob: 0.1, weight: 0.16 },
        Family { templates: ynq, qm_prob: 0.90, client_prob: 0.5, weight: 0.15 },
        Family { templates: whq, qm_prob: 0.85, client_prob: 0.8, weight: 0.15 },
        Family { templates: dec_p2, qm_prob: 0.10, client_prob: 0.05, weight: 0.12 },
        Family { templates: wish, qm_prob: 0.05, client_prob: 0.95, weight: 0.14 },
        Family { templates: short, qm_prob: 0.05, client_prob: 0.5, weight: 0.13 },
    ]
}

/// Replace the trailing punctuation mark (every template ends in one).
fn set_final_punct(tokens: &mut [AnnotatedToken], qm: bool) {
    let last = tokens.last_mut().expect("templates are non-empty");
    debug_assert_eq!(last.pos, Pos::Punct);
    let mark = if qm { "?" } else { "." };
    last.surface = mark.to_string();
    last.lemma = mark.to_string();
}

/// Generate a synthetic corpus of `n_utterances` across `n_dialogues`,
/// deterministic per seed.
pub fn generate_corpus(config: &GenConfig) -> Corpus {
    let families = families();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.n_utterances;
    let dialogues = config.n_dialogues.max(1);
    let mut utterances = Vec::with_capacity(n);
    let mut turn_in_dialogue = vec![0u32; dialogues];
    for i in 0..n {
        let dialogue = i * dialogues / n.max(1);
        let family = {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut chosen = families.len() - 1;
            for (f, fam) in families.iter().enumerate() {
                acc += fam.weight;
                if u < acc {
                    chosen = f;
                    break;
                }
            }
            chosen
        };
        let fam = &families[family];
        // With probability 1 - purity the template leaks from the global
        // pool, blurring the family boundaries.
        let template = if rng.gen::<f64>() < config.purity {
            fam.templates[rng.gen_range(0..fam.templates.len())]
        } else {
            let all: usize = families.iter().map(|f| f.templates.len()).sum();
            let mut idx = rng.gen_range(0..all);
            let mut picked = fam.templates[0];
            for f in &families {
                if idx < f.templates.len() {
                    picked = f.templates[idx];
                    break;
                }
                idx -= f.templates.len();
            }
            picked
        };
        let mut tokens = template();
        set_final_punct(&mut tokens, rng.gen::<f64>() < fam.qm_prob);
        let speaker = if rng.gen::<f64>() < fam.client_prob {
            Speaker::Client
        } else {
            Speaker::System
        };
        let turn = turn_in_dialogue[dialogue];
        turn_in_dialogue[dialogue] += 1;
        utterances.push(Utterance {
            id: format!("s{i:06}"),
            dialogue_id: format!("sd{dialogue:03}"),
            turn_index: turn,
            position_in_turn: 0,
            speaker,
            tokens,
        });
    }
    Corpus::from_utterances(utterances)
}

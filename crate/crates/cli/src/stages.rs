//! Batch stages over files. Every stage reads the previous stage's
//! artifacts, writes its own atomically, and records input/output hashes
//! in the run manifest, so a stage can be deleted and reproduced
//! byte-identically from the recorded seeds.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use cueclass::cluster::{
    cluster_report, fit_mixture, hard_assign, select_models, FitOptions, MixtureModel,
};
use cueclass::corpus::{parse_corpus, split_corpus, Corpus};
use cueclass::cues::{
    add_context_cue, extract_pattern, read_pattern_table, tabulate, write_pattern_table,
    CueLexicon, CueSchema, PatternTable,
};
use cueclass::metrics::{confusion_matrix, EvalReport};
use cueclass::rules::{induce_rules, InduceOptions, RuleSet};

use crate::config::PipelineConfig;
use crate::gen::generate_corpus;
use crate::manifest::{hash_file, Manifest, StageRecord};
use crate::{write_atomic, CliError};

/// The pipeline stages, in execution order (GEN is standalone).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Split,
    Extract,
    Cluster,
    Induce,
    Predict,
    Evaluate,
    Gen,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::Split => "split",
            Stage::Extract => "extract",
            Stage::Cluster => "cluster",
            Stage::Induce => "induce",
            Stage::Predict => "predict",
            Stage::Evaluate => "evaluate",
            Stage::Gen => "gen",
        }
    }
}

// Artifact file names inside the output directory.
pub const SYNTHETIC_CORPUS: &str = "synthetic_corpus.jsonl";
pub const TRAIN_CORPUS: &str = "train.jsonl";
pub const TEST_CORPUS: &str = "test.jsonl";
pub const TRAIN_PATTERNS: &str = "train_patterns.tsv";
pub const TEST_PATTERNS: &str = "test_patterns.tsv";
pub const MODEL: &str = "model.json";
pub const MODEL_SELECTION: &str = "model_selection.tsv";
pub const TRAIN_LABELED: &str = "train_labeled.tsv";
pub const TRAIN_CONTEXT: &str = "train_context.tsv";
pub const CLUSTER_REPORT: &str = "cluster_report.txt";
pub const CLASS_STRENGTH: &str = "class_strength.tsv";
pub const CUE_INFLUENCE: &str = "cue_influence.tsv";
pub const VALUE_INFLUENCE: &str = "value_influence.tsv";
pub const RULES_JSON: &str = "rules.json";
pub const RULES_TEXT: &str = "rules.txt";
pub const PREDICTIONS: &str = "predictions.tsv";
pub const TEST_LABELED: &str = "test_labeled.tsv";
pub const EVAL_TEXT: &str = "eval_report.txt";
pub const EVAL_TSV: &str = "eval_report.tsv";
pub const MANIFEST: &str = "manifest.json";

struct StageCx {
    out: PathBuf,
    lexicon: CueLexicon,
    schema: CueSchema,
    quiet: bool,
}

impl StageCx {
    fn new(config: &PipelineConfig, quiet: bool) -> Result<StageCx, CliError> {
        let lexicon = match &config.lexicon_path {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Data(format!("cannot read lexicon {}: {e}", path.display()))
                })?;
                CueLexicon::parse(&text)
                    .map_err(|e| CliError::Data(format!("lexicon {}: {e}", path.display())))?
            }
            None => CueLexicon::default_dutch(),
        };
        let schema = CueSchema::standard(&config.cue_ids()?, &lexicon)
            .map_err(|e| CliError::Usage(format!("schema: {e}")))?;
        std::fs::create_dir_all(&config.output_dir).map_err(|e| {
            CliError::Data(format!(
                "cannot create output dir {}: {e}",
                config.output_dir.display()
            ))
        })?;
        Ok(StageCx {
            out: config.output_dir.clone(),
            lexicon,
            schema,
            quiet,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn require(&self, name: &str, produced_by: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        if !path.exists() {
            return Err(CliError::Data(format!(
                "missing {name}: run the {produced_by} stage first"
            )));
        }
        Ok(path)
    }

    fn say(&self, message: &str) {
        if !self.quiet {
            println!("{message}");
        }
    }

    fn read_corpus(&self, path: &Path) -> Result<Corpus, CliError> {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
        parse_corpus(file).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    fn read_table(&self, path: &Path, schema: &CueSchema) -> Result<PatternTable, CliError> {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
        read_pattern_table(schema, file)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    fn write_table(&self, table: &PatternTable, name: &str) -> Result<(), CliError> {
        let mut buf = Vec::new();
        write_pattern_table(table, &mut buf)
            .map_err(|e| CliError::Data(format!("{name}: {e}")))?;
        write_atomic(&self.path(name), &buf)
    }

    fn read_model(&self) -> Result<MixtureModel, CliError> {
        let path = self.require(MODEL, "cluster")?;
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        MixtureModel::from_json(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    fn read_rules(&self) -> Result<RuleSet, CliError> {
        let path = self.require(RULES_JSON, "induce")?;
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        RuleSet::from_json(&text)
            .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
    }

    /// The schema rules are induced over: the base schema, plus the
    /// context cue when configured.
    fn rules_schema(
        &self,
        config: &PipelineConfig,
        class_count: usize,
    ) -> Result<CueSchema, CliError> {
        if !config.context_cue {
            return Ok(self.schema.clone());
        }
        let mut cues = self.schema.cues().to_vec();
        let mut alphabet = vec![cueclass::cues::PREV_CLASS_START.to_string()];
        alphabet.extend((0..class_count).map(|c| c.to_string()));
        cues.push(cueclass::cues::CueSpec {
            id: cueclass::cues::CueId::PrevClass,
            alphabet,
        });
        CueSchema::new(cues).map_err(|e| CliError::Data(format!("context schema: {e}")))
    }
}

fn record(
    manifest: &mut Manifest,
    stage: Stage,
    inputs: &[(&str, &Path)],
    outputs: &[(&str, &Path)],
) -> Result<(), CliError> {
    let mut rec = StageRecord::default();
    for (name, path) in inputs {
        rec.inputs.insert(name.to_string(), hash_file(path)?);
    }
    for (name, path) in outputs {
        rec.outputs.insert(name.to_string(), hash_file(path)?);
    }
    manifest.record_stage(stage.name(), rec);
    Ok(())
}

/// Run one stage against the configured output directory.
pub fn run_stage(stage: Stage, config: &PipelineConfig, quiet: bool) -> Result<(), CliError> {
    let cx = StageCx::new(config, quiet)?;
    let mut manifest = Manifest::load_or_new(&cx.path(MANIFEST), config);
    match stage {
        Stage::Gen => stage_gen(&cx, config, &mut manifest)?,
        Stage::Split => stage_split(&cx, config, &mut manifest)?,
        Stage::Extract => stage_extract(&cx, config, &mut manifest)?,
        Stage::Cluster => stage_cluster(&cx, config, &mut manifest)?,
        Stage::Induce => stage_induce(&cx, config, &mut manifest)?,
        Stage::Predict => stage_predict(&cx, config, &mut manifest)?,
        Stage::Evaluate => {
            stage_evaluate(&cx, config, &mut manifest)?;
        }
    }
    manifest.save(&cx.path(MANIFEST))
}

/// Run the whole cycle: split, extract, cluster, induce, predict,
/// evaluate. Returns the evaluation report.
pub fn run_pipeline(config: &PipelineConfig, quiet: bool) -> Result<EvalReport, CliError> {
    let cx = StageCx::new(config, quiet)?;
    let mut manifest = Manifest::load_or_new(&cx.path(MANIFEST), config);
    stage_split(&cx, config, &mut manifest)?;
    stage_extract(&cx, config, &mut manifest)?;
    stage_cluster(&cx, config, &mut manifest)?;
    stage_induce(&cx, config, &mut manifest)?;
    stage_predict(&cx, config, &mut manifest)?;
    let report = stage_evaluate(&cx, config, &mut manifest)?;
    manifest.save(&cx.path(MANIFEST))?;
    Ok(report)
}

fn stage_gen(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let gen = config.gen.clone().unwrap_or_default();
    let corpus = generate_corpus(&gen);
    write_atomic(&cx.path(SYNTHETIC_CORPUS), corpus.to_jsonl().as_bytes())?;
    cx.say(&format!(
        "gen: {} utterances in {} dialogues -> {}",
        corpus.len(),
        corpus.dialogues().len(),
        cx.path(SYNTHETIC_CORPUS).display()
    ));
    record(
        manifest,
        Stage::Gen,
        &[],
        &[(SYNTHETIC_CORPUS, &cx.path(SYNTHETIC_CORPUS))],
    )
}

fn stage_split(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let corpus = cx.read_corpus(&config.corpus_path)?;
    let split = split_corpus(&corpus, config.split.ratio, config.split.seed)
        .map_err(|e| CliError::Data(e.to_string()))?;
    write_atomic(&cx.path(TRAIN_CORPUS), split.train.to_jsonl().as_bytes())?;
    write_atomic(&cx.path(TEST_CORPUS), split.test.to_jsonl().as_bytes())?;
    cx.say(&format!(
        "split: {} -> {} train / {} test (ratio {}, seed {})",
        corpus.len(),
        split.train.len(),
        split.test.len(),
        config.split.ratio,
        config.split.seed
    ));
    record(
        manifest,
        Stage::Split,
        &[("corpus", &config.corpus_path)],
        &[
            (TRAIN_CORPUS, &cx.path(TRAIN_CORPUS)),
            (TEST_CORPUS, &cx.path(TEST_CORPUS)),
        ],
    )
}

fn extract_table(cx: &StageCx, corpus: &Corpus) -> Result<PatternTable, CliError> {
    let patterns: Result<Vec<_>, CliError> = corpus
        .utterances()
        .iter()
        .map(|u| {
            extract_pattern(u, &cx.schema, &cx.lexicon)
                .map(|p| (u.id.clone(), p))
                .map_err(|e| CliError::Data(format!("extract {}: {e}", u.id)))
        })
        .collect();
    tabulate(&cx.schema, patterns?).map_err(|e| CliError::Data(e.to_string()))
}

fn stage_extract(
    cx: &StageCx,
    _config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let train_path = cx.require(TRAIN_CORPUS, "split")?;
    let test_path = cx.require(TEST_CORPUS, "split")?;
    let train = cx.read_corpus(&train_path)?;
    let test = cx.read_corpus(&test_path)?;
    let train_table = extract_table(cx, &train)?;
    let test_table = extract_table(cx, &test)?;
    cx.write_table(&train_table, TRAIN_PATTERNS)?;
    cx.write_table(&test_table, TEST_PATTERNS)?;
    cx.say(&format!(
        "extract: {} train patterns ({} CPTs), {} test patterns",
        train_table.len(),
        train_table.cpt_count(),
        test_table.len()
    ));
    record(
        manifest,
        Stage::Extract,
        &[
            (TRAIN_CORPUS, train_path.as_path()),
            (TEST_CORPUS, test_path.as_path()),
        ],
        &[
            (TRAIN_PATTERNS, &cx.path(TRAIN_PATTERNS)),
            (TEST_PATTERNS, &cx.path(TEST_PATTERNS)),
        ],
    )
}

fn stage_cluster(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let patterns_path = cx.require(TRAIN_PATTERNS, "extract")?;
    let table = cx.read_table(&patterns_path, &cx.schema)?;
    let opts = FitOptions {
        seed: config.cluster.seed,
        restarts: config.cluster.restarts,
        alpha: config.cluster.alpha,
        tol: config.cluster.tol,
        max_iter: config.cluster.max_iter,
    };
    let models = select_models(&table, config.cluster.k_range, &opts)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let best = &models[0];

    let mut selection = String::from("k\tscore\n");
    for m in &models {
        selection.push_str(&format!("{}\t{}\n", m.k, m.score));
    }
    write_atomic(&cx.path(MODEL_SELECTION), selection.as_bytes())?;
    write_atomic(&cx.path(MODEL), best.to_json().as_bytes())?;

    let labels = hard_assign(best, &table).map_err(|e| CliError::Data(e.to_string()))?;
    let labeled = table.with_classes(&labels);
    cx.write_table(&labeled, TRAIN_LABELED)?;

    let report = cluster_report(best, &table).map_err(|e| CliError::Data(e.to_string()))?;
    let cue_names: Vec<String> = cx
        .schema
        .cues()
        .iter()
        .map(|c| c.id.as_str().to_string())
        .collect();
    let mut text = String::new();
    text.push_str("Best classifications found:\n");
    for m in models.iter().take(2) {
        text.push_str(&format!("  k = {}  score = {:.3}\n", m.k, m.score));
    }
    text.push('\n');
    text.push_str(&report.to_text(&cue_names));
    write_atomic(&cx.path(CLUSTER_REPORT), text.as_bytes())?;

    let mut strength = String::from("class\tstrength\tmembers\tempty\n");
    for (j, (&s, &n)) in report
        .class_strength
        .iter()
        .zip(&report.hard_counts)
        .enumerate()
    {
        strength.push_str(&format!(
            "{j}\t{s}\t{n}\t{}\n",
            report.empty_classes.contains(&j)
        ));
    }
    write_atomic(&cx.path(CLASS_STRENGTH), strength.as_bytes())?;

    let mut influence = String::from("cue\tinfluence\n");
    for (c, &i) in report.cue_influence.iter().enumerate() {
        influence.push_str(&format!("{}\t{i}\n", cue_names[c]));
    }
    write_atomic(&cx.path(CUE_INFLUENCE), influence.as_bytes())?;

    let mut value_infl = String::from("cue\tvalue\tinfluence\n");
    for (c, values) in report.value_influence.iter().enumerate() {
        for (v, &i) in values.iter().enumerate() {
            value_infl.push_str(&format!(
                "{}\t{}\t{i}\n",
                cue_names[c],
                cx.schema.code(c, v as u16)
            ));
        }
    }
    write_atomic(&cx.path(VALUE_INFLUENCE), value_infl.as_bytes())?;

    cx.say(&format!(
        "cluster: best k = {} (score {:.3}) over k_range {:?}",
        best.k, best.score, config.cluster.k_range
    ));
    record(
        manifest,
        Stage::Cluster,
        &[(TRAIN_PATTERNS, patterns_path.as_path())],
        &[
            (MODEL, &cx.path(MODEL)),
            (MODEL_SELECTION, &cx.path(MODEL_SELECTION)),
            (TRAIN_LABELED, &cx.path(TRAIN_LABELED)),
            (CLUSTER_REPORT, &cx.path(CLUSTER_REPORT)),
            (CLASS_STRENGTH, &cx.path(CLASS_STRENGTH)),
            (CUE_INFLUENCE, &cx.path(CUE_INFLUENCE)),
            (VALUE_INFLUENCE, &cx.path(VALUE_INFLUENCE)),
        ],
    )
}

fn stage_induce(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let labeled_path = cx.require(TRAIN_LABELED, "cluster")?;
    let model = cx.read_model()?;
    let mut table = cx.read_table(&labeled_path, &cx.schema)?;
    let mut inputs: Vec<(&str, PathBuf)> = vec![
        (TRAIN_LABELED, labeled_path.clone()),
        (MODEL, cx.path(MODEL)),
    ];
    if config.context_cue {
        let train_corpus_path = cx.require(TRAIN_CORPUS, "split")?;
        let corpus = cx.read_corpus(&train_corpus_path)?;
        table = add_context_cue(&table, &corpus, model.k)
            .map_err(|e| CliError::Data(e.to_string()))?;
        cx.write_table(&table, TRAIN_CONTEXT)?;
        inputs.push((TRAIN_CORPUS, train_corpus_path));
    }
    let opts = InduceOptions {
        beam_width: config.rules.beam_width,
        sig_threshold: config.rules.sig_threshold,
        min_coverage: config.rules.min_coverage,
    };
    let schema = cx.rules_schema(config, model.k)?;
    let ruleset =
        induce_rules(&table, &schema, &opts).map_err(|e| CliError::Data(e.to_string()))?;
    write_atomic(&cx.path(RULES_JSON), ruleset.to_json().as_bytes())?;
    write_atomic(&cx.path(RULES_TEXT), ruleset.to_text(&schema).as_bytes())?;
    cx.say(&format!(
        "induce: {} rules over {} CPTs (schema {})",
        ruleset.rules.len(),
        table.cpt_count(),
        schema.id()
    ));
    let mut outputs = vec![
        (RULES_JSON, cx.path(RULES_JSON)),
        (RULES_TEXT, cx.path(RULES_TEXT)),
    ];
    if config.context_cue {
        outputs.push((TRAIN_CONTEXT, cx.path(TRAIN_CONTEXT)));
    }
    let input_refs: Vec<(&str, &Path)> =
        inputs.iter().map(|(n, p)| (*n, p.as_path())).collect();
    let output_refs: Vec<(&str, &Path)> =
        outputs.iter().map(|(n, p)| (*n, p.as_path())).collect();
    record(manifest, Stage::Induce, &input_refs, &output_refs)
}

/// Test patterns under the schema the rules expect: with the context cue
/// enabled, test rows are labeled by the model and threaded with the
/// previous utterance's class within each test dialogue.
fn test_table_for_rules(
    cx: &StageCx,
    config: &PipelineConfig,
    model: &MixtureModel,
) -> Result<PatternTable, CliError> {
    let patterns_path = cx.require(TEST_PATTERNS, "extract")?;
    let table = cx.read_table(&patterns_path, &cx.schema)?;
    if !config.context_cue {
        return Ok(table);
    }
    let labels = hard_assign(model, &table).map_err(|e| CliError::Data(e.to_string()))?;
    let labeled = table.with_classes(&labels);
    let corpus = cx.read_corpus(&cx.require(TEST_CORPUS, "split")?)?;
    add_context_cue(&labeled, &corpus, model.k).map_err(|e| CliError::Data(e.to_string()))
}

fn stage_predict(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<(), CliError> {
    let ruleset = cx.read_rules()?;
    let model = cx.read_model()?;
    let table = test_table_for_rules(cx, config, &model)?;
    if ruleset.schema_id != table.schema().id() {
        return Err(CliError::Data(format!(
            "rule set schema `{}` does not match test patterns schema `{}`",
            ruleset.schema_id,
            table.schema().id()
        )));
    }
    let mut out = String::from("utterance_id\tpredicted\tdefaulted");
    for j in 0..ruleset.class_count {
        out.push_str(&format!("\tp{j}"));
    }
    out.push('\n');
    let mut defaulted = 0usize;
    for row in table.rows() {
        let pred = ruleset
            .predict(&row.pattern)
            .map_err(|e| CliError::Data(e.to_string()))?;
        defaulted += usize::from(pred.defaulted);
        out.push_str(&format!(
            "{}\t{}\t{}",
            row.utterance_id,
            pred.class,
            if pred.defaulted { "+" } else { "-" }
        ));
        for p in &pred.probabilities {
            out.push_str(&format!("\t{p}"));
        }
        out.push('\n');
    }
    write_atomic(&cx.path(PREDICTIONS), out.as_bytes())?;
    cx.say(&format!(
        "predict: {} test patterns, {} defaulted",
        table.len(),
        defaulted
    ));
    record(
        manifest,
        Stage::Predict,
        &[
            (RULES_JSON, &cx.path(RULES_JSON)),
            (MODEL, &cx.path(MODEL)),
            (TEST_PATTERNS, &cx.path(TEST_PATTERNS)),
        ],
        &[(PREDICTIONS, &cx.path(PREDICTIONS))],
    )
}

fn stage_evaluate(
    cx: &StageCx,
    config: &PipelineConfig,
    manifest: &mut Manifest,
) -> Result<EvalReport, CliError> {
    let model = cx.read_model()?;
    let ruleset = cx.read_rules()?;
    let predictions_path = cx.require(PREDICTIONS, "predict")?;
    let patterns_path = cx.require(TEST_PATTERNS, "extract")?;

    // Ground truth for the test half: the fitted model's hard assignment.
    let table = cx.read_table(&patterns_path, &cx.schema)?;
    let actual = hard_assign(&model, &table).map_err(|e| CliError::Data(e.to_string()))?;
    let labeled = table.with_classes(&actual);
    cx.write_table(&labeled, TEST_LABELED)?;

    // Join predictions by utterance id.
    let text = std::fs::read_to_string(&predictions_path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", predictions_path.display())))?;
    let mut predicted_by_id: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let id = fields.next().ok_or_else(|| {
            CliError::Data(format!("predictions line {}: missing id", idx + 1))
        })?;
        let class: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                CliError::Data(format!("predictions line {}: bad class", idx + 1))
            })?;
        predicted_by_id.insert(id.to_string(), class);
    }
    let mut predicted = Vec::with_capacity(table.len());
    for row in table.rows() {
        let class = predicted_by_id.get(&row.utterance_id).ok_or_else(|| {
            CliError::Data(format!(
                "no prediction for test utterance {}",
                row.utterance_id
            ))
        })?;
        predicted.push(*class);
    }

    // CPT count of the table the rules were induced over.
    let train_table = if config.context_cue {
        cx.read_table(
            &cx.require(TRAIN_CONTEXT, "induce")?,
            &cx.rules_schema(config, model.k)?,
        )?
    } else {
        cx.read_table(&cx.require(TRAIN_LABELED, "cluster")?, &cx.schema)?
    };

    let matrix = confusion_matrix(&actual, &predicted, model.k)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let report = EvalReport::new(matrix, ruleset.rules.len(), train_table.cpt_count())
        .map_err(|e| CliError::Data(e.to_string()))?;
    write_atomic(&cx.path(EVAL_TEXT), report.to_text().as_bytes())?;
    write_atomic(&cx.path(EVAL_TSV), report.to_tsv().as_bytes())?;
    cx.say(&format!(
        "evaluate: overall accuracy {:.1} %, SI {:.2} ({} rules, {} CPTs)",
        report.overall_accuracy, report.specificity_index, report.rule_count, report.cpt_count
    ));
    record(
        manifest,
        Stage::Evaluate,
        &[
            (MODEL, &cx.path(MODEL)),
            (RULES_JSON, &cx.path(RULES_JSON)),
            (TEST_PATTERNS, &cx.path(TEST_PATTERNS)),
            (PREDICTIONS, predictions_path.as_path()),
        ],
        &[
            (TEST_LABELED, &cx.path(TEST_LABELED)),
            (EVAL_TEXT, &cx.path(EVAL_TEXT)),
            (EVAL_TSV, &cx.path(EVAL_TSV)),
        ],
    )?;
    Ok(report)
}

/// Convenience used by tests: fit one k directly (no selection).
pub fn fit_single_k(
    table: &PatternTable,
    k: usize,
    opts: &FitOptions,
) -> Result<MixtureModel, CliError> {
    fit_mixture(table, k, opts).map_err(|e| CliError::Data(e.to_string()))
}

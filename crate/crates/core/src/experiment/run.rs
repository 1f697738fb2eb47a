use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{expand_grid, ConfigError, DevSource, ExperimentConfig};
use crate::augment::{augment_train_set, translator_from_spec, AuditRecord};
use crate::corpus::{assemble, Corpus, CorpusError, Split, StrInstance, TrainSet};
use crate::eval::{evaluate, report_table, EvalReport, Outcome, RunFlags, RunMeta, TableOptions};
use crate::langsim::{LanguageCode, LanguageSimilarity};
use crate::parallel::Execution;
use crate::scorer::{to_checkpoint, trace_tsv, train, TrainOutcome};
use crate::translit::{romanize_dataset, romanize_instances, romanize_train_set, Romanizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Load,
    Assemble,
    Augment,
    Romanize,
    Train,
    Evaluate,
    Artifacts,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Load => "load",
            Stage::Assemble => "assemble",
            Stage::Augment => "augment",
            Stage::Romanize => "romanize",
            Stage::Train => "train",
            Stage::Evaluate => "evaluate",
            Stage::Artifacts => "artifacts",
        };
        f.write_str(s)
    }
}

/// Coarse error class, mapped to the CLI exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Config,
    Data,
    Stage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentError {
    pub stage: Stage,
    pub kind: ErrorKind,
    pub message: String,
}

impl ExperimentError {
    fn new(stage: Stage, kind: ErrorKind, message: impl fmt::Display) -> Self {
        ExperimentError {
            stage,
            kind,
            message: message.to_string(),
        }
    }

    fn corpus(stage: Stage, e: CorpusError) -> Self {
        let kind = match e.root() {
            CorpusError::NoSourcesSelected { .. } | CorpusError::Selection(_) => ErrorKind::Stage,
            CorpusError::InvalidStrategy(_) | CorpusError::InvalidArgument(_) => ErrorKind::Config,
            _ => ErrorKind::Data,
        };
        Self::new(stage, kind, e)
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 1,
            ErrorKind::Data => 2,
            ErrorKind::Stage => 3,
        }
    }
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} stage: {}", self.stage, self.message)
    }
}

impl std::error::Error for ExperimentError {}

impl From<ConfigError> for ExperimentError {
    fn from(e: ConfigError) -> Self {
        Self::new(Stage::Config, ErrorKind::Config, e)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub hash: String,
    pub report: EvalReport,
    pub train_set: TrainSet,
    pub outcome: TrainOutcome,
    pub audit: Vec<AuditRecord>,
    pub warnings: Vec<String>,
    /// Final artifact directory, when one was requested.
    pub artifacts: Option<PathBuf>,
}

/// Split a target is evaluated on, and a warning when it is not the test
/// split. esp test labels were never released; mar and tel have no test
/// data at all.
pub fn eval_split_for(target: LanguageCode, corpus: &Corpus) -> (Split, Option<String>) {
    if target == LanguageCode::ESP {
        return (Split::Dev, None);
    }
    let has_test = corpus.get(target, Split::Test).is_some_and(|d| d.is_labeled() && d.len() >= 2);
    if has_test {
        (Split::Test, None)
    } else {
        (Split::Dev, Some(format!("{target} has no labeled test data; evaluating on dev")))
    }
}

/// Loads the corpus under the config's data root (or `default_root`) and
/// runs the experiment.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    default_root: Option<&Path>,
    out: Option<&Path>,
    exec: Execution,
) -> Result<ExperimentResult, ExperimentError> {
    let root = resolve_root(cfg, default_root)?;
    let corpus = Corpus::load_dir(&root, exec).map_err(|e| ExperimentError::new(Stage::Load, ErrorKind::Data, e))?;
    run_experiment_with(cfg, &corpus, &LanguageSimilarity::bundled(), Some(&root), out, exec)
}

fn resolve_root(cfg: &ExperimentConfig, default_root: Option<&Path>) -> Result<PathBuf, ExperimentError> {
    cfg.data_root
        .clone()
        .or_else(|| default_root.map(Path::to_path_buf))
        .ok_or_else(|| ExperimentError::new(Stage::Config, ErrorKind::Config, "no data root given"))
}

/// Output of the stages up to and including training.
#[derive(Debug, Clone)]
pub struct Trained {
    pub train_set: TrainSet,
    pub outcome: TrainOutcome,
    pub audit: Vec<AuditRecord>,
    pub warnings: Vec<String>,
}

/// Assembles, optionally augments and romanizes, then trains.
pub fn train_stage(
    cfg: &ExperimentConfig,
    corpus: &Corpus,
    sim: &LanguageSimilarity,
    root: Option<&Path>,
    exec: Execution,
) -> Result<Trained, ExperimentError> {
    let mut warnings = Vec::new();
    let strategy = cfg.strategy;

    let mut ts = assemble(&strategy, cfg.target, corpus, sim).map_err(|e| ExperimentError::corpus(Stage::Assemble, e))?;
    if !ts.uncovered.is_empty() {
        let list: Vec<String> = ts.uncovered.iter().map(|l| l.to_string()).collect();
        warnings.push(format!("no similarity data for candidates: {}", list.join(", ")));
    }

    let mut audit = Vec::new();
    if strategy.augment {
        let spec = resolve_translator(&cfg.translator, root);
        let translator = translator_from_spec(&spec).map_err(|e| ExperimentError::new(Stage::Augment, ErrorKind::Config, e))?;
        let (augmented, records) =
            augment_train_set(&ts, translator.as_ref(), exec).map_err(|e| ExperimentError::new(Stage::Augment, ErrorKind::Stage, e))?;
        ts = augmented;
        audit = records;
    }

    let dev = dev_instances(cfg, &ts, corpus)?;
    // Augmentation runs first so romanization covers the translations too.
    let dev = if strategy.romanize {
        let r = Romanizer::bundled();
        let w = romanize_train_set(&mut ts, &r, exec);
        if w > 0 {
            warnings.push(format!("{w} uncovered non-Latin characters in training data"));
        }
        romanize_instances(&dev, &r, exec).0
    } else {
        dev
    };

    let train_instances: Vec<StrInstance> = ts.plain_instances().cloned().collect();
    let outcome = train(&train_instances, &dev, &cfg.train, exec).map_err(|e| ExperimentError::new(Stage::Train, ErrorKind::Stage, e))?;
    Ok(Trained {
        train_set: ts,
        outcome,
        audit,
        warnings,
    })
}

/// Runs every stage against an already loaded corpus. `root` resolves
/// relative translator paths. Artifacts go to `<out>/<hash>`, built under
/// `<out>/<hash>.partial` and renamed once complete.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    corpus: &Corpus,
    sim: &LanguageSimilarity,
    root: Option<&Path>,
    out: Option<&Path>,
    exec: Execution,
) -> Result<ExperimentResult, ExperimentError> {
    let hash = cfg.hash();
    let Trained {
        train_set,
        outcome,
        audit,
        mut warnings,
    } = train_stage(cfg, corpus, sim, root, exec)?;

    let (split, warn) = eval_split_for(cfg.target, corpus);
    warnings.extend(warn);
    let eval_ds = corpus
        .require(cfg.target, split)
        .map_err(|e| ExperimentError::new(Stage::Evaluate, ErrorKind::Data, e))?;
    let eval_ds = if cfg.strategy.romanize {
        romanize_dataset(eval_ds, &Romanizer::bundled(), exec).0
    } else {
        eval_ds.clone()
    };
    let meta = RunMeta {
        strategy: cfg.strategy.descriptor(),
        flags: RunFlags {
            romanized: cfg.strategy.romanize,
            augmented: cfg.strategy.augment,
        },
        seed: cfg.seed(),
        config_hash: Some(hash.clone()),
    };
    let report = evaluate(&outcome.params, &eval_ds, &meta, exec).map_err(|e| ExperimentError::new(Stage::Evaluate, ErrorKind::Stage, e))?;

    let mut result = ExperimentResult {
        hash,
        report,
        train_set,
        outcome,
        audit,
        warnings,
        artifacts: None,
    };
    if let Some(out) = out {
        result.artifacts = Some(write_artifacts(cfg, &result, out)?);
    }
    Ok(result)
}

fn resolve_translator(spec: &str, root: Option<&Path>) -> String {
    match (spec.strip_prefix("dict:"), root) {
        (Some(p), Some(root)) if Path::new(p).is_relative() => format!("dict:{}", root.join(p).display()),
        _ => spec.to_string(),
    }
}

fn dev_instances(cfg: &ExperimentConfig, ts: &TrainSet, corpus: &Corpus) -> Result<Vec<StrInstance>, ExperimentError> {
    match cfg.dev {
        DevSource::Target => corpus
            .require(cfg.target, Split::Dev)
            .map(|d| d.instances().to_vec())
            .map_err(|e| ExperimentError::new(Stage::Train, ErrorKind::Data, e)),
        DevSource::Sources => {
            let dev: Vec<StrInstance> = ts
                .sources
                .iter()
                .filter_map(|&l| corpus.get(l, Split::Dev))
                .flat_map(|d| d.instances().iter().cloned())
                .collect();
            if dev.len() < 2 {
                return Err(ExperimentError::new(
                    Stage::Train,
                    ErrorKind::Data,
                    "source languages have no dev data for early stopping",
                ));
            }
            Ok(dev)
        }
    }
}

fn write_artifacts(cfg: &ExperimentConfig, r: &ExperimentResult, out: &Path) -> Result<PathBuf, ExperimentError> {
    let fail = |e: std::io::Error| ExperimentError::new(Stage::Artifacts, ErrorKind::Data, e);
    let final_dir = out.join(&r.hash);
    let partial = out.join(format!("{}.partial", r.hash));
    if partial.exists() {
        fs::remove_dir_all(&partial).map_err(fail)?;
    }
    fs::create_dir_all(&partial).map_err(fail)?;
    let stamp = format!("# config_hash={}\n", r.hash);
    let written = (|| -> std::io::Result<()> {
        fs::write(partial.join("config.txt"), stamp.clone() + &cfg.to_text())?;
        fs::write(partial.join("trainset.tsv"), stamp.clone() + &r.train_set.to_tsv())?;
        let sidecar = serde_json::json!({
            "config_hash": r.hash,
            "train_set": r.train_set.sidecar(),
        });
        fs::write(partial.join("trainset.json"), pretty(&sidecar))?;
        let mut meta = BTreeMap::new();
        meta.insert("config_hash".to_string(), r.hash.clone());
        meta.insert("strategy".to_string(), r.report.strategy.clone());
        fs::write(partial.join("checkpoint.txt"), to_checkpoint(&r.outcome.params, &meta))?;
        fs::write(partial.join("trace.tsv"), stamp + &trace_tsv(&r.outcome.trace))?;
        fs::write(partial.join("report.json"), pretty(&r.report))?;
        if !r.audit.is_empty() {
            let audit = serde_json::json!({ "config_hash": r.hash, "records": r.audit });
            fs::write(partial.join("audit.json"), pretty(&audit))?;
        }
        Ok(())
    })();
    if let Err(e) = written {
        let _ = fs::remove_dir_all(&partial);
        return Err(fail(e));
    }
    if final_dir.exists() {
        // Same hash, same config: the old run is superseded.
        fs::remove_dir_all(&final_dir).map_err(fail)?;
    }
    fs::rename(&partial, &final_dir).map_err(fail)?;
    Ok(final_dir)
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    /// Data root for configs that do not name one.
    pub data_root: Option<PathBuf>,
    pub out: Option<PathBuf>,
    /// Experiments run at once; 0 means one per available core.
    pub parallelism: usize,
    pub table: TableOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub outcomes: Vec<Outcome>,
    #[serde(skip)]
    pub table: String,
}

impl SuiteResult {
    /// Combined JSON, in config order.
    pub fn to_json(&self) -> String {
        pretty(&self.outcomes)
    }
}

/// Reads every `*.cfg` file in `dir`, sorted by name, expanding target
/// lists.
pub fn load_suite_dir(dir: &Path) -> Result<Vec<ExperimentConfig>, ExperimentError> {
    let io = |e: std::io::Error| ExperimentError::new(Stage::Config, ErrorKind::Config, format!("{}: {e}", dir.display()));
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cfg"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = fs::read_to_string(&f).map_err(io)?;
        let cfgs = expand_grid(&text).map_err(|e| {
            ExperimentError::new(Stage::Config, ErrorKind::Config, format!("{}: {e}", f.display()))
        })?;
        out.extend(cfgs);
    }
    Ok(out)
}

/// Runs independent experiments, possibly concurrently. Failures become
/// `-` cells; the outcome list keeps config order whatever the schedule.
pub fn run_suite(configs: &[ExperimentConfig], opts: &SuiteOptions) -> SuiteResult {
    // Load each distinct data root once.
    let mut corpora: BTreeMap<PathBuf, Result<Corpus, String>> = BTreeMap::new();
    for cfg in configs {
        if let Ok(root) = resolve_root(cfg, opts.data_root.as_deref()) {
            corpora
                .entry(root.clone())
                .or_insert_with(|| Corpus::load_dir(&root, Execution::Parallel).map_err(|e| e.to_string()));
        }
    }
    let sim = LanguageSimilarity::bundled();
    let run_one = |cfg: &ExperimentConfig| -> Outcome {
        let failed = |e: ExperimentError| Outcome::Failed {
            target: cfg.target,
            strategy: cfg.strategy.descriptor(),
            error: e.to_string(),
        };
        let root = match resolve_root(cfg, opts.data_root.as_deref()) {
            Ok(r) => r,
            Err(e) => return failed(e),
        };
        let corpus = match &corpora[&root] {
            Ok(c) => c,
            Err(e) => return failed(ExperimentError::new(Stage::Load, ErrorKind::Data, e)),
        };
        match run_experiment_with(cfg, corpus, &sim, Some(&root), opts.out.as_deref(), Execution::Sequential) {
            Ok(r) => Outcome::Ok(r.report),
            Err(e) => failed(e),
        }
    };
    let outcomes = schedule(configs, opts.parallelism, run_one);
    let table = report_table(&outcomes, &opts.table);
    SuiteResult { outcomes, table }
}

#[cfg(feature = "parallel")]
fn schedule<F>(configs: &[ExperimentConfig], parallelism: usize, f: F) -> Vec<Outcome>
where
    F: Fn(&ExperimentConfig) -> Outcome + Sync + Send,
{
    use rayon::prelude::*;
    if parallelism == 1 {
        return configs.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .expect("thread pool");
    pool.install(|| configs.par_iter().map(&f).collect())
}

#[cfg(not(feature = "parallel"))]
fn schedule<F>(configs: &[ExperimentConfig], _parallelism: usize, f: F) -> Vec<Outcome>
where
    F: Fn(&ExperimentConfig) -> Outcome,
{
    configs.iter().map(f).collect()
}

//! `xlstr` command-line interface.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use xlstr::augment::{cross_translate, translator_from_spec};
use xlstr::corpus::{
    parse_dataset, select_sources, synth, to_tsv, Corpus, Dataset, Split, StatsTable, StrategyKind,
};
use xlstr::eval::{evaluate, format_cell, report_table, Outcome, RunFlags, RunMeta, TableOptions};
use xlstr::experiment::{
    eval_split_for, load_suite_dir, run_experiment, run_suite, train_stage, DevSource, ExperimentConfig,
    ExperimentError, SuiteOptions,
};
use xlstr::langsim::{FeatureKind, LanguageCode, LanguageSimilarity, SimilarityMatrix, TRAIN_LANGUAGES};
use xlstr::scorer::{parse_checkpoint, to_checkpoint, trace_tsv, Optimizer};
use xlstr::translit::{romanize_dataset, Romanizer};
use xlstr::{AssemblyStrategy, Execution};

#[derive(Parser)]
#[command(name = "xlstr", version, about = "Cross-lingual semantic textual relatedness toolkit")]
struct Cli {
    /// Corpus root: `<root>/<lang>/<split>.csv`.
    #[arg(long, global = true, env = "XLSTR_DATA_ROOT")]
    data_root: Option<PathBuf>,
    /// Run seed (overrides config files).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory, depending on the command.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Per-language, per-split instance counts.
    Stats {
        /// Print the shared-task reference counts instead of reading data.
        #[arg(long)]
        reference: bool,
    },
    /// Print a bundled similarity matrix.
    Similarity { feature: String },
    /// Choose source languages for a target.
    Select {
        target: String,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Candidate languages (default: training languages of the corpus,
        /// or the shared-task training languages without a corpus).
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// Build a training set; writes TSV (and a JSON sidecar with --out).
    Assemble {
        target: String,
        #[command(flatten)]
        strategy: StrategyArgs,
    },
    /// Romanize text or a data file.
    Translit {
        /// Text to romanize; read from --input otherwise.
        #[arg(long)]
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "eng")]
        lang: String,
        #[arg(long, default_value = "test")]
        split: String,
    },
    /// Cross-translate training sets of several languages.
    Augment {
        #[arg(long, value_delimiter = ',', required = true)]
        langs: Vec<String>,
        #[arg(long, default_value = "identity")]
        translator: String,
    },
    /// Train a scorer; writes checkpoint and trace to --out.
    Train {
        target: String,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[command(flatten)]
        train: TrainArgs,
    },
    /// Evaluate a checkpoint on a target language.
    Evaluate {
        target: String,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Defaults to test, or dev where test is unavailable.
        #[arg(long)]
        split: Option<String>,
        #[arg(long)]
        romanize: bool,
    },
    /// Run one experiment config.
    Run { config: PathBuf },
    /// Run every `*.cfg` in a directory.
    Suite {
        dir: PathBuf,
        /// Concurrent experiments; 0 = all cores.
        #[arg(long, default_value_t = 0)]
        parallelism: usize,
        /// Languages left out of the avg column besides eng.
        #[arg(long, value_delimiter = ',')]
        exclude: Vec<String>,
    },
    /// Write a synthetic corpus and its manifest.
    Synth {
        dir: PathBuf,
        /// Shared-task sizes instead of the mini corpus.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct StrategyArgs {
    /// eng, ms-all, ms-fam, knn+eng, knn, or a descriptor like `knn+eng(k=2,cellstate)`.
    #[arg(long)]
    strategy: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    feature: Option<String>,
    #[arg(long)]
    augment: bool,
    #[arg(long)]
    romanize: bool,
    #[arg(long, default_value = "identity")]
    translator: String,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum, default_value_t = DevArg::Sources)]
    dev: DevArg,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    max_epochs: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    eval_every: Option<usize>,
    #[arg(long)]
    optimizer: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DevArg {
    Sources,
    Target,
}

/// Error with the exit code it maps to: 1 config, 2 data, 3 stage.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(m: impl fmt::Display) -> Self {
        Failure { code: 1, message: m.to_string() }
    }
    fn data(m: impl fmt::Display) -> Self {
        Failure { code: 2, message: m.to_string() }
    }
    fn stage(m: impl fmt::Display) -> Self {
        Failure { code: 3, message: m.to_string() }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn exec(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn lang(s: &str) -> CliResult<LanguageCode> {
    LanguageCode::extension(s.trim()).map_err(Failure::config)
}

fn data_root(cli: &Cli) -> CliResult<&Path> {
    cli.data_root
        .as_deref()
        .ok_or_else(|| Failure::config("no data root: pass --data-root or set XLSTR_DATA_ROOT"))
}

fn load_corpus(cli: &Cli) -> CliResult<Corpus> {
    Corpus::load_dir(data_root(cli)?, exec(cli)).map_err(Failure::data)
}

fn emit(cli: &Cli, text: &str) -> CliResult {
    match &cli.out {
        Some(p) if !p.is_dir() => fs::write(p, text).map_err(|e| Failure::data(format!("{}: {e}", p.display()))),
        _ => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

impl StrategyArgs {
    fn build(&self) -> CliResult<AssemblyStrategy> {
        let s: AssemblyStrategy = if self.strategy.contains('(') {
            self.strategy.parse().map_err(Failure::config)?
        } else {
            let kind = StrategyKind::from_parts(&self.strategy, self.k).map_err(Failure::config)?;
            let feature = self
                .feature
                .as_deref()
                .map(str::parse::<FeatureKind>)
                .transpose()
                .map_err(Failure::config)?;
            AssemblyStrategy::new(kind, feature).map_err(Failure::config)?
        };
        Ok(s.with_augment(s.augment || self.augment)
            .with_romanize(s.romanize || self.romanize))
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Stats { reference } => cmd_stats(cli, *reference),
        Command::Similarity { feature } => {
            let f: FeatureKind = feature.parse().map_err(Failure::config)?;
            let m = SimilarityMatrix::bundled(f);
            match cli.format {
                Format::Table => emit(cli, &m.to_text()),
                Format::Json => {
                    let rows: serde_json::Map<String, serde_json::Value> = m
                        .rows()
                        .iter()
                        .map(|r| {
                            let cells: serde_json::Map<String, serde_json::Value> =
                                m.cols().iter().map(|c| (c.to_string(), json!(m.get(*r, *c)))).collect();
                            (r.to_string(), serde_json::Value::Object(cells))
                        })
                        .collect();
                    emit(cli, &json_text(&json!({ "feature": f.name(), "values": rows })))
                }
            }
        }
        Command::Select {
            target,
            strategy,
            candidates,
        } => cmd_select(cli, target, strategy, candidates),
        Command::Assemble { target, strategy } => cmd_assemble(cli, target, strategy),
        Command::Translit {
            text,
            input,
            lang: l,
            split,
        } => cmd_translit(cli, text.as_deref(), input.as_deref(), l, split),
        Command::Augment { langs, translator } => cmd_augment(cli, langs, translator),
        Command::Train { target, strategy, train } => cmd_train(cli, target, strategy, train),
        Command::Evaluate {
            target,
            checkpoint,
            split,
            romanize,
        } => cmd_evaluate(cli, target, checkpoint, split.as_deref(), *romanize),
        Command::Run { config } => cmd_run(cli, config),
        Command::Suite {
            dir,
            parallelism,
            exclude,
        } => cmd_suite(cli, dir, *parallelism, exclude),
        Command::Synth { dir, full } => {
            let seed = cli.seed.unwrap_or(0);
            let spec = if *full {
                synth::SynthSpec::shared_task(seed)
            } else {
                synth::SynthSpec::mini(seed)
            };
            let corpus = synth::generate(&spec, exec(cli));
            corpus.write_dir(dir).map_err(Failure::data)?;
            fs::write(dir.join("manifest.tsv"), synth::manifest(&corpus)).map_err(Failure::data)?;
            eprintln!("wrote {} datasets to {}", corpus.len(), dir.display());
            Ok(())
        }
    }
}

fn cmd_stats(cli: &Cli, reference: bool) -> CliResult {
    let table = if reference {
        StatsTable::shared_task()
    } else {
        load_corpus(cli)?.stats()
    };
    match cli.format {
        Format::Table => emit(cli, &table.render()),
        Format::Json => emit(cli, &json_text(&table.to_json())),
    }
}

fn cmd_select(cli: &Cli, target: &str, args: &StrategyArgs, candidates: &[String]) -> CliResult {
    let target = lang(target)?;
    let strategy = args.build()?;
    let available: BTreeSet<LanguageCode> = if !candidates.is_empty() {
        candidates.iter().map(|c| lang(c)).collect::<CliResult<_>>()?
    } else if cli.data_root.is_some() {
        load_corpus(cli)?.languages(Split::Train)
    } else {
        TRAIN_LANGUAGES.into_iter().collect()
    };
    let sel = select_sources(&strategy, target, &available, &LanguageSimilarity::bundled()).map_err(Failure::stage)?;
    match cli.format {
        Format::Table => {
            let names: Vec<String> = sel.sources.iter().map(|l| l.to_string()).collect();
            let mut out = format!("{}\n", names.join(" "));
            if !sel.uncovered.is_empty() {
                let u: Vec<String> = sel.uncovered.iter().map(|l| l.to_string()).collect();
                out.push_str(&format!("# no similarity data: {}\n", u.join(" ")));
            }
            emit(cli, &out)
        }
        Format::Json => emit(
            cli,
            &json_text(&json!({
                "target": target,
                "strategy": strategy.descriptor(),
                "sources": sel.sources,
                "uncovered": sel.uncovered,
            })),
        ),
    }
}

fn experiment_config(cli: &Cli, target: &str, args: &StrategyArgs) -> CliResult<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(lang(target)?, args.build()?);
    cfg.translator = args.translator.clone();
    cfg.data_root = cli.data_root.clone();
    if let Some(seed) = cli.seed {
        cfg.train.seed = seed;
    }
    Ok(cfg)
}

fn cmd_assemble(cli: &Cli, target: &str, args: &StrategyArgs) -> CliResult {
    let mut cfg = experiment_config(cli, target, args)?;
    // Assembly only: skip the training stage by running zero epochs.
    cfg.train.max_epochs = 0;
    let corpus = load_corpus(cli)?;
    let trained = train_stage(&cfg, &corpus, &LanguageSimilarity::bundled(), cli.data_root.as_deref(), exec(cli))?;
    for w in &trained.warnings {
        eprintln!("warning: {w}");
    }
    let ts = trained.train_set;
    let sidecar = json!({ "config_hash": cfg.hash(), "train_set": ts.sidecar() });
    match &cli.out {
        Some(out) => {
            fs::create_dir_all(out).map_err(Failure::data)?;
            fs::write(out.join("trainset.tsv"), stamped(&cfg.hash(), &ts.to_tsv())).map_err(Failure::data)?;
            fs::write(out.join("trainset.json"), json_text(&sidecar)).map_err(Failure::data)?;
            eprintln!("{} instances from {:?} -> {}", ts.len(), ts.sources, out.display());
            Ok(())
        }
        None => match cli.format {
            Format::Json => emit(cli, &json_text(&sidecar)),
            Format::Table => emit(cli, &ts.to_tsv()),
        },
    }
}

fn stamped(hash: &str, body: &str) -> String {
    format!("# config_hash={hash}\n{body}")
}

fn cmd_translit(cli: &Cli, text: Option<&str>, input: Option<&Path>, l: &str, split: &str) -> CliResult {
    let r = Romanizer::bundled();
    if let Some(t) = text {
        let out = r.romanize(t);
        if out.warnings > 0 {
            eprintln!("warning: {} uncovered non-Latin characters", out.warnings);
        }
        return emit(cli, &format!("{}\n", out.text));
    }
    let Some(path) = input else {
        return Err(Failure::config("pass --text or --input"));
    };
    let split: Split = split.parse().map_err(Failure::config)?;
    let bytes = fs::read(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let ds = parse_dataset(&bytes, lang(l)?, split).map_err(Failure::data)?;
    let (out, warnings) = romanize_dataset(&ds, &r, exec(cli));
    if warnings > 0 {
        eprintln!("warning: {warnings} uncovered non-Latin characters");
    }
    emit(cli, &xlstr::corpus::to_csv(&out))
}

fn cmd_augment(cli: &Cli, langs: &[String], translator: &str) -> CliResult {
    let corpus = load_corpus(cli)?;
    let langs: Vec<LanguageCode> = langs.iter().map(|l| lang(l)).collect::<CliResult<_>>()?;
    let sets: Vec<&Dataset> = langs
        .iter()
        .map(|&l| corpus.require(l, Split::Train).map_err(Failure::data))
        .collect::<CliResult<_>>()?;
    let t = translator_from_spec(translator).map_err(Failure::config)?;
    let aug = cross_translate(&sets, t.as_ref(), exec(cli)).map_err(Failure::stage)?;
    let flagged = aug.suspicious(0.9, 0.5).count();
    match cli.format {
        Format::Json => emit(
            cli,
            &json_text(&json!({
                "languages": aug.languages,
                "total": aug.len(),
                "balance": aug.balance(),
                "suspicious": flagged,
            })),
        ),
        Format::Table => {
            if let Some(out) = &cli.out {
                fs::write(out, to_tsv(aug.instances.iter().map(|t| &t.instance))).map_err(Failure::data)?;
            }
            let mut s = String::new();
            for (l, n) in aug.balance() {
                s.push_str(&format!("{l}\t{n}\n"));
            }
            s.push_str(&format!("total\t{}\n", aug.len()));
            s.push_str(&format!("suspicious\t{flagged}\n"));
            print!("{s}");
            Ok(())
        }
    }
}

fn cmd_train(cli: &Cli, target: &str, args: &StrategyArgs, t: &TrainArgs) -> CliResult {
    let mut cfg = experiment_config(cli, target, args)?;
    cfg.dev = match t.dev {
        DevArg::Sources => DevSource::Sources,
        DevArg::Target => DevSource::Target,
    };
    if let Some(v) = t.learning_rate {
        cfg.train.learning_rate = v;
    }
    if let Some(v) = t.max_epochs {
        cfg.train.max_epochs = v;
    }
    if let Some(v) = t.batch_size {
        cfg.train.batch_size = v;
    }
    if let Some(v) = t.eval_every {
        cfg.train.eval_every = v;
    }
    if let Some(v) = &t.optimizer {
        cfg.train.optimizer = v.parse::<Optimizer>().map_err(Failure::config)?;
    }
    let corpus = load_corpus(cli)?;
    let trained = train_stage(&cfg, &corpus, &LanguageSimilarity::bundled(), cli.data_root.as_deref(), exec(cli))?;
    for w in &trained.warnings {
        eprintln!("warning: {w}");
    }
    let hash = cfg.hash();
    let mut meta = std::collections::BTreeMap::new();
    meta.insert("config_hash".to_string(), hash.clone());
    meta.insert("strategy".to_string(), cfg.strategy.descriptor());
    let ckpt = to_checkpoint(&trained.outcome.params, &meta);
    match &cli.out {
        Some(out) => {
            fs::create_dir_all(out).map_err(Failure::data)?;
            fs::write(out.join("checkpoint.txt"), &ckpt).map_err(Failure::data)?;
            fs::write(out.join("trace.tsv"), stamped(&hash, &trace_tsv(&trained.outcome.trace))).map_err(Failure::data)?;
            fs::write(out.join("config.txt"), stamped(&hash, &cfg.to_text())).map_err(Failure::data)?;
            eprintln!("config {hash}: {} steps -> {}", trained.outcome.steps, out.display());
            Ok(())
        }
        None => emit(cli, &ckpt),
    }
}

fn cmd_evaluate(cli: &Cli, target: &str, checkpoint: &Path, split: Option<&str>, romanize: bool) -> CliResult {
    let target = lang(target)?;
    let text = fs::read_to_string(checkpoint).map_err(|e| Failure::data(format!("{}: {e}", checkpoint.display())))?;
    let ckpt = parse_checkpoint(&text).map_err(Failure::data)?;
    let corpus = load_corpus(cli)?;
    let split = match split {
        Some(s) => s.parse().map_err(Failure::config)?,
        None => {
            let (s, warn) = eval_split_for(target, &corpus);
            if let Some(w) = warn {
                eprintln!("warning: {w}");
            }
            s
        }
    };
    let ds = corpus.require(target, split).map_err(Failure::data)?;
    let ds = if romanize {
        romanize_dataset(ds, &Romanizer::bundled(), exec(cli)).0
    } else {
        ds.clone()
    };
    let meta = RunMeta {
        strategy: ckpt.meta.get("strategy").cloned().unwrap_or_default(),
        flags: RunFlags {
            romanized: romanize,
            augmented: false,
        },
        seed: cli.seed.unwrap_or(0),
        config_hash: ckpt.meta.get("config_hash").cloned(),
    };
    let report = evaluate(&ckpt.params, &ds, &meta, exec(cli)).map_err(Failure::stage)?;
    match cli.format {
        Format::Json => emit(cli, &json_text(&json!(report))),
        Format::Table => emit(cli, &format!("{}\t{}\tn={}\trho={}\n", report.target, report.split, report.n, format_cell(report.rho))),
    }
}

fn cmd_run(cli: &Cli, config: &Path) -> CliResult {
    let text = fs::read_to_string(config).map_err(|e| Failure::config(format!("{}: {e}", config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text).map_err(|e| Failure::config(format!("{}: {e}", config.display())))?;
    if let Some(seed) = cli.seed {
        cfg.train.seed = seed;
    }
    let out = cli.out.as_deref();
    let r = run_experiment(&cfg, cli.data_root.as_deref(), out, exec(cli))?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(dir) = &r.artifacts {
        eprintln!("artifacts: {}", dir.display());
    }
    match cli.format {
        Format::Json => {
            print!("{}", json_text(&json!(r.report)));
            Ok(())
        }
        Format::Table => {
            print!("{}", report_table(&[Outcome::Ok(r.report)], &TableOptions::default()));
            Ok(())
        }
    }
}

fn cmd_suite(cli: &Cli, dir: &Path, parallelism: usize, exclude: &[String]) -> CliResult {
    let mut configs = load_suite_dir(dir)?;
    if let Some(seed) = cli.seed {
        for c in &mut configs {
            c.train.seed = seed;
        }
    }
    let opts = SuiteOptions {
        data_root: cli.data_root.clone(),
        out: cli.out.clone(),
        parallelism,
        table: TableOptions {
            exclude_from_avg: exclude.iter().map(|l| lang(l)).collect::<CliResult<_>>()?,
            all_targets: false,
        },
    };
    let result = run_suite(&configs, &opts);
    if let Some(out) = &cli.out {
        fs::create_dir_all(out).map_err(Failure::data)?;
        fs::write(out.join("suite.json"), result.to_json()).map_err(Failure::data)?;
        fs::write(out.join("suite.txt"), &result.table).map_err(Failure::data)?;
    }
    match cli.format {
        Format::Json => print!("{}", result.to_json()),
        Format::Table => print!("{}", result.table),
    }
    Ok(())
}

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{AssemblyStrategy, StrategyKind};
use crate::langsim::{FeatureKind, LanguageCode};
use crate::scorer::TrainConfig;

/// Which labeled data drives early stopping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DevSource {
    /// Concatenated dev sets of the source languages (strict zero-shot).
    #[default]
    Sources,
    /// The target's own dev set.
    Target,
}

impl FromStr for DevSource {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sources" => Ok(DevSource::Sources),
            "target" => Ok(DevSource::Target),
            other => Err(ConfigError::new(format!("dev must be sources or target, got {other:?}"))),
        }
    }
}

impl fmt::Display for DevSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DevSource::Sources => "sources",
            DevSource::Target => "target",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// One experiment: target, strategy, augmentation/romanization switches,
/// translator, training hyperparameters and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub target: LanguageCode,
    pub strategy: AssemblyStrategy,
    /// `identity`, `dict:<path>` or `cmd:<program> [args]`.
    pub translator: String,
    pub dev: DevSource,
    /// `None`: supplied by the caller at run time.
    pub data_root: Option<PathBuf>,
    /// Training settings; `train.seed` is the run seed.
    pub train: TrainConfig,
}

const KEYS: [&str; 18] = [
    "target",
    "strategy",
    "k",
    "feature",
    "augment",
    "romanize",
    "translator",
    "dev",
    "data_root",
    "seed",
    "learning_rate",
    "batch_size",
    "max_epochs",
    "weight_decay",
    "eval_every",
    "patience",
    "improvement_threshold",
    "optimizer",
];

impl ExperimentConfig {
    pub fn new(target: LanguageCode, strategy: AssemblyStrategy) -> Self {
        ExperimentConfig {
            target,
            strategy,
            translator: "identity".into(),
            dev: DevSource::default(),
            data_root: None,
            train: TrainConfig::default(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.train.seed
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.train.seed = seed;
        self
    }

    /// Canonical `key=value` text; every key is written, in a fixed order.
    pub fn to_text(&self) -> String {
        let s = &self.strategy;
        let t = &self.train;
        let mut lines = vec![
            format!("target={}", self.target),
            format!("strategy={}", s.kind.name()),
        ];
        if let (Some(k), Some(f)) = (s.kind.k(), s.feature) {
            lines.push(format!("k={k}"));
            lines.push(format!("feature={f}"));
        }
        lines.extend([
            format!("augment={}", s.augment),
            format!("romanize={}", s.romanize),
            format!("translator={}", self.translator),
            format!("dev={}", self.dev),
        ]);
        if let Some(root) = &self.data_root {
            lines.push(format!("data_root={}", root.display()));
        }
        lines.extend([
            format!("seed={}", t.seed),
            format!("learning_rate={}", t.learning_rate),
            format!("batch_size={}", t.batch_size),
            format!("max_epochs={}", t.max_epochs),
            format!("weight_decay={}", t.weight_decay),
            format!("eval_every={}", t.eval_every),
            format!("patience={}", t.patience),
            format!("improvement_threshold={}", t.improvement_threshold),
            format!("optimizer={}", t.optimizer),
        ]);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// Parses `key=value` lines. Blank lines and `#` comments are skipped;
    /// unknown or repeated keys are errors. `target` and `strategy` are
    /// required, everything else has a default.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut fields: Vec<(usize, &str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError {
                line: Some(i + 1),
                message: format!("expected key=value, got {line:?}"),
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(ConfigError {
                    line: Some(i + 1),
                    message: format!("unknown key {k:?}"),
                });
            }
            if fields.iter().any(|(_, seen, _)| *seen == k) {
                return Err(ConfigError {
                    line: Some(i + 1),
                    message: format!("key {k:?} given twice"),
                });
            }
            fields.push((i + 1, k, v));
        }
        let get = |key: &str| fields.iter().find(|(_, k, _)| *k == key).map(|(l, _, v)| (*l, *v));
        fn num<T: FromStr>(field: Option<(usize, &str)>, key: &str, default: T) -> Result<T, ConfigError> {
            match field {
                None => Ok(default),
                Some((line, v)) => v.parse().map_err(|_| ConfigError {
                    line: Some(line),
                    message: format!("{key}: cannot parse {v:?}"),
                }),
            }
        }
        let at = |field: Option<(usize, &str)>, e: String| ConfigError {
            line: field.map(|(l, _)| l),
            message: e,
        };

        let target_f = get("target");
        let target = target_f
            .ok_or_else(|| ConfigError::new("missing key target"))
            .and_then(|(l, v)| {
                LanguageCode::extension(v).map_err(|e| ConfigError {
                    line: Some(l),
                    message: e.to_string(),
                })
            })?;
        let strategy_f = get("strategy");
        let (_, name) = strategy_f.ok_or_else(|| ConfigError::new("missing key strategy"))?;
        let k: Option<usize> = match get("k") {
            None => None,
            f => Some(num(f, "k", 0)?),
        };
        let kind = StrategyKind::from_parts(name, k).map_err(|e| at(strategy_f, e.to_string()))?;
        let feature_f = get("feature");
        let feature = match feature_f {
            None => None,
            Some((l, v)) => Some(v.parse::<FeatureKind>().map_err(|e| ConfigError {
                line: Some(l),
                message: e.to_string(),
            })?),
        };
        let strategy = AssemblyStrategy::new(kind, feature)
            .map_err(|e| at(strategy_f, e.to_string()))?
            .with_augment(num(get("augment"), "augment", false)?)
            .with_romanize(num(get("romanize"), "romanize", false)?);

        let d = TrainConfig::default();
        let train = TrainConfig {
            learning_rate: num(get("learning_rate"), "learning_rate", d.learning_rate)?,
            batch_size: num(get("batch_size"), "batch_size", d.batch_size)?,
            max_epochs: num(get("max_epochs"), "max_epochs", d.max_epochs)?,
            weight_decay: num(get("weight_decay"), "weight_decay", d.weight_decay)?,
            eval_every: num(get("eval_every"), "eval_every", d.eval_every)?,
            patience: num(get("patience"), "patience", d.patience)?,
            improvement_threshold: num(get("improvement_threshold"), "improvement_threshold", d.improvement_threshold)?,
            seed: num(get("seed"), "seed", d.seed)?,
            optimizer: num(get("optimizer"), "optimizer", d.optimizer)?,
        };
        train.validate().map_err(|e| ConfigError::new(e.to_string()))?;

        Ok(ExperimentConfig {
            target,
            strategy,
            translator: get("translator").map_or_else(|| "identity".to_string(), |(_, v)| v.to_string()),
            dev: num(get("dev"), "dev", DevSource::default())?,
            data_root: get("data_root").map(|(_, v)| PathBuf::from(v)),
            train,
        })
    }

    /// SHA-256 of the canonical text without `data_root`, so the same
    /// experiment hashes the same wherever the data lives. Hex, 16 chars.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.data_root = None;
        let digest = Sha256::digest(c.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses a suite file: like a single config, except `target` may list
/// several comma-separated languages, one experiment each.
pub fn expand_grid(text: &str) -> Result<Vec<ExperimentConfig>, ConfigError> {
    let target_line = text
        .lines()
        .map(str::trim)
        .find(|l| l.split_once('=').is_some_and(|(k, _)| k.trim() == "target"));
    let Some(line) = target_line else {
        return ExperimentConfig::parse(text).map(|c| vec![c]);
    };
    let targets: Vec<&str> = line.split_once('=').unwrap().1.split(',').map(str::trim).collect();
    let rest: Vec<&str> = text.lines().filter(|l| l.trim() != line).collect();
    targets
        .iter()
        .map(|t| ExperimentConfig::parse(&format!("target={t}\n{}", rest.join("\n"))))
        .collect()
}

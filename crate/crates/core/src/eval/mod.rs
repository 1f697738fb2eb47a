//! Spearman evaluation and result tables.

mod rank;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Dataset, Split};
use crate::langsim::LanguageCode;
use crate::parallel::{self, Execution};
use crate::scorer::{Scorer, ScorerError};

pub use rank::{ranks, spearman};
pub use table::{format_cell, report_table, Outcome, TableOptions};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 values, got {0}")]
    TooShort(usize),
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),
    #[error("correlation undefined: {0}")]
    DegenerateInput(&'static str),
    #[error("{lang} {split} has unlabeled instances")]
    UnlabeledDataset { lang: LanguageCode, split: Split },
    #[error(transparent)]
    Scorer(#[from] ScorerError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunFlags {
    pub romanized: bool,
    pub augmented: bool,
}

/// Run metadata attached to an evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunMeta {
    pub strategy: String,
    pub flags: RunFlags,
    pub seed: u64,
    pub config_hash: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub target: LanguageCode,
    pub split: Split,
    pub n: usize,
    pub rho: f64,
    pub strategy: String,
    pub flags: RunFlags,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

/// Scores every instance of `ds` and correlates with the gold scores.
pub fn evaluate(scorer: &dyn Scorer, ds: &Dataset, meta: &RunMeta, exec: Execution) -> Result<EvalReport, EvalError> {
    let golds = ds.scores().ok_or(EvalError::UnlabeledDataset {
        lang: ds.lang(),
        split: ds.split(),
    })?;
    let preds = parallel::try_map(exec, ds.instances(), |i| scorer.score(i))?;
    let rho = spearman(&preds, &golds)?;
    Ok(EvalReport {
        target: ds.lang(),
        split: ds.split(),
        n: ds.len(),
        rho,
        strategy: meta.strategy.clone(),
        flags: meta.flags,
        seed: meta.seed,
        config_hash: meta.config_hash.clone(),
    })
}

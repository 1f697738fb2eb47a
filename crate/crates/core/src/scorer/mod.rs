//! Lexical STR scorer: pair features, a sigmoid-headed linear model trained
//! with MSE, and an early-stopping loop driven by dev Spearman.

mod checkpoint;
mod features;
mod model;
mod train;

use thiserror::Error;

use crate::corpus::StrInstance;

pub use checkpoint::{parse_checkpoint, to_checkpoint, Checkpoint, CHECKPOINT_MAGIC};
pub use features::{char_ngram_cosine, extract_features, features_of, FeatureVector, D, FEATURE_NAMES};
pub use model::{gradient, mse_loss, objective, predict, ScorerParams};
pub use train::{featurize, trace_tsv, train, Optimizer, TraceRow, TrainConfig, TrainOutcome};

#[derive(Debug, Error)]
pub enum ScorerError {
    #[error("empty sentence")]
    EmptySentence,
    #[error("expected {expected} weights, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {0} predictions vs {1} golds")]
    LengthMismatch(usize, usize),
    #[error("empty batch")]
    EmptyBatch,
    #[error("dev set has unlabeled instances")]
    UnlabeledDev,
    #[error("{0}: training instance has no score")]
    Unlabeled(String),
    #[error("loss became non-finite at step {step}")]
    NonFiniteLoss { step: usize },
    #[error("parameters became non-finite")]
    NonFiniteParams,
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("malformed checkpoint at line {line}: {reason}")]
    MalformedCheckpoint { line: usize, reason: String },
}

/// Anything that assigns a relatedness score to a sentence pair.
pub trait Scorer: Send + Sync {
    fn score(&self, inst: &StrInstance) -> Result<f64, ScorerError>;
}

impl Scorer for ScorerParams {
    fn score(&self, inst: &StrInstance) -> Result<f64, ScorerError> {
        predict(self, &features_of(inst)?)
    }
}

impl<F> Scorer for F
where
    F: Fn(&StrInstance) -> f64 + Send + Sync,
{
    fn score(&self, inst: &StrInstance) -> Result<f64, ScorerError> {
        Ok(self(inst))
    }
}

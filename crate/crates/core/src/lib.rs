//! Cross-lingual semantic textual relatedness (STR) toolkit.
//!
//! The crate covers the data side of zero-shot cross-lingual transfer for
//! STR: choosing donor languages for a target from language-similarity
//! matrices ([`langsim`]), assembling leave-target-out training sets
//! ([`corpus`]), balanced cross-translation augmentation ([`augment`]),
//! table-driven romanization ([`translit`]), a small lexical regression
//! scorer with Spearman-driven early stopping ([`scorer`]), tie-correct
//! Spearman evaluation and result tables ([`eval`]), and an experiment runner
//! that ties the stages together ([`experiment`]).
//!
//! Data-parallel loops (feature extraction, translation, romanization,
//! suite execution) run on rayon when the `parallel` feature is enabled and
//! fall back to plain iterators otherwise. Results are collected in input
//! order either way, so outputs are identical across both builds.

pub mod augment;
pub mod corpus;
pub mod eval;
pub mod experiment;
pub mod langsim;
pub mod parallel;
pub mod scorer;
pub mod translit;

pub use corpus::{AssemblyStrategy, Dataset, Split, StrInstance, StrategyKind, TrainSet};
pub use eval::{spearman, EvalReport};
pub use langsim::{FeatureKind, LanguageCode, SimilarityMatrix};
pub use parallel::Execution;
pub use scorer::{ScorerParams, TrainConfig};

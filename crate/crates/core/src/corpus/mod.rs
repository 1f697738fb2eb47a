//! STR datasets: the data model, file parsing, statistics and training-set
//! assembly per source-selection strategy.

mod assemble;
mod dataset;
pub mod parse;
mod stats;
mod store;
mod strategy;
pub mod synth;

use std::path::PathBuf;

use thiserror::Error;

use crate::langsim::{LangsimError, LanguageCode};

pub use assemble::{
    assemble, select_sources, Origin, Provenance, SourceSelection, TaggedInstance, TrainSet, TrainSetSidecar,
};
pub use dataset::{Dataset, Split, StrInstance};
pub use parse::{parse_dataset, to_csv, to_tsv};
pub use stats::{stats, thousands, StatsTable, SHARED_TASK_COUNTS};
pub use store::Corpus;
pub use strategy::{AssemblyStrategy, StrategyKind};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("{pair_id}: score {value} outside [0, 1]")]
    ScoreOutOfRange { pair_id: String, value: String },
    #[error("duplicate pair id {0}")]
    DuplicatePairId(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("{0}: missing score in a labeled split")]
    MissingScore(String),
    #[error("{0}: empty sentence")]
    EmptySentence(String),
    #[error("{pair_id}: {reason}")]
    InconsistentInstance { pair_id: String, reason: String },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("strategy {strategy} selects no source languages for {target}")]
    NoSourcesSelected { target: LanguageCode, strategy: String },
    #[error("no {split} data for {lang}")]
    MissingDataset { lang: LanguageCode, split: Split },
    #[error(transparent)]
    Selection(#[from] LangsimError),
    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CorpusError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips file context, for matching on the underlying kind.
    pub fn root(&self) -> &CorpusError {
        match self {
            CorpusError::InFile { source, .. } => source.root(),
            e => e,
        }
    }
}

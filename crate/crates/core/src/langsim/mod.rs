//! Language similarity data and donor-language selection.

mod code;
mod family;
mod feature;
mod matrix;
mod select;
mod vector;

use std::collections::BTreeMap;

use thiserror::Error;

pub use code::{LanguageCode, TARGET_LANGUAGES, TASK_LANGUAGES, TRAIN_LANGUAGES};
pub use family::{Family, FamilyTable};
pub use feature::FeatureKind;
pub use matrix::SimilarityMatrix;
pub use select::{nearest_sources, Selection};
pub use vector::{cosine, matrix_from_vectors, parse_vectors, LanguageVector};

#[derive(Debug, Error)]
pub enum LangsimError {
    #[error("invalid language code {0:?}: expected three lowercase ASCII letters")]
    InvalidCode(String),
    #[error("language {0:?} is not a task language; register it as an extension")]
    UnregisteredLanguage(String),
    #[error("unknown feature kind {0:?}")]
    UnknownFeature(String),
    #[error("malformed matrix file (line {line}): {reason}")]
    MalformedMatrixFile { line: usize, reason: String },
    #[error("invalid language vector: {0}")]
    InvalidVector(String),
    #[error("cannot compare {0} vectors with {1} vectors")]
    MismatchedFeatureKind(FeatureKind, FeatureKind),
    #[error("vectors for {0} and {1} share no present component")]
    EmptyOverlap(LanguageCode, LanguageCode),
    #[error("vector for {0} has zero norm on the shared components")]
    ZeroNorm(LanguageCode),
    #[error("target {0} is not covered by the {1} matrix")]
    TargetNotCovered(LanguageCode, FeatureKind),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Everything donor selection needs: one matrix per feature kind plus the
/// family table.
#[derive(Debug, Clone)]
pub struct LanguageSimilarity {
    matrices: BTreeMap<FeatureKind, SimilarityMatrix>,
    families: FamilyTable,
}

impl LanguageSimilarity {
    /// All bundled matrices and the operational family table.
    pub fn bundled() -> Self {
        LanguageSimilarity {
            matrices: FeatureKind::ALL
                .into_iter()
                .map(|k| (k, SimilarityMatrix::bundled(k)))
                .collect(),
            families: FamilyTable::operational(),
        }
    }

    pub fn new(matrices: impl IntoIterator<Item = SimilarityMatrix>, families: FamilyTable) -> Self {
        LanguageSimilarity {
            matrices: matrices.into_iter().map(|m| (m.feature(), m)).collect(),
            families,
        }
    }

    /// Replaces (or adds) the matrix for its feature kind.
    pub fn with_matrix(mut self, matrix: SimilarityMatrix) -> Self {
        self.matrices.insert(matrix.feature(), matrix);
        self
    }

    pub fn matrix(&self, feature: FeatureKind) -> Result<&SimilarityMatrix, LangsimError> {
        self.matrices
            .get(&feature)
            .ok_or_else(|| LangsimError::UnknownFeature(feature.name().to_string()))
    }

    pub fn families(&self) -> &FamilyTable {
        &self.families
    }
}

impl Default for LanguageSimilarity {
    fn default() -> Self {
        Self::bundled()
    }
}

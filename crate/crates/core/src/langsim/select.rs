use std::collections::BTreeSet;

use serde::Serialize;

use super::{LangsimError, LanguageCode, SimilarityMatrix};

/// Result of a nearest-neighbour donor selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub target: LanguageCode,
    /// Chosen donors, most similar first.
    pub languages: Vec<LanguageCode>,
    /// Similarity of each chosen donor, aligned with `languages`.
    pub similarities: Vec<f64>,
    /// Candidates skipped because the matrix has no cell for them.
    pub uncovered: Vec<LanguageCode>,
}

/// Picks up to `k` candidates most similar to `target`.
///
/// Ordering is by descending similarity, ties broken by ascending code.
/// The target itself is never returned. Candidates without a matrix cell
/// are skipped and listed in [`Selection::uncovered`]; if fewer than `k`
/// remain the short list is returned as is.
pub fn nearest_sources(
    target: LanguageCode,
    k: usize,
    matrix: &SimilarityMatrix,
    candidates: impl IntoIterator<Item = LanguageCode>,
) -> Result<Selection, LangsimError> {
    if !matrix.has_row(target) {
        return Err(LangsimError::TargetNotCovered(target, matrix.feature()));
    }
    let candidates: BTreeSet<LanguageCode> = candidates.into_iter().filter(|&c| c != target).collect();
    let mut scored = Vec::new();
    let mut uncovered = Vec::new();
    for c in candidates {
        match matrix.get(target, c) {
            Some(s) => scored.push((c, s)),
            None => uncovered.push(c),
        }
    }
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(Selection {
        target,
        languages: scored.iter().map(|s| s.0).collect(),
        similarities: scored.iter().map(|s| s.1).collect(),
        uncovered,
    })
}

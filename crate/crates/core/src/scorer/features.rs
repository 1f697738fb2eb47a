use std::collections::{HashMap, HashSet};

use super::ScorerError;
use crate::corpus::StrInstance;

/// Dimensionality of [`FeatureVector`].
pub const D: usize = 6;

/// Component names, in vector order.
pub const FEATURE_NAMES: [&str; D] = ["char3_cos", "char4_cos", "tok_jaccard", "tok_dice", "len_ratio", "tok_overlap"];

/// Lexical similarity features of a sentence pair. Every component lies in
/// `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector(pub [f64; D]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; D] {
        &self.0
    }
}

/// Extracts features from two sentences. Text is lowercased; token
/// features split on whitespace; character n-grams run over the whole
/// folded string, spaces included.
pub fn extract_features(sent1: &str, sent2: &str) -> Result<FeatureVector, ScorerError> {
    if sent1.trim().is_empty() || sent2.trim().is_empty() {
        return Err(ScorerError::EmptySentence);
    }
    let a = sent1.to_lowercase();
    let b = sent2.to_lowercase();
    let ta: Vec<&str> = a.split_whitespace().collect();
    let tb: Vec<&str> = b.split_whitespace().collect();
    let sa: HashSet<&str> = ta.iter().copied().collect();
    let sb: HashSet<&str> = tb.iter().copied().collect();
    let inter = sa.intersection(&sb).count() as f64;
    let union = sa.union(&sb).count() as f64;
    let jaccard = inter / union;
    let dice = 2.0 * inter / (sa.len() + sb.len()) as f64;
    let (la, lb) = (a.chars().count() as f64, b.chars().count() as f64);
    let len_ratio = la.min(lb) / la.max(lb);
    Ok(FeatureVector([
        char_ngram_cosine(&a, &b, 3),
        char_ngram_cosine(&a, &b, 4),
        jaccard,
        dice,
        len_ratio,
        multiset_overlap(&ta, &tb),
    ]))
}

pub fn features_of(inst: &StrInstance) -> Result<FeatureVector, ScorerError> {
    extract_features(&inst.sent1, &inst.sent2)
}

fn ngram_counts(s: &str, n: usize) -> HashMap<&str, usize> {
    let idx: Vec<usize> = s.char_indices().map(|(i, _)| i).chain([s.len()]).collect();
    let chars = idx.len() - 1;
    let mut m = HashMap::new();
    if chars < n {
        // Too short for a single n-gram: the whole string stands in.
        m.insert(s, 1);
        return m;
    }
    for i in 0..=chars - n {
        *m.entry(&s[idx[i]..idx[i + n]]).or_default() += 1;
    }
    m
}

/// Cosine between character n-gram count vectors; operates on the given
/// strings as is.
pub fn char_ngram_cosine(a: &str, b: &str, n: usize) -> f64 {
    let ca = ngram_counts(a, n);
    let cb = ngram_counts(b, n);
    if ca == cb {
        return 1.0;
    }
    let dot: f64 = ca
        .iter()
        .filter_map(|(g, &x)| cb.get(g).map(|&y| (x * y) as f64))
        .sum();
    let na: f64 = ca.values().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    let nb: f64 = cb.values().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).clamp(0.0, 1.0)
}

// Shared tokens counted with multiplicity, over the longer token list.
fn multiset_overlap(a: &[&str], b: &[&str]) -> f64 {
    let mut counts: HashMap<&str, i64> = HashMap::new();
    for t in a {
        *counts.entry(t).or_default() += 1;
    }
    let mut shared = 0;
    for t in b {
        if let Some(c) = counts.get_mut(t) {
            if *c > 0 {
                *c -= 1;
                shared += 1;
            }
        }
    }
    shared as f64 / a.len().max(b.len()) as f64
}

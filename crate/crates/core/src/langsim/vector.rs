use std::collections::BTreeMap;

use super::{FeatureKind, LangsimError, LanguageCode, SimilarityMatrix};

/// A typological or learned feature vector for one language. Components
/// with a `false` mask entry are unknown and ignored by [`cosine`].
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageVector {
    lang: LanguageCode,
    feature: FeatureKind,
    values: Vec<f64>,
    mask: Vec<bool>,
}

impl LanguageVector {
    pub fn new(
        lang: LanguageCode,
        feature: FeatureKind,
        values: Vec<f64>,
        mask: Vec<bool>,
    ) -> Result<Self, LangsimError> {
        if values.len() != mask.len() {
            return Err(LangsimError::InvalidVector(format!(
                "{lang}: {} values but {} mask flags",
                values.len(),
                mask.len()
            )));
        }
        if !mask.iter().any(|&m| m) {
            return Err(LangsimError::InvalidVector(format!(
                "{lang}: no component present"
            )));
        }
        if values.iter().zip(&mask).any(|(v, &m)| m && !v.is_finite()) {
            return Err(LangsimError::InvalidVector(format!(
                "{lang}: non-finite component"
            )));
        }
        Ok(LanguageVector {
            lang,
            feature,
            values,
            mask,
        })
    }

    /// A vector with every component present.
    pub fn dense(
        lang: LanguageCode,
        feature: FeatureKind,
        values: Vec<f64>,
    ) -> Result<Self, LangsimError> {
        let mask = vec![true; values.len()];
        Self::new(lang, feature, values, mask)
    }

    pub fn lang(&self) -> LanguageCode {
        self.lang
    }

    pub fn feature(&self) -> FeatureKind {
        self.feature
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn scaled(&self, factor: f64) -> Self {
        LanguageVector {
            values: self.values.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }
}

/// Cosine similarity restricted to the components present in both vectors.
pub fn cosine(u: &LanguageVector, v: &LanguageVector) -> Result<f64, LangsimError> {
    if u.feature != v.feature {
        return Err(LangsimError::MismatchedFeatureKind(u.feature, v.feature));
    }
    let n = u.values.len().min(v.values.len());
    let (mut dot, mut uu, mut vv, mut shared) = (0.0, 0.0, 0.0, 0usize);
    for i in 0..n {
        if u.mask[i] && v.mask[i] {
            let (a, b) = (u.values[i], v.values[i]);
            dot += a * b;
            uu += a * a;
            vv += b * b;
            shared += 1;
        }
    }
    if shared == 0 {
        return Err(LangsimError::EmptyOverlap(u.lang, v.lang));
    }
    if uu == 0.0 || vv == 0.0 {
        return Err(LangsimError::ZeroNorm(if uu == 0.0 { u.lang } else { v.lang }));
    }
    Ok((dot / (uu.sqrt() * vv.sqrt())).clamp(-1.0, 1.0))
}

/// Parses a vector file: `feature=<kind>` then one `lang<TAB>v1<TAB>v2...`
/// line per language. `NA` or `--` marks a missing component.
pub fn parse_vectors(text: &str) -> Result<Vec<LanguageVector>, LangsimError> {
    let malformed = |line: usize, reason: String| LangsimError::MalformedMatrixFile { line, reason };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (n, first) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty vector file".into()))?;
    let feature: FeatureKind = first
        .strip_prefix("feature=")
        .ok_or_else(|| malformed(n, "first line must be `feature=<kind>`".into()))?
        .trim()
        .parse()?;
    let mut out = Vec::new();
    for (n, line) in lines {
        let mut cells = line.split('\t');
        let code = cells.next().unwrap_or_default().trim();
        let lang = LanguageCode::extension(code)
            .map_err(|_| malformed(n, format!("bad language code {code:?}")))?;
        let mut values = Vec::new();
        let mut mask = Vec::new();
        for cell in cells {
            let cell = cell.trim();
            if cell == "NA" || cell == "--" {
                values.push(0.0);
                mask.push(false);
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| malformed(n, format!("non-numeric component {cell:?}")))?;
                values.push(v);
                mask.push(true);
            }
        }
        out.push(LanguageVector::new(lang, feature, values, mask)?);
    }
    Ok(out)
}

/// Builds a similarity matrix from raw vectors. Pairs whose cosine is
/// undefined (no overlap, zero norm) become uncovered cells, as does the
/// diagonal.
pub fn matrix_from_vectors(
    feature: FeatureKind,
    vectors: &[LanguageVector],
    rows: &[LanguageCode],
    cols: &[LanguageCode],
) -> Result<SimilarityMatrix, LangsimError> {
    let by_lang: BTreeMap<LanguageCode, &LanguageVector> = vectors
        .iter()
        .filter(|v| v.feature == feature)
        .map(|v| (v.lang, v))
        .collect();
    let mut values = Vec::with_capacity(rows.len() * cols.len());
    for r in rows {
        for c in cols {
            let cell = match (by_lang.get(r), by_lang.get(c)) {
                (Some(u), Some(v)) if r != c => cosine(u, v).ok(),
                _ => None,
            };
            values.push(cell);
        }
    }
    SimilarityMatrix::new(feature, rows.to_vec(), cols.to_vec(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[f64]) -> LanguageVector {
        LanguageVector::dense(LanguageCode::ENG, FeatureKind::L2vSyn, values.to_vec()).unwrap()
    }

    #[test]
    fn cosine_basic_cases() {
        assert!((cosine(&v(&[0.6, 0.8]), &v(&[0.6, 0.8])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), 0.0);
        assert_eq!(cosine(&v(&[1.0, 0.0]), &v(&[-1.0, 0.0])).unwrap(), -1.0);
    }

    #[test]
    fn cosine_uses_joint_mask_only() {
        let a = LanguageVector::new(
            LanguageCode::ENG,
            FeatureKind::L2vSyn,
            vec![1.0, 5.0, 0.0],
            vec![true, false, true],
        )
        .unwrap();
        let b = v(&[2.0, -9.0, 0.0]);
        assert!((cosine(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_errors() {
        let a = v(&[1.0, 0.0]);
        let other = LanguageVector::dense(LanguageCode::ESP, FeatureKind::L2vPho, vec![1.0, 0.0]).unwrap();
        assert!(matches!(cosine(&a, &other), Err(LangsimError::MismatchedFeatureKind(..))));

        let left = LanguageVector::new(LanguageCode::ENG, FeatureKind::L2vSyn, vec![1.0, 0.0], vec![true, false]).unwrap();
        let right = LanguageVector::new(LanguageCode::ESP, FeatureKind::L2vSyn, vec![0.0, 1.0], vec![false, true]).unwrap();
        assert!(matches!(cosine(&left, &right), Err(LangsimError::EmptyOverlap(..))));

        assert!(matches!(cosine(&v(&[0.0, 0.0]), &a), Err(LangsimError::ZeroNorm(_))));
    }

    #[test]
    fn vector_invariants() {
        assert!(LanguageVector::new(LanguageCode::ENG, FeatureKind::L2vSyn, vec![1.0], vec![]).is_err());
        assert!(LanguageVector::new(LanguageCode::ENG, FeatureKind::L2vSyn, vec![1.0], vec![false]).is_err());
    }

    #[test]
    fn vectors_to_matrix() {
        let text = "feature=l2v-syn\neng\t1\t0\t--\nesp\t1\t1\t1\nkin\t0\t1\tNA\n";
        let vecs = parse_vectors(text).unwrap();
        assert_eq!(vecs.len(), 3);
        let langs = [LanguageCode::ENG, LanguageCode::ESP, LanguageCode::KIN];
        let m = matrix_from_vectors(FeatureKind::L2vSyn, &vecs, &langs, &langs).unwrap();
        assert_eq!(m.get(LanguageCode::ENG, LanguageCode::ENG), None);
        assert_eq!(m.get(LanguageCode::ENG, LanguageCode::KIN), Some(0.0));
        let e = m.get(LanguageCode::ENG, LanguageCode::ESP).unwrap();
        assert!((e - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }
}

use super::EvalError;

/// Fractional ranks, 1-based; ties share the mean of the positions they
/// occupy.
pub fn ranks(values: &[f64]) -> Result<Vec<f64>, EvalError> {
    if values.is_empty() {
        return Err(EvalError::TooShort(0));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(EvalError::NonFiniteValue(i));
    }
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]] == values[idx[start]] {
            end += 1;
        }
        // Positions start+1 ..= end, averaged.
        let r = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            out[i] = r;
        }
        start = end;
    }
    Ok(out)
}

/// Spearman's rho: the Pearson correlation of the two rank vectors.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(EvalError::TooShort(x.len()));
    }
    let rx = ranks(x)?;
    let ry = ranks(y)?;
    let n = rx.len() as f64;
    // Both rank vectors have mean (n + 1) / 2.
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 {
        return Err(EvalError::DegenerateInput("first vector is constant"));
    }
    if syy == 0.0 {
        return Err(EvalError::DegenerateInput("second vector is constant"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

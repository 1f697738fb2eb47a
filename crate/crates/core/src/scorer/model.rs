use serde::{Deserialize, Serialize};

use super::features::{FeatureVector, D};
use super::ScorerError;

/// Linear weights and bias of the sigmoid head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerParams {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl ScorerParams {
    /// All-zero start; predicts 0.5 everywhere.
    pub fn zeros() -> Self {
        ScorerParams {
            weights: vec![0.0; D],
            bias: 0.0,
        }
    }

    pub fn new(weights: Vec<f64>, bias: f64) -> Result<Self, ScorerError> {
        let p = ScorerParams { weights, bias };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ScorerError> {
        if self.weights.len() != D {
            return Err(ScorerError::DimensionMismatch {
                expected: D,
                found: self.weights.len(),
            });
        }
        if !self.bias.is_finite() || self.weights.iter().any(|w| !w.is_finite()) {
            return Err(ScorerError::NonFiniteParams);
        }
        Ok(())
    }

    fn logit(&self, f: &FeatureVector) -> f64 {
        self.weights.iter().zip(f.0.iter()).map(|(w, x)| w * x).sum::<f64>() + self.bias
    }
}

impl Default for ScorerParams {
    fn default() -> Self {
        Self::zeros()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

const EDGE: f64 = 1e-15;

/// `sigmoid(w . f + b)`, kept strictly inside `(0, 1)`.
pub fn predict(params: &ScorerParams, f: &FeatureVector) -> Result<f64, ScorerError> {
    if params.weights.len() != D {
        return Err(ScorerError::DimensionMismatch {
            expected: D,
            found: params.weights.len(),
        });
    }
    Ok(sigmoid(params.logit(f)).clamp(EDGE, 1.0 - EDGE))
}

pub fn mse_loss(preds: &[f64], golds: &[f64]) -> Result<f64, ScorerError> {
    if preds.len() != golds.len() {
        return Err(ScorerError::LengthMismatch(preds.len(), golds.len()));
    }
    if preds.is_empty() {
        return Err(ScorerError::EmptyBatch);
    }
    Ok(preds.iter().zip(golds).map(|(p, y)| (p - y).powi(2)).sum::<f64>() / preds.len() as f64)
}

/// The training objective: batch MSE plus `weight_decay / 2 * |w|^2`.
/// The bias is not decayed.
pub fn objective(params: &ScorerParams, batch: &[(FeatureVector, f64)], weight_decay: f64) -> Result<f64, ScorerError> {
    if batch.is_empty() {
        return Err(ScorerError::EmptyBatch);
    }
    let mse = batch
        .iter()
        .map(|(f, y)| (sigmoid(params.logit(f)) - y).powi(2))
        .sum::<f64>()
        / batch.len() as f64;
    let l2: f64 = params.weights.iter().map(|w| w * w).sum();
    Ok(mse + 0.5 * weight_decay * l2)
}

/// Analytic gradient of [`objective`].
pub fn gradient(params: &ScorerParams, batch: &[(FeatureVector, f64)], weight_decay: f64) -> Result<ScorerParams, ScorerError> {
    if batch.is_empty() {
        return Err(ScorerError::EmptyBatch);
    }
    if params.weights.len() != D {
        return Err(ScorerError::DimensionMismatch {
            expected: D,
            found: params.weights.len(),
        });
    }
    let n = batch.len() as f64;
    let mut gw = vec![0.0; D];
    let mut gb = 0.0;
    for (f, y) in batch {
        let p = sigmoid(params.logit(f));
        let d = 2.0 * (p - y) * p * (1.0 - p) / n;
        for (g, x) in gw.iter_mut().zip(f.0.iter()) {
            *g += d * x;
        }
        gb += d;
    }
    for (g, w) in gw.iter_mut().zip(&params.weights) {
        *g += weight_decay * w;
    }
    Ok(ScorerParams { weights: gw, bias: gb })
}

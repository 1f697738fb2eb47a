use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::{features_of, FeatureVector, D};
use super::model::{gradient, mse_loss, predict, ScorerParams};
use super::ScorerError;
use crate::corpus::StrInstance;
use crate::eval::spearman;
use crate::parallel::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    #[default]
    Sgd,
    AdamW,
}

impl std::str::FromStr for Optimizer {
    type Err = ScorerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sgd" => Ok(Optimizer::Sgd),
            "adamw" => Ok(Optimizer::AdamW),
            other => Err(ScorerError::InvalidConfig(format!("unknown optimizer {other:?}"))),
        }
    }
}

impl std::fmt::Display for Optimizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Optimizer::Sgd => "sgd",
            Optimizer::AdamW => "adamw",
        })
    }
}

/// Optimization and early-stopping settings.
///
/// Batch size, weight decay, patience and threshold follow the reference
/// fine-tuning setup. The learning rate there was 2e-5 for a pretrained
/// encoder; the linear head here needs a much larger step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub weight_decay: f64,
    /// Optimizer steps between dev evaluations.
    pub eval_every: usize,
    /// Evaluations without sufficient improvement before stopping.
    pub patience: usize,
    pub improvement_threshold: f64,
    pub seed: u64,
    pub optimizer: Optimizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            batch_size: 32,
            max_epochs: 30,
            weight_decay: 1e-3,
            eval_every: 200,
            patience: 8,
            improvement_threshold: 1e-4,
            seed: 0,
            optimizer: Optimizer::Sgd,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), ScorerError> {
        let bad = |m: &str| Err(ScorerError::InvalidConfig(m.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if self.batch_size == 0 || self.eval_every == 0 || self.patience == 0 {
            return bad("batch_size, eval_every and patience must be at least 1");
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return bad("weight_decay must be non-negative");
        }
        if !(self.improvement_threshold.is_finite() && self.improvement_threshold >= 0.0) {
            return bad("improvement_threshold must be non-negative");
        }
        Ok(())
    }
}

/// One dev evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: usize,
    /// Mean batch loss since the previous evaluation.
    pub loss: f64,
    /// `None` when the dev correlation is undefined (constant predictions
    /// or golds).
    pub dev_rho: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    /// Parameters at the best dev evaluation.
    pub params: ScorerParams,
    pub trace: Vec<TraceRow>,
    /// Full-train MSE before training (index 0) and after each epoch.
    pub epoch_losses: Vec<f64>,
    pub steps: usize,
    pub best_step: Option<usize>,
    pub stopped_early: bool,
}

pub fn trace_tsv(trace: &[TraceRow]) -> String {
    let mut out = String::from("step\tloss\tdev_rho\n");
    for r in trace {
        let rho = r.dev_rho.map_or_else(|| "NA".to_string(), |v| v.to_string());
        out.push_str(&format!("{}\t{}\t{}\n", r.step, r.loss, rho));
    }
    out
}

pub fn featurize(instances: &[StrInstance], exec: Execution) -> Result<Vec<(FeatureVector, f64)>, ScorerError> {
    parallel::try_map(exec, instances, |i| {
        let y = i.score.ok_or_else(|| ScorerError::Unlabeled(i.pair_id.clone()))?;
        Ok((features_of(i)?, y))
    })
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPS: f64 = 1e-8;

/// Mini-batch training with dev-Spearman early stopping.
///
/// The metric of an evaluation is the dev Spearman correlation, or 0 when it
/// is undefined. An evaluation counts as an improvement when it beats the
/// best so far by more than the threshold; `patience` consecutive
/// non-improving evaluations stop training. The returned parameters are
/// those of the evaluation with the highest metric (earliest on ties).
pub fn train(
    train: &[StrInstance],
    dev: &[StrInstance],
    cfg: &TrainConfig,
    exec: Execution,
) -> Result<TrainOutcome, ScorerError> {
    cfg.validate()?;
    if dev.iter().any(|i| i.score.is_none()) {
        return Err(ScorerError::UnlabeledDev);
    }
    let mut params = ScorerParams::zeros();
    if cfg.max_epochs == 0 {
        return Ok(TrainOutcome {
            params,
            trace: Vec::new(),
            epoch_losses: Vec::new(),
            steps: 0,
            best_step: None,
            stopped_early: false,
        });
    }
    if train.is_empty() {
        return Err(ScorerError::EmptyBatch);
    }
    if dev.len() < 2 {
        return Err(ScorerError::InvalidConfig("dev set needs at least 2 instances".into()));
    }
    let data = featurize(train, exec)?;
    let dev_data = featurize(dev, exec)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut adam = Adam {
        m: vec![0.0; D + 1],
        v: vec![0.0; D + 1],
        t: 0,
    };

    let mut trace = Vec::new();
    let mut epoch_losses = vec![full_loss(&params, &data)?];
    let mut best = params.clone();
    let mut best_metric = f64::NEG_INFINITY;
    let mut best_step = None;
    let mut bad_evals = 0;
    let mut step = 0;
    let mut window = (0.0, 0usize);
    let mut stopped_early = false;

    'epochs: for _ in 0..cfg.max_epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch: Vec<(FeatureVector, f64)> = chunk.iter().map(|&i| data[i]).collect();
            let preds: Vec<f64> = batch.iter().map(|(f, _)| predict(&params, f)).collect::<Result<_, _>>()?;
            let golds: Vec<f64> = batch.iter().map(|(_, y)| *y).collect();
            let loss = mse_loss(&preds, &golds)?;
            if !loss.is_finite() {
                return Err(ScorerError::NonFiniteLoss { step });
            }
            apply_update(&mut params, &batch, cfg, &mut adam)?;
            step += 1;
            window.0 += loss;
            window.1 += 1;

            if step % cfg.eval_every == 0 {
                let row = evaluate_step(&params, &dev_data, step, &mut window)?;
                let metric = row.dev_rho.unwrap_or(0.0);
                trace.push(row);
                if metric > best_metric + cfg.improvement_threshold {
                    bad_evals = 0;
                } else {
                    bad_evals += 1;
                }
                if metric > best_metric {
                    best_metric = metric;
                    best = params.clone();
                    best_step = Some(step);
                }
                if bad_evals >= cfg.patience {
                    stopped_early = true;
                    break 'epochs;
                }
            }
        }
        epoch_losses.push(full_loss(&params, &data)?);
    }

    if !stopped_early && step % cfg.eval_every != 0 {
        let row = evaluate_step(&params, &dev_data, step, &mut window)?;
        let metric = row.dev_rho.unwrap_or(0.0);
        trace.push(row);
        if metric > best_metric {
            best = params.clone();
            best_step = Some(step);
        }
    }

    Ok(TrainOutcome {
        params: best,
        trace,
        epoch_losses,
        steps: step,
        best_step,
        stopped_early,
    })
}

fn apply_update(
    params: &mut ScorerParams,
    batch: &[(FeatureVector, f64)],
    cfg: &TrainConfig,
    adam: &mut Adam,
) -> Result<(), ScorerError> {
    match cfg.optimizer {
        Optimizer::Sgd => {
            let g = gradient(params, batch, cfg.weight_decay)?;
            for (w, gw) in params.weights.iter_mut().zip(&g.weights) {
                *w -= cfg.learning_rate * gw;
            }
            params.bias -= cfg.learning_rate * g.bias;
        }
        Optimizer::AdamW => {
            // Decay is decoupled: applied to the weights directly rather
            // than through the moment estimates.
            let g = gradient(params, batch, 0.0)?;
            adam.t += 1;
            let c1 = 1.0 - BETA1.powi(adam.t);
            let c2 = 1.0 - BETA2.powi(adam.t);
            let grads = g.weights.iter().copied().chain([g.bias]);
            for (i, gi) in grads.enumerate() {
                adam.m[i] = BETA1 * adam.m[i] + (1.0 - BETA1) * gi;
                adam.v[i] = BETA2 * adam.v[i] + (1.0 - BETA2) * gi * gi;
                let delta = cfg.learning_rate * (adam.m[i] / c1) / ((adam.v[i] / c2).sqrt() + EPS);
                if i < D {
                    params.weights[i] -= delta + cfg.learning_rate * cfg.weight_decay * params.weights[i];
                } else {
                    params.bias -= delta;
                }
            }
        }
    }
    if params.bias.is_finite() && params.weights.iter().all(|w| w.is_finite()) {
        Ok(())
    } else {
        Err(ScorerError::NonFiniteParams)
    }
}

fn full_loss(params: &ScorerParams, data: &[(FeatureVector, f64)]) -> Result<f64, ScorerError> {
    let preds: Vec<f64> = data.iter().map(|(f, _)| predict(params, f)).collect::<Result<_, _>>()?;
    let golds: Vec<f64> = data.iter().map(|(_, y)| *y).collect();
    mse_loss(&preds, &golds)
}

fn evaluate_step(
    params: &ScorerParams,
    dev: &[(FeatureVector, f64)],
    step: usize,
    window: &mut (f64, usize),
) -> Result<TraceRow, ScorerError> {
    let preds: Vec<f64> = dev.iter().map(|(f, _)| predict(params, f)).collect::<Result<_, _>>()?;
    let golds: Vec<f64> = dev.iter().map(|(_, y)| *y).collect();
    let loss = if window.1 == 0 { f64::NAN } else { window.0 / window.1 as f64 };
    *window = (0.0, 0);
    Ok(TraceRow {
        step,
        loss,
        dev_rho: spearman(&preds, &golds).ok(),
    })
}

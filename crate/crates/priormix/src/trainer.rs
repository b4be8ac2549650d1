//! The training loop: per-epoch bag shuffling, stratified mini-batches that
//! take a slice of every bag, Adam updates, trajectory recording, and the
//! negative-risk early stop.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bags::{BagCollection, LabeledDataset};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{Gradients, MlpModel};
use crate::objectives::{self, BatchSlice, ObjectiveKind, ObjectiveParams};
use crate::prior_algebra::{rewrite_residual, TestPriors, WeightMatrix, REWRITE_TOL};

/// Everything a single training run needs besides the data and the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub objective: ObjectiveKind,
    pub epochs: usize,
    /// Mini-batches per epoch; every batch takes a contiguous slice of every
    /// shuffled bag, so this must not exceed the smallest bag.
    pub batches_per_epoch: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub weight_decay: f64,
    pub params: ObjectiveParams,
    /// Seed for the per-epoch bag shuffles.
    pub seed: u64,
}

impl TrainConfig {
    pub fn new(objective: ObjectiveKind) -> Self {
        Self {
            objective,
            epochs: 100,
            batches_per_epoch: 10,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            weight_decay: 0.0,
            params: ObjectiveParams::default(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.batches_per_epoch == 0 {
            return Err(Error::Config("batches_per_epoch must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::Config("betas must lie in [0, 1)".into()));
        }
        if !(self.weight_decay >= 0.0) {
            return Err(Error::Config("weight_decay must be non-negative".into()));
        }
        if !(0.0..=1.0).contains(&self.params.alpha) {
            return Err(Error::Config(format!(
                "alpha must be in [0, 1], got {}",
                self.params.alpha
            )));
        }
        if !(self.params.s_ga > 0.0) {
            return Err(Error::Config(format!(
                "s_ga must be positive, got {}",
                self.params.s_ga
            )));
        }
        if !(self.params.flood_b >= 0.0) {
            return Err(Error::Config(format!(
                "flood level must be non-negative, got {}",
                self.params.flood_b
            )));
        }
        Ok(())
    }
}

/// One epoch's diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean mini-batch objective value over the epoch.
    pub objective_value: f64,
    /// Unbiased risk estimate on the full training bags at epoch end.
    pub train_risk: f64,
    /// Zero-one error on the held-out test set at epoch end.
    pub test_error: f64,
}

/// Trajectory plus final metrics of one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub epochs: Vec<EpochStats>,
    /// Test error of the returned model.
    pub final_err: f64,
    /// Final error minus the trajectory minimum. Early-stopped runs report
    /// 0: the stopped model is the run's sole deliverable, so no error rise
    /// after the kept model exists. Always >= 0.
    pub error_drop: f64,
    /// For `u-stop`: the epoch whose full-train risk first went negative.
    pub stopped_epoch: Option<usize>,
    pub config: TrainConfig,
}

impl RunRecord {
    /// First epoch whose full-train unbiased risk is negative, if any.
    pub fn first_negative_risk_epoch(&self) -> Option<usize> {
        self.epochs.iter().find(|e| e.train_risk < 0.0).map(|e| e.epoch)
    }

    pub fn min_test_error(&self) -> Option<f64> {
        self.epochs
            .iter()
            .map(|e| e.test_error)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    /// `epoch,objective_value,train_ru,test_error` rows.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("epoch,objective_value,train_ru,test_error\n");
        for e in &self.epochs {
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.epoch, e.objective_value, e.train_risk, e.test_error
            ));
        }
        out
    }

    /// JSON summary with the final metrics and a config echo.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "err": self.final_err,
            "drop": self.error_drop,
            "stopped_epoch": self.stopped_epoch,
            "epochs_run": self.epochs.len(),
            "first_negative_risk_epoch": self.first_negative_risk_epoch(),
            "config": self.config,
        })
    }
}

/// Adam moment estimates, shapes mirroring the model.
#[derive(Debug, Clone)]
pub struct AdamState {
    step: u64,
    m_weights: Vec<Matrix>,
    v_weights: Vec<Matrix>,
    m_biases: Vec<Vec<f64>>,
    v_biases: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new(model: &MlpModel) -> Self {
        let zeros = Gradients::zeros_like(model);
        Self {
            step: 0,
            m_weights: zeros.weights.clone(),
            v_weights: zeros.weights,
            m_biases: zeros.biases.clone(),
            v_biases: zeros.biases,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

#[inline]
fn adam_update_slice(
    params: &mut [f64],
    grads: &[f64],
    m: &mut [f64],
    v: &mut [f64],
    lr: f64,
    betas: (f64, f64),
    eps: f64,
    weight_decay: f64,
    bias1: f64,
    bias2: f64,
) {
    let (beta1, beta2) = betas;
    for i in 0..params.len() {
        let g = grads[i] + weight_decay * params[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        let m_hat = m[i] / bias1;
        let v_hat = v[i] / bias2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}

/// One bias-corrected Adam step. Weight decay enters as an additive
/// `weight_decay * param` term in the gradient.
pub fn adam_step(
    model: &mut MlpModel,
    grads: &Gradients,
    state: &mut AdamState,
    lr: f64,
    betas: (f64, f64),
    eps: f64,
    weight_decay: f64,
) {
    state.step += 1;
    let bias1 = 1.0 - betas.0.powi(state.step as i32);
    let bias2 = 1.0 - betas.1.powi(state.step as i32);
    for (l, layer) in model.layers_mut().iter_mut().enumerate() {
        adam_update_slice(
            layer.weights.data_mut(),
            grads.weights[l].data(),
            state.m_weights[l].data_mut(),
            state.v_weights[l].data_mut(),
            lr,
            betas,
            eps,
            weight_decay,
            bias1,
            bias2,
        );
        adam_update_slice(
            &mut layer.biases,
            &grads.biases[l],
            &mut state.m_biases[l],
            &mut state.v_biases[l],
            lr,
            betas,
            eps,
            weight_decay,
            bias1,
            bias2,
        );
    }
}

/// Slice sizes for cutting a shuffled bag of `n` samples into `batches`
/// contiguous pieces (larger pieces first).
pub(crate) fn slice_sizes(n: usize, batches: usize) -> Vec<usize> {
    crate::bags::split_bag_sizes(n, batches)
}

fn gather_rows(features: &Matrix, indices: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(indices.len(), features.cols());
    for (row, &idx) in indices.iter().enumerate() {
        out.row_mut(row).copy_from_slice(features.row(idx));
    }
    out
}

/// Train `model` on the bags. Each epoch shuffles every bag independently,
/// cuts each bag into `batches_per_epoch` contiguous slices so every
/// mini-batch holds a slice of every bag, and takes one Adam step per batch.
/// For `u-stop`, training halts at the first epoch whose full-train risk is
/// negative and the model from the preceding epoch is returned.
pub fn train(
    bags: &BagCollection,
    weights: &WeightMatrix,
    pi: &TestPriors,
    model: MlpModel,
    cfg: &TrainConfig,
    test: &LabeledDataset,
) -> Result<(MlpModel, RunRecord)> {
    cfg.validate()?;
    let min_bag = bags.min_bag_size();
    if cfg.batches_per_epoch > min_bag {
        return Err(Error::Config(format!(
            "batches_per_epoch {} exceeds the smallest bag ({min_bag} samples); \
             some mini-batch would miss that bag",
            cfg.batches_per_epoch
        )));
    }
    if bags.dim() != model.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "bags have {} features, model expects {}",
            bags.dim(),
            model.input_dim()
        )));
    }
    // the rewriting premise: W must have been computed from (theta, pi)
    let residual = rewrite_residual(weights.matrix(), bags.theta(), pi);
    if residual > REWRITE_TOL {
        return Err(Error::RankDeficient(format!(
            "weights do not satisfy W^T Theta = diag(pi); residual {residual:.3e}"
        )));
    }

    let theta = bags.theta();
    let full_batch = BatchSlice::from_bags(bags);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = model;
    let mut adam = AdamState::new(&model);
    let mut records: Vec<EpochStats> = Vec::with_capacity(cfg.epochs);
    // previous-epoch snapshot, only needed for the early-stop baseline
    let mut previous = if cfg.objective == ObjectiveKind::UStop {
        Some(model.clone())
    } else {
        None
    };

    for epoch in 1..=cfg.epochs {
        // per-bag shuffled orders, bags visited in index order
        let orders: Vec<Vec<usize>> = bags
            .bags()
            .iter()
            .map(|bag| {
                let mut idx: Vec<usize> = (0..bag.len()).collect();
                idx.shuffle(&mut rng);
                idx
            })
            .collect();
        let cuts: Vec<Vec<usize>> = bags
            .bags()
            .iter()
            .map(|bag| slice_sizes(bag.len(), cfg.batches_per_epoch))
            .collect();

        let mut offsets = vec![0usize; bags.num_bags()];
        let mut objective_sum = 0.0;
        for batch_idx in 0..cfg.batches_per_epoch {
            let blocks: Vec<Matrix> = bags
                .bags()
                .iter()
                .enumerate()
                .map(|(m, bag)| {
                    let take = cuts[m][batch_idx];
                    let slice = &orders[m][offsets[m]..offsets[m] + take];
                    offsets[m] += take;
                    gather_rows(bag.features(), slice)
                })
                .collect();
            let batch = BatchSlice::new(blocks)?;
            let (value, upstream) =
                objectives::evaluate(cfg.objective, &batch, weights, theta, &cfg.params, &model)?;
            if !value.is_finite() || !upstream.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            let grads = model.backward(&batch.stacked_features(), &upstream)?;
            if !grads.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            adam_step(
                &mut model,
                &grads,
                &mut adam,
                cfg.learning_rate,
                (cfg.beta1, cfg.beta2),
                cfg.epsilon,
                cfg.weight_decay,
            );
            objective_sum += value;
        }

        let (train_risk, _) = objectives::unbiased_risk(&full_batch, weights, &model)?;
        if !train_risk.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        if cfg.objective == ObjectiveKind::UStop && train_risk < 0.0 {
            // keep the model from the preceding epoch; its epoch is the last
            // recorded entry (or the initial model when stopping at epoch 1)
            let stopped = previous.take().unwrap();
            let final_err = match records.last() {
                Some(last) => last.test_error,
                None => crate::eval::test_error(&stopped, test)?,
            };
            let record = RunRecord {
                epochs: records,
                final_err,
                error_drop: 0.0,
                stopped_epoch: Some(epoch),
                config: cfg.clone(),
            };
            return Ok((stopped, record));
        }
        let test_err = crate::eval::test_error(&model, test)?;
        records.push(EpochStats {
            epoch,
            objective_value: objective_sum / cfg.batches_per_epoch as f64,
            train_risk,
            test_error: test_err,
        });
        if let Some(prev) = previous.as_mut() {
            *prev = model.clone();
        }
    }

    let final_err = records.last().unwrap().test_error;
    let min_err = records
        .iter()
        .map(|e| e.test_error)
        .fold(f64::INFINITY, f64::min);
    let record = RunRecord {
        epochs: records,
        final_err,
        error_drop: final_err - min_err,
        stopped_epoch: None,
        config: cfg.clone(),
    };
    Ok((model, record))
}

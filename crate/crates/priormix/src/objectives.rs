//! Training objectives over bag-sliced mini-batches.
//!
//! Every objective maps (batch, model, parameters) to a scalar value plus a
//! per-(sample, class) upstream weight matrix; `model::backward` then turns
//! the upstream weights into exact parameter gradients. Upstream rows follow
//! the bag-major ordering of [`BatchSlice::stacked_features`].
//!
//! The partial-risk regularizer follows the training algorithm exactly: the
//! zero-one partial risks decide each (m, k) term's branch and reported
//! value, while gradients flow through the cross-entropy surrogate, scaled
//! by `s_ga` on the ascent branch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bags::BagCollection;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{ce_loss_matrix, softmax_rows, zo_loss_matrix, MlpModel};
use crate::prior_algebra::{ClassPriorMatrix, WeightMatrix};

/// Which training objective drives the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    /// Risk-rewriting estimator; may go negative.
    Unbiased,
    /// Pseudo-label every bag with its dominant class.
    Biased,
    /// Match predicted bag-mean class probabilities to the priors.
    Prop,
    /// Per-class absolute-value correction of the rewritten risk.
    UCorrect,
    /// Unbiased estimator, halting when the full-train risk goes negative.
    UStop,
    /// Unbiased estimator held at a global flood level.
    UFlood,
    /// Unbiased estimator plus partial risk regularization.
    UPrr,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 7] = [
        ObjectiveKind::Unbiased,
        ObjectiveKind::Biased,
        ObjectiveKind::Prop,
        ObjectiveKind::UCorrect,
        ObjectiveKind::UStop,
        ObjectiveKind::UFlood,
        ObjectiveKind::UPrr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveKind::Unbiased => "unbiased",
            ObjectiveKind::Biased => "biased",
            ObjectiveKind::Prop => "prop",
            ObjectiveKind::UCorrect => "u-correct",
            ObjectiveKind::UStop => "u-stop",
            ObjectiveKind::UFlood => "u-flood",
            ObjectiveKind::UPrr => "u-prr",
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ObjectiveKind::ALL
            .iter()
            .find(|k| k.as_str() == s)
            .copied()
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown objective {s:?}; expected one of unbiased|biased|prop|u-correct|u-stop|u-flood|u-prr"
                ))
            })
    }
}

/// A mini-batch: one feature block per bag, every block nonempty.
#[derive(Debug, Clone)]
pub struct BatchSlice {
    blocks: Vec<Matrix>,
}

impl BatchSlice {
    pub fn new(blocks: Vec<Matrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::DimensionMismatch("batch needs at least one bag".into()));
        }
        let dim = blocks[0].cols();
        for (m, b) in blocks.iter().enumerate() {
            if b.rows() == 0 {
                return Err(Error::DimensionMismatch(format!(
                    "bag {} contributes no samples to the mini-batch",
                    m + 1
                )));
            }
            if b.cols() != dim {
                return Err(Error::DimensionMismatch(
                    "bags disagree on feature dimension".into(),
                ));
            }
        }
        Ok(Self { blocks })
    }

    /// Full-data batch: every bag contributes all of its samples.
    pub fn from_bags(bags: &BagCollection) -> Self {
        Self {
            blocks: bags.bags().iter().map(|b| b.features().clone()).collect(),
        }
    }

    pub fn num_bags(&self) -> usize {
        self.blocks.len()
    }

    pub fn block(&self, m: usize) -> &Matrix {
        &self.blocks[m]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::rows).collect()
    }

    pub fn total_rows(&self) -> usize {
        self.blocks.iter().map(Matrix::rows).sum()
    }

    /// All blocks stacked in bag order; row layout matches every objective's
    /// upstream matrix.
    pub fn stacked_features(&self) -> Matrix {
        let dim = self.blocks[0].cols();
        let mut out = Matrix::zeros(self.total_rows(), dim);
        let mut row = 0;
        for block in &self.blocks {
            for i in 0..block.rows() {
                out.row_mut(row).copy_from_slice(block.row(i));
                row += 1;
            }
        }
        out
    }
}

/// Empirical partial risks of a batch: mean surrogate and zero-one losses of
/// labeling all of bag m as class k, plus the flood levels 1 - theta.
#[derive(Debug, Clone)]
pub struct PartialRiskTable {
    pub surrogate: Matrix,
    pub zero_one: Matrix,
    pub flood_levels: Matrix,
}

/// Partial-risk-regularization hyperparameters. The trade-off weights
/// default to |w_{m,k}| so terms that matter more in the rewritten risk are
/// regularized harder.
#[derive(Debug, Clone)]
pub struct PrrConfig {
    alpha: f64,
    s_ga: f64,
    lambda: Matrix,
}

impl PrrConfig {
    pub fn new(alpha: f64, s_ga: f64, weights: &WeightMatrix) -> Result<Self> {
        Self::validate(alpha, s_ga)?;
        Ok(Self {
            alpha,
            s_ga,
            lambda: weights.abs_entries(),
        })
    }

    /// Replace the default |W| trade-off weights.
    pub fn with_lambda(mut self, lambda: Matrix) -> Result<Self> {
        if (lambda.rows(), lambda.cols()) != (self.lambda.rows(), self.lambda.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "lambda is {}x{}, expected {}x{}",
                lambda.rows(),
                lambda.cols(),
                self.lambda.rows(),
                self.lambda.cols()
            )));
        }
        self.lambda = lambda;
        Ok(self)
    }

    fn validate(alpha: f64, s_ga: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Config(format!("alpha must be in [0, 1], got {alpha}")));
        }
        if !(s_ga > 0.0) {
            return Err(Error::Config(format!("s_ga must be positive, got {s_ga}")));
        }
        Ok(())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn s_ga(&self) -> f64 {
        self.s_ga
    }

    pub fn lambda(&self) -> &Matrix {
        &self.lambda
    }
}

fn check_batch_weights(batch: &BatchSlice, w: &WeightMatrix) -> Result<()> {
    if w.num_bags() != batch.num_bags() {
        return Err(Error::DimensionMismatch(format!(
            "weights cover {} bags, batch has {}",
            w.num_bags(),
            batch.num_bags()
        )));
    }
    Ok(())
}

fn check_batch_theta(batch: &BatchSlice, theta: &ClassPriorMatrix, classes: usize) -> Result<()> {
    if theta.num_bags() != batch.num_bags() {
        return Err(Error::DimensionMismatch(format!(
            "theta covers {} bags, batch has {}",
            theta.num_bags(),
            batch.num_bags()
        )));
    }
    if theta.num_classes() != classes {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} classes, model outputs {}",
            theta.num_classes(),
            classes
        )));
    }
    Ok(())
}

fn forward_ce(batch: &BatchSlice, model: &MlpModel) -> Result<(Matrix, Matrix)> {
    let logits = model.forward(&batch.stacked_features())?;
    let ce = ce_loss_matrix(&logits);
    Ok((logits, ce))
}

/// Per-bag row ranges in the stacked layout.
fn bag_ranges(sizes: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        out.push((start, start + s));
        start += s;
    }
    out
}

fn unbiased_from_ce(ce: &Matrix, w: &WeightMatrix, sizes: &[usize]) -> (f64, Matrix) {
    let k = ce.cols();
    let mut upstream = Matrix::zeros(ce.rows(), k);
    let mut value = 0.0;
    for (m, (start, end)) in bag_ranges(sizes).into_iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        for i in start..end {
            let ce_row = ce.row(i);
            let up_row = upstream.row_mut(i);
            for class in 0..k {
                let coeff = w.get(m, class) * inv;
                up_row[class] = coeff;
                value += coeff * ce_row[class];
            }
        }
    }
    (value, upstream)
}

/// The rewritten-risk estimator: value may be negative; upstream entry for a
/// sample of bag m and class k is w_{m,k} / b_m.
pub fn unbiased_risk(
    batch: &BatchSlice,
    w: &WeightMatrix,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    check_batch_weights(batch, w)?;
    let (_, ce) = forward_ce(batch, model)?;
    if ce.cols() != w.num_classes() {
        return Err(Error::DimensionMismatch(format!(
            "model has {} outputs, weights have {} classes",
            ce.cols(),
            w.num_classes()
        )));
    }
    Ok(unbiased_from_ce(&ce, w, &batch.block_sizes()))
}

/// Per-(bag, class) surrogate and zero-one partial risks of the batch.
pub fn partial_risk_table(
    batch: &BatchSlice,
    model: &MlpModel,
    theta: &ClassPriorMatrix,
) -> Result<PartialRiskTable> {
    check_batch_theta(batch, theta, model.output_dim())?;
    let (logits, ce) = forward_ce(batch, model)?;
    let zo = zo_loss_matrix(&logits);
    let sizes = batch.block_sizes();
    let k = ce.cols();
    let m_bags = batch.num_bags();
    let mut surrogate = Matrix::zeros(m_bags, k);
    let mut zero_one = Matrix::zeros(m_bags, k);
    let mut flood = Matrix::zeros(m_bags, k);
    for (m, (start, end)) in bag_ranges(&sizes).into_iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        for i in start..end {
            for class in 0..k {
                surrogate.set(m, class, surrogate.get(m, class) + ce.get(i, class) * inv);
                zero_one.set(m, class, zero_one.get(m, class) + zo.get(i, class) * inv);
            }
        }
        for class in 0..k {
            flood.set(m, class, 1.0 - theta.get(m, class));
        }
    }
    Ok(PartialRiskTable {
        surrogate,
        zero_one,
        flood_levels: flood,
    })
}

/// Unbiased risk plus partial risk regularization. Reported value uses the
/// zero-one partial risks; gradients flow through the surrogate with the
/// branch sign decided by the zero-one comparison (equality descends).
pub fn u_prr(
    batch: &BatchSlice,
    w: &WeightMatrix,
    theta: &ClassPriorMatrix,
    cfg: &PrrConfig,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    check_batch_weights(batch, w)?;
    check_batch_theta(batch, theta, model.output_dim())?;
    if cfg.alpha == 1.0 {
        // degenerate mix: exactly the unbiased estimator
        return unbiased_risk(batch, w, model);
    }
    if (cfg.lambda.rows(), cfg.lambda.cols()) != (w.num_bags(), w.num_classes()) {
        return Err(Error::DimensionMismatch(format!(
            "lambda is {}x{}, weights are {}x{}",
            cfg.lambda.rows(),
            cfg.lambda.cols(),
            w.num_bags(),
            w.num_classes()
        )));
    }
    let (logits, ce) = forward_ce(batch, model)?;
    let sizes = batch.block_sizes();
    let (unbiased_value, mut upstream) = unbiased_from_ce(&ce, w, &sizes);
    for v in upstream.data_mut() {
        *v *= cfg.alpha;
    }

    let zo = zo_loss_matrix(&logits);
    let k = ce.cols();
    let one_minus_alpha = 1.0 - cfg.alpha;
    let mut reg_value = 0.0;
    for (m, (start, end)) in bag_ranges(&sizes).into_iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        for class in 0..k {
            let level = 1.0 - theta.get(m, class);
            let zo_mean: f64 = (start..end).map(|i| zo.get(i, class)).sum::<f64>() * inv;
            let lambda = cfg.lambda.get(m, class);
            reg_value += lambda * (zo_mean - level).abs();
            let coeff = if zo_mean >= level {
                one_minus_alpha * lambda * inv
            } else {
                -cfg.s_ga * one_minus_alpha * lambda * inv
            };
            if coeff != 0.0 {
                for i in start..end {
                    let row = upstream.row_mut(i);
                    row[class] += coeff;
                }
            }
        }
    }
    Ok((cfg.alpha * unbiased_value + one_minus_alpha * reg_value, upstream))
}

/// Flooded unbiased risk `|R - b| + b`; below the flood level the whole
/// gradient flips to ascent.
pub fn u_flood(
    batch: &BatchSlice,
    w: &WeightMatrix,
    model: &MlpModel,
    b: f64,
) -> Result<(f64, Matrix)> {
    if !(b >= 0.0) {
        return Err(Error::Config(format!("flood level must be >= 0, got {b}")));
    }
    let (risk, mut upstream) = unbiased_risk(batch, w, model)?;
    let value = (risk - b).abs() + b;
    if risk < b {
        for v in upstream.data_mut() {
            *v = -*v;
        }
    }
    Ok((value, upstream))
}

/// Per-class absolute-value correction: each class's summed bag contribution
/// is forced non-negative, flipping that class's gradient when it dips below
/// zero.
pub fn u_correct(
    batch: &BatchSlice,
    w: &WeightMatrix,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    check_batch_weights(batch, w)?;
    let (_, ce) = forward_ce(batch, model)?;
    let sizes = batch.block_sizes();
    let ranges = bag_ranges(&sizes);
    let k = ce.cols();
    let mut class_sums = vec![0.0; k];
    for (m, &(start, end)) in ranges.iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        for i in start..end {
            for class in 0..k {
                class_sums[class] += w.get(m, class) * inv * ce.get(i, class);
            }
        }
    }
    let value: f64 = class_sums.iter().map(|v| v.abs()).sum();
    let mut upstream = Matrix::zeros(ce.rows(), k);
    for (m, &(start, end)) in ranges.iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        for i in start..end {
            let row = upstream.row_mut(i);
            for class in 0..k {
                let sign = if class_sums[class] >= 0.0 { 1.0 } else { -1.0 };
                row[class] = sign * w.get(m, class) * inv;
            }
        }
    }
    Ok((value, upstream))
}

/// Supervised training on pseudo-labels: every sample of bag m is labeled
/// with the bag's dominant class, averaged over bags.
pub fn biased_proportion(
    batch: &BatchSlice,
    theta: &ClassPriorMatrix,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    check_batch_theta(batch, theta, model.output_dim())?;
    let (_, ce) = forward_ce(batch, model)?;
    let sizes = batch.block_sizes();
    let m_bags = batch.num_bags() as f64;
    let mut upstream = Matrix::zeros(ce.rows(), ce.cols());
    let mut value = 0.0;
    for (m, (start, end)) in bag_ranges(&sizes).into_iter().enumerate() {
        let pseudo = crate::model::argmax_row(theta.row(m));
        let coeff = 1.0 / (m_bags * sizes[m] as f64);
        for i in start..end {
            value += coeff * ce.get(i, pseudo);
            upstream.set(i, pseudo, coeff);
        }
    }
    Ok((value, upstream))
}

const PROP_PROB_FLOOR: f64 = 1e-12;

/// Proportion matching: cross-entropy between each bag's priors and its
/// mean predicted class probabilities, with the mean clamped at 1e-12.
pub fn proportion_loss(
    batch: &BatchSlice,
    theta: &ClassPriorMatrix,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    check_batch_theta(batch, theta, model.output_dim())?;
    let logits = model.forward(&batch.stacked_features())?;
    let probs = softmax_rows(&logits);
    let sizes = batch.block_sizes();
    let k = probs.cols();
    let mut upstream = Matrix::zeros(probs.rows(), k);
    let mut value = 0.0;
    for (m, (start, end)) in bag_ranges(&sizes).into_iter().enumerate() {
        let inv = 1.0 / sizes[m] as f64;
        let mut mean = vec![0.0; k];
        for i in start..end {
            for (acc, &p) in mean.iter_mut().zip(probs.row(i)) {
                *acc += p * inv;
            }
        }
        // d value / d mean_k, zero on the clamped branch
        let mut d_mean = vec![0.0; k];
        for class in 0..k {
            let t = theta.get(m, class);
            let clamped = mean[class].max(PROP_PROB_FLOOR);
            value -= t * clamped.ln();
            if mean[class] >= PROP_PROB_FLOOR {
                d_mean[class] = -t / clamped;
            }
        }
        // chain rule through softmax, re-expressed as CE upstream weights:
        // with c_j = d_mean_j * inv * p_j and s = sum_j c_j, the upstream
        // row p * s - c has zero row sum and backward() reproduces the
        // softmax gradient exactly.
        for i in start..end {
            let p_row = probs.row(i);
            let mut c = vec![0.0; k];
            let mut s = 0.0;
            for class in 0..k {
                c[class] = d_mean[class] * inv * p_row[class];
                s += c[class];
            }
            let u_row = upstream.row_mut(i);
            for class in 0..k {
                u_row[class] = p_row[class] * s - c[class];
            }
        }
    }
    Ok((value, upstream))
}

/// Hyperparameters consumed by the composite objectives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveParams {
    pub alpha: f64,
    pub s_ga: f64,
    pub flood_b: f64,
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            s_ga: 1.0,
            flood_b: 0.05,
        }
    }
}

/// Dispatch an objective by kind. `u-stop` trains the unbiased objective;
/// stopping is the trainer's concern.
pub fn evaluate(
    kind: ObjectiveKind,
    batch: &BatchSlice,
    w: &WeightMatrix,
    theta: &ClassPriorMatrix,
    params: &ObjectiveParams,
    model: &MlpModel,
) -> Result<(f64, Matrix)> {
    match kind {
        ObjectiveKind::Unbiased | ObjectiveKind::UStop => unbiased_risk(batch, w, model),
        ObjectiveKind::Biased => biased_proportion(batch, theta, model),
        ObjectiveKind::Prop => proportion_loss(batch, theta, model),
        ObjectiveKind::UCorrect => u_correct(batch, w, model),
        ObjectiveKind::UFlood => u_flood(batch, w, model, params.flood_b),
        ObjectiveKind::UPrr => {
            let cfg = PrrConfig::new(params.alpha, params.s_ga, w)?;
            u_prr(batch, w, theta, &cfg, model)
        }
    }
}

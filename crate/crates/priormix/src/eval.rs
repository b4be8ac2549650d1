//! Metrics, statistical oracles, and the experiment sweep harness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bags::{make_bags, BagCollection, LabeledDataset};
use crate::error::{Error, Result};
use crate::model::{argmax_row, ce_loss_matrix, preset_dims, MlpModel};
use crate::objectives::{unbiased_risk, BatchSlice, ObjectiveKind};
use crate::prior_algebra::{compute_weights, perturb_priors, ClassPriorMatrix, TestPriors};
use crate::seeding;
use crate::trainer::{train, RunRecord, TrainConfig};

/// Fraction of test samples whose predicted class differs from the label.
pub fn test_error(model: &MlpModel, test: &LabeledDataset) -> Result<f64> {
    if test.dim() != model.input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "test data has {} features, model expects {}",
            test.dim(),
            model.input_dim()
        )));
    }
    let logits = model.forward(test.features())?;
    let mut wrong = 0usize;
    for (i, &label) in test.labels().iter().enumerate() {
        if argmax_row(logits.row(i)) + 1 != label {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / test.len() as f64)
}

/// Mean cross-entropy at the true labels; the surrogate risk under the
/// empirical distribution of `data`.
pub fn ce_risk(model: &MlpModel, data: &LabeledDataset) -> Result<f64> {
    let ce = ce_loss_matrix(&model.forward(data.features())?);
    let total: f64 = data
        .labels()
        .iter()
        .enumerate()
        .map(|(i, &label)| ce.get(i, label - 1))
        .sum();
    Ok(total / data.len() as f64)
}

/// The prior-weighted supervised risk sum_k pi_k * mean CE of class k. This
/// is the quantity the rewritten estimator must match in expectation.
pub fn supervised_risk(source: &LabeledDataset, pi: &TestPriors, model: &MlpModel) -> Result<f64> {
    if pi.len() != source.num_classes() {
        return Err(Error::DimensionMismatch(format!(
            "pi has {} entries, source has {} classes",
            pi.len(),
            source.num_classes()
        )));
    }
    let ce = ce_loss_matrix(&model.forward(source.features())?);
    let mut sums = vec![0.0; source.num_classes()];
    let mut counts = vec![0usize; source.num_classes()];
    for (i, &label) in source.labels().iter().enumerate() {
        sums[label - 1] += ce.get(i, label - 1);
        counts[label - 1] += 1;
    }
    Ok(sums
        .iter()
        .zip(&counts)
        .zip(pi.values())
        .map(|((&s, &c), &p)| p * s / c as f64)
        .sum())
}

/// Final test error minus the trajectory minimum.
pub fn error_drop(trajectory: &[f64]) -> Result<f64> {
    let last = *trajectory.last().ok_or(Error::EmptyTrajectory)?;
    let min = trajectory.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(last - min)
}

/// Monte-Carlo check of the rewriting identity on data.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub mc_mean: f64,
    pub supervised_risk: f64,
    pub stderr: f64,
    pub z_score: f64,
    pub redraws: usize,
}

/// Draw fresh bags `redraws` times, average the unbiased risk of a fixed
/// model, and compare against the labeled supervised risk in standard
/// errors. Bag sizes follow the 1/M-of-the-pool convention.
pub fn unbiasedness_oracle(
    source: &LabeledDataset,
    theta: &ClassPriorMatrix,
    pi: &TestPriors,
    model: &MlpModel,
    redraws: usize,
    seed: u64,
) -> Result<OracleReport> {
    if redraws < 2 {
        return Err(Error::Config("need at least 2 redraws".into()));
    }
    let weights = compute_weights(theta, pi)?;
    let supervised = supervised_risk(source, pi, model)?;
    let bag_size = source.len() / theta.num_bags();
    let mut values = Vec::with_capacity(redraws);
    for r in 0..redraws {
        let bags = make_bags(source, theta, bag_size, seeding::mix(seed, &[r as u64]))?;
        let batch = BatchSlice::from_bags(&bags);
        let (value, _) = unbiased_risk(&batch, &weights, model)?;
        values.push(value);
    }
    Ok(oracle_report_from_values(&values, supervised))
}

/// Same Monte-Carlo loop with caller-supplied weights; used for negative
/// controls where the weights are deliberately wrong.
pub fn unbiasedness_oracle_with_weights(
    source: &LabeledDataset,
    theta: &ClassPriorMatrix,
    pi: &TestPriors,
    weights: &crate::prior_algebra::WeightMatrix,
    model: &MlpModel,
    redraws: usize,
    seed: u64,
) -> Result<OracleReport> {
    if redraws < 2 {
        return Err(Error::Config("need at least 2 redraws".into()));
    }
    let supervised = supervised_risk(source, pi, model)?;
    let bag_size = source.len() / theta.num_bags();
    let mut values = Vec::with_capacity(redraws);
    for r in 0..redraws {
        let bags = make_bags(source, theta, bag_size, seeding::mix(seed, &[r as u64]))?;
        let batch = BatchSlice::from_bags(&bags);
        let (value, _) = unbiased_risk(&batch, weights, model)?;
        values.push(value);
    }
    Ok(oracle_report_from_values(&values, supervised))
}

fn oracle_report_from_values(values: &[f64], supervised: f64) -> OracleReport {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let stderr = (var / n).sqrt();
    let diff = (mean - supervised).abs();
    let z_score = if stderr > 0.0 {
        diff / stderr
    } else if diff < 1e-12 {
        0.0
    } else {
        f64::INFINITY
    };
    OracleReport {
        mc_mean: mean,
        supervised_risk: supervised,
        stderr,
        z_score,
        redraws: values.len(),
    }
}

/// A named train/test pair for the sweep harness.
#[derive(Debug, Clone)]
pub struct SweepDataset {
    pub name: String,
    pub train: LabeledDataset,
    pub test: LabeledDataset,
}

/// Full factorial sweep description: datasets x theta settings x noise
/// rates x methods x trials.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub datasets: Vec<SweepDataset>,
    pub theta_settings: Vec<(String, ClassPriorMatrix)>,
    /// Prior perturbation levels; 0.0 means exact priors. Each level becomes
    /// its own derived setting named `<setting>+n<pct>%`.
    pub noise_rates: Vec<f64>,
    pub methods: Vec<ObjectiveKind>,
    pub trials: usize,
    pub base_seed: u64,
    /// Per-run template; `objective` and `seed` are overridden per cell.
    pub template: TrainConfig,
    pub model_depth: usize,
    pub hidden_width: usize,
    /// Test priors; uniform when absent.
    pub test_priors: Option<Vec<f64>>,
    /// Parallel cell groups; 1 = serial.
    pub jobs: usize,
}

/// One (dataset, setting, method, trial) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellResult {
    pub dataset: String,
    pub theta_setting: String,
    pub method: ObjectiveKind,
    pub trial: usize,
    pub err_pct: f64,
    pub drop_pct: f64,
    pub stopped_epoch: Option<usize>,
    pub first_negative_risk_epoch: Option<usize>,
    pub error: Option<String>,
}

/// Mean and sample standard deviation over a cell group's trials.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Aggregate {
    pub dataset: String,
    pub theta_setting: String,
    pub method: ObjectiveKind,
    pub mean_err: f64,
    pub std_err: f64,
    pub mean_drop: f64,
    pub std_drop: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<CellResult>,
    pub aggregates: Vec<Aggregate>,
}

impl SweepResult {
    /// `dataset,theta_setting,method,trial,err_pct,drop_pct` rows.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("dataset,theta_setting,method,trial,err_pct,drop_pct\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.dataset, c.theta_setting, c.method, c.trial, c.err_pct, c.drop_pct
            ));
        }
        out
    }

    pub fn aggregates_csv(&self) -> String {
        let mut out =
            String::from("dataset,theta_setting,method,mean_err,std_err,mean_drop,std_drop,trials\n");
        for a in &self.aggregates {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                a.dataset,
                a.theta_setting,
                a.method,
                a.mean_err,
                a.std_err,
                a.mean_drop,
                a.std_drop,
                a.trials
            ));
        }
        out
    }

    /// Failures, one `dataset,theta_setting,method,trial,error` row each.
    pub fn failures_csv(&self) -> Option<String> {
        let failed: Vec<&CellResult> = self.cells.iter().filter(|c| c.error.is_some()).collect();
        if failed.is_empty() {
            return None;
        }
        let mut out = String::from("dataset,theta_setting,method,trial,error\n");
        for c in failed {
            out.push_str(&format!(
                "{},{},{},{},{:?}\n",
                c.dataset,
                c.theta_setting,
                c.method,
                c.trial,
                c.error.as_deref().unwrap_or("")
            ));
        }
        Some(out)
    }

    pub fn aggregate_for(
        &self,
        dataset: &str,
        setting: &str,
        method: ObjectiveKind,
    ) -> Option<&Aggregate> {
        self.aggregates.iter().find(|a| {
            a.dataset == dataset && a.theta_setting == setting && a.method == method
        })
    }
}

fn setting_label(name: &str, noise_rate: f64) -> String {
    if noise_rate == 0.0 {
        name.to_string()
    } else {
        format!("{name}+n{}%", noise_rate * 100.0)
    }
}

struct CellGroup {
    d_idx: usize,
    s_idx: usize,
    n_idx: usize,
    trial: usize,
}

/// Run every (dataset x setting x noise x method x trial) cell. Bags and
/// model initialization are derived from (setting, trial) only, so methods
/// within a trial are paired on identical data and initial weights. Failures
/// are recorded per cell without aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if spec.datasets.is_empty() || spec.theta_settings.is_empty() || spec.methods.is_empty() {
        return Err(Error::Config(
            "sweep needs at least one dataset, theta setting, and method".into(),
        ));
    }
    let noise_rates = if spec.noise_rates.is_empty() {
        vec![0.0]
    } else {
        spec.noise_rates.clone()
    };

    let mut groups = Vec::new();
    for d_idx in 0..spec.datasets.len() {
        for s_idx in 0..spec.theta_settings.len() {
            for n_idx in 0..noise_rates.len() {
                for trial in 0..spec.trials {
                    groups.push(CellGroup {
                        d_idx,
                        s_idx,
                        n_idx,
                        trial,
                    });
                }
            }
        }
    }

    let run_group = |g: &CellGroup| -> Vec<CellResult> {
        run_cell_group(spec, &noise_rates, g)
    };
    let mut cells: Vec<CellResult> = if spec.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| groups.par_iter().flat_map_iter(run_group).collect())
    } else {
        groups.iter().flat_map(run_group).collect()
    };

    cells.sort_by(|a, b| {
        (&a.dataset, &a.theta_setting, a.method.as_str(), a.trial).cmp(&(
            &b.dataset,
            &b.theta_setting,
            b.method.as_str(),
            b.trial,
        ))
    });

    let mut aggregates = Vec::new();
    for d in &spec.datasets {
        for (s_name, _) in &spec.theta_settings {
            for &rate in &noise_rates {
                let label = setting_label(s_name, rate);
                for &method in &spec.methods {
                    let done: Vec<&CellResult> = cells
                        .iter()
                        .filter(|c| {
                            c.dataset == d.name
                                && c.theta_setting == label
                                && c.method == method
                                && c.error.is_none()
                        })
                        .collect();
                    if done.len() < 2 {
                        continue;
                    }
                    let n = done.len() as f64;
                    let mean = |f: &dyn Fn(&CellResult) -> f64| {
                        done.iter().map(|c| f(c)).sum::<f64>() / n
                    };
                    let std = |f: &dyn Fn(&CellResult) -> f64, mu: f64| {
                        (done.iter().map(|c| (f(c) - mu).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                    };
                    let mean_err = mean(&|c| c.err_pct);
                    let mean_drop = mean(&|c| c.drop_pct);
                    aggregates.push(Aggregate {
                        dataset: d.name.clone(),
                        theta_setting: label.clone(),
                        method,
                        mean_err,
                        std_err: std(&|c| c.err_pct, mean_err),
                        mean_drop,
                        std_drop: std(&|c| c.drop_pct, mean_drop),
                        trials: done.len(),
                    });
                }
            }
        }
    }

    Ok(SweepResult { cells, aggregates })
}

fn run_cell_group(spec: &SweepSpec, noise_rates: &[f64], g: &CellGroup) -> Vec<CellResult> {
    let dataset = &spec.datasets[g.d_idx];
    let (setting_name, theta_true) = &spec.theta_settings[g.s_idx];
    let noise = noise_rates[g.n_idx];
    let label = setting_label(setting_name, noise);
    let idx = [g.d_idx as u64, g.s_idx as u64, g.n_idx as u64, g.trial as u64];
    let bag_seed = seeding::mix(spec.base_seed, &[1, idx[0], idx[1], idx[2], idx[3]]);
    let init_seed = seeding::mix(spec.base_seed, &[2, idx[0], idx[1], idx[2], idx[3]]);
    let shuffle_seed = seeding::mix(spec.base_seed, &[3, idx[0], idx[1], idx[2], idx[3]]);
    let noise_seed = seeding::mix(spec.base_seed, &[4, idx[0], idx[1], idx[2], idx[3]]);

    let fail_all = |msg: String| -> Vec<CellResult> {
        spec.methods
            .iter()
            .map(|&method| CellResult {
                dataset: dataset.name.clone(),
                theta_setting: label.clone(),
                method,
                trial: g.trial,
                err_pct: f64::NAN,
                drop_pct: f64::NAN,
                stopped_epoch: None,
                first_negative_risk_epoch: None,
                error: Some(msg.clone()),
            })
            .collect()
    };

    let setup = || -> Result<(BagCollection, crate::prior_algebra::WeightMatrix, TestPriors, MlpModel)> {
        let k = theta_true.num_classes();
        let pi = match &spec.test_priors {
            Some(v) => TestPriors::new(v.clone())?,
            None => TestPriors::uniform(k),
        };
        // the data follows the true priors; the learner is handed the noisy
        // ones and treats them as exact
        let bag_size = dataset.train.len() / theta_true.num_bags();
        let data_bags = make_bags(&dataset.train, theta_true, bag_size, bag_seed)?;
        let learner_theta = perturb_priors(theta_true, noise, noise_seed)?;
        let bags = data_bags.with_theta(learner_theta.clone())?;
        let weights = compute_weights(&learner_theta, &pi)?;
        let dims = preset_dims(
            spec.model_depth,
            dataset.train.dim(),
            k,
            spec.hidden_width,
        )?;
        let model = MlpModel::init(&dims, init_seed);
        Ok((bags, weights, pi, model))
    };
    let (bags, weights, pi, model) = match setup() {
        Ok(parts) => parts,
        Err(e) => return fail_all(e.to_string()),
    };

    spec.methods
        .iter()
        .map(|&method| {
            let mut cfg = spec.template.clone();
            cfg.objective = method;
            cfg.seed = shuffle_seed;
            match train(&bags, &weights, &pi, model.clone(), &cfg, &dataset.test) {
                Ok((_, record)) => cell_from_record(dataset, &label, method, g.trial, &record),
                Err(e) => CellResult {
                    dataset: dataset.name.clone(),
                    theta_setting: label.clone(),
                    method,
                    trial: g.trial,
                    err_pct: f64::NAN,
                    drop_pct: f64::NAN,
                    stopped_epoch: None,
                    first_negative_risk_epoch: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

fn cell_from_record(
    dataset: &SweepDataset,
    label: &str,
    method: ObjectiveKind,
    trial: usize,
    record: &RunRecord,
) -> CellResult {
    CellResult {
        dataset: dataset.name.clone(),
        theta_setting: label.to_string(),
        method,
        trial,
        err_pct: record.final_err * 100.0,
        drop_pct: record.error_drop * 100.0,
        stopped_epoch: record.stopped_epoch,
        first_negative_risk_epoch: record.first_negative_risk_epoch(),
        error: None,
    }
}

/// Self-contained SVG line chart: one polyline per series of
/// (noise percent, mean error percent) points.
pub fn svg_error_vs_noise(series: &[(String, Vec<(f64, f64)>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const ML: f64 = 60.0;
    const MR: f64 = 20.0;
    const MT: f64 = 30.0;
    const MB: f64 = 50.0;
    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

    let xs: Vec<f64> = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1)).collect();
    let x_max = xs.iter().cloned().fold(1.0f64, f64::max);
    let y_max = ys.iter().cloned().fold(1.0f64, f64::max) * 1.15;

    let to_x = |v: f64| ML + v / x_max * (W - ML - MR);
    let to_y = |v: f64| H - MB - v / y_max * (H - MT - MB);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB
    ));
    svg.push_str(&format!(
        "  <line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - MB
    ));
    // ticks
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = to_y(v);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{y}\" x2=\"{ML}\" y2=\"{y}\" stroke=\"black\"/>\n",
            ML - 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\">{v:.1}</text>\n",
            ML - 8.0,
            y + 4.0
        ));
    }
    let mut x_ticks: Vec<f64> = xs.clone();
    x_ticks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    x_ticks.dedup();
    for v in &x_ticks {
        let x = to_x(*v);
        svg.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            H - MB + 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{v}</text>\n",
            H - MB + 18.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">noise rate (%)</text>\n",
        (W + ML - MR) / 2.0,
        H - 12.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">test error (%)</text>\n",
        (H - MB + MT) / 2.0,
        (H - MB + MT) / 2.0
    ));

    for (s_idx, (name, pts)) in series.iter().enumerate() {
        let color = colors[s_idx % colors.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", to_x(x), to_y(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            coords.join(" ")
        ));
        for &(x, y) in pts {
            svg.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>\n",
                to_x(x),
                to_y(y)
            ));
        }
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" fill=\"{color}\">{name}</text>\n",
            W - MR - 150.0,
            MT + 16.0 * s_idx as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::model::DenseLayer;
    use crate::objectives::partial_risk_table;
    use crate::prior_algebra::{symmetric_theta, WeightMatrix};
    use crate::synth;

    #[test]
    fn error_drop_examples() {
        assert_eq!(error_drop(&[0.10, 0.05, 0.07]).unwrap(), 0.07 - 0.05);
        assert_eq!(error_drop(&[0.9, 0.5, 0.3]).unwrap(), 0.0);
        assert_eq!(error_drop(&[0.4]).unwrap(), 0.0);
        assert!(matches!(error_drop(&[]), Err(Error::EmptyTrajectory)));
    }

    #[test]
    fn test_error_enumerated_by_hand() {
        // logits pick classes 1, 3, 3 for labels 1, 2, 3 -> 1/3 wrong
        let model = MlpModel::from_layers(vec![DenseLayer {
            weights: Matrix::identity(3),
            biases: vec![0.0; 3],
        }])
        .unwrap();
        let data = LabeledDataset::new(
            Matrix::from_rows(&[
                vec![5.0, 1.0, 2.0],
                vec![0.0, 1.0, 3.0],
                vec![0.0, 1.0, 9.0],
            ]),
            vec![1, 2, 3],
        )
        .unwrap();
        let err = test_error(&model, &data).unwrap();
        assert!((err - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_logits_on_balanced_data_err_is_k_minus_one_over_k() {
        let k = 4;
        let model = MlpModel::from_layers(vec![DenseLayer {
            weights: Matrix::zeros(k, 2),
            biases: vec![0.0; k],
        }])
        .unwrap();
        let mut features = Matrix::zeros(4 * 25, 2);
        let mut labels = Vec::new();
        for i in 0..100 {
            features.set(i, 0, i as f64);
            labels.push(i % k + 1);
        }
        let data = LabeledDataset::new(features, labels).unwrap();
        // everything predicted as class 1 by tie-break
        let err = test_error(&model, &data).unwrap();
        assert!((err - (k as f64 - 1.0) / k as f64).abs() < 1e-15);
    }

    #[test]
    fn test_error_cross_checks_with_per_class_accuracy() {
        let classes = synth::gaussian_blob_classes(3, 4, 2.0, 1.2, 5);
        let data = synth::labeled_from_classes(&classes, &[40, 30, 30], 6);
        let model = MlpModel::init(&[4, 16, 3], 7);
        let err = test_error(&model, &data).unwrap();

        // second path: weighted per-class accuracy
        let logits = model.forward(data.features()).unwrap();
        let mut correct = vec![0usize; 3];
        let mut counts = vec![0usize; 3];
        for (i, &label) in data.labels().iter().enumerate() {
            counts[label - 1] += 1;
            if argmax_row(logits.row(i)) + 1 == label {
                correct[label - 1] += 1;
            }
        }
        let acc: f64 = (0..3)
            .map(|k| (counts[k] as f64 / data.len() as f64) * (correct[k] as f64 / counts[k] as f64))
            .sum();
        assert!((err - (1.0 - acc)).abs() < 1e-15);
    }

    #[test]
    fn oracle_accepts_true_weights_and_flags_corrupted_ones() {
        // asymmetric theta, so transposing W is a real corruption
        let k = 3;
        let theta = crate::prior_algebra::diagonal_dominated_theta(k, 40).unwrap();
        let classes = synth::gaussian_blob_classes(k, 4, 2.0, 1.0, 8);
        let source = synth::labeled_from_classes(&classes, &[120, 120, 120], 9);
        let pi = TestPriors::uniform(k);
        let model = MlpModel::init(&[4, 8, 3], 10);

        let report = unbiasedness_oracle(&source, &theta, &pi, &model, 300, 11).unwrap();
        assert!(report.z_score < 4.0, "z = {}", report.z_score);

        // negative control: transposed-misuse weights
        let w = compute_weights(&theta, &pi).unwrap();
        let wrong = WeightMatrix::from_raw_unchecked(w.matrix().transpose());
        let bad =
            unbiasedness_oracle_with_weights(&source, &theta, &pi, &wrong, &model, 300, 11)
                .unwrap();
        assert!(bad.z_score > 4.0, "corrupted z = {}", bad.z_score);
    }

    /// Random diagonal-dominated priors with entries on the 1/denom grid,
    /// so that theta * bag_size is integral and largest-remainder rounding
    /// introduces no composition bias into the Monte-Carlo oracle.
    fn grid_rounded_theta(k: usize, denom: usize, seed: u64) -> crate::prior_algebra::ClassPriorMatrix {
        let raw = crate::prior_algebra::diagonal_dominated_theta(k, seed).unwrap();
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            let mut off_sum = 0.0;
            for j in 0..k {
                if i != j {
                    let v = (raw.get(i, j) * denom as f64).floor() / denom as f64;
                    m.set(i, j, v);
                    off_sum += v;
                }
            }
            m.set(i, i, 1.0 - off_sum);
        }
        crate::prior_algebra::ClassPriorMatrix::new(m).unwrap()
    }

    #[test]
    fn oracle_holds_across_twenty_random_configurations() {
        let bag_size = 200;
        for idx in 0..20u64 {
            let seed = crate::seeding::mix(600, &[idx]);
            let k = 2 + (seed % 3) as usize; // 2..=4 classes
            let theta = grid_rounded_theta(k, bag_size, seed);
            let mut raw: Vec<f64> = (0..k)
                .map(|j| 0.1 + ((crate::seeding::mix(seed, &[j as u64]) % 900) as f64) / 1000.0)
                .collect();
            let total: f64 = raw.iter().sum();
            raw.iter_mut().for_each(|v| *v /= total);
            let pi = TestPriors::new(raw).unwrap();
            let classes = synth::gaussian_blob_classes(k, 3, 2.0, 1.0, seed ^ 5);
            let source = synth::labeled_from_classes(&classes, &vec![bag_size; k], seed ^ 9);
            let model = MlpModel::init(&[3, 16, k], seed ^ 13);
            let report =
                unbiasedness_oracle(&source, &theta, &pi, &model, 1000, seed ^ 17).unwrap();
            assert!(
                report.z_score < 3.0,
                "configuration {idx}: z = {} (mc {} vs supervised {})",
                report.z_score,
                report.mc_mean,
                report.supervised_risk
            );
        }
    }

    #[test]
    fn flood_levels_match_bayes_zero_one_risks() {
        // separable two-Gaussian classes at +/-5; the sign classifier is Bayes
        let theta = crate::prior_algebra::ClassPriorMatrix::new(Matrix::from_rows(&[
            vec![0.8, 0.2],
            vec![0.2, 0.8],
        ]))
        .unwrap();
        let classes = vec![
            synth::GaussianClass { mean: vec![-5.0], std: 1.0 },
            synth::GaussianClass { mean: vec![5.0], std: 1.0 },
        ];
        let n = 2000;
        let bags = synth::sample_mixture_bags(&theta, n, &classes, 21).unwrap();
        let bayes = MlpModel::from_layers(vec![DenseLayer {
            weights: Matrix::from_rows(&[vec![-4.0], vec![4.0]]),
            biases: vec![0.0, 0.0],
        }])
        .unwrap();
        let batch = BatchSlice::from_bags(&bags);
        let table = partial_risk_table(&batch, &bayes, bags.theta()).unwrap();
        let tol = 2.0 / (n as f64).sqrt();
        for m in 0..2 {
            for class in 0..2 {
                let observed = table.zero_one.get(m, class);
                let expected = 1.0 - theta.get(m, class);
                assert!(
                    (observed - expected).abs() < tol,
                    "({m},{class}): {observed} vs {expected}"
                );
            }
        }
    }

    fn tiny_sweep_spec(jobs: usize) -> SweepSpec {
        let (train, test) = synth::demo_dataset(120, 80, 3);
        let theta = symmetric_theta(0.4, 0.15, 4).unwrap();
        let mut template = TrainConfig::new(ObjectiveKind::Unbiased);
        template.epochs = 3;
        template.batches_per_epoch = 3;
        SweepSpec {
            datasets: vec![SweepDataset {
                name: "demo".into(),
                train,
                test,
            }],
            theta_settings: vec![("sym".into(), theta)],
            noise_rates: vec![0.0],
            methods: vec![ObjectiveKind::Unbiased, ObjectiveKind::UPrr],
            trials: 2,
            base_seed: 5,
            template,
            model_depth: 3,
            hidden_width: 16,
            test_priors: None,
            jobs,
        }
    }

    #[test]
    fn sweep_produces_one_cell_per_combination() {
        let result = run_sweep(&tiny_sweep_spec(1)).unwrap();
        assert_eq!(result.cells.len(), 4);
        assert_eq!(result.aggregates.len(), 2);
        for c in &result.cells {
            assert!(c.error.is_none());
            assert!(c.err_pct >= 0.0 && c.err_pct <= 100.0);
            assert!(c.drop_pct >= 0.0);
        }
        let csv = result.cells_csv();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("dataset,theta_setting,method,trial,err_pct,drop_pct"));
    }

    #[test]
    fn sweep_is_deterministic_and_parallelism_invariant() {
        let a = run_sweep(&tiny_sweep_spec(1)).unwrap();
        let b = run_sweep(&tiny_sweep_spec(1)).unwrap();
        assert_eq!(a.cells_csv(), b.cells_csv());
        assert_eq!(a.aggregates_csv(), b.aggregates_csv());
        let c = run_sweep(&tiny_sweep_spec(3)).unwrap();
        assert_eq!(a.cells_csv(), c.cells_csv());
    }

    #[test]
    fn sweep_records_cell_failures_without_aborting() {
        let mut spec = tiny_sweep_spec(1);
        // batches_per_epoch larger than any bag slice -> every cell fails
        spec.template.batches_per_epoch = 10_000;
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.cells.len(), 4);
        assert!(result.cells.iter().all(|c| c.error.is_some()));
        assert!(result.aggregates.is_empty());
        assert!(result.failures_csv().is_some());
    }

    #[test]
    fn noise_rates_become_derived_settings() {
        let mut spec = tiny_sweep_spec(1);
        spec.methods = vec![ObjectiveKind::UPrr];
        spec.noise_rates = vec![0.0, 0.01, 0.03, 0.05];
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.cells.len(), 8); // 4 rates x 2 trials
        assert_eq!(result.aggregates.len(), 4);
        let labels: Vec<&str> = result
            .aggregates
            .iter()
            .map(|a| a.theta_setting.as_str())
            .collect();
        assert!(labels.contains(&"sym"));
        assert!(labels.contains(&"sym+n5%"));
    }

    #[test]
    fn svg_chart_is_self_contained() {
        let series = vec![
            ("u-prr".to_string(), vec![(0.0, 4.5), (1.0, 4.9), (5.0, 6.0)]),
            ("unbiased".to_string(), vec![(0.0, 18.0), (5.0, 21.0)]),
        ];
        let svg = svg_error_vs_noise(&series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("noise rate (%)"));
    }
}

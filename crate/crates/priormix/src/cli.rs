//! Config-file driven command line: prior-matrix generation, single
//! training runs, and experiment sweeps.
//!
//! Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
//! Failures print a machine-readable JSON object to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bags;
use crate::error::{Error, Result};
use crate::eval::{self, SweepDataset, SweepSpec};
use crate::model::{preset_dims, MlpModel, DEFAULT_HIDDEN_WIDTH};
use crate::objectives::{ObjectiveKind, ObjectiveParams};
use crate::prior_algebra::{
    compute_weights, diagonal_dominated_theta, nonsquare_theta, perturb_priors, symmetric_theta,
    ClassPriorMatrix, TestPriors,
};
use crate::seeding;
use crate::synth;
use crate::trainer::{train, TrainConfig};

/// Hyperparameter grids of the experiment protocol; configs must stay on
/// them unless `--allow-offgrid` is passed.
pub const LR_GRID: [f64; 5] = [5e-5, 1e-4, 2e-4, 5e-4, 1e-3];
pub const BATCHES_GRID: [usize; 6] = [10, 20, 50, 100, 200, 500];
pub const ALPHA_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const S_GA_GRID: [f64; 7] = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const FLOOD_GRID: [f64; 3] = [0.0, 0.05, 0.1];

/// Environment variable that overrides `base_seed`.
pub const SEED_ENV: &str = "PRIORMIX_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetConfig {
    /// `label,f1,...,fd` CSVs; scaling is fit on the training file.
    Csv { train: PathBuf, test: PathBuf },
    /// Big-endian IDX image/label pairs.
    Idx {
        train_images: PathBuf,
        train_labels: PathBuf,
        test_images: PathBuf,
        test_labels: PathBuf,
    },
    /// Built-in deterministic synthetic datasets.
    Synth {
        preset: SynthPreset,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthPreset {
    /// 200 train / 200 test samples, 4 classes, 5 features.
    Demo,
    /// Pendigits-shaped: 10 classes, 16 features, 7494 / 3498 samples.
    PendigitsLike,
    /// Same family at 1000 / 500 samples for quick runs.
    PendigitsLikeSmall,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ThetaConfig {
    Symmetric { a: f64, b: f64, k: usize },
    Diag { k: usize, seed: u64 },
    Nonsquare { k: usize, seed: u64 },
    File { path: PathBuf },
}

fn default_lr() -> f64 {
    1e-3
}
fn default_epochs() -> usize {
    500
}
fn default_batches() -> usize {
    50
}
fn default_alpha() -> f64 {
    0.5
}
fn default_s_ga() -> f64 {
    1.0
}
fn default_flood() -> f64 {
    0.05
}
fn default_depth() -> usize {
    3
}
fn default_hidden() -> usize {
    DEFAULT_HIDDEN_WIDTH
}
fn default_trials() -> usize {
    5
}
fn default_base_seed() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperConfig {
    #[serde(default = "default_lr")]
    pub lr: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_batches")]
    pub batches_per_epoch: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_s_ga")]
    pub s_ga: f64,
    #[serde(default = "default_flood")]
    pub flood_b: f64,
    #[serde(default)]
    pub weight_decay: f64,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_hidden")]
    pub hidden: usize,
}

impl Default for HyperConfig {
    fn default() -> Self {
        serde_json::from_str("{}").unwrap()
    }
}

/// One experiment: dataset, prior matrix, method(s), hyperparameters,
/// trial count, and output location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetConfig,
    pub theta: ThetaConfig,
    /// Test-distribution priors; uniform when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_priors: Option<Vec<f64>>,
    pub method: ObjectiveKind,
    /// Sweeps run these methods; defaults to `[method]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<ObjectiveKind>>,
    #[serde(default)]
    pub hyper: HyperConfig,
    /// Prior perturbation treated as the truth during learning.
    #[serde(default)]
    pub noise_rate: f64,
    /// Sweeps run these noise levels; defaults to `[noise_rate]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_rates: Option<Vec<f64>>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_base_seed")]
    pub base_seed: u64,
    pub output_dir: PathBuf,
}

fn on_grid(value: f64, grid: &[f64]) -> bool {
    grid.iter().any(|&g| (g - value).abs() < 1e-12)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        Ok(cfg)
    }

    /// Structural checks plus the hyperparameter grid gate.
    pub fn validate(&self, allow_offgrid: bool) -> Result<()> {
        match &self.dataset {
            DatasetConfig::Csv { train, test } => {
                for p in [train, test] {
                    if !p.exists() {
                        return Err(Error::Config(format!("dataset file {} not found", p.display())));
                    }
                }
            }
            DatasetConfig::Idx {
                train_images,
                train_labels,
                test_images,
                test_labels,
            } => {
                for p in [train_images, train_labels, test_images, test_labels] {
                    if !p.exists() {
                        return Err(Error::Config(format!("dataset file {} not found", p.display())));
                    }
                }
            }
            DatasetConfig::Synth { .. } => {}
        }
        if let ThetaConfig::File { path } = &self.theta {
            if !path.exists() {
                return Err(Error::Config(format!("theta file {} not found", path.display())));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        for &rate in self.noise_levels().iter() {
            if !(0.0..1.0).contains(&rate) {
                return Err(Error::Config(format!("noise_rate {rate} outside [0, 1)")));
            }
        }
        if let Some(pi) = &self.test_priors {
            TestPriors::new(pi.clone())?;
        }
        if !allow_offgrid {
            let h = &self.hyper;
            if !on_grid(h.lr, &LR_GRID) {
                return Err(Error::Config(format!(
                    "lr {} is off the grid {:?}; pass --allow-offgrid to override",
                    h.lr, LR_GRID
                )));
            }
            if !BATCHES_GRID.contains(&h.batches_per_epoch) {
                return Err(Error::Config(format!(
                    "batches_per_epoch {} is off the grid {:?}; pass --allow-offgrid to override",
                    h.batches_per_epoch, BATCHES_GRID
                )));
            }
            if !on_grid(h.alpha, &ALPHA_GRID) {
                return Err(Error::Config(format!(
                    "alpha {} is off the grid {:?}; pass --allow-offgrid to override",
                    h.alpha, ALPHA_GRID
                )));
            }
            if !on_grid(h.s_ga, &S_GA_GRID) {
                return Err(Error::Config(format!(
                    "s_ga {} is off the grid {:?}; pass --allow-offgrid to override",
                    h.s_ga, S_GA_GRID
                )));
            }
            if !on_grid(h.flood_b, &FLOOD_GRID) {
                return Err(Error::Config(format!(
                    "flood_b {} is off the grid {:?}; pass --allow-offgrid to override",
                    h.flood_b, FLOOD_GRID
                )));
            }
        }
        Ok(())
    }

    pub fn methods_list(&self) -> Vec<ObjectiveKind> {
        self.methods.clone().unwrap_or_else(|| vec![self.method])
    }

    pub fn noise_levels(&self) -> Vec<f64> {
        self.noise_rates.clone().unwrap_or_else(|| vec![self.noise_rate])
    }

    fn dataset_name(&self) -> String {
        match &self.dataset {
            DatasetConfig::Csv { train, .. } => train
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into()),
            DatasetConfig::Idx { .. } => "idx".into(),
            DatasetConfig::Synth { preset, .. } => match preset {
                SynthPreset::Demo => "synth-demo".into(),
                SynthPreset::PendigitsLike => "pendigits-like".into(),
                SynthPreset::PendigitsLikeSmall => "pendigits-like-small".into(),
            },
        }
    }

    fn theta_name(&self) -> String {
        match &self.theta {
            ThetaConfig::Symmetric { a, b, .. } => format!("sym-a{a}-b{b}"),
            ThetaConfig::Diag { seed, .. } => format!("diag-s{seed}"),
            ThetaConfig::Nonsquare { seed, .. } => format!("nonsq-s{seed}"),
            ThetaConfig::File { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "theta".into()),
        }
    }

    pub fn load_dataset(&self) -> Result<(bags::LabeledDataset, bags::LabeledDataset)> {
        match &self.dataset {
            DatasetConfig::Csv { train, test } => bags::load_csv_pair(train, test),
            DatasetConfig::Idx {
                train_images,
                train_labels,
                test_images,
                test_labels,
            } => Ok((
                bags::load_idx(train_images, train_labels)?,
                bags::load_idx(test_images, test_labels)?,
            )),
            DatasetConfig::Synth { preset, seed } => Ok(match preset {
                SynthPreset::Demo => synth::demo_dataset(200, 200, *seed),
                SynthPreset::PendigitsLike => synth::pendigits_like(*seed),
                SynthPreset::PendigitsLikeSmall => synth::pendigits_like_sized(1000, 500, *seed),
            }),
        }
    }

    pub fn build_theta(&self) -> Result<ClassPriorMatrix> {
        match &self.theta {
            ThetaConfig::Symmetric { a, b, k } => symmetric_theta(*a, *b, *k),
            ThetaConfig::Diag { k, seed } => diagonal_dominated_theta(*k, *seed),
            ThetaConfig::Nonsquare { k, seed } => nonsquare_theta(*k, *seed),
            ThetaConfig::File { path } => ClassPriorMatrix::load_csv(path),
        }
    }

    pub fn train_template(&self, method: ObjectiveKind) -> TrainConfig {
        TrainConfig {
            objective: method,
            epochs: self.hyper.epochs,
            batches_per_epoch: self.hyper.batches_per_epoch,
            learning_rate: self.hyper.lr,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            weight_decay: self.hyper.weight_decay,
            params: ObjectiveParams {
                alpha: self.hyper.alpha,
                s_ga: self.hyper.s_ga,
                flood_b: self.hyper.flood_b,
            },
            seed: 0,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "priormix",
    about = "Train K-class classifiers from unlabeled bags with known class priors"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a class-prior matrix CSV and report its rank/conditioning.
    GenTheta(GenThetaArgs),
    /// Run one training job from a JSON config.
    Train(TrainArgs),
    /// Run the full (methods x noise x trials) sweep from a JSON config.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct GenThetaArgs {
    /// symmetric | diag | nonsquare
    #[arg(long)]
    kind: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    config: PathBuf,
    /// Accept hyperparameters outside the named grids.
    #[arg(long)]
    allow_offgrid: bool,
    /// Override the config's base_seed (flag beats PRIORMIX_SEED).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    epochs: Option<usize>,
    /// Override the config's method.
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    allow_offgrid: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Parallel cell groups.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::InvalidSimplex(_) | Error::Json(_) => 2,
        Error::Io(_)
        | Error::ParseError { .. }
        | Error::LabelRangeError { .. }
        | Error::MagicMismatch { .. }
        | Error::CountMismatch { .. }
        | Error::InsufficientClassSamples { .. }
        | Error::InvalidDataset(_)
        | Error::DimensionMismatch(_) => 3,
        Error::RankDeficient(_)
        | Error::GenerationFailed { .. }
        | Error::NonFiniteLoss { .. }
        | Error::EmptyTrajectory => 4,
    }
}

/// Parse argv, run, and map errors onto the documented exit codes with a
/// JSON error report on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version by printing and "erroring"
            if e.use_stderr() {
                eprintln!("{e}");
                return 2;
            }
            print!("{e}");
            return 0;
        }
    };
    let result = match cli.command {
        Command::GenTheta(args) => cmd_gen_theta(args),
        Command::Train(args) => cmd_train(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code_for(&e);
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "code": code })
            );
            code
        }
    }
}

fn cmd_gen_theta(args: GenThetaArgs) -> Result<()> {
    let theta = match args.kind.as_str() {
        "symmetric" => {
            let a = args.a.ok_or_else(|| Error::Config("--a is required for symmetric".into()))?;
            let b = args.b.ok_or_else(|| Error::Config("--b is required for symmetric".into()))?;
            symmetric_theta(a, b, args.k)?
        }
        "diag" => diagonal_dominated_theta(args.k, args.seed)?,
        "nonsquare" => nonsquare_theta(args.k, args.seed)?,
        other => {
            return Err(Error::Config(format!(
                "unknown theta kind {other:?}; expected symmetric|diag|nonsquare"
            )))
        }
    };
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    theta.save_csv(&args.out)?;
    let sigma = theta.singular_values();
    println!(
        "wrote {} ({}x{}), rank {}, condition number {:.4}",
        args.out.display(),
        theta.num_bags(),
        theta.num_classes(),
        crate::linalg::numerical_rank(&sigma, theta.num_bags(), theta.num_classes()),
        theta.condition_number()
    );
    Ok(())
}

fn env_seed() -> Option<u64> {
    std::env::var(SEED_ENV).ok().and_then(|v| v.parse().ok())
}

fn effective_seed(config_seed: u64, flag: Option<u64>) -> u64 {
    flag.or_else(env_seed).unwrap_or(config_seed)
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(lr) = args.lr {
        config.hyper.lr = lr;
    }
    if let Some(epochs) = args.epochs {
        config.hyper.epochs = epochs;
    }
    if let Some(objective) = &args.objective {
        config.method = objective.parse()?;
    }
    if let Some(dir) = &args.output_dir {
        config.output_dir = dir.clone();
    }
    config.base_seed = effective_seed(config.base_seed, args.seed);
    config.validate(args.allow_offgrid)?;

    let (train_data, test_data) = config.load_dataset()?;
    let theta_true = config.build_theta()?;
    let k = theta_true.num_classes();
    let pi = match &config.test_priors {
        Some(v) => TestPriors::new(v.clone())?,
        None => TestPriors::uniform(k),
    };

    let base = config.base_seed;
    let bag_seed = seeding::mix(base, &[1, 0, 0, 0, 0]);
    let init_seed = seeding::mix(base, &[2, 0, 0, 0, 0]);
    let shuffle_seed = seeding::mix(base, &[3, 0, 0, 0, 0]);
    let noise_seed = seeding::mix(base, &[4, 0, 0, 0, 0]);

    let bag_size = train_data.len() / theta_true.num_bags();
    let data_bags = bags::make_bags(&train_data, &theta_true, bag_size, bag_seed)?;
    let learner_theta = perturb_priors(&theta_true, config.noise_rate, noise_seed)?;
    let bag_collection = data_bags.with_theta(learner_theta.clone())?;
    let weights = compute_weights(&learner_theta, &pi)?;

    let dims = preset_dims(config.hyper.depth, train_data.dim(), k, config.hyper.hidden)?;
    let model = MlpModel::init(&dims, init_seed);
    let mut train_cfg = config.train_template(config.method);
    train_cfg.seed = shuffle_seed;

    let (trained, record) = train(&bag_collection, &weights, &pi, model, &train_cfg, &test_data)?;

    std::fs::create_dir_all(&config.output_dir)?;
    let run_csv = config.output_dir.join("run.csv");
    std::fs::write(&run_csv, record.to_csv_string())?;
    let summary_path = config.output_dir.join("summary.json");
    let mut summary = record.summary_json();
    summary["experiment"] = serde_json::to_value(&config)?;
    std::fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;
    let model_path = config.output_dir.join("model.bin");
    trained.save(&model_path)?;

    println!(
        "{}",
        serde_json::json!({
            "err": record.final_err,
            "drop": record.error_drop,
            "stopped_epoch": record.stopped_epoch,
            "outputs": {
                "run_csv": run_csv,
                "summary": summary_path,
                "model": model_path,
            }
        })
    );
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(dir) = &args.output_dir {
        config.output_dir = dir.clone();
    }
    config.base_seed = effective_seed(config.base_seed, args.seed);
    config.validate(args.allow_offgrid)?;

    let (train_data, test_data) = config.load_dataset()?;
    let theta = config.build_theta()?;
    let methods = config.methods_list();
    let spec = SweepSpec {
        datasets: vec![SweepDataset {
            name: config.dataset_name(),
            train: train_data,
            test: test_data,
        }],
        theta_settings: vec![(config.theta_name(), theta)],
        noise_rates: config.noise_levels(),
        methods: methods.clone(),
        trials: config.trials,
        base_seed: config.base_seed,
        template: config.train_template(config.method),
        model_depth: config.hyper.depth,
        hidden_width: config.hyper.hidden,
        test_priors: config.test_priors.clone(),
        jobs: args.jobs.max(1),
    };
    let result = eval::run_sweep(&spec)?;

    std::fs::create_dir_all(&config.output_dir)?;
    let cells_path = config.output_dir.join("cells.csv");
    std::fs::write(&cells_path, result.cells_csv())?;
    let agg_path = config.output_dir.join("aggregates.csv");
    std::fs::write(&agg_path, result.aggregates_csv())?;
    if let Some(failures) = result.failures_csv() {
        std::fs::write(config.output_dir.join("failures.csv"), failures)?;
    }

    // error-vs-noise chart when the sweep spans several noise levels
    let noise_levels = config.noise_levels();
    if noise_levels.len() > 1 {
        let base_setting = config.theta_name();
        let series: Vec<(String, Vec<(f64, f64)>)> = methods
            .iter()
            .map(|&method| {
                let pts: Vec<(f64, f64)> = noise_levels
                    .iter()
                    .filter_map(|&rate| {
                        let label = if rate == 0.0 {
                            base_setting.clone()
                        } else {
                            format!("{base_setting}+n{}%", rate * 100.0)
                        };
                        result
                            .aggregate_for(&spec.datasets[0].name, &label, method)
                            .map(|a| (rate * 100.0, a.mean_err))
                    })
                    .collect();
                (method.to_string(), pts)
            })
            .collect();
        std::fs::write(
            config.output_dir.join("noise_sweep.svg"),
            eval::svg_error_vs_noise(&series),
        )?;
    }

    print!("{}", result.aggregates_csv());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_config_json() -> String {
        serde_json::json!({
            "dataset": {"kind": "synth", "preset": "demo", "seed": 3},
            "theta": {"kind": "symmetric", "a": 0.4, "b": 0.15, "k": 4},
            "method": "u-prr",
            "methods": ["unbiased", "u-prr"],
            "hyper": {"lr": 1e-3, "epochs": 4, "batches_per_epoch": 10},
            "noise_rate": 0.0,
            "trials": 2,
            "base_seed": 7,
            "output_dir": "/tmp/priormix-out"
        })
        .to_string()
    }

    #[test]
    fn config_round_trips_through_json() {
        let parsed: ExperimentConfig = serde_json::from_str(&sample_config_json()).unwrap();
        let text = serde_json::to_string(&parsed).unwrap();
        let reparsed: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, reparsed);
    }

    #[test]
    fn offgrid_hyperparameters_are_rejected_without_flag() {
        let mut cfg: ExperimentConfig = serde_json::from_str(&sample_config_json()).unwrap();
        cfg.hyper.lr = 3.3e-4;
        assert!(matches!(cfg.validate(false), Err(Error::Config(_))));
        assert!(cfg.validate(true).is_ok());

        cfg.hyper.lr = 1e-3;
        cfg.hyper.s_ga = 0.33;
        assert!(matches!(cfg.validate(false), Err(Error::Config(_))));

        cfg.hyper.s_ga = 2.0;
        assert!(cfg.validate(false).is_ok());
    }

    #[test]
    fn missing_files_fail_validation() {
        let mut cfg: ExperimentConfig = serde_json::from_str(&sample_config_json()).unwrap();
        cfg.dataset = DatasetConfig::Csv {
            train: PathBuf::from("/nonexistent/train.csv"),
            test: PathBuf::from("/nonexistent/test.csv"),
        };
        assert!(matches!(cfg.validate(true), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_method_fails_at_parse_time() {
        let bad = sample_config_json().replace("u-prr", "mystery");
        let parsed: std::result::Result<ExperimentConfig, _> = serde_json::from_str(&bad);
        assert!(parsed.is_err());
    }

    #[test]
    fn exit_codes_map_error_classes() {
        assert_eq!(exit_code_for(&Error::Config("x".into())), 2);
        assert_eq!(exit_code_for(&Error::InvalidSimplex("x".into())), 2);
        assert_eq!(
            exit_code_for(&Error::CountMismatch { images: 1, labels: 2 }),
            3
        );
        assert_eq!(exit_code_for(&Error::NonFiniteLoss { epoch: 3 }), 4);
        assert_eq!(exit_code_for(&Error::RankDeficient("x".into())), 4);
    }
}

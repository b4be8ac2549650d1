//! Multi-class classification from multiple unlabeled datasets.
//!
//! Given M feature-only training sets ("bags") and each bag's class-prior
//! vector, this crate trains a K-class classifier by rewriting the
//! supervised risk as a weighted sum of bag-wise expectations. The weights
//! `W = (Pi * Theta^+)^T` come from the Moore-Penrose pseudoinverse of the
//! prior matrix and may be negative, which makes the plain estimator prone
//! to negative-risk overfitting; partial risk regularization holds each
//! per-(bag, class) zero-one partial risk at its known optimum `1 - theta`
//! to prevent that. The usual baselines (pseudo-labeling, proportion
//! matching, per-class correction, early stopping, global flooding) are
//! included, along with a sweep harness and CLI for running the full
//! experiment grid.
//!
//! Module map:
//! - [`prior_algebra`]: prior matrices, test priors, rewriting weights.
//! - [`bags`]: dataset loading (CSV/IDX) and bag synthesis.
//! - [`model`]: from-scratch MLP with weighted-CE reverse-mode gradients.
//! - [`objectives`]: every training objective as (value, upstream weights).
//! - [`trainer`]: the epoch loop, Adam, early stopping, run records.
//! - [`eval`]: metrics, unbiasedness oracle, experiment sweeps.
//! - [`synth`]: deterministic synthetic datasets.
//! - [`cli`]: config-file driven command line.

pub mod bags;
pub mod cli;
pub mod error;
pub mod eval;
pub mod linalg;
pub mod model;
pub mod objectives;
pub mod prior_algebra;
pub mod seeding;
pub mod synth;
pub mod trainer;

pub use error::{Error, Result};

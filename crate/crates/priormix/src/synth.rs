//! Deterministic synthetic datasets.
//!
//! Two families: isotropic Gaussian blob classification problems for unit
//! and oracle tests, and a Pendigits-shaped benchmark surrogate (10 classes,
//! 16 features, 7494 train / 3498 test, multimodal classes) used where the
//! real tabular benchmark is not on disk. Everything is a pure function of
//! its seed.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bags::{BagCollection, LabeledDataset, MinMaxScaler, UnlabeledBag};
use crate::error::Result;
use crate::linalg::Matrix;
use crate::prior_algebra::ClassPriorMatrix;
use crate::seeding;

fn normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; two uniforms per draw keeps the stream layout simple.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Isotropic Gaussian class in `d` dimensions.
#[derive(Debug, Clone)]
pub struct GaussianClass {
    pub mean: Vec<f64>,
    pub std: f64,
}

impl GaussianClass {
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.mean.iter().map(|&m| m + self.std * normal(rng)).collect()
    }
}

/// `k` Gaussian blobs with means spaced `sep` apart along random directions.
pub fn gaussian_blob_classes(k: usize, d: usize, sep: f64, std: f64, seed: u64) -> Vec<GaussianClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let mut dir: Vec<f64> = (0..d).map(|_| normal(&mut rng)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            dir.iter_mut().for_each(|x| *x *= sep / norm);
            GaussianClass { mean: dir, std }
        })
        .collect()
}

/// Labeled dataset with `counts[k]` samples of class `k+1` drawn from the
/// given class-conditional Gaussians.
pub fn labeled_from_classes(
    classes: &[GaussianClass],
    counts: &[usize],
    seed: u64,
) -> LabeledDataset {
    assert_eq!(classes.len(), counts.len());
    let d = classes[0].mean.len();
    let n: usize = counts.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Matrix::zeros(n, d);
    let mut labels = Vec::with_capacity(n);
    let mut row = 0;
    for (class_zero, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            let x = classes[class_zero].sample(&mut rng);
            features.row_mut(row).copy_from_slice(&x);
            labels.push(class_zero + 1);
            row += 1;
        }
    }
    LabeledDataset::new(features, labels).unwrap()
}

/// Bags drawn i.i.d. from the mixtures q_m = sum_k theta_{m,k} p_k, i.e. the
/// sampling model of the problem setup (class drawn per point, then the
/// point from that class's density).
pub fn sample_mixture_bags(
    theta: &ClassPriorMatrix,
    bag_size: usize,
    classes: &[GaussianClass],
    seed: u64,
) -> Result<BagCollection> {
    assert_eq!(classes.len(), theta.num_classes());
    let d = classes[0].mean.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bags = Vec::with_capacity(theta.num_bags());
    for m in 0..theta.num_bags() {
        let row = theta.row(m);
        let mut features = Matrix::zeros(bag_size, d);
        let mut labels = Vec::with_capacity(bag_size);
        for i in 0..bag_size {
            let mut u: f64 = rng.gen_range(0.0..1.0);
            let mut class = theta.num_classes() - 1;
            for (k, &p) in row.iter().enumerate() {
                if u < p {
                    class = k;
                    break;
                }
                u -= p;
            }
            let x = classes[class].sample(&mut rng);
            features.row_mut(i).copy_from_slice(&x);
            labels.push(class + 1);
        }
        bags.push(UnlabeledBag::new(m + 1, features, Some(labels)));
    }
    BagCollection::new(bags, theta.clone())
}

/// Split `total` into `k` near-equal class counts (larger counts first).
pub fn balanced_counts(total: usize, k: usize) -> Vec<usize> {
    crate::bags::split_bag_sizes(total, k)
}

/// A small 4-class, 5-feature problem. Returns `(train, test)` scaled by the
/// training split. Used by the bundled demo config and smoke tests.
pub fn demo_dataset(n_train: usize, n_test: usize, seed: u64) -> (LabeledDataset, LabeledDataset) {
    let classes = gaussian_blob_classes(4, 5, 2.2, 1.0, seeding::mix(seed, &[1]));
    let train = labeled_from_classes(&classes, &balanced_counts(n_train, 4), seeding::mix(seed, &[2]));
    let test = labeled_from_classes(&classes, &balanced_counts(n_test, 4), seeding::mix(seed, &[3]));
    scale_pair(train, test)
}

fn scale_pair(train: LabeledDataset, test: LabeledDataset) -> (LabeledDataset, LabeledDataset) {
    let scaler = MinMaxScaler::fit(train.features());
    let train_scaled =
        LabeledDataset::new(scaler.transform(train.features()), train.labels().to_vec()).unwrap();
    let test_scaled =
        LabeledDataset::new(scaler.transform(test.features()), test.labels().to_vec()).unwrap();
    (train_scaled, test_scaled)
}

/// Pendigits-shaped surrogate: 10 classes, 16 features, 7494 training and
/// 3498 test samples. Classes are two-mode anisotropic Gaussians with a
/// small heavy-tail fraction, calibrated so a depth-3 MLP reaches a few
/// percent supervised test error.
pub fn pendigits_like(seed: u64) -> (LabeledDataset, LabeledDataset) {
    pendigits_like_sized(7494, 3498, seed)
}

/// Same distribution family as [`pendigits_like`] at arbitrary sizes.
///
/// Every class is an irregular multi-mode constellation plus a smaller
/// confusable mode at the skirt of its partner class's territory (classes
/// are paired 1-2, 3-4, ...), mimicking the confusable digit pairs of the
/// real benchmark. The confusable pockets are learnable under clean
/// training but sit at thin margins, so they are the first casualties of
/// negative-risk overfitting; swapping both pockets of a pair leaves bag
/// marginals nearly unchanged, which handicaps pure proportion matching.
pub fn pendigits_like_sized(
    n_train: usize,
    n_test: usize,
    seed: u64,
) -> (LabeledDataset, LabeledDataset) {
    const K: usize = 10;
    const D: usize = 16;
    /// Fraction of each class drawn from its confusable secondary mode.
    const SECONDARY_FRACTION: f64 = 0.12;
    /// Mahalanobis distance of the secondary mode from the partner class's
    /// anchor, measured in the partner's metric.
    const SECONDARY_OFFSET: f64 = 1.9;
    /// Secondary modes are tighter than the territory they invade.
    const SECONDARY_SHRINK: f64 = 0.6;
    /// Primary constellation modes per class.
    const PRIMARY_MODES: usize = 1;

    let mut rng = ChaCha8Rng::seed_from_u64(seeding::mix(seed, &[101]));
    let center = Uniform::new(0.18, 0.82);
    let spread = Uniform::new(0.05, 0.11);
    let wobble = Uniform::new(0.35, 1.0);

    // each class: an anchor plus satellites drifting off it, so the class
    // occupies an irregular constellation rather than one blob
    let primary: Vec<Vec<(Vec<f64>, Vec<f64>)>> = (0..K)
        .map(|_| {
            let anchor: Vec<f64> = (0..D).map(|_| center.sample(&mut rng)).collect();
            let anchor_stds: Vec<f64> = (0..D).map(|_| spread.sample(&mut rng)).collect();
            let mut modes = vec![(anchor.clone(), anchor_stds.clone())];
            for _ in 1..PRIMARY_MODES {
                let dir: Vec<f64> = (0..D).map(|_| normal(&mut rng)).collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
                let dist = 2.4 * wobble.sample(&mut rng);
                let mean: Vec<f64> = (0..D)
                    .map(|j| anchor[j] + dist * anchor_stds[j] * dir[j] / norm)
                    .collect();
                let w = wobble.sample(&mut rng);
                let stds: Vec<f64> = anchor_stds.iter().map(|s| s * w).collect();
                modes.push((mean, stds));
            }
            modes
        })
        .collect();
    // swap zone: a tight pocket at the skirt of the paired class's anchor
    let secondary: Vec<(Vec<f64>, Vec<f64>)> = (0..K)
        .map(|c| {
            let (nb_mean, nb_stds) = &primary[c ^ 1][0];
            let dir: Vec<f64> = (0..D).map(|_| normal(&mut rng)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
            let mean: Vec<f64> = (0..D)
                .map(|j| nb_mean[j] + SECONDARY_OFFSET * nb_stds[j] * dir[j] / norm)
                .collect();
            let stds: Vec<f64> = nb_stds.iter().map(|s| s * SECONDARY_SHRINK).collect();
            (mean, stds)
        })
        .collect();

    let draw_split = |counts: &[usize], split_seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed);
        let n: usize = counts.iter().sum();
        let mut features = Matrix::zeros(n, D);
        let mut labels = Vec::with_capacity(n);
        let mut row = 0;
        for (class_zero, &count) in counts.iter().enumerate() {
            for _ in 0..count {
                let (mean, stds) = if rng.gen_range(0.0..1.0) < SECONDARY_FRACTION {
                    &secondary[class_zero]
                } else {
                    &primary[class_zero][rng.gen_range(0..PRIMARY_MODES)]
                };
                // margin continuum: a slice of every mode reaches out at
                // varied depth, so decision surfaces see all margin levels
                let scale = if rng.gen_range(0.0..1.0) < 0.015 {
                    rng.gen_range(1.5..2.5)
                } else {
                    1.0
                };
                let out = features.row_mut(row);
                for j in 0..D {
                    out[j] = mean[j] + scale * stds[j] * normal(&mut rng);
                }
                labels.push(class_zero + 1);
                row += 1;
            }
        }
        LabeledDataset::new(features, labels).unwrap()
    };

    let train = draw_split(&balanced_counts(n_train, K), seeding::mix(seed, &[102]));
    let test = draw_split(&balanced_counts(n_test, K), seeding::mix(seed, &[103]));
    scale_pair(train, test)
}

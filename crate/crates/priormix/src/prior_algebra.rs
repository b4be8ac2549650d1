//! Class-prior matrices, test priors, and the rewriting weights.
//!
//! A `ClassPriorMatrix` holds the M x K row-stochastic matrix of bag class
//! priors. `compute_weights` turns it, together with the test priors, into
//! the M x K coefficient matrix W = (Pi * Theta^+)^T whose entries (possibly
//! negative) make the classification risk expressible through the bag
//! distributions alone. The defining identity W^T * Theta = diag(pi) is
//! validated on every constructed `WeightMatrix`.

use std::path::Path;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::seeding;

/// Row sums and prior vectors must hit 1 within this tolerance.
pub const SIMPLEX_TOL: f64 = 1e-9;
/// Elementwise tolerance on the rewriting identity W^T * Theta = diag(pi).
pub const REWRITE_TOL: f64 = 1e-8;
/// Bounded retry count for random generators that can draw rank-deficient
/// matrices.
const MAX_GENERATION_ATTEMPTS: usize = 100;

/// Row-stochastic M x K matrix of bag class priors with full column rank.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPriorMatrix {
    entries: Matrix,
}

impl ClassPriorMatrix {
    /// Validates non-negativity, row sums, M >= K, and full column rank
    /// (via singular values against the standard cutoff).
    pub fn new(entries: Matrix) -> Result<Self> {
        let (m, k) = (entries.rows(), entries.cols());
        if m == 0 || k == 0 {
            return Err(Error::InvalidSimplex("empty prior matrix".into()));
        }
        if m < k {
            return Err(Error::RankDeficient(format!(
                "{m} bags cannot span {k} classes (need M >= K)"
            )));
        }
        for i in 0..m {
            let mut sum = 0.0;
            for j in 0..k {
                let v = entries.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidSimplex(format!(
                        "entry ({i},{j}) = {v} is negative or non-finite"
                    )));
                }
                sum += v;
            }
            if (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::InvalidSimplex(format!(
                    "row {i} sums to {sum}, expected 1"
                )));
            }
        }
        let s = linalg::svd(&entries);
        let rank = linalg::numerical_rank(&s.sigma, m, k);
        if rank < k {
            return Err(Error::RankDeficient(format!(
                "numerical column rank {rank} < {k}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn num_bags(&self) -> usize {
        self.entries.rows()
    }

    pub fn num_classes(&self) -> usize {
        self.entries.cols()
    }

    pub fn get(&self, bag: usize, class: usize) -> f64 {
        self.entries.get(bag, class)
    }

    pub fn row(&self, bag: usize) -> &[f64] {
        self.entries.row(bag)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// Descending singular values; used for rank / conditioning reports.
    pub fn singular_values(&self) -> Vec<f64> {
        linalg::svd(&self.entries).sigma
    }

    pub fn condition_number(&self) -> f64 {
        let s = self.singular_values();
        let min = s.last().copied().unwrap_or(0.0);
        if min == 0.0 {
            f64::INFINITY
        } else {
            s[0] / min
        }
    }

    /// One row per bag, K plain-decimal columns, no header.
    pub fn to_csv_string(&self) -> String {
        matrix_to_csv(&self.entries)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        Self::new(matrix_from_csv(text, origin)?)
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv_str(&text, &path.display().to_string())
    }
}

/// Length-K vector of test-distribution class priors.
#[derive(Debug, Clone, PartialEq)]
pub struct TestPriors {
    values: Vec<f64>,
}

impl TestPriors {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSimplex("empty prior vector".into()));
        }
        let mut sum = 0.0;
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSimplex(format!(
                    "pi[{k}] = {v} is negative or non-finite"
                )));
            }
            sum += v;
        }
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidSimplex(format!(
                "pi sums to {sum}, expected 1"
            )));
        }
        Ok(Self { values })
    }

    pub fn uniform(k: usize) -> Self {
        Self {
            values: vec![1.0 / k as f64; k],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_csv_string(&self) -> String {
        let cells: Vec<String> = self.values.iter().map(|v| format!("{v}")).collect();
        format!("{}\n", cells.join(","))
    }

    pub fn from_csv_str(text: &str, origin: &str) -> Result<Self> {
        let m = matrix_from_csv(text, origin)?;
        if m.rows() != 1 {
            return Err(Error::ParseError {
                path: origin.into(),
                line: 2,
                msg: format!("expected a single row of priors, found {}", m.rows()),
            });
        }
        Self::new(m.row(0).to_vec())
    }
}

/// Rewriting coefficients W with the cached bound C_w = max |w_{m,k}|.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    entries: Matrix,
    max_abs: f64,
}

impl WeightMatrix {
    pub fn num_bags(&self) -> usize {
        self.entries.rows()
    }

    pub fn num_classes(&self) -> usize {
        self.entries.cols()
    }

    pub fn get(&self, bag: usize, class: usize) -> f64 {
        self.entries.get(bag, class)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// C_w, the largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Elementwise |w| matrix; the default PRR trade-off weights.
    pub fn abs_entries(&self) -> Matrix {
        self.entries.map(f64::abs)
    }

    /// Test-only escape hatch for building deliberately wrong weights
    /// (negative controls in the unbiasedness oracle). Skips the rewriting
    /// identity check on purpose.
    pub fn from_raw_unchecked(entries: Matrix) -> Self {
        let max_abs = entries.max_abs();
        Self { entries, max_abs }
    }
}

/// Largest absolute entry of W^T * Theta - diag(pi).
pub fn rewrite_residual(w: &Matrix, theta: &ClassPriorMatrix, pi: &TestPriors) -> f64 {
    let wt_theta = w.transposed_mul(theta.matrix());
    let k = pi.len();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { pi.get(i) } else { 0.0 };
            worst = worst.max((wt_theta.get(i, j) - target).abs());
        }
    }
    worst
}

/// W = (Pi * Theta^+)^T, the coefficients that rewrite the supervised risk
/// as a weighted sum of bag-wise expectations. Fails if Theta is (numerically)
/// rank deficient, since the rewriting premise then breaks.
pub fn compute_weights(theta: &ClassPriorMatrix, pi: &TestPriors) -> Result<WeightMatrix> {
    let k = theta.num_classes();
    if pi.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "theta has {k} classes but pi has {} entries",
            pi.len()
        )));
    }
    let theta_pinv = linalg::pinv_full_column_rank(theta.matrix())?;
    // Pi * Theta^+ scales row k of Theta^+ by pi_k; transpose gives M x K.
    let mut entries = Matrix::zeros(theta.num_bags(), k);
    for class in 0..k {
        let scale = pi.get(class);
        for bag in 0..theta.num_bags() {
            entries.set(bag, class, scale * theta_pinv.get(class, bag));
        }
    }
    let residual = rewrite_residual(&entries, theta, pi);
    if residual > REWRITE_TOL {
        return Err(Error::RankDeficient(format!(
            "rewriting identity residual {residual:.3e} exceeds {REWRITE_TOL:.0e}"
        )));
    }
    let max_abs = entries.max_abs();
    Ok(WeightMatrix { entries, max_abs })
}

/// Square K x K prior matrix with `a + b` on the diagonal and `b` elsewhere.
/// Requires a > 0, b > 0, and a + K*b = 1.
pub fn symmetric_theta(a: f64, b: f64, k: usize) -> Result<ClassPriorMatrix> {
    if k < 2 {
        return Err(Error::InvalidSimplex("need at least 2 classes".into()));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::InvalidSimplex(format!(
            "need a > 0 and b > 0, got a = {a}, b = {b}"
        )));
    }
    let total = a + k as f64 * b;
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidSimplex(format!(
            "a + K*b = {total}, expected 1"
        )));
    }
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, if i == j { a + b } else { b });
        }
    }
    ClassPriorMatrix::new(m)
}

fn diag_dominated_draw(k: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let off = Uniform::new(0.0, 1.0 / k as f64);
    let mut m = Matrix::zeros(k, k);
    for row in 0..k {
        let mut sum = 0.0;
        for col in 0..k {
            if col != row {
                let v = off.sample(&mut rng);
                m.set(row, col, v);
                sum += v;
            }
        }
        m.set(row, row, 1.0 - sum);
    }
    m
}

/// Asymmetric diagonal-dominated square prior matrix: off-diagonal entries
/// are Uniform[0, 1/K), the diagonal absorbs the remainder of each row.
/// Redraws with an incremented seed if a draw is rank deficient.
pub fn diagonal_dominated_theta(k: usize, seed: u64) -> Result<ClassPriorMatrix> {
    if k < 2 {
        return Err(Error::InvalidSimplex("need at least 2 classes".into()));
    }
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let draw = diag_dominated_draw(k, seed.wrapping_add(attempt as u64));
        match ClassPriorMatrix::new(draw) {
            Ok(theta) => return Ok(theta),
            Err(Error::RankDeficient(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

/// 2K x K prior matrix: a vertical stack of two independent
/// diagonal-dominated square matrices (so M = 2K).
pub fn nonsquare_theta(k: usize, seed: u64) -> Result<ClassPriorMatrix> {
    let top = diagonal_dominated_theta(k, seeding::mix(seed, &[1]))?;
    let bottom = diagonal_dominated_theta(k, seeding::mix(seed, &[2]))?;
    let mut m = Matrix::zeros(2 * k, k);
    for i in 0..k {
        for j in 0..k {
            m.set(i, j, top.get(i, j));
            m.set(k + i, j, bottom.get(i, j));
        }
    }
    ClassPriorMatrix::new(m)
}

/// Multiplicative uniform noise on every entry: each theta_{m,k} becomes
/// theta_{m,k} * (1 + eps) with eps ~ Uniform[-noise_rate, +noise_rate],
/// clamped at zero, then rows are renormalized to sum 1.
pub fn perturb_priors(
    theta: &ClassPriorMatrix,
    noise_rate: f64,
    seed: u64,
) -> Result<ClassPriorMatrix> {
    if !(0.0..1.0).contains(&noise_rate) {
        return Err(Error::Config(format!(
            "noise_rate must be in [0, 1), got {noise_rate}"
        )));
    }
    if noise_rate == 0.0 {
        return Ok(theta.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = Uniform::new_inclusive(-noise_rate, noise_rate);
    let (m, k) = (theta.num_bags(), theta.num_classes());
    let mut out = Matrix::zeros(m, k);
    for i in 0..m {
        let mut sum = 0.0;
        for j in 0..k {
            let v = (theta.get(i, j) * (1.0 + eps.sample(&mut rng))).max(0.0);
            out.set(i, j, v);
            sum += v;
        }
        for j in 0..k {
            out.set(i, j, out.get(i, j) / sum);
        }
    }
    ClassPriorMatrix::new(out)
}

fn matrix_to_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let cells: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn matrix_from_csv(text: &str, origin: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                cell.trim().parse::<f64>().map_err(|e| Error::ParseError {
                    path: origin.into(),
                    line: idx + 1,
                    msg: format!("bad number {cell:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::ParseError {
                    path: origin.into(),
                    line: idx + 1,
                    msg: format!("expected {} columns, found {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::ParseError {
            path: origin.into(),
            line: 1,
            msg: "no rows".into(),
        });
    }
    Ok(Matrix::from_rows(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_theta_gives_diagonal_weights() {
        let theta = ClassPriorMatrix::new(Matrix::identity(3)).unwrap();
        let pi = TestPriors::new(vec![0.2, 0.3, 0.5]).unwrap();
        let w = compute_weights(&theta, &pi).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { pi.get(i) } else { 0.0 };
                assert!((w.get(i, j) - expected).abs() < 1e-12);
            }
        }
        assert!((w.max_abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_weights_match_hand_inverse() {
        // Theta^-1 = (1/0.6) [[0.8, -0.2], [-0.2, 0.8]], W = (Pi Theta^-1)^T.
        let theta = ClassPriorMatrix::new(Matrix::from_rows(&[
            vec![0.8, 0.2],
            vec![0.2, 0.8],
        ]))
        .unwrap();
        let pi = TestPriors::new(vec![0.5, 0.5]).unwrap();
        let w = compute_weights(&theta, &pi).unwrap();
        let expected = [[2.0 / 3.0, -1.0 / 6.0], [-1.0 / 6.0, 2.0 / 3.0]];
        for m in 0..2 {
            for k in 0..2 {
                assert!(
                    (w.get(m, k) - expected[m][k]).abs() < 1e-12,
                    "w[{m}][{k}] = {}",
                    w.get(m, k)
                );
            }
        }
        assert!((w.max_abs() - 2.0 / 3.0).abs() < 1e-12);
    }

    /// Independent pseudoinverse oracle: solve (Theta^T Theta) X = Theta^T by
    /// Gaussian elimination with partial pivoting, then W_oracle = (Pi X)^T.
    fn normal_equation_weights(theta: &ClassPriorMatrix, pi: &TestPriors) -> Matrix {
        let t = theta.matrix();
        let k = t.cols();
        let m = t.rows();
        let gram = t.transposed_mul(t); // K x K
        let rhs = t.transpose(); // K x M
        // augmented elimination
        let mut a: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                let mut row: Vec<f64> = (0..k).map(|j| gram.get(i, j)).collect();
                row.extend((0..m).map(|j| rhs.get(i, j)));
                row
            })
            .collect();
        for col in 0..k {
            let pivot = (col..k)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
                .unwrap();
            a.swap(col, pivot);
            let p = a[col][col];
            assert!(p.abs() > 1e-12, "oracle: singular gram matrix");
            for j in col..(k + m) {
                a[col][j] /= p;
            }
            for r in 0..k {
                if r != col && a[r][col] != 0.0 {
                    let f = a[r][col];
                    for j in col..(k + m) {
                        a[r][j] -= f * a[col][j];
                    }
                }
            }
        }
        // X = Theta^+ is K x M; W = (Pi X)^T is M x K.
        let mut w = Matrix::zeros(m, k);
        for class in 0..k {
            for bag in 0..m {
                w.set(bag, class, pi.get(class) * a[class][k + bag]);
            }
        }
        w
    }

    #[test]
    fn stacked_20x10_matches_normal_equation_oracle() {
        let theta = nonsquare_theta(10, 7).unwrap();
        assert_eq!(theta.num_bags(), 20);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw: Vec<f64> = (0..10).map(|_| Uniform::new(0.1, 1.0).sample(&mut rng)).collect();
        let sum: f64 = raw.iter().sum();
        let pi = TestPriors::new(raw.iter().map(|v| v / sum).collect()).unwrap();

        let w = compute_weights(&theta, &pi).unwrap();
        assert!(rewrite_residual(w.matrix(), &theta, &pi) < 1e-8);

        let oracle = normal_equation_weights(&theta, &pi);
        for m in 0..20 {
            for k in 0..10 {
                assert!(
                    (w.get(m, k) - oracle.get(m, k)).abs() < 1e-8,
                    "w[{m}][{k}]: {} vs oracle {}",
                    w.get(m, k),
                    oracle.get(m, k)
                );
            }
        }
    }

    #[test]
    fn square_invertible_matches_direct_inverse() {
        let theta = diagonal_dominated_theta(6, 3).unwrap();
        let pi = TestPriors::uniform(6);
        let w = compute_weights(&theta, &pi).unwrap();
        let oracle = normal_equation_weights(&theta, &pi);
        for m in 0..6 {
            for k in 0..6 {
                assert!((w.get(m, k) - oracle.get(m, k)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn symmetric_theta_paper_settings() {
        let t = symmetric_theta(0.5, 0.05, 10).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let expected = if i == j { 0.55 } else { 0.05 };
                assert!((t.get(i, j) - expected).abs() < 1e-12);
            }
        }
        let t = symmetric_theta(0.1, 0.09, 10).unwrap();
        assert!((t.get(0, 0) - 0.19).abs() < 1e-12);
        assert!((t.get(0, 1) - 0.09).abs() < 1e-12);
    }

    #[test]
    fn symmetric_theta_rejects_bad_simplex() {
        assert!(matches!(
            symmetric_theta(1.0, 0.0, 10),
            Err(Error::InvalidSimplex(_))
        ));
        assert!(matches!(
            symmetric_theta(0.3, 0.05, 10),
            Err(Error::InvalidSimplex(_))
        ));
    }

    #[test]
    fn diagonal_dominated_is_deterministic_and_valid() {
        let a = diagonal_dominated_theta(2, 9).unwrap();
        let b = diagonal_dominated_theta(2, 9).unwrap();
        assert_eq!(a, b);
        let c = diagonal_dominated_theta(2, 10).unwrap();
        assert_ne!(a, c);

        let t = diagonal_dominated_theta(10, 123).unwrap();
        for row in 0..10 {
            let sum: f64 = t.row(row).iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            for col in 0..10 {
                if col != row {
                    // column dominance: diagonal beats off-diagonal entries
                    assert!(t.get(col, col) > t.get(row, col));
                }
            }
        }
    }

    #[test]
    fn nonsquare_theta_stacks_two_blocks() {
        let t = nonsquare_theta(10, 42).unwrap();
        assert_eq!(t.num_bags(), 20);
        assert_eq!(t.num_classes(), 10);
        for row in 0..20 {
            let diag_col = row % 10;
            for col in 0..10 {
                if col != diag_col {
                    assert!(t.get(row, diag_col) > t.get(row, col));
                }
            }
        }
        let w = compute_weights(&t, &TestPriors::uniform(10)).unwrap();
        assert!(rewrite_residual(w.matrix(), &t, &TestPriors::uniform(10)) < 1e-8);
    }

    #[test]
    fn perturb_zero_noise_is_identity() {
        let theta = symmetric_theta(0.5, 0.05, 10).unwrap();
        let out = perturb_priors(&theta, 0.0, 5).unwrap();
        assert_eq!(theta, out);
    }

    #[test]
    fn perturb_respects_relative_bound_and_simplex() {
        let theta = symmetric_theta(0.5, 0.05, 10).unwrap();
        let out = perturb_priors(&theta, 0.05, 5).unwrap();
        assert_ne!(theta, out);
        for i in 0..10 {
            let sum: f64 = out.row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            for j in 0..10 {
                // (1 +/- r) numerator over (1 -/+ r) row-sum skew
                let ratio = out.get(i, j) / theta.get(i, j);
                assert!((ratio - 1.0).abs() < 0.11, "ratio {ratio}");
            }
        }
        // determinism
        assert_eq!(out, perturb_priors(&theta, 0.05, 5).unwrap());
    }

    #[test]
    fn csv_round_trip() {
        let theta = nonsquare_theta(4, 77).unwrap();
        let text = theta.to_csv_string();
        let back = ClassPriorMatrix::from_csv_str(&text, "mem").unwrap();
        assert_eq!(theta, back);

        let pi = TestPriors::new(vec![0.25, 0.3, 0.45]).unwrap();
        let back = TestPriors::from_csv_str(&pi.to_csv_string(), "mem").unwrap();
        assert_eq!(pi, back);
    }

    #[test]
    fn csv_rejects_rank_deficient_matrix() {
        let text = "0.6,0.2,0.2\n0.2,0.4,0.4\n0.4,0.3,0.3\n";
        assert!(matches!(
            ClassPriorMatrix::from_csv_str(text, "mem"),
            Err(Error::RankDeficient(_))
        ));
    }

    #[test]
    fn csv_reports_line_numbers() {
        let text = "0.5,0.5\n0.5,oops\n";
        match ClassPriorMatrix::from_csv_str(text, "mem") {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            /// Rewriting identity holds for every generated (Theta, pi) pair.
            #[test]
            fn rewriting_identity(k in 2usize..=10, stack in proptest::bool::ANY, seed in 0u64..10_000) {
                let theta = if stack {
                    nonsquare_theta(k, seed).unwrap()
                } else {
                    diagonal_dominated_theta(k, seed).unwrap()
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
                let raw: Vec<f64> = (0..k).map(|_| Uniform::new(0.05, 1.0).sample(&mut rng)).collect();
                let sum: f64 = raw.iter().sum();
                let pi = TestPriors::new(raw.iter().map(|v| v / sum).collect()).unwrap();
                let w = compute_weights(&theta, &pi).unwrap();
                prop_assert!(rewrite_residual(w.matrix(), &theta, &pi) < 1e-8);
                prop_assert!((w.max_abs() - w.matrix().max_abs()).abs() == 0.0);
            }
        }
    }
}

//! Fully-connected classifier with exact reverse-mode gradients.
//!
//! The gradient interface is deliberately narrow: `backward` differentiates
//! `sum_{i,k} upstream[i][k] * ce(logits_i, k)` for an arbitrary upstream
//! weight matrix. Every training objective in this crate is (locally) such a
//! weighted combination of per-(sample, class) cross-entropy losses, so one
//! backward pass covers them all.

use std::path::Path;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Hidden width of the depth presets; the benchmark tables fix depth only.
pub const DEFAULT_HIDDEN_WIDTH: usize = 128;

/// Dense layer, weights stored row-major as `out_dim x in_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weights: Matrix,
    pub biases: Vec<f64>,
}

impl DenseLayer {
    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }
}

/// Feed-forward network: rectifier on hidden layers, identity on the output.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    layers: Vec<DenseLayer>,
}

/// Per-layer parameter gradients, shapes mirroring [`MlpModel`].
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Matrix>,
    pub biases: Vec<Vec<f64>>,
}

/// Layer dimension chain for the benchmark presets: depth 1 is a linear
/// model, depth 3 has one hidden layer, depth 5 has three.
pub fn preset_dims(depth: usize, input_dim: usize, num_classes: usize, hidden: usize) -> Result<Vec<usize>> {
    let dims = match depth {
        1 => vec![input_dim, num_classes],
        3 => vec![input_dim, hidden, num_classes],
        5 => vec![input_dim, hidden, hidden, hidden, num_classes],
        other => {
            return Err(Error::Config(format!(
                "unsupported depth {other}; presets exist for 1, 3, 5"
            )))
        }
    };
    Ok(dims)
}

impl MlpModel {
    /// Weights ~ Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero,
    /// deterministic per seed.
    pub fn init(layer_dims: &[usize], seed: u64) -> Self {
        assert!(layer_dims.len() >= 2, "need at least input and output dims");
        assert!(layer_dims.iter().all(|&d| d > 0), "zero-width layer");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(layer_dims.len() - 1);
        for w in layer_dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let scale = 1.0 / (fan_in as f64).sqrt();
            let dist = Uniform::new_inclusive(-scale, scale);
            let mut weights = Matrix::zeros(fan_out, fan_in);
            for v in weights.data_mut() {
                *v = dist.sample(&mut rng);
            }
            layers.push(DenseLayer {
                weights,
                biases: vec![0.0; fan_out],
            });
        }
        Self { layers }
    }

    /// Assemble a model from explicit layers (hand-built classifiers, tests).
    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::DimensionMismatch("model needs at least one layer".into()));
        }
        for pair in layers.windows(2) {
            if pair[0].out_dim() != pair[1].in_dim() {
                return Err(Error::DimensionMismatch(format!(
                    "layer output {} feeds layer input {}",
                    pair[0].out_dim(),
                    pair[1].in_dim()
                )));
            }
        }
        if layers
            .iter()
            .any(|l| !l.weights.is_finite() || l.biases.iter().any(|b| !b.is_finite()))
        {
            return Err(Error::DimensionMismatch("non-finite parameter".into()));
        }
        Ok(Self { layers })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        &mut self.layers
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.layers[0].in_dim()];
        dims.extend(self.layers.iter().map(DenseLayer::out_dim));
        dims
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn num_params(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.rows() * l.weights.cols() + l.biases.len())
            .sum()
    }

    fn affine(layer: &DenseLayer, input: &Matrix) -> Matrix {
        let mut z = input.mul_transposed(&layer.weights);
        for i in 0..z.rows() {
            for (v, b) in z.row_mut(i).iter_mut().zip(&layer.biases) {
                *v += b;
            }
        }
        z
    }

    /// Batch logits for a `B x d` feature matrix.
    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        if x.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch(format!(
                "input has {} features, model expects {}",
                x.cols(),
                self.input_dim()
            )));
        }
        let mut act = Self::affine(&self.layers[0], x);
        for layer in &self.layers[1..] {
            for v in act.data_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
            act = Self::affine(layer, &act);
        }
        Ok(act)
    }

    /// Exact gradient of `sum_{i,k} upstream[i][k] * ce(logits_i, k)` with
    /// respect to every parameter.
    pub fn backward(&self, x: &Matrix, upstream: &Matrix) -> Result<Gradients> {
        if x.cols() != self.input_dim() {
            return Err(Error::DimensionMismatch(format!(
                "input has {} features, model expects {}",
                x.cols(),
                self.input_dim()
            )));
        }
        if upstream.rows() != x.rows() || upstream.cols() != self.output_dim() {
            return Err(Error::DimensionMismatch(format!(
                "upstream is {}x{}, expected {}x{}",
                upstream.rows(),
                upstream.cols(),
                x.rows(),
                self.output_dim()
            )));
        }
        let num_layers = self.layers.len();
        // forward pass, keeping pre-activations and post-activation inputs
        let mut pre: Vec<Matrix> = Vec::with_capacity(num_layers);
        let mut inputs: Vec<Matrix> = Vec::with_capacity(num_layers);
        let mut act = x.clone();
        for (l, layer) in self.layers.iter().enumerate() {
            inputs.push(act.clone());
            let z = Self::affine(layer, &act);
            pre.push(z.clone());
            act = if l + 1 < num_layers {
                z.map(|v| if v > 0.0 { v } else { 0.0 })
            } else {
                z
            };
        }

        // d/dz of sum_k u_k * (logsumexp(z) - z_k)  =  (sum_k u_k) * p - u
        let logits = pre.last().unwrap();
        let probs = softmax_rows(logits);
        let mut delta = Matrix::zeros(logits.rows(), logits.cols());
        for i in 0..logits.rows() {
            let u_row = upstream.row(i);
            let s: f64 = u_row.iter().sum();
            let p_row = probs.row(i);
            let d_row = delta.row_mut(i);
            for j in 0..d_row.len() {
                d_row[j] = s * p_row[j] - u_row[j];
            }
        }

        let mut grads = Gradients {
            weights: Vec::with_capacity(num_layers),
            biases: Vec::with_capacity(num_layers),
        };
        for _ in 0..num_layers {
            grads.weights.push(Matrix::zeros(0, 0));
            grads.biases.push(Vec::new());
        }
        for l in (0..num_layers).rev() {
            grads.weights[l] = delta.transposed_mul(&inputs[l]);
            let mut db = vec![0.0; delta.cols()];
            for i in 0..delta.rows() {
                for (acc, &v) in db.iter_mut().zip(delta.row(i)) {
                    *acc += v;
                }
            }
            grads.biases[l] = db;
            if l > 0 {
                let mut next = delta.matmul(&self.layers[l].weights);
                let gate = &pre[l - 1];
                for i in 0..next.rows() {
                    let g_row = gate.row(i);
                    let n_row = next.row_mut(i);
                    for (v, &z) in n_row.iter_mut().zip(g_row) {
                        if z <= 0.0 {
                            *v = 0.0;
                        }
                    }
                }
                delta = next;
            }
        }
        Ok(grads)
    }

    /// Checkpoint layout: `u32` LE count of layer dims, the dims as `u32` LE,
    /// then per layer the weights row-major and the biases, all `f64` LE.
    pub fn save(&self, path: &Path) -> Result<()> {
        let dims = self.layer_dims();
        let mut bytes = Vec::with_capacity(4 + 4 * dims.len() + 8 * self.num_params());
        bytes.extend_from_slice(&(dims.len() as u32).to_le_bytes());
        for d in &dims {
            bytes.extend_from_slice(&(*d as u32).to_le_bytes());
        }
        for layer in &self.layers {
            for v in layer.weights.data() {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
            for b in &layer.biases {
                bytes.extend_from_slice(&b.to_le_bytes());
            }
        }
        std::fs::write(path, bytes)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        let origin = path.display().to_string();
        let eof = |pos: usize| Error::ParseError {
            path: origin.clone(),
            line: 0,
            msg: format!("unexpected end of checkpoint at byte {pos}"),
        };
        let mut pos = 0usize;
        let read_u32 = |pos: &mut usize| -> Result<u32> {
            if *pos + 4 > bytes.len() {
                return Err(eof(*pos));
            }
            let v = u32::from_le_bytes(bytes[*pos..*pos + 4].try_into().unwrap());
            *pos += 4;
            Ok(v)
        };
        let count = read_u32(&mut pos)? as usize;
        if count < 2 {
            return Err(Error::ParseError {
                path: origin.clone(),
                line: 0,
                msg: format!("checkpoint declares {count} layer dims"),
            });
        }
        let mut dims = Vec::with_capacity(count);
        for _ in 0..count {
            dims.push(read_u32(&mut pos)? as usize);
        }
        let mut layers = Vec::with_capacity(count - 1);
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let need = 8 * (fan_out * fan_in + fan_out);
            if pos + need > bytes.len() {
                return Err(Error::ParseError {
                    path: origin.clone(),
                    line: 0,
                    msg: format!("unexpected end of checkpoint at byte {}", bytes.len()),
                });
            }
            let mut weights = Matrix::zeros(fan_out, fan_in);
            for v in weights.data_mut() {
                *v = f64::from_le_bytes(bytes[pos..pos + 8].try_into().unwrap());
                pos += 8;
            }
            let mut biases = vec![0.0; fan_out];
            for b in &mut biases {
                *b = f64::from_le_bytes(bytes[pos..pos + 8].try_into().unwrap());
                pos += 8;
            }
            layers.push(DenseLayer { weights, biases });
        }
        if pos != bytes.len() {
            return Err(Error::ParseError {
                path: origin,
                line: 0,
                msg: format!("{} trailing bytes after parameters", bytes.len() - pos),
            });
        }
        Self::from_layers(layers)
    }
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        Self {
            weights: model
                .layers()
                .iter()
                .map(|l| Matrix::zeros(l.out_dim(), l.in_dim()))
                .collect(),
            biases: model.layers().iter().map(|l| vec![0.0; l.out_dim()]).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.weights.iter().all(Matrix::is_finite)
            && self.biases.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    pub fn max_abs(&self) -> f64 {
        let w = self.weights.iter().fold(0.0f64, |acc, m| acc.max(m.max_abs()));
        self.biases
            .iter()
            .flatten()
            .fold(w, |acc, &v| acc.max(v.abs()))
    }
}

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(logits: &Matrix) -> Matrix {
    let mut out = logits.clone();
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    out
}

/// Softmax cross-entropy losses for every (sample, class) pair:
/// entry (i, k) = logsumexp(logits_i) - logits_{i,k}.
pub fn ce_loss_matrix(logits: &Matrix) -> Matrix {
    let mut out = logits.clone();
    for i in 0..out.rows() {
        let row = out.row_mut(i);
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|&v| (v - max).exp()).sum::<f64>().ln();
        for v in row.iter_mut() {
            *v = lse - *v;
        }
    }
    out
}

/// Index of the row maximum, ties broken toward the smallest index.
pub fn argmax_row(row: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = j;
        }
    }
    best
}

/// Zero-one losses for every (sample, class) pair: entry (i, k) is 0 iff
/// k is the argmax of row i (smallest-index tie-break), else 1.
pub fn zo_loss_matrix(logits: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(logits.rows(), logits.cols());
    for i in 0..logits.rows() {
        let winner = argmax_row(logits.row(i));
        let row = out.row_mut(i);
        for (j, v) in row.iter_mut().enumerate() {
            *v = if j == winner { 0.0 } else { 1.0 };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_is_deterministic_with_zero_biases() {
        let a = MlpModel::init(&[16, 128, 128, 10], 42);
        let b = MlpModel::init(&[16, 128, 128, 10], 42);
        assert_eq!(a, b);
        let c = MlpModel::init(&[16, 128, 128, 10], 43);
        assert_ne!(a, c);
        for layer in a.layers() {
            assert!(layer.biases.iter().all(|&b| b == 0.0));
            let scale = 1.0 / (layer.in_dim() as f64).sqrt();
            assert!(layer.weights.data().iter().all(|&w| w.abs() <= scale));
        }
    }

    #[test]
    fn zero_input_yields_zero_logits_at_init() {
        let model = MlpModel::init(&[8, 32, 5], 7);
        let logits = model.forward(&Matrix::zeros(3, 8)).unwrap();
        assert!(logits.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_layer_forward_is_the_linear_map() {
        let w = Matrix::from_rows(&[vec![1.0, -2.0], vec![0.5, 4.0], vec![-1.0, 0.0]]);
        let model = MlpModel::from_layers(vec![DenseLayer {
            weights: w.clone(),
            biases: vec![0.0; 3],
        }])
        .unwrap();
        let x = Matrix::from_rows(&[vec![2.0, 3.0]]);
        let logits = model.forward(&x).unwrap();
        assert_eq!(logits.row(0), &[2.0 - 6.0, 1.0 + 12.0, -2.0]);
        // homogeneity of the bias-free linear model
        let x2 = Matrix::from_rows(&[vec![4.0, 6.0]]);
        let doubled = model.forward(&x2).unwrap();
        for (a, b) in doubled.row(0).iter().zip(logits.row(0)) {
            assert!((a - 2.0 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn batch_rows_are_independent() {
        let model = MlpModel::init(&[4, 16, 3], 11);
        let mut x = Matrix::zeros(2, 4);
        x.row_mut(0).copy_from_slice(&[0.1, -0.3, 0.7, 0.2]);
        x.row_mut(1).copy_from_slice(&[1.0, 0.5, -0.2, -0.9]);
        let batch = model.forward(&x).unwrap();
        for i in 0..2 {
            let single = Matrix::from_rows(&[x.row(i).to_vec()]);
            let alone = model.forward(&single).unwrap();
            assert_eq!(batch.row(i), alone.row(0));
        }
    }

    #[test]
    fn forward_rejects_wrong_dimension() {
        let model = MlpModel::init(&[4, 8, 3], 1);
        assert!(matches!(
            model.forward(&Matrix::zeros(2, 5)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ce_of_uniform_logits_is_ln_k() {
        let logits = Matrix::zeros(2, 10);
        let ce = ce_loss_matrix(&logits);
        for &v in ce.data() {
            assert!((v - (10.0f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn ce_saturation_at_large_margins() {
        let logits = Matrix::from_rows(&[vec![30.0, -30.0]]);
        let ce = ce_loss_matrix(&logits);
        assert!(ce.get(0, 0) < 1e-12);
        assert!((ce.get(0, 1) - 60.0).abs() < 1e-9);
    }

    #[test]
    fn ce_matches_naive_softmax_log() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dist = Uniform::new(-4.0, 4.0);
        let mut logits = Matrix::zeros(5, 6);
        for v in logits.data_mut() {
            *v = dist.sample(&mut rng);
        }
        let ce = ce_loss_matrix(&logits);
        for i in 0..5 {
            let row = logits.row(i);
            let z: f64 = row.iter().map(|&v| v.exp()).sum();
            for k in 0..6 {
                let naive = -(row[k].exp() / z).ln();
                assert!((ce.get(i, k) - naive).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zo_rows_have_single_zero_and_tie_break() {
        let logits = Matrix::from_rows(&[vec![3.0, 1.0, 2.0], vec![5.0, 5.0, 0.0]]);
        let zo = zo_loss_matrix(&logits);
        assert_eq!(zo.row(0), &[0.0, 1.0, 1.0]);
        assert_eq!(zo.row(1), &[0.0, 1.0, 1.0]);
        for i in 0..zo.rows() {
            let sum: f64 = zo.row(i).iter().sum();
            assert_eq!(sum, 2.0);
        }
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let model = MlpModel::init(&[4, 8, 3], 5);
        let x = Matrix::from_rows(&[vec![0.2, -0.4, 0.9, 0.1]]);
        let grads = model.backward(&x, &Matrix::zeros(1, 3)).unwrap();
        assert_eq!(grads.max_abs(), 0.0);
    }

    #[test]
    fn upstream_scaling_scales_gradients() {
        let model = MlpModel::init(&[4, 8, 3], 5);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let dist = Uniform::new(-1.0, 1.0);
        let mut x = Matrix::zeros(6, 4);
        for v in x.data_mut() {
            *v = dist.sample(&mut rng);
        }
        let mut upstream = Matrix::zeros(6, 3);
        for v in upstream.data_mut() {
            *v = dist.sample(&mut rng);
        }
        let g1 = model.backward(&x, &upstream).unwrap();
        let g2 = model.backward(&x, &upstream.map(|v| 3.5 * v)).unwrap();
        for (a, b) in g1.weights.iter().zip(&g2.weights) {
            for (x1, x2) in a.data().iter().zip(b.data()) {
                assert!((3.5 * x1 - x2).abs() < 1e-12 * x2.abs().max(1.0));
            }
        }
    }

    /// Finite-difference oracle for the weighted-CE objective.
    fn fd_check(model: &MlpModel, x: &Matrix, upstream: &Matrix, tol: f64) {
        let value = |m: &MlpModel| -> f64 {
            let ce = ce_loss_matrix(&m.forward(x).unwrap());
            ce.data()
                .iter()
                .zip(upstream.data())
                .map(|(&c, &u)| u * c)
                .sum()
        };
        let grads = model.backward(x, upstream).unwrap();
        let h = 1e-5;
        for l in 0..model.layers().len() {
            for r in 0..model.layers()[l].weights.rows() {
                for c in 0..model.layers()[l].weights.cols() {
                    let mut plus = model.clone();
                    let old = plus.layers()[l].weights.get(r, c);
                    plus.layers_mut()[l].weights.set(r, c, old + h);
                    let mut minus = model.clone();
                    minus.layers_mut()[l].weights.set(r, c, old - h);
                    let fd = (value(&plus) - value(&minus)) / (2.0 * h);
                    let an = grads.weights[l].get(r, c);
                    let denom = fd.abs().max(an.abs()).max(1e-6);
                    assert!(
                        (fd - an).abs() / denom < tol,
                        "layer {l} w[{r}][{c}]: fd {fd} vs analytic {an}"
                    );
                }
            }
            for b in 0..model.layers()[l].biases.len() {
                let mut plus = model.clone();
                plus.layers_mut()[l].biases[b] += h;
                let mut minus = model.clone();
                minus.layers_mut()[l].biases[b] -= h;
                let fd = (value(&plus) - value(&minus)) / (2.0 * h);
                let an = grads.biases[l][b];
                let denom = fd.abs().max(an.abs()).max(1e-6);
                assert!((fd - an).abs() / denom < tol, "layer {l} b[{b}]");
            }
        }
    }

    #[test]
    fn backward_matches_finite_differences() {
        let model = MlpModel::init(&[4, 8, 3], 21);
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let dist = Uniform::new(-1.0, 1.0);
        let mut x = Matrix::zeros(16, 4);
        for v in x.data_mut() {
            *v = dist.sample(&mut rng);
        }
        let mut upstream = Matrix::zeros(16, 3);
        for v in upstream.data_mut() {
            *v = dist.sample(&mut rng);
        }
        fd_check(&model, &x, &upstream, 1e-4);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn loss_matrices_hold_their_invariants(seed in 0u64..10_000, rows in 1usize..6, k in 2usize..8) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let dist = Uniform::new(-20.0, 20.0);
                let mut logits = Matrix::zeros(rows, k);
                for v in logits.data_mut() {
                    *v = dist.sample(&mut rng);
                }
                let ce = ce_loss_matrix(&logits);
                prop_assert!(ce.data().iter().all(|&v| v >= 0.0 && v.is_finite()));
                let zo = zo_loss_matrix(&logits);
                for i in 0..rows {
                    let sum: f64 = zo.row(i).iter().sum();
                    prop_assert_eq!(sum, (k - 1) as f64);
                }
            }
        }
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let model = MlpModel::init(&[7, 13, 4], 99);
        let dir = std::env::temp_dir().join("priormix_ckpt");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.bin");
        model.save(&path).unwrap();
        let loaded = MlpModel::load(&path).unwrap();
        assert_eq!(model, loaded);

        // header layout is little-endian u32 dims
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(u32::from_le_bytes(bytes[0..4].try_into().unwrap()), 3);
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 7);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 13);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 4);
        let expected_len = 16 + 8 * model.num_params();
        assert_eq!(bytes.len(), expected_len);
    }

    #[test]
    fn checkpoint_rejects_truncation() {
        let model = MlpModel::init(&[3, 5, 2], 1);
        let dir = std::env::temp_dir().join("priormix_ckpt_trunc");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("model.bin");
        model.save(&path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
        assert!(matches!(MlpModel::load(&path), Err(Error::ParseError { .. })));
    }
}

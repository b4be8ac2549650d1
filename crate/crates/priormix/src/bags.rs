//! Labeled source datasets and the synthesis of unlabeled training bags.
//!
//! `make_bags` turns a labeled pool into M feature-only bags whose class
//! composition follows a row of the class-prior matrix. Bags keep their
//! hidden labels for oracle tests, but training objectives only ever see
//! feature blocks (`objectives::BatchSlice`), so the weak-supervision
//! boundary is structural.

use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::prior_algebra::ClassPriorMatrix;

/// Fully labeled dataset with 1-based integer labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    features: Matrix,
    labels: Vec<usize>,
    num_classes: usize,
}

impl LabeledDataset {
    /// Validates that labels cover `1..=K` with every class present and that
    /// all features are finite.
    pub fn new(features: Matrix, labels: Vec<usize>) -> Result<Self> {
        if features.rows() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} feature rows vs {} labels",
                features.rows(),
                labels.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidDataset("empty dataset".into()));
        }
        if !features.is_finite() {
            return Err(Error::InvalidDataset("non-finite feature value".into()));
        }
        let k = *labels.iter().max().unwrap();
        if labels.iter().any(|&l| l == 0) {
            return Err(Error::LabelRangeError { line: 0, label: 0 });
        }
        let mut seen = vec![false; k + 1];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = (1..=k).find(|&c| !seen[c]) {
            return Err(Error::InvalidDataset(format!(
                "class {missing} has no samples (labels go up to {k})"
            )));
        }
        Ok(Self {
            features,
            labels,
            num_classes: k,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Sample indices per class, classes in `1..=K` order.
    pub fn indices_by_class(&self) -> Vec<Vec<usize>> {
        let mut by_class = vec![Vec::new(); self.num_classes];
        for (i, &l) in self.labels.iter().enumerate() {
            by_class[l - 1].push(i);
        }
        by_class
    }

    /// Empirical class frequencies (length K, sums to 1).
    pub fn class_frequencies(&self) -> Vec<f64> {
        let mut freq = vec![0.0; self.num_classes];
        for &l in &self.labels {
            freq[l - 1] += 1.0;
        }
        let n = self.len() as f64;
        freq.iter_mut().for_each(|f| *f /= n);
        freq
    }
}

/// One of the M unlabeled training sets.
#[derive(Debug, Clone)]
pub struct UnlabeledBag {
    bag_index: usize,
    features: Matrix,
    hidden_labels: Option<Vec<usize>>,
}

impl UnlabeledBag {
    pub fn new(bag_index: usize, features: Matrix, hidden_labels: Option<Vec<usize>>) -> Self {
        assert!(features.rows() >= 1, "bag must hold at least one sample");
        if let Some(labels) = &hidden_labels {
            assert_eq!(labels.len(), features.rows());
        }
        Self {
            bag_index,
            features,
            hidden_labels,
        }
    }

    /// 1-based position of this bag among the M bags.
    pub fn bag_index(&self) -> usize {
        self.bag_index
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    /// Ground-truth labels retained for oracle tests. Training objectives
    /// never receive them: `BatchSlice` carries feature blocks only.
    pub fn hidden_labels(&self) -> Option<&[usize]> {
        self.hidden_labels.as_deref()
    }
}

/// The M bags plus the prior matrix they were built from.
#[derive(Debug, Clone)]
pub struct BagCollection {
    bags: Vec<UnlabeledBag>,
    theta: ClassPriorMatrix,
}

impl BagCollection {
    pub fn new(bags: Vec<UnlabeledBag>, theta: ClassPriorMatrix) -> Result<Self> {
        if bags.len() != theta.num_bags() {
            return Err(Error::DimensionMismatch(format!(
                "{} bags vs {} prior rows",
                bags.len(),
                theta.num_bags()
            )));
        }
        let dim = bags[0].features().cols();
        if bags.iter().any(|b| b.features().cols() != dim) {
            return Err(Error::DimensionMismatch(
                "bags disagree on feature dimension".into(),
            ));
        }
        Ok(Self { bags, theta })
    }

    /// Swap in a different prior matrix (the learner's belief about the bag
    /// compositions) while keeping the data. Used by the noisy-prior
    /// protocol, where perturbed priors are treated as exact.
    pub fn with_theta(self, theta: ClassPriorMatrix) -> Result<Self> {
        Self::new(self.bags, theta)
    }

    pub fn bags(&self) -> &[UnlabeledBag] {
        &self.bags
    }

    pub fn theta(&self) -> &ClassPriorMatrix {
        &self.theta
    }

    pub fn num_bags(&self) -> usize {
        self.bags.len()
    }

    pub fn dim(&self) -> usize {
        self.bags[0].features().cols()
    }

    pub fn min_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).min().unwrap()
    }

    pub fn total_samples(&self) -> usize {
        self.bags.iter().map(|b| b.len()).sum()
    }
}

/// Largest-remainder rounding of `fractions * total` to integers summing to
/// `total`. Ties go to the smaller index.
pub fn largest_remainder_counts(fractions: &[f64], total: usize) -> Vec<usize> {
    let targets: Vec<f64> = fractions.iter().map(|f| f * total as f64).collect();
    let mut counts: Vec<usize> = targets.iter().map(|&t| t.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = targets[i] - targets[i].floor();
        let rj = targets[j] - targets[j].floor();
        rj.partial_cmp(&ri).unwrap().then(i.cmp(&j))
    });
    for &idx in order.iter().take(total - assigned) {
        counts[idx] += 1;
    }
    debug_assert_eq!(counts.iter().sum::<usize>(), total);
    counts
}

/// Build the M unlabeled bags: bag m holds the largest-remainder rounding of
/// `theta[m] * bag_size` samples per class, drawn uniformly without
/// replacement within the bag (the same source sample may appear in
/// different bags). Each bag's sample order is shuffled.
pub fn make_bags(
    source: &LabeledDataset,
    theta: &ClassPriorMatrix,
    bag_size: usize,
    seed: u64,
) -> Result<BagCollection> {
    if bag_size == 0 {
        return Err(Error::Config("bag_size must be at least 1".into()));
    }
    if theta.num_classes() != source.num_classes() {
        return Err(Error::DimensionMismatch(format!(
            "theta has {} classes, source has {}",
            theta.num_classes(),
            source.num_classes()
        )));
    }
    let by_class = source.indices_by_class();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bags = Vec::with_capacity(theta.num_bags());
    let dim = source.dim();

    for m in 0..theta.num_bags() {
        let counts = largest_remainder_counts(theta.row(m), bag_size);
        let mut chosen: Vec<usize> = Vec::with_capacity(bag_size);
        for (class_zero, &need) in counts.iter().enumerate() {
            let pool = &by_class[class_zero];
            if need > pool.len() {
                return Err(Error::InsufficientClassSamples {
                    bag: m + 1,
                    class: class_zero + 1,
                    need,
                    have: pool.len(),
                });
            }
            // partial Fisher-Yates: `need` distinct picks from the class pool
            let mut scratch = pool.clone();
            for i in 0..need {
                let j = rng.gen_range(i..scratch.len());
                scratch.swap(i, j);
            }
            chosen.extend_from_slice(&scratch[..need]);
        }
        chosen.shuffle(&mut rng);

        let mut features = Matrix::zeros(bag_size, dim);
        let mut labels = Vec::with_capacity(bag_size);
        for (row, &src_idx) in chosen.iter().enumerate() {
            features.row_mut(row).copy_from_slice(source.features().row(src_idx));
            labels.push(source.labels()[src_idx]);
        }
        bags.push(UnlabeledBag::new(m + 1, features, Some(labels)));
    }
    BagCollection::new(bags, theta.clone())
}

/// Split `total` samples into `m` bag sizes of floor(total/m) or
/// ceil(total/m), larger sizes first, summing to `total`.
pub fn split_bag_sizes(total: usize, m: usize) -> Vec<usize> {
    assert!(m >= 1, "need at least one bag");
    assert!(total >= m, "need at least one sample per bag");
    let base = total / m;
    let extra = total % m;
    (0..m).map(|i| base + usize::from(i < extra)).collect()
}

/// Per-feature min-max scaling fit on a training split.
#[derive(Debug, Clone)]
pub struct MinMaxScaler {
    mins: Vec<f64>,
    ranges: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(features: &Matrix) -> Self {
        let d = features.cols();
        let mut mins = vec![f64::INFINITY; d];
        let mut maxs = vec![f64::NEG_INFINITY; d];
        for i in 0..features.rows() {
            for (j, &v) in features.row(i).iter().enumerate() {
                mins[j] = mins[j].min(v);
                maxs[j] = maxs[j].max(v);
            }
        }
        let ranges = mins
            .iter()
            .zip(&maxs)
            .map(|(&lo, &hi)| if hi > lo { hi - lo } else { 1.0 })
            .collect();
        Self { mins, ranges }
    }

    pub fn transform(&self, features: &Matrix) -> Matrix {
        let mut out = features.clone();
        for i in 0..out.rows() {
            let row = out.row_mut(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.mins[j]) / self.ranges[j];
            }
        }
        out
    }
}

fn parse_csv_raw(text: &str, origin: &str) -> Result<(Matrix, Vec<usize>)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::ParseError {
        path: origin.into(),
        line: 1,
        msg: "empty file".into(),
    })?;
    let header_cells: Vec<&str> = header.split(',').map(str::trim).collect();
    if header_cells.first() != Some(&"label") || header_cells.len() < 2 {
        return Err(Error::ParseError {
            path: origin.into(),
            line: 1,
            msg: "expected header `label,f1,...,fd`".into(),
        });
    }
    let d = header_cells.len() - 1;

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != d + 1 {
            return Err(Error::ParseError {
                path: origin.into(),
                line: line_no,
                msg: format!("expected {} columns, found {}", d + 1, cells.len()),
            });
        }
        let label: i64 = cells[0].parse().map_err(|e| Error::ParseError {
            path: origin.into(),
            line: line_no,
            msg: format!("bad label {:?}: {e}", cells[0]),
        })?;
        if label < 1 {
            return Err(Error::LabelRangeError {
                line: line_no,
                label,
            });
        }
        labels.push(label as usize);
        let row: Vec<f64> = cells[1..]
            .iter()
            .map(|cell| {
                cell.parse::<f64>().map_err(|e| Error::ParseError {
                    path: origin.into(),
                    line: line_no,
                    msg: format!("bad number {cell:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::ParseError {
            path: origin.into(),
            line: 1,
            msg: "no data rows".into(),
        });
    }
    Ok((Matrix::from_rows(&rows), labels))
}

/// Load a `label,f1,...,fd` CSV and min-max scale each feature to [0, 1]
/// using this file's own statistics (the file is the training split).
pub fn load_csv(path: &Path) -> Result<LabeledDataset> {
    let text = std::fs::read_to_string(path)?;
    let (raw, labels) = parse_csv_raw(&text, &path.display().to_string())?;
    let scaler = MinMaxScaler::fit(&raw);
    LabeledDataset::new(scaler.transform(&raw), labels)
}

/// Load a train/test CSV pair; scaling parameters are fit on the training
/// file only and applied to both.
pub fn load_csv_pair(train: &Path, test: &Path) -> Result<(LabeledDataset, LabeledDataset)> {
    let train_text = std::fs::read_to_string(train)?;
    let (train_raw, train_labels) = parse_csv_raw(&train_text, &train.display().to_string())?;
    let test_text = std::fs::read_to_string(test)?;
    let (test_raw, test_labels) = parse_csv_raw(&test_text, &test.display().to_string())?;
    if train_raw.cols() != test_raw.cols() {
        return Err(Error::DimensionMismatch(format!(
            "train has {} features, test has {}",
            train_raw.cols(),
            test_raw.cols()
        )));
    }
    let scaler = MinMaxScaler::fit(&train_raw);
    Ok((
        LabeledDataset::new(scaler.transform(&train_raw), train_labels)?,
        LabeledDataset::new(scaler.transform(&test_raw), test_labels)?,
    ))
}

const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

struct IdxReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: String,
}

impl<'a> IdxReader<'a> {
    fn new(bytes: &'a [u8], path: &Path) -> Self {
        Self {
            bytes,
            pos: 0,
            path: path.display().to_string(),
        }
    }

    fn read_u32(&mut self) -> Result<u32> {
        if self.pos + 4 > self.bytes.len() {
            return Err(self.eof());
        }
        let v = u32::from_be_bytes(self.bytes[self.pos..self.pos + 4].try_into().unwrap());
        self.pos += 4;
        Ok(v)
    }

    fn read_bytes(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(self.eof());
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn eof(&self) -> Error {
        Error::ParseError {
            path: self.path.clone(),
            line: 0,
            msg: format!("unexpected end of file at byte {}", self.pos),
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    Ok(bytes)
}

/// Load an IDX image/label pair (big-endian, classic MNIST layout). Pixels
/// are scaled to [0, 1]; 0-based byte labels become 1-based classes.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<LabeledDataset> {
    let image_bytes = read_file(images_path)?;
    let mut images = IdxReader::new(&image_bytes, images_path);
    let magic = images.read_u32()?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(Error::MagicMismatch {
            path: images_path.display().to_string(),
            expected: IDX_IMAGES_MAGIC,
            found: magic,
        });
    }
    let n = images.read_u32()? as usize;
    let rows = images.read_u32()? as usize;
    let cols = images.read_u32()? as usize;
    let d = rows * cols;
    let pixels = images.read_bytes(n * d)?;

    let label_bytes = read_file(labels_path)?;
    let mut labels_reader = IdxReader::new(&label_bytes, labels_path);
    let magic = labels_reader.read_u32()?;
    if magic != IDX_LABELS_MAGIC {
        return Err(Error::MagicMismatch {
            path: labels_path.display().to_string(),
            expected: IDX_LABELS_MAGIC,
            found: magic,
        });
    }
    let n_labels = labels_reader.read_u32()? as usize;
    if n_labels != n {
        return Err(Error::CountMismatch {
            images: n,
            labels: n_labels,
        });
    }
    let raw_labels = labels_reader.read_bytes(n)?;

    let mut features = Matrix::zeros(n, d);
    for (i, chunk) in pixels.chunks_exact(d).enumerate() {
        let row = features.row_mut(i);
        for (dst, &px) in row.iter_mut().zip(chunk) {
            *dst = px as f64 / 255.0;
        }
    }
    let labels: Vec<usize> = raw_labels.iter().map(|&b| b as usize + 1).collect();
    LabeledDataset::new(features, labels)
}

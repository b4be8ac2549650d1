//! Dense row-major `f64` matrices and the small-matrix decompositions the
//! crate needs: one-sided Jacobi SVD and the Moore-Penrose pseudoinverse.
//!
//! Prior matrices are at most `2K x K` with `K <= 10`, so a simple Jacobi
//! sweep is both accurate and fast enough. The matmul kernels are also the
//! hot path of MLP training and are written so the inner loops vectorize.

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from a flat row-major buffer. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length must be rows*cols");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(j < self.cols, "column {j} out of {}", self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j < self.cols, "column {j} out of {}", self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let b_row = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`; `other` is `p x cols`, result is `rows x p`.
    pub fn mul_transposed(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "mul_transposed shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (j, o) in out_row.iter_mut().enumerate() {
                let b_row = other.row(j);
                let mut acc = 0.0;
                for (&a, &b) in a_row.iter().zip(b_row) {
                    acc += a * b;
                }
                *o = acc;
            }
        }
        out
    }

    /// `self^T * other`; `self` is `n x rows'`... i.e. result is `cols x other.cols`.
    pub fn transposed_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "transposed_mul shape mismatch");
        let mut out = Matrix::zeros(self.cols, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let b_row = other.row(i);
            for (p, &a) in a_row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[p * other.cols..(p + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, &x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Singular value decomposition `A = U * diag(sigma) * V^T` with `U` of shape
/// `m x r`, `sigma` descending, `V` of shape `n x r`, where `r = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

/// One-sided Jacobi SVD. Accurate for the small matrices it is used on.
pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let m = a.rows();
    let n = a.cols();
    // Work on columns: g[j] is the j-th column of the evolving A*V product.
    let mut g: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let eps = f64::EPSILON;
    for _sweep in 0..64 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    alpha += g[p][i] * g[p][i];
                    beta += g[q][i] * g[q][i];
                    gamma += g[p][i] * g[q][i];
                }
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let gp = g[p][i];
                    let gq = g[q][i];
                    g[p][i] = c * gp - s * gq;
                    g[q][i] = s * gp + c * gq;
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = g
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Matrix::zeros(m, n);
    let mut vm = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let norm = norms[j];
        sigma.push(norm);
        if norm > 0.0 {
            for i in 0..m {
                u.set(i, slot, g[j][i] / norm);
            }
        }
        for i in 0..n {
            vm.set(i, slot, v[j][i]);
        }
    }
    Svd { u, sigma, v: vm }
}

/// Rank cutoff: singular values at or below `max(m, n) * eps * sigma_max`
/// are treated as zero.
pub fn rank_tolerance(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    rows.max(cols) as f64 * f64::EPSILON * sigma_max
}

/// Numerical rank from a descending singular-value list.
pub fn numerical_rank(sigma: &[f64], rows: usize, cols: usize) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tol = rank_tolerance(rows, cols, smax);
    sigma.iter().filter(|&&s| s > tol).count()
}

/// Moore-Penrose pseudoinverse via SVD. Singular values below the rank
/// tolerance are zeroed rather than inverted.
pub fn pinv(a: &Matrix) -> Matrix {
    let Svd { u, sigma, v } = svd(a);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tol = rank_tolerance(a.rows(), a.cols(), smax);
    // A+ = V * diag(1/sigma) * U^T
    let r = sigma.len();
    let mut scaled_vt = Matrix::zeros(r, v.rows());
    for k in 0..r {
        let inv = if sigma[k] > tol { 1.0 / sigma[k] } else { 0.0 };
        for i in 0..v.rows() {
            scaled_vt.set(k, i, v.get(i, k) * inv);
        }
    }
    // (n x r) rows from scaled_vt^T times U^T -> compute as (scaled_vt^T * u^T)
    scaled_vt.transposed_mul(&u.transpose())
}

/// Pseudoinverse that fails when the matrix is not full column rank.
pub fn pinv_full_column_rank(a: &Matrix) -> Result<Matrix> {
    let s = svd(a);
    let rank = numerical_rank(&s.sigma, a.rows(), a.cols());
    if rank < a.cols() {
        return Err(Error::RankDeficient(format!(
            "numerical rank {} < {} columns (singular values {:?})",
            rank,
            a.cols(),
            s.sigma
        )));
    }
    Ok(pinv(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &Matrix, b: &Matrix, tol: f64) {
        assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                assert!(
                    (a.get(i, j) - b.get(i, j)).abs() < tol,
                    "entry ({i},{j}): {} vs {}",
                    a.get(i, j),
                    b.get(i, j)
                );
            }
        }
    }

    #[test]
    fn matmul_identity() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let out = a.matmul(&Matrix::identity(2));
        assert_close(&out, &a, 1e-15);
    }

    #[test]
    fn matmul_variants_agree() {
        let a = Matrix::from_rows(&[vec![1.0, -2.0, 0.5], vec![0.0, 3.0, 1.0]]);
        let b = Matrix::from_rows(&[vec![2.0, 1.0], vec![-1.0, 0.5], vec![4.0, -3.0]]);
        let direct = a.matmul(&b);
        let via_t = a.mul_transposed(&b.transpose());
        assert_close(&direct, &via_t, 1e-15);
        let at_b = a.transpose().matmul(&a);
        let fused = a.transposed_mul(&a);
        assert_close(&at_b, &fused, 1e-15);
    }

    #[test]
    fn svd_reconstructs() {
        let a = Matrix::from_rows(&[
            vec![1.0, 2.0],
            vec![3.0, 4.0],
            vec![5.0, 6.0],
            vec![-1.0, 0.5],
        ]);
        let s = svd(&a);
        // U * diag(sigma) * V^T
        let mut us = s.u.clone();
        for i in 0..us.rows() {
            for j in 0..us.cols() {
                us.set(i, j, us.get(i, j) * s.sigma[j]);
            }
        }
        let rec = us.mul_transposed(&s.v);
        assert_close(&rec, &a, 1e-12);
        assert!(s.sigma[0] >= s.sigma[1]);
    }

    #[test]
    fn svd_orthogonal_factors() {
        let a = Matrix::from_rows(&[
            vec![0.9, 0.05, 0.05],
            vec![0.1, 0.8, 0.1],
            vec![0.2, 0.2, 0.6],
            vec![0.3, 0.3, 0.4],
        ]);
        let s = svd(&a);
        let utu = s.u.transposed_mul(&s.u);
        assert_close(&utu, &Matrix::identity(3), 1e-12);
        let vtv = s.v.transposed_mul(&s.v);
        assert_close(&vtv, &Matrix::identity(3), 1e-12);
    }

    #[test]
    fn pinv_matches_inverse_for_square() {
        let a = Matrix::from_rows(&[vec![0.8, 0.2], vec![0.2, 0.8]]);
        // inverse = (1/0.6) [[0.8, -0.2], [-0.2, 0.8]]
        let inv = Matrix::from_rows(&[
            vec![0.8 / 0.6, -0.2 / 0.6],
            vec![-0.2 / 0.6, 0.8 / 0.6],
        ]);
        assert_close(&pinv(&a), &inv, 1e-12);
    }

    #[test]
    fn pinv_satisfies_penrose_conditions() {
        let a = Matrix::from_rows(&[
            vec![0.7, 0.2, 0.1],
            vec![0.1, 0.85, 0.05],
            vec![0.15, 0.05, 0.8],
            vec![0.5, 0.25, 0.25],
            vec![0.05, 0.15, 0.8],
            vec![0.3, 0.6, 0.1],
        ]);
        let p = pinv(&a);
        let apa = a.matmul(&p).matmul(&a);
        assert_close(&apa, &a, 1e-10);
        let pap = p.matmul(&a).matmul(&p);
        assert_close(&pap, &p, 1e-10);
        // A * A+ and A+ * A symmetric
        let ap = a.matmul(&p);
        assert_close(&ap, &ap.transpose(), 1e-10);
        let pa = p.matmul(&a);
        assert_close(&pa, &pa.transpose(), 1e-10);
    }

    #[test]
    fn pinv_of_wide_matrix_uses_transpose_route() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 1.0, -1.0]]);
        let p = pinv(&a);
        assert_eq!((p.rows(), p.cols()), (3, 2));
        // A * A+ = I for full row rank
        let api = a.matmul(&p);
        assert_close(&api, &Matrix::identity(2), 1e-12);
    }

    #[test]
    fn rank_detects_deficiency() {
        // third column = second column
        let a = Matrix::from_rows(&[
            vec![0.6, 0.2, 0.2],
            vec![0.2, 0.4, 0.4],
            vec![0.4, 0.3, 0.3],
        ]);
        let s = svd(&a);
        assert_eq!(numerical_rank(&s.sigma, 3, 3), 2);
        assert!(pinv_full_column_rank(&a).is_err());
    }
}

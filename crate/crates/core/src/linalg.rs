//! Dense matrices and the two decompositions the models rely on: a cyclic
//! Jacobi eigensolver for symmetric matrices and a randomized truncated SVD.

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::sparse::SparseMatrix;

/// Largest matrix accepted by [`eig_symmetric`].
pub const DENSE_EIGEN_LIMIT: usize = 1024;
pub const MAX_JACOBI_SWEEPS: usize = 100;
pub const SVD_OVERSAMPLING: usize = 10;
pub const SVD_POWER_ITERATIONS: usize = 4;

const SYMMETRY_TOLERANCE: f64 = 1e-10;
const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;

/// Row-major dense matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, values: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r, c));
            }
        }
        Self { rows, cols, values }
    }

    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("ragged rows: {} vs {cols}", bad.len())));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.values[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let out_row = &mut out.values[r * other.cols..(r + 1) * other.cols];
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `selfᵀ * other`.
    pub fn transpose_matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for r in 0..self.rows {
            let right = other.row(r);
            for (c, &a) in self.row(r).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out.row_mut(c).iter_mut().zip(right) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Keep only the first `k` columns.
    pub fn truncate_cols(&self, k: usize) -> DenseMatrix {
        DenseMatrix::from_fn(self.rows, k.min(self.cols), |r, c| self.get(r, c))
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_symmetric(&self, tolerance: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| (self.get(r, c) - self.get(c, r)).abs() <= tolerance))
    }
}

/// Anything that can be multiplied against a dense block from either side.
pub trait LinearOperator {
    fn shape(&self) -> (usize, usize);
    /// `self * x`
    fn apply(&self, x: &DenseMatrix) -> DenseMatrix;
    /// `selfᵀ * x`
    fn apply_transpose(&self, x: &DenseMatrix) -> DenseMatrix;
}

impl LinearOperator for SparseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        self.mul_dense(x)
    }

    fn apply_transpose(&self, x: &DenseMatrix) -> DenseMatrix {
        self.transpose_mul_dense(x)
    }
}

/// Columns per tile of [`SymmetricSparse`]: the dense rows gathered by one
/// tile (up to 64 values each) then span at most 1 MiB.
pub const GATHER_TILE_COLUMNS: usize = 2048;

/// A sparse matrix known to be symmetric, pre-split into column tiles.
///
/// `Aᵀx` reuses the row-gather product `Ax`, and each tile only gathers
/// from a slice of `x` small enough to stay cache resident, which keeps the
/// cost per nonzero flat as the matrix grows. Entries are accumulated in the
/// same order as an untiled product.
#[derive(Debug, Clone)]
pub struct SymmetricSparse {
    n: usize,
    tiles: Vec<SparseMatrix>,
}

impl SymmetricSparse {
    pub fn new(matrix: &SparseMatrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "symmetric operator needs a square matrix");
        Self { n: matrix.rows(), tiles: matrix.column_blocks(GATHER_TILE_COLUMNS) }
    }
}

impl LinearOperator for SymmetricSparse {
    fn shape(&self) -> (usize, usize) {
        (self.n, self.n)
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.n, x.cols());
        for tile in &self.tiles {
            tile.mul_dense_add(x, &mut out);
        }
        out
    }

    fn apply_transpose(&self, x: &DenseMatrix) -> DenseMatrix {
        self.apply(x)
    }
}

impl LinearOperator for DenseMatrix {
    fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    fn apply(&self, x: &DenseMatrix) -> DenseMatrix {
        self.matmul(x)
    }

    fn apply_transpose(&self, x: &DenseMatrix) -> DenseMatrix {
        self.transpose_matmul(x)
    }
}

/// Eigenpairs in ascending eigenvalue order; column `j` of `eigenvectors`
/// belongs to `eigenvalues[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DenseMatrix,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Sweeps over every off-diagonal pair until the off-diagonal Frobenius norm
/// falls below `1e-12` (relative to the matrix norm once that exceeds one).
pub fn eig_symmetric(a: &DenseMatrix) -> Result<EigenDecomposition> {
    let n = a.rows;
    if a.cols != n || !a.is_symmetric(SYMMETRY_TOLERANCE) {
        return Err(Error::NotSymmetric);
    }
    if n > DENSE_EIGEN_LIMIT {
        return Err(Error::GraphTooLarge { nodes: n, limit: DENSE_EIGEN_LIMIT });
    }
    // Work on the exactly symmetrised copy so rotations stay consistent.
    let mut m = DenseMatrix::from_fn(n, n, |r, c| 0.5 * (a.get(r, c) + a.get(c, r)));
    let mut v = DenseMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOLERANCE * m.frobenius_norm().max(1.0);

    let mut converged = false;
    for _ in 0..=MAX_JACOBI_SWEEPS {
        if off_diagonal_norm(&m) < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_JACOBI_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).total_cmp(&m.get(j, j)).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| m.get(i, i)).collect();
    let eigenvectors = DenseMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(m: &DenseMatrix) -> f64 {
    let mut sum = 0.0;
    for r in 0..m.rows {
        for c in 0..m.cols {
            if r != c {
                sum += m.get(r, c) * m.get(r, c);
            }
        }
    }
    sum.sqrt()
}

fn jacobi_rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    if apq == 0.0 {
        return;
    }
    let app = m.get(p, p);
    let aqq = m.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.rows;

    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, c * mkp - s * mkq);
        m.set(k, q, s * mkp + c * mkq);
    }
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, c * mpk - s * mqk);
        m.set(q, k, s * mpk + c * mqk);
    }
    m.set(p, q, 0.0);
    m.set(q, p, 0.0);
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

/// Truncated singular value decomposition `A ≈ U diag(s) Vᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: DenseMatrix,
    pub singular_values: Vec<f64>,
    pub v: DenseMatrix,
}

/// Rank-`k` randomized SVD: Gaussian sketch with oversampling, power
/// iterations with re-orthonormalisation, then an exact SVD of the small
/// projected matrix.
pub fn randomized_svd<A: LinearOperator + ?Sized>(a: &A, k: usize, rng: RandomSource) -> Result<SvdResult> {
    let (rows, cols) = a.shape();
    let max = rows.min(cols);
    if k == 0 || k > max {
        return Err(Error::RankTooLarge { requested: k, max });
    }
    let sketch = (k + SVD_OVERSAMPLING).min(max);
    let mut r = rng.rng();
    let omega = DenseMatrix {
        rows: cols,
        cols: sketch,
        values: (0..cols * sketch).map(|_| StandardNormal.sample(&mut r)).collect(),
    };

    let mut q = orthonormalize(&a.apply(&omega));
    for _ in 0..SVD_POWER_ITERATIONS {
        let z = orthonormalize(&a.apply_transpose(&q));
        q = orthonormalize(&a.apply(&z));
    }
    // Bᵀ = Aᵀ Q, with B = Qᵀ A the projection onto the sketched range.
    let bt = a.apply_transpose(&q);
    // Reduce the tall Bᵀ to its small triangular factor before the Jacobi SVD:
    // Bᵀ = Q₂R and R = Uc S Vcᵀ  =>  A ≈ Q Vc S (Q₂Uc)ᵀ.
    let q2 = orthonormalize(&bt);
    let small = thin_svd(&q2.transpose_matmul(&bt));
    let u = q.matmul(&small.v).truncate_cols(k);
    let v = q2.matmul(&small.u).truncate_cols(k);
    let singular_values = small.singular_values[..k].to_vec();
    Ok(SvdResult { u, singular_values, v })
}

/// Smallest accepted ratio between Cholesky pivots of a Gram matrix; below it
/// the panel is too ill-conditioned for the Gram route.
const CHOLESKY_QR_MIN_PIVOT_RATIO: f64 = 1e-5;

/// Orthonormal basis for the column space (thin Q).
///
/// Well-conditioned panels take two rounds of Cholesky QR, which stream the
/// rows a few times instead of once per column; everything else, including
/// rank-deficient input, falls back to Householder QR and still produces
/// orthonormal columns.
pub fn orthonormalize(y: &DenseMatrix) -> DenseMatrix {
    assert!(y.cols <= y.rows, "orthonormalize needs a tall matrix");
    cholesky_qr(y).and_then(|q| cholesky_qr(&q)).unwrap_or_else(|| householder_q(y))
}

/// `Y R⁻¹` where `RᵀR = YᵀY`, or `None` if the Gram matrix is numerically singular.
fn cholesky_qr(y: &DenseMatrix) -> Option<DenseMatrix> {
    let n = y.cols;
    // Upper triangle of the Gram matrix, accumulated row by row.
    let mut gram = vec![0.0; n * n];
    for row in y.values.chunks_exact(n) {
        for (i, &yi) in row.iter().enumerate() {
            if yi != 0.0 {
                let g = &mut gram[i * n + i..(i + 1) * n];
                g.iter_mut().zip(&row[i..]).for_each(|(gij, yj)| *gij += yi * yj);
            }
        }
    }
    // Lower factor L = Rᵀ, row j holding column j of R.
    let mut l = vec![0.0; n * n];
    let mut max_pivot: f64 = 0.0;
    for j in 0..n {
        let (done, rest) = l.split_at_mut(j * n);
        let lj = &mut rest[..n];
        for i in 0..j {
            let li = &done[i * n..i * n + n];
            let dot: f64 = li[..i].iter().zip(&lj[..i]).map(|(a, b)| a * b).sum();
            lj[i] = (gram[i * n + j] - dot) / li[i];
        }
        let pivot2 = gram[j * n + j] - lj[..j].iter().map(|x| x * x).sum::<f64>();
        if !(pivot2 > 0.0) {
            return None;
        }
        let pivot = pivot2.sqrt();
        max_pivot = max_pivot.max(pivot);
        if pivot < CHOLESKY_QR_MIN_PIVOT_RATIO * max_pivot {
            return None;
        }
        lj[j] = pivot;
    }
    let mut q = y.clone();
    for row in q.values.chunks_exact_mut(n) {
        for j in 0..n {
            let lj = &l[j * n..j * n + j + 1];
            let dot: f64 = lj[..j].iter().zip(&row[..j]).map(|(a, b)| a * b).sum();
            row[j] = (row[j] - dot) / lj[j];
        }
    }
    Some(q)
}

/// Thin Q of a Householder QR factorisation.
fn householder_q(y: &DenseMatrix) -> DenseMatrix {
    let (m, n) = (y.rows, y.cols);
    assert!(n <= m, "orthonormalize needs a tall matrix");
    // Work on columns stored contiguously (the transpose) for linear memory access.
    let mut work = y.transpose();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<f64> = work.row(j)[j..].to_vec();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            v.iter_mut().for_each(|x| *x = 0.0);
            v[0] = 1.0;
        } else {
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            v[0] -= alpha;
        }
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            v.iter_mut().for_each(|x| *x /= vnorm);
        }
        for c in j..n {
            reflect(&mut work.row_mut(c)[j..], &v);
        }
        reflectors.push(v);
    }
    let mut qt = DenseMatrix::from_fn(n, m, |r, c| if r == c { 1.0 } else { 0.0 });
    for j in (0..n).rev() {
        for c in 0..n {
            reflect(&mut qt.row_mut(c)[j..], &reflectors[j]);
        }
    }
    qt.transpose()
}

/// `x ← (I − 2vvᵀ) x` for a unit vector `v`.
fn reflect(x: &mut [f64], v: &[f64]) {
    let dot: f64 = v.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
    if dot != 0.0 {
        x.iter_mut().zip(v).for_each(|(xi, vi)| *xi -= 2.0 * vi * dot);
    }
}

/// Full thin SVD of a tall matrix by one-sided (Hestenes) Jacobi.
/// Singular values come back in descending order; left vectors belonging to
/// zero singular values are completed to an orthonormal set.
pub fn thin_svd(c: &DenseMatrix) -> SvdResult {
    let (m, n) = (c.rows, c.cols);
    assert!(n <= m, "thin_svd needs a tall matrix");
    let mut work = c.transpose(); // row j holds column j
    let mut v = DenseMatrix::identity(n);
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (work.row(p), work.row(q));
                    let alpha: f64 = cp.iter().map(|x| x * x).sum();
                    let beta: f64 = cq.iter().map(|x| x * x).sum();
                    let gamma: f64 = cp.iter().zip(cq).map(|(x, y)| x * y).sum();
                    (alpha, beta, gamma)
                };
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for i in 0..m {
                    let (xp, xq) = (work.get(p, i), work.get(q, i));
                    work.set(p, i, cs * xp - sn * xq);
                    work.set(q, i, sn * xp + cs * xq);
                }
                for i in 0..n {
                    let (xp, xq) = (v.get(i, p), v.get(i, q));
                    v.set(i, p, cs * xp - sn * xq);
                    v.set(i, q, sn * xp + cs * xq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| work.row(j).iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let largest = norms.iter().cloned().fold(0.0, f64::max);
    let negligible = largest * (m as f64) * f64::EPSILON;

    let mut left: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        if norms[j] > negligible && norms[j] > 0.0 {
            left.push(work.row(j).iter().map(|x| x / norms[j]).collect());
        } else {
            left.push(vec![0.0; m]);
            deficient.push(slot);
        }
    }
    complete_basis(&mut left, &deficient);

    let singular_values = order.iter().map(|&j| if norms[j] > negligible { norms[j] } else { 0.0 }).collect();
    let u = DenseMatrix::from_fn(m, n, |r, c| left[c][r]);
    let v = DenseMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    SvdResult { u, singular_values, v }
}

/// Fill the listed slots with unit vectors orthogonal to every other slot,
/// drawn from the standard basis by twice-applied Gram-Schmidt.
fn complete_basis(vectors: &mut [Vec<f64>], slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let dim = vectors[0].len();
    let mut filled: Vec<bool> = vec![true; vectors.len()];
    for &s in slots {
        filled[s] = false;
    }
    let mut candidate = 0;
    for &slot in slots {
        while candidate < dim {
            let mut e = vec![0.0; dim];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for (other, _) in vectors.iter().zip(&filled).filter(|(_, &f)| f) {
                    let dot: f64 = other.iter().zip(&e).map(|(a, b)| a * b).sum();
                    e.iter_mut().zip(other).for_each(|(x, o)| *x -= dot * o);
                }
            }
            let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.5 {
                vectors[slot] = e.into_iter().map(|x| x / norm).collect();
                filled[slot] = true;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, laplacian, normalized_laplacian};
    use rand::Rng;

    fn random_symmetric(n: usize, seed: u64) -> DenseMatrix {
        let mut r = RandomSource::from_seed(seed).rng();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = r.random_range(-1.0..1.0);
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    fn assert_orthonormal_columns(m: &DenseMatrix, tol: f64) {
        let g = m.transpose_matmul(m);
        assert!(g.max_abs_diff(&DenseMatrix::identity(m.cols())) < tol, "columns not orthonormal");
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_symmetric(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn k2_normalized_laplacian() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        let e = eig_symmetric(&normalized_laplacian(&g).unwrap().to_dense()).unwrap();
        assert!((e.eigenvalues[0] - 0.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn path_laplacian_closed_form() {
        let g = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        let e = eig_symmetric(&laplacian(&g).to_dense()).unwrap();
        for (k, &lambda) in e.eigenvalues.iter().enumerate() {
            let oracle = 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / 3.0).cos();
            assert!((lambda - oracle).abs() < 1e-8);
        }
        assert!((e.eigenvalues[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigenpairs_and_reconstruction() {
        for seed in 0..10 {
            let a = random_symmetric(10, seed);
            let e = eig_symmetric(&a).unwrap();
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert_orthonormal_columns(&e.eigenvectors, 1e-8);
            let av = a.matmul(&e.eigenvectors);
            for j in 0..10 {
                for i in 0..10 {
                    assert!((av.get(i, j) - e.eigenvalues[j] * e.eigenvectors.get(i, j)).abs() < 1e-8);
                }
            }
            let lambda = DenseMatrix::from_fn(10, 10, |r, c| if r == c { e.eigenvalues[r] } else { 0.0 });
            let rebuilt = e.eigenvectors.matmul(&lambda).matmul(&e.eigenvectors.transpose());
            assert!(rebuilt.max_abs_diff(&a) < 1e-7);
            let trace: f64 = (0..10).map(|i| a.get(i, i)).sum();
            assert!((trace - e.eigenvalues.iter().sum::<f64>()).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(eig_symmetric(&a), Err(Error::NotSymmetric));
        let wide = DenseMatrix::zeros(2, 3);
        assert_eq!(eig_symmetric(&wide), Err(Error::NotSymmetric));
    }

    #[test]
    fn rank_one_svd() {
        let u = [1.0, 2.0, -1.0, 0.5];
        let v = [3.0, -1.0, 2.0];
        let a = DenseMatrix::from_fn(4, 3, |r, c| u[r] * v[c]);
        let s = randomized_svd(&SparseMatrix::from_dense(&a), 1, RandomSource::from_seed(1)).unwrap();
        let norm_u = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        let norm_v = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((s.singular_values[0] - norm_u * norm_v).abs() < 1e-8);
    }

    #[test]
    fn identity_svd_with_degenerate_values() {
        let n = 6;
        let s = randomized_svd(&DenseMatrix::identity(n), n, RandomSource::from_seed(3)).unwrap();
        assert!(s.singular_values.iter().all(|&x| (x - 1.0).abs() < 1e-8));
        assert_orthonormal_columns(&s.u, 1e-6);
        assert_orthonormal_columns(&s.v, 1e-6);
    }

    #[test]
    fn rank_errors() {
        let a = DenseMatrix::identity(3);
        assert!(matches!(randomized_svd(&a, 4, RandomSource::from_seed(0)), Err(Error::RankTooLarge { .. })));
        assert!(matches!(randomized_svd(&a, 0, RandomSource::from_seed(0)), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn svd_matches_gram_oracle() {
        let mut r = RandomSource::from_seed(11).rng();
        let a = DenseMatrix::from_fn(20, 15, |_, _| r.random_range(-1.0..1.0));
        let s = randomized_svd(&a, 5, RandomSource::from_seed(2)).unwrap();
        let gram = a.transpose_matmul(&a);
        let mut oracle: Vec<f64> = eig_symmetric(&gram).unwrap().eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
        oracle.reverse();
        for j in 0..5 {
            assert!((s.singular_values[j] - oracle[j]).abs() / oracle[j] < 1e-6);
        }
        assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        assert_orthonormal_columns(&s.u, 1e-6);
        assert_orthonormal_columns(&s.v, 1e-6);

        let t = randomized_svd(&a.transpose(), 5, RandomSource::from_seed(9)).unwrap();
        for j in 0..5 {
            assert!((t.singular_values[j] - s.singular_values[j]).abs() < 1e-8);
        }
    }

    #[test]
    fn rank_deficient_input_keeps_orthonormal_factors() {
        let a = DenseMatrix::from_fn(8, 5, |r, c| if c < 2 { (r + c) as f64 } else { 0.0 });
        let s = randomized_svd(&a, 5, RandomSource::from_seed(4)).unwrap();
        assert_eq!(&s.singular_values[2..], &[0.0, 0.0, 0.0]);
        assert_orthonormal_columns(&s.u, 1e-6);
        assert_orthonormal_columns(&s.v, 1e-6);
    }

    #[test]
    fn svd_deterministic() {
        let a = random_symmetric(12, 5);
        let x = randomized_svd(&a, 3, RandomSource::new(1, 2)).unwrap();
        let y = randomized_svd(&a, 3, RandomSource::new(1, 2)).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn cholesky_and_householder_bases_span_the_same_space() {
        let mut r = RandomSource::from_seed(9).rng();
        let y = DenseMatrix::from_fn(300, 20, |_, _| StandardNormal.sample(&mut r));
        let q = cholesky_qr(&y).and_then(|q| cholesky_qr(&q)).expect("well-conditioned panel");
        assert_orthonormal_columns(&q, 1e-13);
        let h = householder_q(&y);
        // Same column space: the projector onto one absorbs the other.
        let projected = h.matmul(&h.transpose_matmul(&q));
        assert!(projected.max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn ill_conditioned_panel_falls_back_to_householder() {
        let mut y = DenseMatrix::from_fn(50, 4, |r, c| ((r + 1) * (c + 2)) as f64);
        y.set(0, 3, y.get(0, 3) + 1e-9);
        assert!(cholesky_qr(&y).is_none());
        assert_orthonormal_columns(&orthonormalize(&y), 1e-12);
    }

    #[test]
    fn tiled_symmetric_product_is_bit_identical() {
        use crate::graph::{adjacency_matrix, connected_erdos_renyi_gnm};
        let g = connected_erdos_renyi_gnm(3000, 15000, RandomSource::from_seed(2)).unwrap();
        let a = adjacency_matrix(&g);
        let mut r = RandomSource::from_seed(3).rng();
        let x = DenseMatrix::from_fn(3000, 5, |_, _| r.random_range(-1.0..1.0));
        let op = SymmetricSparse::new(&a);
        assert_eq!(op.apply(&x), a.mul_dense(&x));
        assert_eq!(op.apply_transpose(&x), a.mul_dense(&x));
        assert!(op.apply(&x).max_abs_diff(&a.transpose_mul_dense(&x)) < 1e-12);
    }
}

//! Compressed sparse row matrices.

use crate::linalg::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_offsets: Vec<usize>,
    column_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Build from raw CSR arrays. Column indices must be sorted within rows.
    pub fn from_csr(
        rows: usize,
        cols: usize,
        row_offsets: Vec<usize>,
        column_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        assert_eq!(row_offsets.len(), rows + 1);
        assert_eq!(row_offsets[rows], values.len());
        assert_eq!(column_indices.len(), values.len());
        debug_assert!(row_offsets.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!((0..rows).all(|r| {
            column_indices[row_offsets[r]..row_offsets[r + 1]].windows(2).all(|w| w[0] < w[1])
        }));
        Self { rows, cols, row_offsets, column_indices, values }
    }

    /// Build from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut sorted = triplets.to_vec();
        sorted.sort_by_key(|e| (e.0, e.1));
        let mut row_offsets = vec![0; rows + 1];
        let mut column_indices: Vec<usize> = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            assert!(r < rows && c < cols, "triplet out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                column_indices.push(c);
                values.push(v);
                row_offsets[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self { rows, cols, row_offsets, column_indices, values }
    }

    pub fn from_dense(dense: &DenseMatrix) -> Self {
        let mut row_offsets = Vec::with_capacity(dense.rows() + 1);
        let mut column_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for r in 0..dense.rows() {
            for (c, &v) in dense.row(r).iter().enumerate() {
                if v != 0.0 {
                    column_indices.push(c);
                    values.push(v);
                }
            }
            row_offsets.push(values.len());
        }
        Self::from_csr(dense.rows(), dense.cols(), row_offsets, column_indices, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn row_indices(&self, r: usize) -> &[usize] {
        &self.column_indices[self.row_offsets[r]..self.row_offsets[r + 1]]
    }

    pub fn row_values(&self, r: usize) -> &[f64] {
        &self.values[self.row_offsets[r]..self.row_offsets[r + 1]]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        match self.row_indices(r).binary_search(&c) {
            Ok(i) => self.row_values(r)[i],
            Err(_) => 0.0,
        }
    }

    pub fn scale_rows(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.rows);
        for r in 0..self.rows {
            let (a, b) = (self.row_offsets[r], self.row_offsets[r + 1]);
            self.values[a..b].iter_mut().for_each(|v| *v *= factors[r]);
        }
    }

    pub fn scale_cols(&mut self, factors: &[f64]) {
        assert_eq!(factors.len(), self.cols);
        for (v, &c) in self.values.iter_mut().zip(&self.column_indices) {
            *v *= factors[c];
        }
    }

    /// Apply `f` to every stored value, dropping entries that become zero.
    pub fn map_nonzero(&self, f: impl Fn(f64) -> f64) -> SparseMatrix {
        let mut row_offsets = Vec::with_capacity(self.rows + 1);
        let mut column_indices = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        row_offsets.push(0);
        for r in 0..self.rows {
            for (&c, &v) in self.row_indices(r).iter().zip(self.row_values(r)) {
                let w = f(v);
                if w != 0.0 {
                    column_indices.push(c);
                    values.push(w);
                }
            }
            row_offsets.push(values.len());
        }
        Self::from_csr(self.rows, self.cols, row_offsets, column_indices, values)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.column_indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let mut next = counts.clone();
        let mut column_indices = vec![0; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for r in 0..self.rows {
            for (&c, &v) in self.row_indices(r).iter().zip(self.row_values(r)) {
                column_indices[next[c]] = r;
                values[next[c]] = v;
                next[c] += 1;
            }
        }
        Self::from_csr(self.cols, self.rows, counts, column_indices, values)
    }

    /// Sparse product `self * other`.
    pub fn matmul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut accumulator = vec![0.0; other.cols];
        let mut occupied = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut row_offsets = Vec::with_capacity(self.rows + 1);
        let mut column_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for r in 0..self.rows {
            for (&k, &a) in self.row_indices(r).iter().zip(self.row_values(r)) {
                for (&c, &b) in other.row_indices(k).iter().zip(other.row_values(k)) {
                    if !occupied[c] {
                        occupied[c] = true;
                        touched.push(c);
                    }
                    accumulator[c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                column_indices.push(c);
                values.push(accumulator[c]);
                accumulator[c] = 0.0;
                occupied[c] = false;
            }
            touched.clear();
            row_offsets.push(values.len());
        }
        Self::from_csr(self.rows, other.cols, row_offsets, column_indices, values)
    }

    /// Elementwise sum of two matrices of equal shape.
    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut row_offsets = Vec::with_capacity(self.rows + 1);
        let mut column_indices = Vec::with_capacity(self.nnz().max(other.nnz()));
        let mut values = Vec::with_capacity(self.nnz().max(other.nnz()));
        row_offsets.push(0);
        for r in 0..self.rows {
            let (ai, av) = (self.row_indices(r), self.row_values(r));
            let (bi, bv) = (other.row_indices(r), other.row_values(r));
            let (mut i, mut j) = (0, 0);
            while i < ai.len() || j < bi.len() {
                let take_a = j == bi.len() || (i < ai.len() && ai[i] <= bi[j]);
                let take_b = i == ai.len() || (j < bi.len() && bi[j] <= ai[i]);
                let (c, v) = match (take_a, take_b) {
                    (true, true) => {
                        i += 1;
                        j += 1;
                        (ai[i - 1], av[i - 1] + bv[j - 1])
                    }
                    (true, false) => {
                        i += 1;
                        (ai[i - 1], av[i - 1])
                    }
                    _ => {
                        j += 1;
                        (bi[j - 1], bv[j - 1])
                    }
                };
                column_indices.push(c);
                values.push(v);
            }
            row_offsets.push(values.len());
        }
        Self::from_csr(self.rows, self.cols, row_offsets, column_indices, values)
    }

    pub fn scaled(&self, factor: f64) -> SparseMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (&c, &v) in self.row_indices(r).iter().zip(self.row_values(r)) {
                out.set(r, c, v);
            }
        }
        out
    }

    /// `self * dense` for a row-major dense right-hand side.
    pub fn mul_dense(&self, dense: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, dense.cols());
        self.mul_dense_add(dense, &mut out);
        out
    }

    /// `selfᵀ * dense` without materialising the transpose.
    pub fn transpose_mul_dense(&self, dense: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.rows, dense.rows());
        let k = dense.cols();
        let mut out = DenseMatrix::zeros(self.cols, k);
        for r in 0..self.rows {
            let d_row = dense.row(r);
            for (&c, &v) in self.row_indices(r).iter().zip(self.row_values(r)) {
                for (o, &d) in out.row_mut(c).iter_mut().zip(d_row) {
                    *o += v * d;
                }
            }
        }
        out
    }

    /// Split into matrices of the same shape whose entries fall in
    /// consecutive column ranges of at most `width` columns.
    pub fn column_blocks(&self, width: usize) -> Vec<SparseMatrix> {
        let width = width.max(1);
        (0..self.cols.div_ceil(width).max(1))
            .map(|b| {
                let (lo, hi) = (b * width, ((b + 1) * width).min(self.cols));
                let mut offsets = Vec::with_capacity(self.rows + 1);
                let (mut indices, mut values) = (Vec::new(), Vec::new());
                offsets.push(0);
                for r in 0..self.rows {
                    let idx = self.row_indices(r);
                    let start = idx.partition_point(|&c| c < lo);
                    let end = idx.partition_point(|&c| c < hi);
                    indices.extend_from_slice(&idx[start..end]);
                    values.extend_from_slice(&self.row_values(r)[start..end]);
                    offsets.push(indices.len());
                }
                SparseMatrix::from_csr(self.rows, self.cols, offsets, indices, values)
            })
            .collect()
    }

    /// `out += self * dense`.
    pub fn mul_dense_add(&self, dense: &DenseMatrix, out: &mut DenseMatrix) {
        assert_eq!(self.cols, dense.rows());
        assert_eq!((out.rows(), out.cols()), (self.rows, dense.cols()));
        for r in 0..self.rows {
            let out_row = out.row_mut(r);
            for (&c, &v) in self.row_indices(r).iter().zip(self.row_values(r)) {
                for (o, &d) in out_row.iter_mut().zip(dense.row(c)) {
                    *o += v * d;
                }
            }
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// An `n × d` table of vectors; row `i` always describes entity `i`
/// (node `i` of a graph, or graph `i` of a corpus).
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix(DenseMatrix);

impl EmbeddingMatrix {
    /// Wrap a dense matrix, rejecting NaN and infinite entries.
    pub fn new(values: DenseMatrix) -> Result<Self> {
        if let Some(pos) = values.values().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite embedding entry at row {}, column {}",
                pos / values.cols().max(1),
                pos % values.cols().max(1)
            )));
        }
        Ok(Self(values))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.0
    }

    /// Rows at `indices`, in that order.
    pub fn select_rows(&self, indices: &[usize]) -> DenseMatrix {
        DenseMatrix::from_fn(indices.len(), self.cols(), |r, c| self.0.get(indices[r], c))
    }

    /// Side-by-side concatenation of equally tall blocks.
    pub fn hstack(blocks: &[EmbeddingMatrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, EmbeddingMatrix::rows);
        if let Some(b) = blocks.iter().find(|b| b.rows() != rows) {
            return Err(Error::DimensionMismatch(format!("{} rows vs {rows}", b.rows())));
        }
        let cols: usize = blocks.iter().map(EmbeddingMatrix::cols).sum();
        let mut out = DenseMatrix::zeros(rows, cols);
        for r in 0..rows {
            let mut offset = 0;
            for b in blocks {
                out.row_mut(r)[offset..offset + b.cols()].copy_from_slice(b.row(r));
                offset += b.cols();
            }
        }
        Ok(Self(out))
    }
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

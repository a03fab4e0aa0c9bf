use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fitted, NodeEmbedder};
use crate::graph::{transition_matrix, Graph};
use crate::linalg::{randomized_svd, DenseMatrix, SymmetricSparse};
use crate::random::RandomSource;
use crate::sparse::SparseMatrix;

/// Largest graph accepted by NetMF.
pub const NETMF_NODE_LIMIT: usize = 1 << 13;

/// Explicit factorisation of the log-clamped expected walk co-occurrence
/// matrix `log max(vol(G)/(b·T) · Σ_{r≤T} Pʳ · D⁻¹, 1)`.
#[derive(Debug, Clone)]
pub struct NetMfModel {
    /// Default 32.
    pub dimensions: usize,
    /// Window size `T`. Default 2.
    pub order: usize,
    /// Negative sampling constant `b`. Default 1.
    pub negative_samples: f64,
    /// Default 42.
    pub seed: u64,
    fit: Option<(EmbeddingMatrix, Vec<f64>)>,
}

impl Default for NetMfModel {
    fn default() -> Self {
        Self { dimensions: 32, order: 2, negative_samples: 1.0, seed: 42, fit: None }
    }
}

impl NetMfModel {
    pub fn with_dimensions(dimensions: usize) -> Self {
        Self { dimensions, ..Self::default() }
    }

    /// Singular values of the factorised matrix, descending.
    pub fn get_singular_values(&self) -> Result<&[f64]> {
        Ok(&fitted(&self.fit)?.1)
    }
}

/// The target matrix. Entries below one clamp to zero after the log, so the
/// result keeps the sparsity pattern of `Σ Pʳ`.
pub fn netmf_matrix(g: &Graph, order: usize, negative_samples: f64) -> Result<SparseMatrix> {
    g.require_connected()?;
    if order == 0 || !(negative_samples > 0.0) {
        return Err(Error::InvalidParameter("order and negative_samples must be positive".into()));
    }
    let p = transition_matrix(g)?;
    let mut power = p.clone();
    let mut sum = p.clone();
    for _ in 1..order {
        power = power.matmul(&p);
        sum = sum.add(&power);
    }
    let inverse_degree: Vec<f64> = g.degrees().into_iter().map(|d| 1.0 / d as f64).collect();
    sum.scale_cols(&inverse_degree);
    let volume = 2.0 * g.edge_count() as f64;
    let factor = volume / (negative_samples * order as f64);
    Ok(sum.map_nonzero(|x| (factor * x).max(1.0).ln()))
}

impl NodeEmbedder for NetMfModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        graph.require_connected()?;
        let n = graph.node_count();
        if n > NETMF_NODE_LIMIT {
            return Err(Error::GraphTooLarge { nodes: n, limit: NETMF_NODE_LIMIT });
        }
        if self.dimensions == 0 || self.dimensions > n {
            return Err(Error::RankTooLarge { requested: self.dimensions, max: n });
        }
        let target = netmf_matrix(graph, self.order, self.negative_samples)?;
        // Σ (D⁻¹A)ʳ D⁻¹ is symmetric, so the target is too.
        let svd = randomized_svd(&SymmetricSparse::new(&target), self.dimensions, RandomSource::new(self.seed, 0))?;
        let roots: Vec<f64> = svd.singular_values.iter().map(|s| s.sqrt()).collect();
        let embedding = DenseMatrix::from_fn(n, self.dimensions, |r, c| svd.u.get(r, c) * roots[c]);
        self.fit = Some((EmbeddingMatrix::new(embedding)?, svd.singular_values));
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        Ok(&fitted(&self.fit)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, connected_erdos_renyi_gnm};

    /// Dense route: explicit matrix powers, no sparsity.
    fn dense_target(g: &Graph, order: usize, b: f64) -> DenseMatrix {
        let n = g.node_count();
        let p = DenseMatrix::from_fn(n, n, |r, c| if g.has_edge(r, c) { 1.0 / g.degree(r) as f64 } else { 0.0 });
        let mut power = p.clone();
        let mut sum = p.clone();
        for _ in 1..order {
            power = power.matmul(&p);
            sum = DenseMatrix::from_fn(n, n, |r, c| sum.get(r, c) + power.get(r, c));
        }
        let vol = 2.0 * g.edge_count() as f64;
        DenseMatrix::from_fn(n, n, |r, c| {
            (vol / (b * order as f64) * sum.get(r, c) / g.degree(c) as f64).max(1.0).ln()
        })
    }

    #[test]
    fn target_matches_dense_and_is_symmetric() {
        for seed in 0..5 {
            let g = connected_erdos_renyi_gnm(10, 20, RandomSource::from_seed(seed)).unwrap();
            for order in [1, 2, 3] {
                let sparse = netmf_matrix(&g, order, 1.0).unwrap().to_dense();
                let dense = dense_target(&g, order, 1.0);
                assert!(sparse.max_abs_diff(&dense) < 1e-12);
                assert!(sparse.is_symmetric(1e-10));
                assert!(sparse.values().iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn embedding_shape_and_errors() {
        let g = connected_erdos_renyi_gnm(40, 100, RandomSource::from_seed(1)).unwrap();
        let mut model = NetMfModel::default();
        assert_eq!(model.get_embedding(), Err(Error::NotFitted));
        model.fit(&g).unwrap();
        assert_eq!(model.get_embedding().unwrap().cols(), 32);
        let k3 = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(matches!(NetMfModel::with_dimensions(4).fit(&k3), Err(Error::RankTooLarge { .. })));
    }
}

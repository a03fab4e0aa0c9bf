//! Spectral fingerprints built from the normalised Laplacian spectrum.

use super::GraphCorpus;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fitted, GraphEmbedder};
use crate::graph::{normalized_laplacian, Graph};
use crate::linalg::{eig_symmetric, DenseMatrix, DENSE_EIGEN_LIMIT};

pub const NETLSD_TIME_POINTS: usize = 250;
const NETLSD_LOG10_START: f64 = -2.0;
const NETLSD_LOG10_END: f64 = 2.0;

fn spectrum(g: &Graph) -> Result<Vec<f64>> {
    g.require_connected()?;
    if g.node_count() > DENSE_EIGEN_LIMIT {
        return Err(Error::GraphTooLarge { nodes: g.node_count(), limit: DENSE_EIGEN_LIMIT });
    }
    Ok(eig_symmetric(&normalized_laplacian(g)?.to_dense())?.eigenvalues)
}

/// Smallest normalised-Laplacian eigenvalues, ascending and zero padded.
#[derive(Debug, Clone)]
pub struct SfModel {
    /// Default 32.
    pub dimensions: usize,
    embedding: Option<EmbeddingMatrix>,
}

impl Default for SfModel {
    fn default() -> Self {
        Self::new(32)
    }
}

impl SfModel {
    pub fn new(dimensions: usize) -> Self {
        Self { dimensions, embedding: None }
    }
}

impl GraphEmbedder for SfModel {
    fn fit(&mut self, corpus: &GraphCorpus) -> Result<()> {
        corpus.require_valid()?;
        let d = self.dimensions;
        let rows = corpus.map_graphs(|_, g| {
            let mut row = spectrum(g)?;
            row.resize(d, 0.0);
            Ok(row)
        })?;
        self.embedding = Some(EmbeddingMatrix::new(DenseMatrix::from_rows(&rows)?)?);
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        fitted(&self.embedding)
    }
}

/// `NETLSD_TIME_POINTS` times log-spaced on `[1e-2, 1e2]`.
pub fn netlsd_time_grid() -> Vec<f64> {
    let last = (NETLSD_TIME_POINTS - 1) as f64;
    (0..NETLSD_TIME_POINTS)
        .map(|i| 10f64.powf(NETLSD_LOG10_START + (NETLSD_LOG10_END - NETLSD_LOG10_START) * i as f64 / last))
        .collect()
}

/// `h(t) = Σ exp(−t λ)` at each time.
pub fn heat_trace(eigenvalues: &[f64], times: &[f64]) -> Vec<f64> {
    times.iter().map(|&t| eigenvalues.iter().map(|&l| (-t * l).exp()).sum()).collect()
}

/// Heat-trace signature over a fixed logarithmic time grid.
#[derive(Debug, Clone, Default)]
pub struct NetLsdModel {
    embedding: Option<EmbeddingMatrix>,
}

impl NetLsdModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn time_points(&self) -> Vec<f64> {
        netlsd_time_grid()
    }
}

impl GraphEmbedder for NetLsdModel {
    fn fit(&mut self, corpus: &GraphCorpus) -> Result<()> {
        corpus.require_valid()?;
        let times = netlsd_time_grid();
        let rows = corpus.map_graphs(|_, g| Ok(heat_trace(&spectrum(g)?, &times)))?;
        self.embedding = Some(EmbeddingMatrix::new(DenseMatrix::from_rows(&rows)?)?);
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        fitted(&self.embedding)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, connected_erdos_renyi_gnm, laplacian};
    use crate::random::RandomSource;

    fn k(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        build_graph(n, &edges).unwrap()
    }

    fn corpus(graphs: Vec<Graph>) -> GraphCorpus {
        GraphCorpus::from_graphs(graphs)
    }

    #[test]
    fn sf_k2_padded() {
        let mut m = SfModel::new(4);
        m.fit(&corpus(vec![k(2)])).unwrap();
        let row = m.get_embedding().unwrap().row(0);
        assert!(row[0].abs() < 1e-12 && (row[1] - 2.0).abs() < 1e-12);
        assert_eq!(&row[2..], &[0.0, 0.0]);
    }

    #[test]
    fn sf_first_component_zero_and_sorted() {
        let graphs: Vec<_> = (0..5).map(|s| connected_erdos_renyi_gnm(20, 45, RandomSource::from_seed(s)).unwrap()).collect();
        let mut m = SfModel::new(32);
        m.fit(&corpus(graphs)).unwrap();
        let e = m.get_embedding().unwrap();
        for r in 0..5 {
            let row = e.row(r);
            assert!(row[0].abs() < 1e-9);
            assert!(row[..20].windows(2).all(|w| w[0] <= w[1]));
            assert!(row[20..].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn sf_matches_direct_eigensolve() {
        let g = connected_erdos_renyi_gnm(12, 30, RandomSource::from_seed(1)).unwrap();
        let direct = eig_symmetric(&normalized_laplacian(&g).unwrap().to_dense()).unwrap().eigenvalues;
        let mut m = SfModel::new(12);
        m.fit(&corpus(vec![g])).unwrap();
        assert_eq!(m.get_embedding().unwrap().row(0), direct.as_slice());
        // Same solver against the closed-form path spectrum.
        let p5 = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let l = eig_symmetric(&laplacian(&p5).to_dense()).unwrap().eigenvalues;
        for (i, &x) in l.iter().enumerate() {
            assert!((x - (2.0 - 2.0 * (std::f64::consts::PI * i as f64 / 5.0).cos())).abs() < 1e-9);
        }
    }

    #[test]
    fn netlsd_closed_forms() {
        let times = [1.0];
        let k3 = heat_trace(&spectrum(&k(3)).unwrap(), &times)[0];
        assert!((k3 - (1.0 + 2.0 * (-1.5f64).exp())).abs() < 1e-6);
        assert!((k3 - 1.446260).abs() < 1e-6);
        let k2 = heat_trace(&spectrum(&k(2)).unwrap(), &times)[0];
        assert!((k2 - (1.0 + (-2.0f64).exp())).abs() < 1e-6);
        assert!((k2 - 1.135335).abs() < 1e-6);
    }

    #[test]
    fn netlsd_shape_and_bounds() {
        let grid = netlsd_time_grid();
        assert_eq!(grid.len(), 250);
        assert!((grid[0] - 0.01).abs() < 1e-15 && (grid[249] - 100.0).abs() < 1e-12);
        let g = connected_erdos_renyi_gnm(15, 30, RandomSource::from_seed(4)).unwrap();
        let mut m = NetLsdModel::new();
        m.fit(&corpus(vec![g, k(4)])).unwrap();
        let e = m.get_embedding().unwrap();
        assert_eq!(e.cols(), 250);
        for (r, n) in [(0, 15.0), (1, 4.0)] {
            let row = e.row(r);
            assert!(row.windows(2).all(|w| w[1] <= w[0] + 1e-12));
            assert!(row.iter().all(|&h| h <= n && h >= 1.0 - 1e-12));
        }
    }

    #[test]
    fn errors() {
        let mut m = SfModel::default();
        assert_eq!(m.fit(&corpus(vec![])), Err(Error::EmptyCorpus));
        let disconnected = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(m.fit(&corpus(vec![k(3), disconnected])), Err(Error::DisconnectedGraph));
        let path: Vec<_> = (0..1100).map(|i| (i, i + 1)).collect();
        let big = build_graph(1101, &path).unwrap();
        assert!(matches!(m.fit(&corpus(vec![big])), Err(Error::GraphTooLarge { .. })));
        assert_eq!(NetLsdModel::new().get_embedding(), Err(Error::NotFitted));
    }
}

use rand::Rng;

use super::MembershipMap;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fitted, CommunityDetector};
use crate::graph::{adjacency_matrix, Graph};
use crate::linalg::DenseMatrix;
use crate::random::RandomSource;

/// Guard added to the multiplicative-update denominator.
pub const SYMNMF_EPSILON: f64 = 1e-10;

/// Step weights tried in order: the plain multiplicative update, then damped ones.
pub const UPDATE_DAMPING: [f64; 3] = [1.0, 0.5, 0.25];

/// Overlapping communities from a symmetric nonnegative factorisation
/// `A ≈ H Hᵀ`, reduced to hard clusters by per-node argmax.
#[derive(Debug, Clone)]
pub struct SymNmfModel {
    /// Number of latent communities. Default 32.
    pub dimensions: usize,
    /// Default 200.
    pub iterations: usize,
    /// Relative loss change that ends training early. Default 1e-6.
    pub tolerance: f64,
    /// Default 42.
    pub seed: u64,
    fit: Option<SymNmfFit>,
}

#[derive(Debug, Clone)]
pub struct SymNmfFit {
    /// The nonnegative factor `H`, one row per node.
    pub factor: EmbeddingMatrix,
    pub memberships: MembershipMap,
    /// `‖A − HHᵀ‖²_F` at initialisation and after every update.
    pub losses: Vec<f64>,
}

impl Default for SymNmfModel {
    fn default() -> Self {
        Self::new(32, 200, 1e-6, 42)
    }
}

impl SymNmfModel {
    pub fn new(dimensions: usize, iterations: usize, tolerance: f64, seed: u64) -> Self {
        Self { dimensions, iterations, tolerance, seed, fit: None }
    }

    /// The fitted affiliation matrix `H`.
    pub fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        Ok(&fitted(&self.fit)?.factor)
    }

    pub fn get_losses(&self) -> Result<&[f64]> {
        Ok(&fitted(&self.fit)?.losses)
    }
}

impl CommunityDetector for SymNmfModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        self.fit = Some(symnmf(graph, self.dimensions, self.iterations, self.tolerance, self.seed)?);
        Ok(())
    }

    fn get_memberships(&self) -> Result<&MembershipMap> {
        Ok(&fitted(&self.fit)?.memberships)
    }
}

/// Multiplicative updates `H ← H ∘ (AH) ⁄ (H(HᵀH) + ε)` from a uniform
/// start scaled by `√(mean(A)/k)`.
///
/// The plain update is not guaranteed to decrease the loss, so a step that
/// would raise it is retried with the damped rule
/// `H ← H ∘ (1 − β + β·(AH) ⁄ (H(HᵀH) + ε))` for each β in
/// [`UPDATE_DAMPING`] after the first; if every step raises the loss,
/// training stops.
pub fn symnmf(g: &Graph, k: usize, iterations: usize, tolerance: f64, seed: u64) -> Result<SymNmfFit> {
    g.require_connected()?;
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::RankTooLarge { requested: k, max: n });
    }
    let a = adjacency_matrix(g);
    let norm_a = a.frobenius_norm_sq();
    let mean = 2.0 * g.edge_count() as f64 / (n * n) as f64;
    let scale = (mean / k as f64).sqrt();
    let mut init = RandomSource::new(seed, 0).rng();
    let mut h = DenseMatrix::from_fn(n, k, |_, _| init.random::<f64>() * scale);

    let loss = |h: &DenseMatrix, ah: &DenseMatrix, hth: &DenseMatrix| -> f64 {
        let trace: f64 = h.values().iter().zip(ah.values()).map(|(x, y)| x * y).sum();
        let gram: f64 = hth.values().iter().map(|v| v * v).sum();
        (norm_a - 2.0 * trace + gram).max(0.0)
    };

    let mut ah = a.mul_dense(&h);
    let mut hth = h.transpose_matmul(&h);
    let mut losses = vec![loss(&h, &ah, &hth)];
    for _ in 0..iterations {
        let denominator = h.matmul(&hth);
        let ratio: Vec<f64> =
            ah.values().iter().zip(denominator.values()).map(|(&num, &den)| num / (den + SYMNMF_EPSILON)).collect();
        let previous = *losses.last().unwrap();
        let mut accepted = None;
        for beta in UPDATE_DAMPING {
            let next: Vec<f64> =
                h.values().iter().zip(&ratio).map(|(&x, &r)| x * (1.0 - beta + beta * r)).collect();
            let candidate = DenseMatrix::from_vec(n, k, next)?;
            let candidate_ah = a.mul_dense(&candidate);
            let candidate_hth = candidate.transpose_matmul(&candidate);
            let current = loss(&candidate, &candidate_ah, &candidate_hth);
            if current <= previous {
                accepted = Some((candidate, candidate_ah, candidate_hth, current));
                break;
            }
        }
        let Some((next, next_ah, next_hth, current)) = accepted else {
            break;
        };
        h = next;
        ah = next_ah;
        hth = next_hth;
        losses.push(current);
        if (previous - current).abs() <= tolerance * previous.max(f64::MIN_POSITIVE) {
            break;
        }
    }

    let mut ties = RandomSource::new(seed, 1).rng();
    let labels: Vec<usize> = (0..n)
        .map(|r| {
            let row = h.row(r);
            let top = row.iter().cloned().fold(f64::MIN, f64::max);
            let best: Vec<usize> = (0..k).filter(|&c| row[c] == top).collect();
            best[ties.random_range(0..best.len())]
        })
        .collect();
    Ok(SymNmfFit {
        factor: EmbeddingMatrix::new(h)?,
        memberships: MembershipMap::from_labels(&labels),
        losses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, connected_erdos_renyi_gnm};

    fn two_k4_bridge() -> Graph {
        let mut edges = Vec::new();
        for offset in [0, 4] {
            for u in 0..4 {
                for v in u + 1..4 {
                    edges.push((offset + u, offset + v));
                }
            }
        }
        edges.push((3, 4));
        build_graph(8, &edges).unwrap()
    }

    #[test]
    fn monotone_and_nonnegative() {
        for seed in 0..10 {
            let g = connected_erdos_renyi_gnm(30, 80, RandomSource::from_seed(seed)).unwrap();
            let fit = symnmf(&g, 5, 200, 0.0, seed).unwrap();
            assert!(fit.losses.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{:?}", fit.losses);
            assert!(fit.factor.as_dense().values().iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn loss_matches_direct_residual() {
        let g = two_k4_bridge();
        let fit = symnmf(&g, 2, 3, 0.0, 1).unwrap();
        let h = fit.factor.as_dense();
        let a = adjacency_matrix(&g).to_dense();
        let residual = a.max_abs_diff(&DenseMatrix::zeros(8, 8));
        assert!(residual > 0.0);
        let hht = h.matmul(&h.transpose());
        let direct: f64 = a.values().iter().zip(hht.values()).map(|(x, y)| (x - y).powi(2)).sum();
        assert!((direct - fit.losses.last().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn rank_checks() {
        let g = two_k4_bridge();
        assert!(matches!(symnmf(&g, 9, 10, 1e-6, 0), Err(Error::RankTooLarge { .. })));
        let disconnected = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(symnmf(&disconnected, 2, 10, 1e-6, 0).err(), Some(Error::DisconnectedGraph));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = two_k4_bridge();
        let a = symnmf(&g, 2, 50, 1e-6, 3).unwrap();
        let b = symnmf(&g, 2, 50, 1e-6, 3).unwrap();
        assert_eq!(a.factor, b.factor);
        assert_eq!(a.memberships, b.memberships);
    }

    #[test]
    fn lifecycle() {
        let mut model = SymNmfModel::default();
        assert_eq!((model.dimensions, model.iterations), (32, 200));
        assert!(model.get_embedding().is_err());
        model.dimensions = 2;
        model.fit(&two_k4_bridge()).unwrap();
        assert_eq!(model.get_embedding().unwrap().cols(), 2);
        assert_eq!(model.get_memberships().unwrap().len(), 8);
    }
}

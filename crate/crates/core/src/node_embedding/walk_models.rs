use super::sgns::{sgns_train_pairs, OffsetPairs, SkipGramParams, WindowPairs};
use super::walks::generate_walks;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fitted, NodeEmbedder};
use crate::graph::Graph;
use crate::random::RandomSource;

/// Uniform random walks fed to skip-gram with negative sampling.
#[derive(Debug, Clone)]
pub struct DeepWalkModel {
    /// Walks started from every node. Default 10.
    pub walk_number: usize,
    /// Nodes per walk. Default 80.
    pub walk_length: usize,
    /// Default 128.
    pub dimensions: usize,
    /// Default 5.
    pub window_size: usize,
    /// Default 5.
    pub negative_samples: usize,
    /// Default 1.
    pub epochs: usize,
    /// Default 0.025.
    pub learning_rate: f64,
    /// Default 42.
    pub seed: u64,
    embedding: Option<EmbeddingMatrix>,
}

impl Default for DeepWalkModel {
    fn default() -> Self {
        let sg = SkipGramParams::default();
        Self {
            walk_number: 10,
            walk_length: 80,
            dimensions: sg.dimensions,
            window_size: sg.window_size,
            negative_samples: sg.negative_samples,
            epochs: sg.epochs,
            learning_rate: sg.learning_rate,
            seed: sg.seed,
            embedding: None,
        }
    }
}

impl DeepWalkModel {
    pub fn with_dimensions(dimensions: usize) -> Self {
        Self { dimensions, ..Self::default() }
    }

    fn skip_gram(&self) -> SkipGramParams {
        SkipGramParams {
            dimensions: self.dimensions,
            window_size: self.window_size,
            negative_samples: self.negative_samples,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            seed: self.seed,
        }
    }
}

impl NodeEmbedder for DeepWalkModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        let walks = generate_walks(graph, self.walk_number, self.walk_length, RandomSource::new(self.seed, 0))?;
        let source = WindowPairs { corpus: &walks, window: self.window_size };
        self.embedding = Some(sgns_train_pairs(&source, &self.skip_gram())?.0);
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        fitted(&self.embedding)
    }
}

/// Multi-scale skip-gram: one independent model per walk offset `1..=window_size`,
/// concatenated in offset order.
#[derive(Debug, Clone)]
pub struct WalkletsModel {
    /// Default 10.
    pub walk_number: usize,
    /// Default 80.
    pub walk_length: usize,
    /// Number of scales. Default 4.
    pub window_size: usize,
    /// Width of each scale's block. Default 32.
    pub dimensions: usize,
    /// Default 5.
    pub negative_samples: usize,
    /// Default 1.
    pub epochs: usize,
    /// Default 0.025.
    pub learning_rate: f64,
    /// Default 42.
    pub seed: u64,
    embedding: Option<EmbeddingMatrix>,
}

impl Default for WalkletsModel {
    fn default() -> Self {
        Self {
            walk_number: 10,
            walk_length: 80,
            window_size: 4,
            dimensions: 32,
            negative_samples: 5,
            epochs: 1,
            learning_rate: 0.025,
            seed: 42,
            embedding: None,
        }
    }
}

impl WalkletsModel {
    pub fn output_width(&self) -> usize {
        self.window_size * self.dimensions
    }
}

impl NodeEmbedder for WalkletsModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        if self.window_size == 0 {
            return Err(Error::InvalidParameter("window_size must be positive".into()));
        }
        let walks = generate_walks(graph, self.walk_number, self.walk_length, RandomSource::new(self.seed, 0))?;
        let blocks = (1..=self.window_size)
            .map(|offset| {
                let params = SkipGramParams {
                    dimensions: self.dimensions,
                    window_size: 1,
                    negative_samples: self.negative_samples,
                    epochs: self.epochs,
                    learning_rate: self.learning_rate,
                    seed: RandomSource::new(self.seed, 0).child(offset as u64).seed,
                };
                Ok(sgns_train_pairs(&OffsetPairs { corpus: &walks, offset }, &params)?.0)
            })
            .collect::<Result<Vec<_>>>()?;
        self.embedding = Some(EmbeddingMatrix::hstack(&blocks)?);
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        fitted(&self.embedding)
    }
}

//! Weisfeiler-Lehman subtree features and their TF-IDF / truncated-SVD
//! embedding.

use std::collections::{BTreeMap, HashMap};

use super::GraphCorpus;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::estimator::{fitted, GraphEmbedder};
use crate::graph::Graph;
use crate::linalg::{randomized_svd, DenseMatrix};
use crate::random::RandomSource;
use crate::sparse::SparseMatrix;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over a sequence of byte strings, each preceded by its
/// length as a little-endian `u64`. Identical on every platform and release.
pub fn stable_hash<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> u64 {
    let mut hash = FNV_OFFSET;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(FNV_PRIME);
        }
    };
    for part in parts {
        feed(&(part.len() as u64).to_le_bytes());
        feed(part);
    }
    hash
}

/// Multiset of `"{round}:{label}"` strings for one graph, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WlFeatureSet {
    pub features: Vec<String>,
}

impl WlFeatureSet {
    /// Occurrences of each distinct feature.
    pub fn counts(&self) -> BTreeMap<&str, usize> {
        let mut out = BTreeMap::new();
        for f in &self.features {
            *out.entry(f.as_str()).or_insert(0) += 1;
        }
        out
    }
}

/// Per-round node labels: round 0 is the supplied feature (or the decimal
/// degree), round `r + 1` hashes the node's round-`r` label together with
/// its neighbours' round-`r` labels in sorted order.
pub fn wl_labels(g: &Graph, features: Option<&HashMap<usize, String>>, iterations: usize) -> Result<Vec<Vec<String>>> {
    let n = g.node_count();
    let initial: Vec<String> = match features {
        Some(map) => (0..n)
            .map(|i| map.get(&i).cloned().ok_or(Error::IncompleteFeatureMap(i)))
            .collect::<Result<_>>()?,
        None => (0..n).map(|i| g.degree(i).to_string()).collect(),
    };
    let mut rounds = vec![initial];
    for _ in 0..iterations {
        let previous = rounds.last().unwrap();
        let next = (0..n)
            .map(|u| {
                let mut neighbors: Vec<&str> = g.neighbors(u).iter().map(|&v| previous[v].as_str()).collect();
                neighbors.sort_unstable();
                let parts = std::iter::once(previous[u].as_bytes()).chain(neighbors.iter().map(|s| s.as_bytes()));
                format!("{:016x}", stable_hash(parts))
            })
            .collect();
        rounds.push(next);
    }
    Ok(rounds)
}

pub fn wl_features(g: &Graph, features: Option<&HashMap<usize, String>>, iterations: usize) -> Result<WlFeatureSet> {
    let rounds = wl_labels(g, features, iterations)?;
    let mut all: Vec<String> = rounds
        .iter()
        .enumerate()
        .flat_map(|(r, labels)| labels.iter().map(move |l| format!("{r}:{l}")))
        .collect();
    all.sort_unstable();
    Ok(WlFeatureSet { features: all })
}

/// WL feature counts, TF-IDF weighted and reduced by truncated SVD.
#[derive(Debug, Clone)]
pub struct WlSvdModel {
    /// Default 2.
    pub wl_iterations: usize,
    /// Default 128. Output is zero padded when the count matrix has fewer
    /// rows or columns than this.
    pub dimensions: usize,
    /// Default 42.
    pub seed: u64,
    embedding: Option<EmbeddingMatrix>,
}

impl Default for WlSvdModel {
    fn default() -> Self {
        Self::new(2, 128, 42)
    }
}

impl WlSvdModel {
    pub fn new(wl_iterations: usize, dimensions: usize, seed: u64) -> Self {
        Self { wl_iterations, dimensions, seed, embedding: None }
    }
}

impl GraphEmbedder for WlSvdModel {
    fn fit(&mut self, corpus: &GraphCorpus) -> Result<()> {
        corpus.require_valid()?;
        let iterations = self.wl_iterations;
        let documents = corpus.map_graphs(|i, g| wl_features(g, corpus.features[i].as_ref(), iterations))?;

        let mut vocabulary: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in &documents {
            for f in &doc.features {
                vocabulary.entry(f.as_str()).or_insert(0);
            }
        }
        for (column, slot) in vocabulary.values_mut().enumerate() {
            *slot = column;
        }
        let mut document_frequency = vec![0usize; vocabulary.len()];
        let mut triplets = Vec::new();
        for (row, doc) in documents.iter().enumerate() {
            for (feature, count) in doc.counts() {
                let column = vocabulary[feature];
                document_frequency[column] += 1;
                triplets.push((row, column, count as f64));
            }
        }
        let graphs = documents.len() as f64;
        let idf: Vec<f64> = document_frequency.iter().map(|&df| (graphs / df as f64).ln()).collect();
        let mut tfidf = SparseMatrix::from_triplets(documents.len(), vocabulary.len(), &triplets);
        tfidf.scale_cols(&idf);

        let rank = self.dimensions.min(tfidf.rows()).min(tfidf.cols());
        let svd = randomized_svd(&tfidf, rank, RandomSource::new(self.seed, 0))?;
        // Rows are projected onto the right singular vectors (= U Σ), so
        // equal count rows always land on equal embeddings.
        let projected = tfidf.mul_dense(&svd.v);
        let padded = DenseMatrix::from_fn(documents.len(), self.dimensions, |r, c| {
            if c < rank {
                projected.get(r, c)
            } else {
                0.0
            }
        });
        self.embedding = Some(EmbeddingMatrix::new(padded)?);
        Ok(())
    }

    fn get_embedding(&self) -> Result<&EmbeddingMatrix> {
        fitted(&self.embedding)
    }
}

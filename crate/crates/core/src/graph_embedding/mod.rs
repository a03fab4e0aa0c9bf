//! Whole-graph embeddings: one row per graph of a corpus.

mod spectral;
mod wl;

pub use spectral::{heat_trace, netlsd_time_grid, NetLsdModel, SfModel, NETLSD_TIME_POINTS};
pub use wl::{stable_hash, wl_features, WlFeatureSet, WlSvdModel};

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered graphs with optional single-string node features and optional
/// integer labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GraphCorpus {
    pub graphs: Vec<Graph>,
    /// Per graph, an optional node → feature map.
    pub features: Vec<Option<HashMap<usize, String>>>,
    pub labels: Option<Vec<usize>>,
}

impl GraphCorpus {
    /// A corpus without features or labels.
    pub fn from_graphs(graphs: Vec<Graph>) -> Self {
        let features = vec![None; graphs.len()];
        Self { graphs, features, labels: None }
    }

    pub fn new(
        graphs: Vec<Graph>,
        features: Vec<Option<HashMap<usize, String>>>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if features.len() != graphs.len() {
            return Err(Error::LengthMismatch(features.len(), graphs.len()));
        }
        if let Some(l) = &labels {
            if l.len() != graphs.len() {
                return Err(Error::LengthMismatch(l.len(), graphs.len()));
            }
        }
        for (g, f) in graphs.iter().zip(&features) {
            if let Some(map) = f {
                if let Some(missing) = (0..g.node_count()).find(|i| !map.contains_key(i)) {
                    return Err(Error::IncompleteFeatureMap(missing));
                }
            }
        }
        Ok(Self { graphs, features, labels })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Fails on an empty corpus or on the first disconnected graph.
    pub(crate) fn require_valid(&self) -> Result<()> {
        if self.graphs.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        self.graphs.iter().try_for_each(Graph::require_connected)
    }

    /// Apply `f` to every graph in parallel; output order follows the corpus.
    pub(crate) fn map_graphs<T: Send>(
        &self,
        f: impl Fn(usize, &Graph) -> Result<T> + Sync + Send,
    ) -> Result<Vec<T>> {
        self.graphs.par_iter().enumerate().map(|(i, g)| f(i, g)).collect()
    }
}

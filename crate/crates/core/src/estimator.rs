//! The fit / get lifecycle shared by every model.
//!
//! Hyperparameters are public fields with documented defaults, readable
//! before and after fitting. Fitted results are only reachable through the
//! getters, which return [`Error::NotFitted`] until `fit` has succeeded.

use crate::community::MembershipMap;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph_embedding::GraphCorpus;

pub trait CommunityDetector {
    fn fit(&mut self, graph: &Graph) -> Result<()>;
    fn get_memberships(&self) -> Result<&MembershipMap>;
}

pub trait NodeEmbedder {
    fn fit(&mut self, graph: &Graph) -> Result<()>;
    fn get_embedding(&self) -> Result<&EmbeddingMatrix>;
}

pub trait GraphEmbedder {
    fn fit(&mut self, corpus: &GraphCorpus) -> Result<()>;
    fn get_embedding(&self) -> Result<&EmbeddingMatrix>;
}

pub(crate) fn fitted<T>(slot: &Option<T>) -> Result<&T> {
    slot.as_ref().ok_or(Error::NotFitted)
}

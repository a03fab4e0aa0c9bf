//! Neighbourhood-preserving node embeddings.
//!
//! DeepWalk and Walklets factorise random-walk co-occurrence implicitly via
//! skip-gram training; NetMF builds the expected co-occurrence matrix
//! explicitly and truncates its SVD.

mod netmf;
mod sgns;
mod walk_models;
mod walks;

pub use netmf::{netmf_matrix, NetMfModel, NETMF_NODE_LIMIT};
pub use sgns::{
    pair_gradient, pair_loss, sgns_train, sgns_train_pairs, OffsetPairs, PairGradient, PairSource, SkipGramParams,
    TrainingTrace, WindowPairs, TRACE_BUCKETS,
};
pub use walk_models::{DeepWalkModel, WalkletsModel};
pub use walks::{generate_walks, WalkCorpus};

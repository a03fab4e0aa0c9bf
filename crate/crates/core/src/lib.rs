//! Unsupervised learning on graphs: community detection, node embedding and
//! whole-graph embedding behind one fit / get estimator contract, plus the
//! linear algebra, evaluation metrics and file formats they rely on.

pub mod community;
pub mod embedding;
pub mod error;
pub mod estimator;
pub mod eval;
pub mod graph;
pub mod graph_embedding;
pub mod io;
pub mod linalg;
pub mod node_embedding;
pub mod random;
pub mod sparse;

pub use community::{modularity, LabelPropagationModel, MembershipMap, ScdModel, SymNmfModel};
pub use embedding::EmbeddingMatrix;
pub use error::{Error, Result};
pub use estimator::{CommunityDetector, GraphEmbedder, NodeEmbedder};
pub use graph::{build_graph, Graph};
pub use graph_embedding::{GraphCorpus, NetLsdModel, SfModel, WlSvdModel};
pub use node_embedding::{DeepWalkModel, NetMfModel, WalkletsModel};
pub use random::RandomSource;

//! End-to-end quality checks on synthetic graphs with known structure.

mod common;

use common::{median, planted_blocks, triangles_and_paths, two_cliques};
use graphmine::eval::{classification_auc, nmi};
use graphmine::graph::{build_graph, Graph};
use graphmine::{
    CommunityDetector, DeepWalkModel, GraphEmbedder, LabelPropagationModel, NetLsdModel, NetMfModel, NodeEmbedder,
    ScdModel, SfModel, SymNmfModel, WalkletsModel, WlSvdModel,
};

fn clique_labels(k: usize) -> Vec<usize> {
    (0..2 * k).map(|i| usize::from(i >= k)).collect()
}

fn cluster_nmi(model: &mut dyn CommunityDetector, g: &Graph, truth: &[usize]) -> f64 {
    model.fit(g).unwrap();
    nmi(model.get_memberships().unwrap().assignments(), truth).unwrap()
}

#[test]
fn label_propagation_recovers_planted_blocks() {
    let mut lp = Vec::new();
    let mut nmf = Vec::new();
    for seed in 0..20 {
        let (g, truth) = planted_blocks(50, 0.3, 0.02, seed);
        lp.push(cluster_nmi(&mut LabelPropagationModel::new(seed, 100), &g, &truth));
        nmf.push(cluster_nmi(&mut SymNmfModel::new(2, 200, 1e-6, seed), &g, &truth));
    }
    let (lp, nmf) = (median(&mut lp), median(&mut nmf));
    assert!(lp >= 0.9, "label propagation median NMI {lp}");
    assert!(lp >= nmf, "label propagation {lp} vs SymNMF {nmf}");
}

#[test]
fn symnmf_two_cliques_argmax() {
    let g = two_cliques(4);
    let mut scores: Vec<f64> =
        (0..20).map(|seed| cluster_nmi(&mut SymNmfModel::new(2, 200, 1e-6, seed), &g, &clique_labels(4))).collect();
    let m = median(&mut scores);
    assert!(m >= 0.9, "median NMI {m}");
}

#[test]
fn scd_separates_triangle_rich_cliques() {
    let g = two_cliques(5);
    let score = cluster_nmi(&mut ScdModel::default(), &g, &clique_labels(5));
    assert!((score - 1.0).abs() < 1e-12, "NMI {score}");
    let p4 = build_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let mut model = ScdModel::default();
    model.fit(&p4).unwrap();
    assert_eq!(model.get_memberships().unwrap().cluster_count(), 4);
}

fn graph_auc(model: &mut dyn GraphEmbedder) -> f64 {
    let corpus = triangles_and_paths(100);
    model.fit(&corpus).unwrap();
    classification_auc(model.get_embedding().unwrap(), corpus.labels.as_ref().unwrap(), 0.8, 42).unwrap()
}

#[test]
fn graph_embeddings_separate_triangles_from_paths() {
    assert!(graph_auc(&mut WlSvdModel::default()) >= 0.95);
    assert!(graph_auc(&mut SfModel::default()) >= 0.95);
    assert!(graph_auc(&mut NetLsdModel::new()) >= 0.95);
}

/// One routine drives every node embedder; only the constructor differs.
fn embed(model: &mut dyn NodeEmbedder, g: &Graph) -> graphmine::EmbeddingMatrix {
    model.fit(g).unwrap();
    model.get_embedding().unwrap().clone()
}

#[test]
fn node_embeddings_predict_clique_membership() {
    let g = two_cliques(16);
    let labels = clique_labels(16);
    for model in [
        &mut DeepWalkModel::default() as &mut dyn NodeEmbedder,
        &mut WalkletsModel::default(),
        &mut NetMfModel::default(),
    ] {
        let e = embed(model, &g);
        assert_eq!(e.rows(), 32);
        let score = classification_auc(&e, &labels, 0.8, 42).unwrap();
        assert!(score >= 0.9, "AUC {score}");
    }
}

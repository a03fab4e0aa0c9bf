#![allow(dead_code)]

use graphmine::graph::{build_graph, Graph};
use graphmine::graph_embedding::GraphCorpus;
use graphmine::random::RandomSource;
use rand::Rng;

/// Two `k`-cliques joined by the single edge `(k-1, k)`.
pub fn two_cliques(k: usize) -> Graph {
    let mut edges = Vec::new();
    for offset in [0, k] {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((offset + u, offset + v));
            }
        }
    }
    edges.push((k - 1, k));
    build_graph(2 * k, &edges).unwrap()
}

/// Two equal blocks with independent edges: `p_in` inside, `p_out` across.
/// Resampled on later streams until connected.
pub fn planted_blocks(block: usize, p_in: f64, p_out: f64, seed: u64) -> (Graph, Vec<usize>) {
    let n = 2 * block;
    let mut source = RandomSource::from_seed(seed);
    loop {
        let mut rng = source.rng();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let p = if (u < block) == (v < block) { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = build_graph(n, &edges).unwrap();
        if g.require_connected().is_ok() {
            return (g, (0..n).map(|i| usize::from(i >= block)).collect());
        }
        source = source.next_stream();
    }
}

/// `count` triangles (label 1) followed by `count` 3-node paths (label 0).
pub fn triangles_and_paths(count: usize) -> GraphCorpus {
    let triangle = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    let path = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
    let mut graphs = vec![triangle; count];
    graphs.extend(vec![path; count]);
    let labels = (0..2 * count).map(|i| usize::from(i < count)).collect();
    GraphCorpus::new(graphs, vec![None; 2 * count], Some(labels)).unwrap()
}

/// Modularity from its definition: a double sum over all node pairs.
pub fn brute_modularity(g: &Graph, labels: &[usize]) -> f64 {
    let n = g.node_count();
    let m = g.edge_count() as f64;
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                let a = if g.has_edge(i, j) { 1.0 } else { 0.0 };
                q += a - g.degree(i) as f64 * g.degree(j) as f64 / (2.0 * m);
            }
        }
    }
    q / (2.0 * m)
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Uniform random permutation of `0..n`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut RandomSource::from_seed(seed).rng());
    p
}

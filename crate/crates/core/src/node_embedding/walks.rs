use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::RandomSource;

/// Walks generated together by one worker.
const WALK_BATCH: usize = 32;

/// Truncated random walks over a graph of `node_count` nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<usize>>,
    pub node_count: usize,
}

impl WalkCorpus {
    /// Occurrences of every node across all walks.
    pub fn node_frequencies(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.node_count];
        for walk in &self.walks {
            for &v in walk {
                counts[v] += 1;
            }
        }
        counts
    }
}

/// `walk_number` uniform first-order walks of exactly `walk_length` nodes
/// from every node. Walk `round * n + start` draws from child stream
/// `round * n + start` of `rng`, so the output does not depend on how the
/// work is scheduled.
pub fn generate_walks(g: &Graph, walk_number: usize, walk_length: usize, rng: RandomSource) -> Result<WalkCorpus> {
    g.require_connected()?;
    if walk_length == 0 || walk_number == 0 {
        return Err(Error::InvalidParameter("walk_number and walk_length must be positive".into()));
    }
    let n = g.node_count();
    if n == 1 && walk_length > 1 {
        return Err(Error::IsolatedNode(0));
    }
    let total = walk_number * n;
    let walks = (0..total.div_ceil(WALK_BATCH))
        .into_par_iter()
        .flat_map_iter(|batch| {
            let ids = batch * WALK_BATCH..((batch + 1) * WALK_BATCH).min(total);
            let mut rngs: Vec<_> = ids.clone().map(|w| rng.child(w as u64).rng()).collect();
            let mut walks: Vec<Vec<usize>> = ids
                .map(|w| {
                    let mut walk = Vec::with_capacity(walk_length);
                    walk.push(w % n);
                    walk
                })
                .collect();
            // Advance the batch in lock step so the neighbour lookups of
            // independent walks overlap in memory.
            for _ in 1..walk_length {
                for (walk, r) in walks.iter_mut().zip(&mut rngs) {
                    let adj = g.neighbors(walk[walk.len() - 1]);
                    walk.push(adj[r.random_range(0..adj.len())]);
                }
            }
            walks
        })
        .collect();
    Ok(WalkCorpus { walks, node_count: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, transition_matrix};

    #[test]
    fn shape_contract() {
        let g = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let c = generate_walks(&g, 10, 80, RandomSource::from_seed(1)).unwrap();
        assert_eq!(c.walks.len(), 50);
        assert!(c.walks.iter().all(|w| w.len() == 80 && w.iter().all(|&v| v < 5)));
        for (i, w) in c.walks.iter().enumerate() {
            assert_eq!(w[0], i % 5);
            assert!(w.windows(2).all(|p| g.has_edge(p[0], p[1])));
        }
    }

    #[test]
    fn k2_alternates() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        let c = generate_walks(&g, 1, 9, RandomSource::from_seed(3)).unwrap();
        assert_eq!(c.walks[0], vec![0, 1, 0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn transition_frequencies_match_matrix() {
        let g = build_graph(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (2, 4)]).unwrap();
        let p = transition_matrix(&g).unwrap();
        // 4 walks x 5 starts x 5001 nodes = 100k steps.
        let c = generate_walks(&g, 4, 5001, RandomSource::from_seed(7)).unwrap();
        let mut counts = vec![vec![0f64; 5]; 5];
        for w in &c.walks {
            for s in w.windows(2) {
                counts[s[0]][s[1]] += 1.0;
            }
        }
        for u in 0..5 {
            let visits: f64 = counts[u].iter().sum();
            for v in 0..5 {
                let prob = p.get(u, v);
                let se = (prob * (1.0 - prob) / visits).sqrt();
                let observed = counts[u][v] / visits;
                assert!((observed - prob).abs() <= 3.0 * se + 1e-12, "{u}->{v}: {observed} vs {prob}");
            }
        }
    }

    #[test]
    fn order_independent_and_seeded() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let a = generate_walks(&g, 3, 20, RandomSource::from_seed(5)).unwrap();
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = serial.install(|| generate_walks(&g, 3, 20, RandomSource::from_seed(5))).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate_walks(&g, 3, 20, RandomSource::from_seed(6)).unwrap());
    }

    #[test]
    fn disconnected_rejected() {
        let g = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(generate_walks(&g, 1, 5, RandomSource::from_seed(0)), Err(Error::DisconnectedGraph));
    }
}

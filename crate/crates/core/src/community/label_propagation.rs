use rand::seq::SliceRandom;
use rand::Rng;

use super::MembershipMap;
use crate::error::Result;
use crate::estimator::{fitted, CommunityDetector};
use crate::graph::Graph;
use crate::random::RandomSource;

/// Asynchronous label propagation.
#[derive(Debug, Clone)]
pub struct LabelPropagationModel {
    /// Default 42.
    pub seed: u64,
    /// Default 100.
    pub max_iterations: usize,
    memberships: Option<MembershipMap>,
}

impl Default for LabelPropagationModel {
    fn default() -> Self {
        Self::new(42, 100)
    }
}

impl LabelPropagationModel {
    pub fn new(seed: u64, max_iterations: usize) -> Self {
        Self { seed, max_iterations, memberships: None }
    }
}

impl CommunityDetector for LabelPropagationModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        self.memberships = Some(label_propagation(graph, self.seed, self.max_iterations)?);
        Ok(())
    }

    fn get_memberships(&self) -> Result<&MembershipMap> {
        fitted(&self.memberships)
    }
}

/// Every node starts in its own cluster. Each round visits the nodes in a
/// fresh seeded permutation; a node keeps its label if it is among the most
/// frequent neighbour labels, otherwise adopts one of them at random. Stops
/// after a round without changes or after `max_iterations` rounds.
pub fn label_propagation(g: &Graph, seed: u64, max_iterations: usize) -> Result<MembershipMap> {
    g.require_connected()?;
    let n = g.node_count();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = RandomSource::from_seed(seed).rng();
    let mut neighbor_labels = Vec::new();
    let mut best = Vec::new();

    for _ in 0..max_iterations {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &u in &order {
            neighbor_labels.clear();
            neighbor_labels.extend(g.neighbors(u).iter().map(|&v| labels[v]));
            neighbor_labels.sort_unstable();
            best.clear();
            let mut top = 0;
            for run in neighbor_labels.chunk_by(|a, b| a == b) {
                if run.len() > top {
                    top = run.len();
                    best.clear();
                }
                if run.len() == top {
                    best.push(run[0]);
                }
            }
            if best.is_empty() || best.contains(&labels[u]) {
                continue;
            }
            labels[u] = best[rng.random_range(0..best.len())];
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok(MembershipMap::from_labels(&labels))
}

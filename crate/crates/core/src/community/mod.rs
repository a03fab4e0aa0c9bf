//! Community detection: label propagation, triangle-based SCD and symmetric
//! NMF, plus the modularity score.

mod label_propagation;
mod scd;
mod symnmf;

pub use label_propagation::{label_propagation, LabelPropagationModel};
pub use scd::{scd, wcc_partition_score, ScdModel};
pub use symnmf::{symnmf, SymNmfFit, SymNmfModel, SYMNMF_EPSILON};

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Cluster assignment for every node, with cluster ids renumbered `0..c` in
/// order of first appearance when scanning nodes by ascending id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MembershipMap {
    assignments: Vec<usize>,
}

impl MembershipMap {
    /// Canonicalise an arbitrary labelling; `labels[i]` is node `i`'s cluster.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let assignments = labels
            .iter()
            .map(|&l| {
                let next = renumber.len();
                *renumber.entry(l).or_insert(next)
            })
            .collect();
        Self { assignments }
    }

    /// Build from a node → cluster mapping that must cover `0..node_count`.
    pub fn from_map(map: &HashMap<usize, usize>, node_count: usize) -> Result<Self> {
        if let Some(&extra) = map.keys().find(|&&k| k >= node_count) {
            return Err(Error::OutOfRangeNode { node: extra as i64, node_count });
        }
        let labels = (0..node_count)
            .map(|i| map.get(&i).copied().ok_or(Error::IncompleteMembership(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_labels(&labels))
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn get(&self, node: usize) -> usize {
        self.assignments[node]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn cluster_count(&self) -> usize {
        self.assignments.iter().max().map_or(0, |m| m + 1)
    }

    /// Nodes of each cluster, in ascending order.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (node, &c) in self.assignments.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Newman modularity `Σ_c [e_c/m − (d_c/2m)²]`.
pub fn modularity(g: &Graph, memberships: &MembershipMap) -> Result<f64> {
    let n = g.node_count();
    if memberships.len() < n {
        return Err(Error::IncompleteMembership(memberships.len()));
    }
    if memberships.len() > n {
        return Err(Error::OutOfRangeNode { node: n as i64, node_count: n });
    }
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return Ok(0.0);
    }
    let c = memberships.cluster_count();
    let mut internal = vec![0usize; c];
    let mut degree = vec![0usize; c];
    for u in 0..n {
        degree[memberships.get(u)] += g.degree(u);
    }
    for (u, v) in g.edges() {
        if memberships.get(u) == memberships.get(v) {
            internal[memberships.get(u)] += 1;
        }
    }
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

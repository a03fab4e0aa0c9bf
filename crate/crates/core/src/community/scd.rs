//! Triangle-driven community detection maximising weighted community
//! clustering (WCC).
//!
//! For a node `v` in community `C`:
//!
//! ```text
//! WCC(v, C) = t(v, C) / t(v, V) · vt(v, V) / (|C \ {v}| + vt(v, V \ C))
//! ```
//!
//! where `t(v, S)` counts triangles through `v` whose other two corners lie
//! in `S` and `vt(v, S)` counts nodes of `S` closing at least one such
//! triangle with `v`. Nodes outside every triangle score zero. The partition
//! score is the sum over all nodes.

use super::MembershipMap;
use crate::error::Result;
use crate::estimator::{fitted, CommunityDetector};
use crate::graph::{local_clustering, Graph};

const IMPROVEMENT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ScdModel {
    /// Hill-climbing passes after seeding. Default 25.
    pub refinement_rounds: usize,
    memberships: Option<MembershipMap>,
}

impl Default for ScdModel {
    fn default() -> Self {
        Self::new(25)
    }
}

impl ScdModel {
    pub fn new(refinement_rounds: usize) -> Self {
        Self { refinement_rounds, memberships: None }
    }
}

impl CommunityDetector for ScdModel {
    fn fit(&mut self, graph: &Graph) -> Result<()> {
        self.memberships = Some(scd(graph, self.refinement_rounds)?);
        Ok(())
    }

    fn get_memberships(&self) -> Result<&MembershipMap> {
        fitted(&self.memberships)
    }
}

/// Triangle incidence of one node: the neighbour pairs closing a triangle.
struct Triangles {
    pairs: Vec<Vec<(usize, usize)>>,
    /// `vt(v, V)` for every node.
    corners: Vec<usize>,
}

impl Triangles {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let mut pairs = vec![Vec::new(); n];
        for (v, slot) in pairs.iter_mut().enumerate() {
            let adj = g.neighbors(v);
            for (i, &a) in adj.iter().enumerate() {
                for &b in &adj[i + 1..] {
                    if g.has_edge(a, b) {
                        slot.push((a, b));
                    }
                }
            }
        }
        let mut stamp = vec![usize::MAX; n];
        let corners = pairs
            .iter()
            .enumerate()
            .map(|(v, list)| {
                let mut count = 0;
                for &(a, b) in list {
                    for x in [a, b] {
                        if stamp[x] != v {
                            stamp[x] = v;
                            count += 1;
                        }
                    }
                }
                count
            })
            .collect();
        Self { pairs, corners }
    }
}

struct Partition<'a> {
    triangles: &'a Triangles,
    community: Vec<usize>,
    members: Vec<Vec<usize>>,
    free: Vec<usize>,
    stamp: Vec<usize>,
    epoch: usize,
}

impl<'a> Partition<'a> {
    fn wcc(&mut self, v: usize) -> f64 {
        let size = self.members[self.community[v]].len();
        self.wcc_with_size(v, size)
    }

    /// WCC of `v` given the size of its community (members may be detached).
    fn wcc_with_size(&mut self, v: usize, size: usize) -> f64 {
        let list = &self.triangles.pairs[v];
        if list.is_empty() {
            return 0.0;
        }
        let c = self.community[v];
        let inside = list.iter().filter(|&&(a, b)| self.community[a] == c && self.community[b] == c).count();
        if inside == 0 {
            return 0.0;
        }
        self.epoch += 1;
        let mut outside_corners = 0;
        for &(a, b) in list {
            if self.community[a] != c && self.community[b] != c {
                for x in [a, b] {
                    if self.stamp[x] != self.epoch {
                        self.stamp[x] = self.epoch;
                        outside_corners += 1;
                    }
                }
            }
        }
        let others = size - 1;
        (inside as f64 / list.len() as f64) * self.triangles.corners[v] as f64
            / (others + outside_corners) as f64
    }

    fn community_score(&mut self, c: usize) -> f64 {
        let members = std::mem::take(&mut self.members[c]);
        let score = members.iter().map(|&u| self.wcc_with_size(u, members.len())).sum();
        self.members[c] = members;
        score
    }

    fn new_community(&mut self) -> usize {
        self.free.pop().unwrap_or_else(|| {
            self.members.push(Vec::new());
            self.members.len() - 1
        })
    }

    fn relocate(&mut self, v: usize, to: usize) {
        let from = self.community[v];
        let pos = self.members[from].iter().position(|&u| u == v).unwrap();
        self.members[from].swap_remove(pos);
        if self.members[from].is_empty() {
            self.free.push(from);
        }
        self.members[to].push(v);
        self.community[v] = to;
    }

    /// Change in total WCC if `v` moved to `to`.
    fn move_gain(&mut self, v: usize, to: usize) -> f64 {
        let from = self.community[v];
        let before = self.community_score(from) + self.community_score(to);
        self.relocate(v, to);
        let after = self.community_score(from) + self.community_score(to);
        if self.members[from].is_empty() {
            // relocate pushed `from` onto the free list; moving back reclaims it.
            self.free.retain(|&c| c != from);
        }
        self.relocate(v, from);
        if self.members[to].is_empty() {
            self.free.retain(|&c| c != to);
        }
        after - before
    }
}

/// Greedy triangle seeding followed by WCC hill climbing. Fully
/// deterministic: nodes are processed by descending clustering coefficient,
/// ties by ascending id.
pub fn scd(g: &Graph, refinement_rounds: usize) -> Result<MembershipMap> {
    g.require_connected()?;
    let n = g.node_count();
    let triangles = Triangles::new(g);
    let clustering = local_clustering(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| clustering[b].total_cmp(&clustering[a]).then(a.cmp(&b)));

    let mut community = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        if community[v] != usize::MAX {
            continue;
        }
        let id = members.len();
        let mut group = vec![v];
        if !triangles.pairs[v].is_empty() {
            group.extend(
                g.neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| community[u] == usize::MAX && !triangles.pairs[u].is_empty()),
            );
        }
        for &u in &group {
            community[u] = id;
        }
        members.push(group);
    }

    let mut partition = Partition {
        triangles: &triangles,
        community,
        members,
        free: Vec::new(),
        stamp: vec![usize::MAX; n],
        epoch: 0,
    };

    let mut candidates = Vec::new();
    for _ in 0..refinement_rounds {
        let mut moved = false;
        for &v in &order {
            if triangles.pairs[v].is_empty() {
                continue;
            }
            let current = partition.community[v];
            candidates.clear();
            candidates.extend(g.neighbors(v).iter().map(|&u| partition.community[u]).filter(|&c| c != current));
            candidates.sort_unstable();
            candidates.dedup();
            let alone = partition.members[current].len() == 1;
            let mut best: Option<(f64, Option<usize>)> = None;
            for &c in &candidates {
                let gain = partition.move_gain(v, c);
                if gain > IMPROVEMENT_EPSILON && best.is_none_or(|(g, _)| gain > g) {
                    best = Some((gain, Some(c)));
                }
            }
            if !alone {
                let fresh = partition.new_community();
                let gain = partition.move_gain(v, fresh);
                partition.free.push(fresh);
                if gain > IMPROVEMENT_EPSILON && best.is_none_or(|(g, _)| gain > g) {
                    best = Some((gain, None));
                }
            }
            if let Some((_, target)) = best {
                let to = match target {
                    Some(c) => c,
                    None => partition.new_community(),
                };
                partition.relocate(v, to);
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    Ok(MembershipMap::from_labels(&partition.community))
}

/// Total WCC of a partition.
pub fn wcc_partition_score(g: &Graph, memberships: &MembershipMap) -> f64 {
    let triangles = Triangles::new(g);
    let members = memberships.clusters();
    let mut partition = Partition {
        triangles: &triangles,
        community: memberships.assignments().to_vec(),
        members,
        free: Vec::new(),
        stamp: vec![usize::MAX; g.node_count()],
        epoch: 0,
    };
    (0..g.node_count()).map(|v| partition.wcc(v)).sum()
}

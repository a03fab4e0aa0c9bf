//! Undirected simple graphs and the matrices and statistics derived from them.
//!
//! Node ids are always `0..n`. Graphs are immutable once built.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};
use crate::random::RandomSource;
use crate::sparse::SparseMatrix;

/// Maximum number of regenerations when a connected random graph is needed.
pub const CONNECTIVITY_RETRIES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    /// Compressed sparse rows: node `u`'s sorted neighbours are
    /// `neighbors[offsets[u]..offsets[u + 1]]`.
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
}

impl Graph {
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbours of `node`.
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Relabel nodes so that old node `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.node_count() {
            return Err(Error::LengthMismatch(perm.len(), self.node_count()));
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        build_graph(self.node_count(), &edges)
    }

    /// Error unless every node is reachable from node 0.
    pub fn require_connected(&self) -> Result<()> {
        if is_connected(self) {
            Ok(())
        } else {
            Err(Error::DisconnectedGraph)
        }
    }
}

/// Build a graph on `n` nodes. `(u, v)` and `(v, u)` name the same edge.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut adjacency = vec![Vec::new(); n];
    let mut seen = HashSet::with_capacity(edges.len());
    for &(u, v) in edges {
        for node in [u, v] {
            if node >= n {
                return Err(Error::OutOfRangeNode { node: node as i64, node_count: n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut neighbors = Vec::with_capacity(2 * edges.len());
    offsets.push(0);
    for mut adj in adjacency {
        adj.sort_unstable();
        neighbors.extend_from_slice(&adj);
        offsets.push(neighbors.len());
    }
    Ok(Graph { offsets, neighbors, edge_count: edges.len() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_connected: bool,
    pub is_contiguous: bool,
    pub has_self_loops: bool,
    pub has_duplicates: bool,
    pub isolated_node_count: usize,
}

pub fn validate_graph(g: &Graph) -> ValidationReport {
    let n = g.node_count();
    let mut has_self_loops = false;
    let mut has_duplicates = false;
    let mut is_contiguous = true;
    for u in 0..n {
        let adj = g.neighbors(u);
        has_self_loops |= adj.contains(&u);
        has_duplicates |= adj.windows(2).any(|w| w[0] == w[1]);
        is_contiguous &= adj.iter().all(|&v| v < n);
    }
    ValidationReport {
        is_connected: is_connected(g),
        is_contiguous,
        has_self_loops,
        has_duplicates,
        isolated_node_count: (0..n).filter(|&u| g.degree(u) == 0).count(),
    }
}

fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    let mut visited = vec![false; n];
    let mut queue = VecDeque::from([0]);
    visited[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !visited[v] {
                visited[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// Uniform G(n, m): `m` distinct edges drawn without replacement.
pub fn erdos_renyi_gnm(n: usize, m: usize, rng: RandomSource) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let max = n * (n - 1) / 2;
    if m > max {
        return Err(Error::TooManyEdges { nodes: n, edges: m, max });
    }
    // Dense regime: sample the complement instead so rejection stays cheap.
    let complement = m > max / 2;
    let target = if complement { max - m } else { m };
    let mut chosen = HashSet::with_capacity(target);
    let mut r = rng.rng();
    let mut order = Vec::with_capacity(target);
    while chosen.len() < target {
        let u = r.random_range(0..n);
        let v = r.random_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if chosen.insert(key) {
            order.push(key);
        }
    }
    let edges: Vec<(usize, usize)> = if complement {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|e| !chosen.contains(e))
            .collect()
    } else {
        order
    };
    build_graph(n, &edges)
}

/// G(n, m) conditioned on connectivity: stream ids `rng.stream_id`,
/// `rng.stream_id + 1`, ... are tried in turn.
pub fn connected_erdos_renyi_gnm(n: usize, m: usize, rng: RandomSource) -> Result<Graph> {
    let mut source = rng;
    for _ in 0..CONNECTIVITY_RETRIES {
        let g = erdos_renyi_gnm(n, m, source)?;
        if is_connected(&g) {
            return Ok(g);
        }
        source = source.next_stream();
    }
    Err(Error::ConnectivityRetryExhausted(CONNECTIVITY_RETRIES))
}

fn require_no_isolated(g: &Graph) -> Result<()> {
    match (0..g.node_count()).find(|&u| g.degree(u) == 0) {
        Some(u) => Err(Error::IsolatedNode(u)),
        None => Ok(()),
    }
}

pub fn adjacency_matrix(g: &Graph) -> SparseMatrix {
    let n = g.node_count();
    let values = vec![1.0; g.neighbors.len()];
    SparseMatrix::from_csr(n, n, g.offsets.clone(), g.neighbors.clone(), values)
}

/// Random-walk transition matrix `D^-1 A`.
pub fn transition_matrix(g: &Graph) -> Result<SparseMatrix> {
    require_no_isolated(g)?;
    let degrees: Vec<f64> = g.degrees().into_iter().map(|d| 1.0 / d as f64).collect();
    let mut p = adjacency_matrix(g);
    p.scale_rows(&degrees);
    Ok(p)
}

/// Symmetric normalised Laplacian `I - D^-1/2 A D^-1/2`.
pub fn normalized_laplacian(g: &Graph) -> Result<SparseMatrix> {
    require_no_isolated(g)?;
    let n = g.node_count();
    let inv_sqrt: Vec<f64> = g.degrees().into_iter().map(|d| 1.0 / (d as f64).sqrt()).collect();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut indices = Vec::with_capacity(2 * g.edge_count() + n);
    let mut values = Vec::with_capacity(2 * g.edge_count() + n);
    offsets.push(0);
    for u in 0..n {
        let adj = g.neighbors(u);
        let split = adj.partition_point(|&v| v < u);
        for &v in &adj[..split] {
            indices.push(v);
            values.push(-(inv_sqrt[u] * inv_sqrt[v]));
        }
        indices.push(u);
        values.push(1.0);
        for &v in &adj[split..] {
            indices.push(v);
            values.push(-(inv_sqrt[u] * inv_sqrt[v]));
        }
        offsets.push(indices.len());
    }
    Ok(SparseMatrix::from_csr(n, n, offsets, indices, values))
}

/// Combinatorial Laplacian `D - A`.
pub fn laplacian(g: &Graph) -> SparseMatrix {
    let n = g.node_count();
    let mut triplets = Vec::with_capacity(2 * g.edge_count() + n);
    for u in 0..n {
        triplets.push((u, u, g.degree(u) as f64));
        for &v in g.neighbors(u) {
            triplets.push((u, v, -1.0));
        }
    }
    SparseMatrix::from_triplets(n, n, &triplets)
}

fn intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Number of triangles each node belongs to.
pub fn triangles_per_node(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut counts = vec![0; n];
    for (u, v) in g.edges() {
        // Every triangle {u, v, w} is seen once per edge; the pair shares it.
        let shared = intersection_count(g.neighbors(u), g.neighbors(v));
        counts[u] += shared;
        counts[v] += shared;
    }
    counts.iter().map(|c| c / 2).collect()
}

/// Local clustering coefficient of every node (0 for degree below 2).
pub fn local_clustering(g: &Graph) -> Vec<f64> {
    triangles_per_node(g)
        .into_iter()
        .enumerate()
        .map(|(u, t)| {
            let d = g.degree(u) as f64;
            if d < 2.0 {
                0.0
            } else {
                2.0 * t as f64 / (d * (d - 1.0))
            }
        })
        .collect()
}

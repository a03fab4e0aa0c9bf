//! Text wire formats: edge lists, membership JSON, embedding CSV, corpus
//! JSONL and labels CSV. Parse errors name the offending line (1-based).

use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::Value;

use crate::community::MembershipMap;
use crate::embedding::EmbeddingMatrix;
use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph};
use crate::graph_embedding::GraphCorpus;
use crate::linalg::DenseMatrix;

fn line_error(line: usize, message: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {message}"))
}

fn parse_node(token: &str, line: usize) -> Result<i64> {
    token.trim().parse::<i64>().map_err(|_| line_error(line, format!("invalid node id {:?}", token.trim())))
}

/// `u,v` per line; `#` lines are comments, and `# nodes=N` fixes the node
/// count (otherwise one more than the largest id).
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut raw = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let number = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("nodes=") {
                let n = value.trim().parse::<usize>().map_err(|_| line_error(number, "invalid nodes header"))?;
                declared = Some(n);
            }
            continue;
        }
        let (u, v) = trimmed.split_once(',').ok_or_else(|| line_error(number, "expected `u,v`"))?;
        raw.push((parse_node(u, number)?, parse_node(v, number)?));
    }
    let inferred = raw.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0).max(0) as usize;
    let n = declared.unwrap_or(inferred);
    let mut edges = Vec::with_capacity(raw.len());
    for (u, v) in raw {
        for node in [u, v] {
            if node < 0 || node as usize >= n {
                return Err(Error::OutOfRangeNode { node, node_count: n });
            }
        }
        edges.push((u as usize, v as usize));
    }
    build_graph(n, &edges)
}

/// Header comment with the node count, then one `u,v` line per edge (u < v).
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("# nodes={}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u},{v}");
    }
    out
}

/// `{"0": 0, "1": 0, ...}` with keys in ascending node order.
pub fn format_membership_json(mm: &MembershipMap) -> String {
    let body: Vec<String> = mm.assignments().iter().enumerate().map(|(n, c)| format!("\"{n}\": {c}")).collect();
    format!("{{{}}}\n", body.join(", "))
}

/// Node count is one more than the largest key; a gap is an incomplete map.
pub fn parse_membership_json(text: &str) -> Result<MembershipMap> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("membership JSON: {e}")))?;
    let object = value.as_object().ok_or_else(|| Error::Parse("membership JSON must be an object".into()))?;
    let mut map = HashMap::with_capacity(object.len());
    for (key, cluster) in object {
        let node: i64 = key.parse().map_err(|_| Error::Parse(format!("invalid node key {key:?}")))?;
        if node < 0 {
            return Err(Error::OutOfRangeNode { node, node_count: 0 });
        }
        let cluster = cluster.as_u64().ok_or_else(|| Error::Parse(format!("cluster of node {key} must be a non-negative integer")))?;
        map.insert(node as usize, cluster as usize);
    }
    let node_count = map.keys().max().map_or(0, |&m| m + 1);
    MembershipMap::from_map(&map, node_count)
}

/// Shortest form is not used: every value carries 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_embedding_csv(e: &EmbeddingMatrix) -> String {
    let mut out = String::new();
    for r in 0..e.rows() {
        let row: Vec<String> = e.row(r).iter().map(|&x| format_float(x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_embedding_csv(text: &str) -> Result<EmbeddingMatrix> {
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| line_error(index + 1, format!("invalid number {:?}", t.trim()))))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(line_error(index + 1, format!("{} columns, expected {first}", row.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty embedding file".into()));
    }
    EmbeddingMatrix::new(DenseMatrix::from_rows(&rows)?)
}

pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.trim().parse::<usize>().map_err(|_| line_error(i + 1, format!("invalid label {:?}", l.trim()))))
        .collect()
}

pub fn format_labels(labels: &[usize]) -> String {
    labels.iter().map(|l| format!("{l}\n")).collect()
}

/// One parsed corpus record: graph, optional node features, optional label.
type CorpusRecord = (Graph, Option<HashMap<usize, String>>, Option<usize>);

fn parse_corpus_line(line: &str, number: usize) -> Result<CorpusRecord> {
    let value: Value = serde_json::from_str(line).map_err(|e| line_error(number, e))?;
    let object = value.as_object().ok_or_else(|| line_error(number, "expected a JSON object"))?;
    let edges = object
        .get("edges")
        .ok_or_else(|| line_error(number, "missing \"edges\""))?
        .as_array()
        .ok_or_else(|| line_error(number, "\"edges\" must be an array"))?;
    let mut pairs = Vec::with_capacity(edges.len());
    for edge in edges {
        let pair = edge
            .as_array()
            .filter(|p| p.len() == 2)
            .and_then(|p| Some((p[0].as_u64()? as usize, p[1].as_u64()? as usize)))
            .ok_or_else(|| line_error(number, "each edge must be a pair of non-negative integers"))?;
        pairs.push(pair);
    }
    let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let graph = build_graph(n, &pairs).map_err(|e| line_error(number, e))?;
    let features = match object.get("features") {
        None | Some(Value::Null) => None,
        Some(Value::Object(map)) => {
            let mut out = HashMap::with_capacity(map.len());
            for (key, feature) in map {
                let node = key.parse::<usize>().map_err(|_| line_error(number, format!("invalid feature key {key:?}")))?;
                let feature = match feature {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.insert(node, feature);
            }
            if let Some(missing) = (0..n).find(|i| !out.contains_key(i)) {
                return Err(line_error(number, Error::IncompleteFeatureMap(missing)));
            }
            Some(out)
        }
        Some(_) => return Err(line_error(number, "\"features\" must be an object")),
    };
    let label = match object.get("label") {
        None | Some(Value::Null) => None,
        Some(v) => Some(v.as_u64().ok_or_else(|| line_error(number, "\"label\" must be a non-negative integer"))? as usize),
    };
    Ok((graph, features, label))
}

/// One graph per non-blank line. Labels are kept only when every line has one.
pub fn parse_corpus_jsonl(text: &str) -> Result<GraphCorpus> {
    let (mut graphs, mut features, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (g, f, l) = parse_corpus_line(line, index + 1)?;
        graphs.push(g);
        features.push(f);
        labels.push(l);
    }
    if graphs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let labels = labels.into_iter().collect::<Option<Vec<usize>>>();
    GraphCorpus::new(graphs, features, labels)
}

/// Inverse of [`parse_corpus_jsonl`].
pub fn format_corpus_jsonl(corpus: &GraphCorpus) -> String {
    let mut out = String::new();
    for (i, g) in corpus.graphs.iter().enumerate() {
        let edges: Vec<String> = g.edges().map(|(u, v)| format!("[{u},{v}]")).collect();
        let _ = write!(out, "{{\"edges\": [{}]", edges.join(","));
        if let Some(Some(map)) = corpus.features.get(i) {
            let mut keys: Vec<&usize> = map.keys().collect();
            keys.sort_unstable();
            let body: Vec<String> =
                keys.iter().map(|k| format!("\"{k}\": {}", Value::String(map[k].clone()))).collect();
            let _ = write!(out, ", \"features\": {{{}}}", body.join(", "));
        }
        if let Some(labels) = &corpus.labels {
            let _ = write!(out, ", \"label\": {}", labels[i]);
        }
        out.push_str("}\n");
    }
    out
}

//! Python bindings: graphs, the community detectors, node and whole-graph
//! embedders, and the evaluation metrics. Matrices cross the boundary as
//! lists of rows; memberships and labels as lists indexed by node.

use graphmine::eval::classification_auc as core_classification_auc;
use graphmine::graph::{build_graph, connected_erdos_renyi_gnm};
use graphmine::linalg::DenseMatrix;
use graphmine::{
    io, CommunityDetector, DeepWalkModel, EmbeddingMatrix, Error, Graph, GraphCorpus, GraphEmbedder,
    LabelPropagationModel, MembershipMap, NetLsdModel, NetMfModel, NodeEmbedder, RandomSource, ScdModel, SfModel,
    SymNmfModel, WalkletsModel, WlSvdModel,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(e: &EmbeddingMatrix) -> Vec<Vec<f64>> {
    e.as_dense().to_rows()
}

/// An undirected simple graph on nodes `0..node_count`.
#[pyclass(name = "Graph", frozen)]
struct PyGraph(Graph);

#[pymethods]
impl PyGraph {
    /// Build from an edge list; `node_count` defaults to the largest id + 1.
    #[new]
    #[pyo3(signature = (edges, node_count = None))]
    fn new(edges: Vec<(usize, usize)>, node_count: Option<usize>) -> PyResult<Self> {
        let n = node_count.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        build_graph(n, &edges).map(Self).map_err(to_py)
    }

    /// Parse the comma-separated edge-list text format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        io::parse_edge_list(text).map(Self).map_err(to_py)
    }

    /// A connected uniform random graph with `nodes` nodes and `edges` edges.
    #[staticmethod]
    #[pyo3(signature = (nodes, edges, seed = 42))]
    fn random(nodes: usize, edges: usize, seed: u64) -> PyResult<Self> {
        connected_erdos_renyi_gnm(nodes, edges, RandomSource::new(seed, 0)).map(Self).map_err(to_py)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn neighbors(&self, node: usize) -> PyResult<Vec<usize>> {
        self.check(node)?;
        Ok(self.0.neighbors(node).to_vec())
    }

    fn degree(&self, node: usize) -> PyResult<usize> {
        self.check(node)?;
        Ok(self.0.degree(node))
    }

    fn is_connected(&self) -> bool {
        self.0.require_connected().is_ok()
    }

    fn to_edge_list(&self) -> String {
        io::format_edge_list(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Graph(node_count={}, edge_count={})", self.0.node_count(), self.0.edge_count())
    }
}

impl PyGraph {
    fn check(&self, node: usize) -> PyResult<()> {
        if node < self.0.node_count() {
            Ok(())
        } else {
            Err(to_py(Error::OutOfRangeNode { node: node as i64, node_count: self.0.node_count() }))
        }
    }
}

/// Fit `model` on `graph` with the interpreter released.
fn fit_detached<M>(py: Python<'_>, model: &mut M, graph: &PyGraph) -> PyResult<()>
where
    M: Fit<Graph> + Send,
{
    py.detach(|| model.fit_on(&graph.0)).map_err(to_py)
}

/// Common shape of the estimator `fit` methods.
trait Fit<T: ?Sized> {
    fn fit_on(&mut self, input: &T) -> graphmine::Result<()>;
}

impl<M: CommunityDetector> Fit<Graph> for Community<M> {
    fn fit_on(&mut self, g: &Graph) -> graphmine::Result<()> {
        self.0.fit(g)
    }
}

impl<M: NodeEmbedder> Fit<Graph> for Node<M> {
    fn fit_on(&mut self, g: &Graph) -> graphmine::Result<()> {
        self.0.fit(g)
    }
}

struct Community<M>(M);
struct Node<M>(M);

macro_rules! community_class {
    ($py:ident, $name:literal, $model:ty, ($($arg:ident : $ty:ty = $default:expr),*), $build:expr) => {
        #[doc = concat!($name, " community detector.")]
        #[pyclass(name = $name)]
        struct $py(Community<$model>);

        #[pymethods]
        impl $py {
            #[new]
            #[pyo3(signature = ($($arg = $default),*))]
            fn new($($arg: $ty),*) -> Self {
                Self(Community($build))
            }

            fn fit(&mut self, py: Python<'_>, graph: &PyGraph) -> PyResult<()> {
                fit_detached(py, &mut self.0, graph)
            }

            /// Community id of every node, canonically numbered.
            fn get_memberships(&self) -> PyResult<Vec<usize>> {
                Ok(self.0 .0.get_memberships().map_err(to_py)?.assignments().to_vec())
            }
        }
    };
}

community_class!(PyLabelPropagation, "LabelPropagation", LabelPropagationModel,
    (seed: u64 = 42, max_iterations: usize = 100),
    LabelPropagationModel::new(seed, max_iterations));
community_class!(PyScd, "Scd", ScdModel, (refinement_rounds: usize = 25), ScdModel::new(refinement_rounds));
community_class!(PySymNmf, "SymNmf", SymNmfModel,
    (dimensions: usize = 32, iterations: usize = 200, tolerance: f64 = 1e-6, seed: u64 = 42),
    SymNmfModel::new(dimensions, iterations, tolerance, seed));

macro_rules! node_class {
    ($py:ident, $name:literal, $model:ty, ($($arg:ident : $ty:ty = $default:expr),*), |$m:ident| $configure:block
     $(, extra { $($extra:tt)* })?) => {
        #[doc = concat!($name, " node embedder.")]
        #[pyclass(name = $name)]
        struct $py(Node<$model>);

        #[pymethods]
        impl $py {
            #[new]
            #[pyo3(signature = ($($arg = $default),*))]
            fn new($($arg: $ty),*) -> Self {
                let mut $m = <$model>::default();
                let _: () = $configure;
                Self(Node($m))
            }

            fn fit(&mut self, py: Python<'_>, graph: &PyGraph) -> PyResult<()> {
                fit_detached(py, &mut self.0, graph)
            }

            /// One row per node, in node order.
            fn get_embedding(&self) -> PyResult<Vec<Vec<f64>>> {
                Ok(rows(self.0 .0.get_embedding().map_err(to_py)?))
            }

            $($($extra)*)?
        }
    };
}

node_class!(PyDeepWalk, "DeepWalk", DeepWalkModel,
    (dimensions: Option<usize> = None, walk_number: Option<usize> = None, walk_length: Option<usize> = None,
     window_size: Option<usize> = None, seed: u64 = 42),
    |m| {
        m.dimensions = dimensions.unwrap_or(m.dimensions);
        m.walk_number = walk_number.unwrap_or(m.walk_number);
        m.walk_length = walk_length.unwrap_or(m.walk_length);
        m.window_size = window_size.unwrap_or(m.window_size);
        m.seed = seed;
    });
node_class!(PyWalklets, "Walklets", WalkletsModel,
    (dimensions: Option<usize> = None, walk_number: Option<usize> = None, walk_length: Option<usize> = None,
     window_size: Option<usize> = None, seed: u64 = 42),
    |m| {
        m.dimensions = dimensions.unwrap_or(m.dimensions);
        m.walk_number = walk_number.unwrap_or(m.walk_number);
        m.walk_length = walk_length.unwrap_or(m.walk_length);
        m.window_size = window_size.unwrap_or(m.window_size);
        m.seed = seed;
    });
node_class!(PyNetMf, "NetMf", NetMfModel,
    (dimensions: Option<usize> = None, order: Option<usize> = None, seed: u64 = 42),
    |m| {
        m.dimensions = dimensions.unwrap_or(m.dimensions);
        m.order = order.unwrap_or(m.order);
        m.seed = seed;
    },
    extra {
        /// Leading singular values of the factorised matrix, descending.
        fn get_singular_values(&self) -> PyResult<Vec<f64>> {
            Ok(self.0 .0.get_singular_values().map_err(to_py)?.to_vec())
        }
    });

macro_rules! graph_class {
    ($py:ident, $name:literal, $model:ty, ($($arg:ident : $ty:ty = $default:expr),*), $build:expr) => {
        #[doc = concat!($name, " whole-graph embedder.")]
        #[pyclass(name = $name)]
        struct $py($model);

        #[pymethods]
        impl $py {
            #[new]
            #[pyo3(signature = ($($arg = $default),*))]
            fn new($($arg: $ty),*) -> Self {
                Self($build)
            }

            fn fit(&mut self, py: Python<'_>, graphs: Vec<PyRef<'_, PyGraph>>) -> PyResult<()> {
                let corpus = GraphCorpus::from_graphs(graphs.iter().map(|g| g.0.clone()).collect());
                let model = &mut self.0;
                py.detach(|| model.fit(&corpus)).map_err(to_py)
            }

            /// One row per graph, in input order.
            fn get_embedding(&self) -> PyResult<Vec<Vec<f64>>> {
                Ok(rows(self.0.get_embedding().map_err(to_py)?))
            }
        }
    };
}

graph_class!(PySf, "Sf", SfModel, (dimensions: usize = 32), SfModel::new(dimensions));
graph_class!(PyNetLsd, "NetLsd", NetLsdModel, (), NetLsdModel::new());
graph_class!(PyWlSvd, "WlSvd", WlSvdModel,
    (wl_iterations: usize = 2, dimensions: usize = 128, seed: u64 = 42),
    WlSvdModel::new(wl_iterations, dimensions, seed));

/// Normalised mutual information between two labelings of the same nodes.
#[pyfunction]
fn nmi(a: Vec<usize>, b: Vec<usize>) -> PyResult<f64> {
    graphmine::eval::nmi(&a, &b).map_err(to_py)
}

/// Modularity of the partition `memberships` (community id per node).
#[pyfunction]
fn modularity(graph: &PyGraph, memberships: Vec<usize>) -> PyResult<f64> {
    graphmine::modularity(&graph.0, &MembershipMap::from_labels(&memberships)).map_err(to_py)
}

/// Test-split AUC of a softmax classifier trained on embedding rows.
#[pyfunction]
#[pyo3(signature = (embedding, labels, ratio = 0.8, seed = 42))]
fn classification_auc(embedding: Vec<Vec<f64>>, labels: Vec<usize>, ratio: f64, seed: u64) -> PyResult<f64> {
    let matrix = EmbeddingMatrix::new(DenseMatrix::from_rows(&embedding).map_err(to_py)?).map_err(to_py)?;
    core_classification_auc(&matrix, &labels, ratio, seed).map_err(to_py)
}

#[pymodule(name = "graphmine")]
fn graphmine_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLabelPropagation>()?;
    m.add_class::<PyScd>()?;
    m.add_class::<PySymNmf>()?;
    m.add_class::<PyDeepWalk>()?;
    m.add_class::<PyWalklets>()?;
    m.add_class::<PyNetMf>()?;
    m.add_class::<PySf>()?;
    m.add_class::<PyNetLsd>()?;
    m.add_class::<PyWlSvd>()?;
    m.add_function(wrap_pyfunction!(nmi, m)?)?;
    m.add_function(wrap_pyfunction!(modularity, m)?)?;
    m.add_function(wrap_pyfunction!(classification_auc, m)?)?;
    Ok(())
}

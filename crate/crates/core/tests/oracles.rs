//! Library results against independent, brute-force or closed-form oracles.

mod common;

use common::brute_modularity;
use graphmine::community::{modularity, MembershipMap};
use graphmine::eval::{nmi, softmax_loss_and_gradient};
use graphmine::graph::{build_graph, connected_erdos_renyi_gnm, erdos_renyi_gnm, laplacian, triangles_per_node};
use graphmine::linalg::{eig_symmetric, DenseMatrix};
use graphmine::node_embedding::{netmf_matrix, pair_gradient, pair_loss, NetMfModel};
use graphmine::random::RandomSource;
use graphmine::NodeEmbedder;
use rand::Rng;

#[test]
fn modularity_matches_definition_on_random_partitions() {
    let mut checked = 0;
    for seed in 0..100u64 {
        let mut rng = RandomSource::new(seed, 7).rng();
        let n = rng.random_range(2..=12);
        let max = n * (n - 1) / 2;
        let m = rng.random_range(1..=max);
        let g = erdos_renyi_gnm(n, m, RandomSource::from_seed(seed)).unwrap();
        let k = rng.random_range(1..=n);
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let q = modularity(&g, &MembershipMap::from_labels(&labels)).unwrap();
        assert!((q - brute_modularity(&g, &labels)).abs() < 1e-12, "seed {seed}");
        checked += 1;
    }
    assert_eq!(checked, 100);
}

#[test]
fn two_triangle_partition_modularity() {
    let g = build_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
    let q = modularity(&g, &MembershipMap::from_labels(&[0, 0, 0, 1, 1, 1])).unwrap();
    assert!((q - 5.0 / 14.0).abs() < 1e-15);
}

/// Singular values of a symmetric matrix are the absolute eigenvalues.
fn dense_singular_values(m: &DenseMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = eig_symmetric(m).unwrap().eigenvalues.iter().map(|l| l.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// The target matrix assembled densely from explicit matrix powers.
fn dense_netmf_target(g: &graphmine::Graph, order: usize, b: f64) -> DenseMatrix {
    let n = g.node_count();
    let p = DenseMatrix::from_fn(n, n, |r, c| if g.has_edge(r, c) { 1.0 / g.degree(r) as f64 } else { 0.0 });
    let mut power = DenseMatrix::identity(n);
    let mut sum = DenseMatrix::zeros(n, n);
    for _ in 0..order {
        power = power.matmul(&p);
        sum = DenseMatrix::from_fn(n, n, |r, c| sum.get(r, c) + power.get(r, c));
    }
    let vol = 2.0 * g.edge_count() as f64;
    DenseMatrix::from_fn(n, n, |r, c| (vol / (b * order as f64) * sum.get(r, c) / g.degree(c) as f64).max(1.0).ln())
}

#[test]
fn netmf_singular_values_match_dense_oracle() {
    for seed in 0..20 {
        let g = connected_erdos_renyi_gnm(10, 20, RandomSource::from_seed(seed)).unwrap();
        let target = dense_netmf_target(&g, 2, 1.0);
        assert!(netmf_matrix(&g, 2, 1.0).unwrap().to_dense().max_abs_diff(&target) < 1e-12);
        let expected = dense_singular_values(&target);
        let mut model = NetMfModel::with_dimensions(4);
        model.seed = seed;
        model.fit(&g).unwrap();
        for (got, want) in model.get_singular_values().unwrap().iter().zip(&expected) {
            assert!((got - want).abs() <= 1e-6 * want, "seed {seed}: {got} vs {want}");
        }
        let e = model.get_embedding().unwrap();
        assert_eq!((e.rows(), e.cols()), (10, 4));
    }
}

#[test]
fn path_laplacian_spectrum() {
    for n in 2..=6 {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = build_graph(n, &edges).unwrap();
        let mut got = eig_symmetric(&laplacian(&g).to_dense()).unwrap().eigenvalues;
        got.sort_by(f64::total_cmp);
        let mut want: Vec<f64> =
            (0..n).map(|k| 2.0 - 2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "P{n}: {a} vs {b}");
        }
    }
}

#[test]
fn eigenvalues_preserve_trace() {
    for seed in 0..10 {
        let mut rng = RandomSource::from_seed(seed).rng();
        let mut a = DenseMatrix::zeros(10, 10);
        for i in 0..10 {
            for j in i..10 {
                let v = rng.random_range(-1.0..1.0);
                a.set(i, j, v);
                a.set(j, i, v);
            }
        }
        let trace: f64 = (0..10).map(|i| a.get(i, i)).sum();
        let sum: f64 = eig_symmetric(&a).unwrap().eigenvalues.iter().sum();
        assert!((trace - sum).abs() < 1e-9);
    }
}

#[test]
fn triangle_counts_match_triple_enumeration() {
    for seed in 0..30 {
        let g = erdos_renyi_gnm(9, 18, RandomSource::from_seed(seed)).unwrap();
        let mut brute = vec![0; 9];
        for a in 0..9 {
            for b in a + 1..9 {
                for c in b + 1..9 {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        brute[a] += 1;
                        brute[b] += 1;
                        brute[c] += 1;
                    }
                }
            }
        }
        assert_eq!(triangles_per_node(&g), brute);
    }
}

fn relative_error(numeric: &[f64], analytic: &[f64]) -> f64 {
    let diff = numeric.iter().zip(analytic).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let scale = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / scale(numeric).max(scale(analytic)).max(1e-12)
}

#[test]
fn sgns_gradient_matches_central_differences() {
    let h = 1e-6;
    for point in 0..50u64 {
        let mut rng = RandomSource::new(point, 3).rng();
        let d = 8;
        let mut vector = || (0..d).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
        let center = vector();
        let context = vector();
        let negatives: Vec<Vec<f64>> = (0..5).map(|_| vector()).collect();
        let refs = |n: &[Vec<f64>]| -> Vec<Vec<f64>> { n.to_vec() };
        let loss = |c: &[f64], x: &[f64], n: &[Vec<f64>]| {
            let r: Vec<&[f64]> = n.iter().map(Vec::as_slice).collect();
            pair_loss(c, x, &r)
        };
        let negative_refs: Vec<&[f64]> = negatives.iter().map(Vec::as_slice).collect();
        let analytic = pair_gradient(&center, &context, &negative_refs);
        let mut numeric_center = vec![0.0; d];
        let mut numeric_context = vec![0.0; d];
        for i in 0..d {
            let (mut plus, mut minus) = (center.clone(), center.clone());
            plus[i] += h;
            minus[i] -= h;
            numeric_center[i] = (loss(&plus, &context, &negatives) - loss(&minus, &context, &negatives)) / (2.0 * h);
            let (mut plus, mut minus) = (context.clone(), context.clone());
            plus[i] += h;
            minus[i] -= h;
            numeric_context[i] = (loss(&center, &plus, &negatives) - loss(&center, &minus, &negatives)) / (2.0 * h);
        }
        assert!(relative_error(&numeric_center, &analytic.center) < 1e-4, "point {point}");
        assert!(relative_error(&numeric_context, &analytic.context) < 1e-4, "point {point}");
        for (j, grad) in analytic.negatives.iter().enumerate() {
            let mut numeric = vec![0.0; d];
            for i in 0..d {
                let (mut plus, mut minus) = (refs(&negatives), refs(&negatives));
                plus[j][i] += h;
                minus[j][i] -= h;
                numeric[i] = (loss(&center, &context, &plus) - loss(&center, &context, &minus)) / (2.0 * h);
            }
            assert!(relative_error(&numeric, grad) < 1e-4, "point {point}, negative {j}");
        }
    }
}

#[test]
fn softmax_gradient_matches_central_differences() {
    let h = 1e-6;
    for point in 0..50u64 {
        let mut rng = RandomSource::new(point, 4).rng();
        let (n, d, c) = (12, 4, 3);
        let x = DenseMatrix::from_fn(n, d, |_, _| rng.random_range(-2.0..2.0));
        let y: Vec<usize> = (0..n).map(|_| rng.random_range(0..c)).collect();
        let w = DenseMatrix::from_fn(d + 1, c, |_, _| rng.random_range(-1.0..1.0));
        let (_, analytic) = softmax_loss_and_gradient(&w, &x, &y, 0.01);
        let mut numeric = DenseMatrix::zeros(d + 1, c);
        for i in 0..=d {
            for k in 0..c {
                let (mut plus, mut minus) = (w.clone(), w.clone());
                plus.set(i, k, w.get(i, k) + h);
                minus.set(i, k, w.get(i, k) - h);
                let diff = softmax_loss_and_gradient(&plus, &x, &y, 0.01).0 - softmax_loss_and_gradient(&minus, &x, &y, 0.01).0;
                numeric.set(i, k, diff / (2.0 * h));
            }
        }
        assert!(relative_error(numeric.values(), analytic.values()) < 1e-5, "point {point}");
    }
}

#[test]
fn nmi_of_independent_and_identical_labelings() {
    let a: Vec<usize> = (0..12).map(|i| i % 3).collect();
    assert!((nmi(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    // Every (a, halves) combination occurs equally often: zero mutual information.
    let halves: Vec<usize> = (0..12).map(|i| usize::from(i >= 6)).collect();
    assert!(nmi(&a, &halves).unwrap().abs() < 1e-12);
}

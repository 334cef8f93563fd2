//! Cross-checks against dense linear algebra and brute-force evaluation.

mod common;

use common::{all_partitions, dense, graph, random_graph};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use polarnet_core::centrality::{hits, pagerank, PageRankParams};
use polarnet_core::community::{map_equation, modularity, MapEquationParams, ModularityParams, Partition};
use polarnet_core::pca::{first_principal_component, score_accounts};
use polarnet_core::{FollowershipMatrix, RetweetGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_modularity(a: &[Vec<f64>], labels: &[usize], gamma: f64) -> f64 {
    let n = a.len();
    let w: f64 = a.iter().flatten().sum();
    let k_in: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let k_out: Vec<f64> = (0..n).map(|j| a.iter().map(|r| r[j]).sum()).collect();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += a[i][j] - gamma * k_in[i] * k_out[j] / w;
            }
        }
    }
    q / w
}

#[test]
fn partition_enumeration_counts() {
    let bell = [1, 2, 5, 15, 52, 203, 877, 4140];
    for (n, &b) in (1..=8).zip(&bell) {
        assert_eq!(all_partitions(n).len(), b);
    }
}

#[test]
fn modularity_matches_double_sum_on_every_partition() {
    for seed in 0..15 {
        let g = random_graph(seed, 7);
        let a = dense(&g);
        for gamma in [0.5, 1.0, 2.0] {
            let params = ModularityParams::new(gamma).unwrap();
            for labels in all_partitions(g.node_count()) {
                let q = modularity(&g, &Partition::from_labels(&labels), &params).unwrap();
                let oracle = dense_modularity(&a, &labels, gamma);
                assert!((q - oracle).abs() <= 1e-12, "seed {seed} gamma {gamma} {labels:?}: {q} vs {oracle}");
            }
        }
    }
}

/// Solves `(I − d M − (d/n) 1 δᵀ) x = (1 − d)/n` with `M` the
/// column-stochastic retweet matrix and `δ` the dangling indicator.
fn pagerank_oracle(g: &RetweetGraph, damping: f64) -> Vec<f64> {
    let n = g.node_count();
    let a = dense(g);
    let out: Vec<f64> = (0..n).map(|j| a.iter().map(|r| r[j]).sum()).collect();
    let mut sys = DMatrix::<f64>::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            let step = if out[j] > 0.0 { a[i][j] / out[j] } else { 1.0 / n as f64 };
            sys[(i, j)] -= damping * step;
        }
    }
    let rhs = DVector::from_element(n, (1.0 - damping) / n as f64);
    sys.lu().solve(&rhs).unwrap().iter().copied().collect()
}

#[test]
fn pagerank_matches_linear_solve() {
    for seed in 100..140 {
        let g = random_graph(seed, 10);
        let pr = pagerank(&g, &PageRankParams::default()).unwrap();
        let oracle = pagerank_oracle(&g, 0.85);
        for (x, y) in pr.values.iter().zip(&oracle) {
            assert!((x - y).abs() <= 1e-10, "seed {seed}: {x} vs {y}");
        }
    }
}

/// Checks that `v` is a unit leading eigenvector of symmetric `m`: either
/// it matches the unique one up to sign or it lies in the top eigenspace.
fn assert_leading_eigvec(m: &DMatrix<f64>, v: &[f64], tol: f64) {
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
    let top = eig.eigenvalues[idx[0]];
    let v = DVector::from_column_slice(v);
    assert!((v.norm() - 1.0).abs() < 1e-12);
    let simple = idx.len() < 2 || top - eig.eigenvalues[idx[1]] > 1e-6 * top.abs().max(1.0);
    if simple {
        let u = eig.eigenvectors.column(idx[0]);
        let sign = if u.dot(&v) < 0.0 { -1.0 } else { 1.0 };
        let diff = (&v - u * sign).amax();
        assert!(diff <= tol, "leading eigenvector off by {diff}");
    } else {
        let resid = (m * &v - &v * top).amax();
        assert!(resid <= tol * top.max(1.0), "eigenspace residual {resid}");
    }
}

#[test]
fn hits_matches_dense_eigenvectors() {
    for seed in 200..240 {
        let g = random_graph(seed, 10);
        let a = dense(&g);
        let n = a.len();
        let am = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        let (hub, auth) = hits(&g, 1e-14, 1_000_000).unwrap();
        assert_leading_eigvec(&(am.transpose() * &am), &hub.values, 1e-9);
        assert_leading_eigvec(&(&am * am.transpose()), &auth.values, 1e-9);
    }
}

fn random_followership(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (FollowershipMatrix, Vec<Vec<f64>>) {
    let probs: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..0.7)).collect();
    let mut rows = Vec::new();
    while rows.len() < n {
        let row: Vec<bool> = probs.iter().map(|&p| rng.random_bool(p)).collect();
        if row.iter().any(|&x| x) {
            rows.push(row);
        }
    }
    let numeric = rows
        .iter()
        .map(|r| r.iter().map(|&x| if x { 1.0 } else { 0.0 }).collect())
        .collect();
    let accounts = (0..n).map(|i| format!("u{i}")).collect();
    let media = (0..m).map(|j| format!("m{j}")).collect();
    (FollowershipMatrix::new(accounts, media, rows).unwrap(), numeric)
}

#[test]
fn pca_matches_dense_eigendecomposition() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..20 {
        let n = rng.random_range(20..400);
        let m = rng.random_range(2..=13);
        let (fm, x) = random_followership(&mut rng, n, m);
        let Ok(loadings) = first_principal_component(&fm, "m0") else {
            continue;
        };
        let xm = DMatrix::from_fn(n, m, |i, j| x[i][j]);
        let mean = xm.row_mean();
        let centered = DMatrix::from_fn(n, m, |i, j| xm[(i, j)] - mean[j]);
        let cov = centered.transpose() * &centered / (n as f64 - 1.0);
        let eig = SymmetricEigen::new(cov);
        let top = eig.eigenvalues.imax();
        let u = eig.eigenvectors.column(top);
        let v = DVector::from_column_slice(&loadings.loadings);
        let cosine = u.dot(&v).abs() / (u.norm() * v.norm());
        assert!(cosine >= 1.0 - 1e-10, "cosine {cosine}");
        assert!((loadings.explained_variance - eig.eigenvalues[top]).abs() < 1e-9);

        let scores = score_accounts(&fm, &loadings).unwrap();
        let oracle = &centered * &v;
        for (i, (_, s, _)) in scores.iter().enumerate() {
            assert!((s - oracle[i]).abs() < 1e-9);
        }
        checked += 1;
    }
    assert!(checked >= 18, "only {checked} instances checked");
}

/// Description length from the textbook entropy form, with visit rates
/// from a dense linear solve.
fn map_equation_oracle(g: &RetweetGraph, labels: &[usize], tau: f64) -> f64 {
    let p = pagerank_oracle(g, 1.0 - tau);
    let k = labels.iter().max().unwrap() + 1;
    let mut exit = vec![0.0; k];
    let mut within = vec![0.0; k];
    for e in g.edges() {
        if labels[e.source] != labels[e.target] {
            exit[labels[e.source]] += p[e.source] * e.weight as f64 / g.out_strength(e.source) as f64;
        }
    }
    for (v, &c) in labels.iter().enumerate() {
        within[c] += p[v];
    }
    let h = |probs: &[f64]| -> f64 {
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return 0.0;
        }
        -probs.iter().filter(|&&x| x > 0.0).map(|&x| (x / total) * (x / total).log2()).sum::<f64>()
    };
    let q: f64 = exit.iter().sum();
    let mut l = q * h(&exit);
    for c in 0..k {
        let mut code = vec![exit[c]];
        code.extend(labels.iter().enumerate().filter(|(_, &l)| l == c).map(|(v, _)| p[v]));
        l += (exit[c] + within[c]) * h(&code);
    }
    l
}

#[test]
fn map_equation_matches_entropy_form() {
    let fixtures = [
        (graph(&[("a", "b"), ("b", "a")]), vec![0, 0], 1.0),
        (graph(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]), vec![0, 0, 1, 1], 1.0),
    ];
    let params = MapEquationParams::default();
    for (g, labels, expected) in &fixtures {
        let l = map_equation(g, &Partition::from_labels(labels), &params).unwrap();
        let oracle = map_equation_oracle(g, labels, params.tau);
        assert!((l - oracle).abs() < 1e-9);
        assert!((l - expected).abs() < 1e-9);
    }
    for seed in 300..330 {
        let g = random_graph(seed, 7);
        for labels in all_partitions(g.node_count()).iter().step_by(7) {
            let l = map_equation(&g, &Partition::from_labels(labels), &params).unwrap();
            let oracle = map_equation_oracle(&g, labels, params.tau);
            assert!((l - oracle).abs() < 1e-9, "seed {seed} {labels:?}: {l} vs {oracle}");
        }
    }
}

#![allow(dead_code)]

use polarnet_core::graph::{build_graph, EdgeRecord, GraphBuilder};
use polarnet_core::RetweetGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn graph(edges: &[(&str, &str)]) -> RetweetGraph {
    let recs: Vec<_> = edges.iter().map(|&(t, s)| EdgeRecord::new(t, s, 1)).collect();
    build_graph(&recs).unwrap()
}

/// Graph on nodes `n0..n{n-1}` (inserted in that order) from `(target, source, count)`.
pub fn indexed_graph(n: usize, edges: &[(usize, usize, u64)]) -> RetweetGraph {
    let mut b = GraphBuilder::new();
    for i in 0..n {
        b.add_node(&format!("n{i}")).unwrap();
    }
    for &(t, s, c) in edges {
        b.add_record(&EdgeRecord::new(format!("n{t}"), format!("n{s}"), c)).unwrap();
    }
    b.build()
}

/// Random weighted digraph with at least one edge; self-loops are rare.
pub fn random_edges(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize, u64)> {
    loop {
        let mut edges = Vec::new();
        for t in 0..n {
            for s in 0..n {
                let prob = if t == s { p / 5.0 } else { p };
                if rng.random_bool(prob) {
                    edges.push((t, s, rng.random_range(1..=3)));
                }
            }
        }
        if !edges.is_empty() {
            return edges;
        }
    }
}

pub fn random_graph(seed: u64, max_n: usize) -> RetweetGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=max_n);
    let p = rng.random_range(0.15..0.6);
    let edges = random_edges(&mut rng, n, p);
    indexed_graph(n, &edges)
}

/// Dense `A[i][j]` = times `j` retweeted `i`.
pub fn dense(g: &RetweetGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.target][e.source] += e.weight as f64;
    }
    a
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max + 1 {
            cur.push(l);
            rec(i + 1, n, max.max(l), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0];
    rec(1, n, 0, &mut cur, &mut out);
    out
}

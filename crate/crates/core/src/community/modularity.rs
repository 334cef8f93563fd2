use alloc::string::String;
use alloc::vec;

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::RetweetGraph;

/// Resolution `gamma > 0` scaling the configuration-model null term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularityParams {
    pub gamma: f64,
}

impl Default for ModularityParams {
    fn default() -> Self {
        Self { gamma: 1.0 }
    }
}

impl ModularityParams {
    pub fn new(gamma: f64) -> Result<Self> {
        let p = Self { gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(String::from("gamma must be positive")));
        }
        Ok(())
    }
}

fn check(g: &RetweetGraph, partition: &Partition, params: &ModularityParams) -> Result<f64> {
    params.validate()?;
    if partition.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: partition.len(),
        });
    }
    if g.total_weight() == 0 {
        return Err(Error::NoEdges);
    }
    Ok(g.total_weight() as f64)
}

/// Directed weighted modularity
/// `Q = (1/w) Σ_ij (A_ij − γ k_i^in k_j^out / w) δ(c_i, c_j)`,
/// evaluated as intra-community weight minus per-community strength products.
pub fn modularity(g: &RetweetGraph, partition: &Partition, params: &ModularityParams) -> Result<f64> {
    let w = check(g, partition, params)?;
    let c = partition.assignment();
    let internal: u64 = g
        .edges()
        .iter()
        .filter(|e| c[e.target] == c[e.source])
        .map(|e| e.weight)
        .sum();
    let mut sin = vec![0.0; partition.k()];
    let mut sout = vec![0.0; partition.k()];
    for i in 0..g.node_count() {
        sin[c[i]] += g.in_strength(i) as f64;
        sout[c[i]] += g.out_strength(i) as f64;
    }
    let null: f64 = sin.iter().zip(&sout).map(|(a, b)| a * b).sum();
    Ok((internal as f64 - params.gamma * null / w) / w)
}

/// Literal double sum over all node pairs with a dense adjacency matrix.
/// Quadratic in the node count; meant as a cross-check on small graphs.
pub fn modularity_dense(g: &RetweetGraph, partition: &Partition, params: &ModularityParams) -> Result<f64> {
    let w = check(g, partition, params)?;
    let n = g.node_count();
    let mut a = vec![0.0; n * n];
    for e in g.edges() {
        a[e.target * n + e.source] += e.weight as f64;
    }
    let c = partition.assignment();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if c[i] == c[j] {
                let null = g.in_strength(i) as f64 * g.out_strength(j) as f64 / w;
                q += a[i * n + j] - params.gamma * null;
            }
        }
    }
    Ok(q / w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};
    use alloc::vec::Vec;

    fn graph(edges: &[(&str, &str)]) -> RetweetGraph {
        let recs: Vec<_> = edges.iter().map(|&(t, s)| EdgeRecord::new(t, s, 1)).collect();
        build_graph(&recs).unwrap()
    }

    #[test]
    fn two_disconnected_two_cycles() {
        // Hand evaluation: each community holds weight 2 of w = 4 with null
        // product 2·2/4 = 1, so Q = (2 − 1 + 2 − 1) / 4 = 0.5.
        let g = graph(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]);
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = modularity(&g, &p, &ModularityParams::default()).unwrap();
        assert!((q - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_edge_cases() {
        let g = graph(&[("a", "b")]);
        let params = ModularityParams::default();
        assert_eq!(modularity(&g, &Partition::single(2), &params).unwrap(), 0.0);
        assert_eq!(modularity(&g, &Partition::singletons(2), &params).unwrap(), 0.0);
        let big = ModularityParams::new(1e6).unwrap();
        assert_eq!(modularity(&g, &Partition::singletons(2), &big).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let mut b = crate::graph::GraphBuilder::new();
        b.add_node("x").unwrap();
        let empty = b.build();
        let p = Partition::single(1);
        assert_eq!(
            modularity(&empty, &p, &ModularityParams::default()).unwrap_err(),
            Error::NoEdges
        );
        assert!(ModularityParams::new(0.0).is_err());
        let g = graph(&[("a", "b")]);
        assert!(matches!(
            modularity(&g, &Partition::single(3), &ModularityParams::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

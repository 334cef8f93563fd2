use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Partition;
use crate::centrality::stationary;
use crate::error::{Error, Result};
use crate::graph::RetweetGraph;
use crate::math::plogp;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapEquationParams {
    /// Teleportation probability per step.
    pub tau: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for MapEquationParams {
    fn default() -> Self {
        Self {
            tau: 0.15,
            tol: 1e-15,
            max_iters: 100_000,
        }
    }
}

impl MapEquationParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::InvalidParameter(String::from("tau must lie in (0, 1)")));
        }
        Ok(())
    }
}

/// Node visit rates and per-link flows of the random walker.
///
/// Visit rates are the PageRank vector with damping `1 − τ` and uniform
/// teleportation. Teleportation steps are not recorded: the flow on link
/// `u → v` is `p_u · w_uv / w_u^out`, so only link-following steps can exit a
/// module. Links follow retweeter → retweeted.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowNetwork {
    pub node_flow: Vec<f64>,
    /// `(from, to, flow)`.
    pub links: Vec<(usize, usize, f64)>,
}

impl FlowNetwork {
    pub fn from_graph(g: &RetweetGraph, params: &MapEquationParams) -> Result<Self> {
        params.validate()?;
        let n = g.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let (p, _) = stationary(
            n,
            1.0 - params.tau,
            params.tol,
            params.max_iters,
            |j| g.out_strength(j) as f64,
            |i| g.retweeters(i).iter().map(|&(j, w)| (j, w as f64)),
        )
        .map_err(|e| match e {
            Error::NonConvergence { iterations, residual, .. } => Error::NonConvergence {
                what: "visit rates",
                iterations,
                residual,
            },
            other => other,
        })?;
        let links = g
            .edges()
            .iter()
            .map(|e| {
                let f = p[e.source] * e.weight as f64 / g.out_strength(e.source) as f64;
                (e.source, e.target, f)
            })
            .collect();
        Ok(Self { node_flow: p, links })
    }

    pub fn len(&self) -> usize {
        self.node_flow.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_flow.is_empty()
    }

    /// Two-level description length in bits:
    /// `L = q H(Q) + Σ_m p_m H(P_m)`, expanded as
    /// `plogp(q) − 2 Σ plogp(q_m) − Σ plogp(p_a) + Σ plogp(q_m + p_m)`.
    pub fn codelength(&self, partition: &Partition) -> Result<f64> {
        if partition.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: partition.len(),
            });
        }
        let c = partition.assignment();
        let mut exit = vec![0.0; partition.k()];
        let mut flow = vec![0.0; partition.k()];
        for &(u, v, f) in &self.links {
            if c[u] != c[v] {
                exit[c[u]] += f;
            }
        }
        for (node, &p) in self.node_flow.iter().enumerate() {
            flow[c[node]] += p;
        }
        let total_exit: f64 = exit.iter().sum();
        let exit_terms: f64 = exit.iter().map(|&q| plogp(q)).sum();
        let node_terms: f64 = self.node_flow.iter().map(|&p| plogp(p)).sum();
        let module_terms: f64 = exit.iter().zip(&flow).map(|(&q, &p)| plogp(q + p)).sum();
        Ok(plogp(total_exit) - 2.0 * exit_terms - node_terms + module_terms)
    }
}

/// Map-equation description length of `partition` on `g`, in bits.
pub fn map_equation(g: &RetweetGraph, partition: &Partition, params: &MapEquationParams) -> Result<f64> {
    FlowNetwork::from_graph(g, params)?.codelength(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, EdgeRecord};

    fn graph(edges: &[(&str, &str)]) -> RetweetGraph {
        let recs: Vec<_> = edges.iter().map(|&(t, s)| EdgeRecord::new(t, s, 1)).collect();
        build_graph(&recs).unwrap()
    }

    #[test]
    fn symmetric_two_cycle_is_one_bit() {
        let g = graph(&[("a", "b"), ("b", "a")]);
        let l = map_equation(&g, &Partition::single(2), &MapEquationParams::default()).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disconnected_two_cycles() {
        // Uniform visit rates 1/4. Planted modules never exit: L = 2 · ½ · 1.
        // One module: H(¼,¼,¼,¼) = 2. Singletons: exits ¼ each, 1·2 + 4·½·1.
        let g = graph(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]);
        let params = MapEquationParams::default();
        let planted = map_equation(&g, &Partition::from_labels(&[0, 0, 1, 1]), &params).unwrap();
        let single = map_equation(&g, &Partition::single(4), &params).unwrap();
        let singletons = map_equation(&g, &Partition::singletons(4), &params).unwrap();
        assert!((planted - 1.0).abs() < 1e-12);
        assert!((single - 2.0).abs() < 1e-12);
        assert!((singletons - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tau() {
        let g = graph(&[("a", "b")]);
        let params = MapEquationParams {
            tau: 1.0,
            ..Default::default()
        };
        assert!(map_equation(&g, &Partition::single(2), &params).is_err());
    }
}

//! PageRank, HITS, hub-threshold summaries and modular degree ratios.
//!
//! Rank flows from retweeter to retweeted account: a walker at `j` moves to
//! `i` with probability `A[i][j] / out_strength(j)`. Hubs are the principal
//! eigenvector of `AᵀA` (accounts that retweet good authorities) and
//! authorities the principal eigenvector of `AAᵀ`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::RetweetGraph;
use crate::math::{abs, norm2};

/// Hub score above which a node is a "large hub-score node".
pub const DEFAULT_HUB_THRESHOLD: f64 = 4e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    PageRank,
    Hub,
    Authority,
    InDegree,
    OutDegree,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::PageRank => "pagerank",
            Measure::Hub => "hub",
            Measure::Authority => "authority",
            Measure::InDegree => "in_degree",
            Measure::OutDegree => "out_degree",
        }
    }
}

/// Per-node scores for one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub kind: Measure,
    pub values: Vec<f64>,
    /// Power iterations used, zero for degree measures.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-12,
            max_iters: 100_000,
        }
    }
}

impl PageRankParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidParameter(String::from("damping must lie in (0, 1)")));
        }
        if !(self.tol > 0.0) || self.max_iters == 0 {
            return Err(Error::InvalidParameter(String::from(
                "tolerance and iteration cap must be positive",
            )));
        }
        Ok(())
    }
}

/// Stationary distribution of the damped walk with uniform teleportation;
/// dangling nodes (no retweets made) spread their mass uniformly.
/// Converges when the 1-norm change drops below `tol`.
pub fn pagerank(g: &RetweetGraph, params: &PageRankParams) -> Result<CentralityScores> {
    params.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let (values, iterations) = stationary(
        n,
        params.damping,
        params.tol,
        params.max_iters,
        |j| g.out_strength(j) as f64,
        |i| g.retweeters(i).iter().map(|&(j, w)| (j, w as f64)),
    )?;
    Ok(CentralityScores {
        kind: Measure::PageRank,
        values,
        iterations,
    })
}

/// Shared PageRank power iteration over a generic weighted digraph given by
/// per-node outgoing weight totals and incoming `(source, weight)` lists.
pub(crate) fn stationary<I, F>(
    n: usize,
    damping: f64,
    tol: f64,
    max_iters: usize,
    out_weight: impl Fn(usize) -> f64,
    incoming: F,
) -> Result<(Vec<f64>, usize)>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = (usize, f64)>,
{
    let inv_n = 1.0 / n as f64;
    let out: Vec<f64> = (0..n).map(&out_weight).collect();
    let mut x = vec![inv_n; n];
    let mut next = vec![0.0; n];
    let mut share = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iters {
        let mut dangling = 0.0;
        for j in 0..n {
            if out[j] > 0.0 {
                share[j] = x[j] / out[j];
            } else {
                share[j] = 0.0;
                dangling += x[j];
            }
        }
        let base = (1.0 - damping) * inv_n + damping * dangling * inv_n;
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = incoming(i).map(|(j, w)| w * share[j]).sum();
            *slot = base + damping * inflow;
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        residual = next.iter().zip(&x).map(|(a, b)| abs(a - b)).sum();
        core::mem::swap(&mut x, &mut next);
        if residual < tol {
            return Ok((x, it));
        }
    }
    Err(Error::NonConvergence {
        what: "pagerank",
        iterations: max_iters,
        residual,
    })
}

/// HITS by alternating power iteration from the uniform vector. Both vectors
/// are unit 2-norm and nonnegative.
pub fn hits(g: &RetweetGraph, tol: f64, max_iters: usize) -> Result<(CentralityScores, CentralityScores)> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut hub = vec![1.0 / libm::sqrt(n as f64); n];
    let mut auth = vec![0.0; n];
    let mut next_hub = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iters {
        // authority(i) = Σ_j A[i][j] hub(j)
        for (i, a) in auth.iter_mut().enumerate() {
            *a = g.retweeters(i).iter().map(|&(j, w)| w as f64 * hub[j]).sum();
        }
        normalize(&mut auth)?;
        // hub(j) = Σ_i A[i][j] authority(i)
        for (j, h) in next_hub.iter_mut().enumerate() {
            *h = g.retweeted(j).iter().map(|&(i, w)| w as f64 * auth[i]).sum();
        }
        normalize(&mut next_hub)?;
        residual = next_hub
            .iter()
            .zip(&hub)
            .map(|(a, b)| abs(a - b))
            .fold(0.0, f64::max);
        core::mem::swap(&mut hub, &mut next_hub);
        if residual < tol {
            // Authorities consistent with the final hub vector.
            for (i, a) in auth.iter_mut().enumerate() {
                *a = g.retweeters(i).iter().map(|&(j, w)| w as f64 * hub[j]).sum();
            }
            normalize(&mut auth)?;
            return Ok((
                CentralityScores {
                    kind: Measure::Hub,
                    values: hub,
                    iterations: it,
                },
                CentralityScores {
                    kind: Measure::Authority,
                    values: auth,
                    iterations: it,
                },
            ));
        }
    }
    Err(Error::NonConvergence {
        what: "hits",
        iterations: max_iters,
        residual,
    })
}

fn normalize(v: &mut [f64]) -> Result<()> {
    let norm = norm2(v);
    if norm == 0.0 {
        return Err(Error::Degenerate(String::from("HITS iterate is all zero")));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Ok(())
}

/// Weighted in- or out-degree as scores.
pub fn degree_scores(g: &RetweetGraph, kind: Measure) -> CentralityScores {
    let values = match kind {
        Measure::OutDegree => g.out_strengths().iter().map(|&d| d as f64).collect(),
        _ => g.in_strengths().iter().map(|&d| d as f64).collect(),
    };
    CentralityScores {
        kind: if kind == Measure::OutDegree {
            Measure::OutDegree
        } else {
            Measure::InDegree
        },
        values,
        iterations: 0,
    }
}

/// `k` highest-scoring nodes, descending; ties by ascending index.
pub fn top_k(scores: &CentralityScores, k: usize) -> Vec<(usize, f64)> {
    let mut order: Vec<usize> = (0..scores.values.len()).collect();
    order.sort_by(|&a, &b| {
        scores.values[b]
            .partial_cmp(&scores.values[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order.truncate(k);
    order.into_iter().map(|i| (i, scores.values[i])).collect()
}

/// Share of a target's distinct retweeters whose hub score exceeds the
/// threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct HubThresholdReport {
    pub threshold: f64,
    pub large_hub_nodes: Vec<usize>,
    /// `(target, fraction)`; `None` when the target has no retweeters.
    pub fractions: Vec<(usize, Option<f64>)>,
}

pub fn hub_threshold_report(
    hubs: &CentralityScores,
    g: &RetweetGraph,
    targets: &[usize],
    threshold: f64,
) -> Result<HubThresholdReport> {
    if hubs.values.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: hubs.values.len(),
        });
    }
    let large: Vec<bool> = hubs.values.iter().map(|&h| h > threshold).collect();
    let large_hub_nodes = (0..large.len()).filter(|&i| large[i]).collect();
    let fractions = targets
        .iter()
        .map(|&t| {
            let r = g.retweeters(t);
            if r.is_empty() {
                (t, None)
            } else {
                let hits = r.iter().filter(|&&(j, _)| large[j]).count();
                (t, Some(hits as f64 / r.len() as f64))
            }
        })
        .collect();
    Ok(HubThresholdReport {
        threshold,
        large_hub_nodes,
        fractions,
    })
}

/// Weighted in-degree split by whether the retweeter shares the node's
/// community.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularDegreeRatio {
    pub node: usize,
    pub inter_in: u64,
    pub intra_in: u64,
}

impl ModularDegreeRatio {
    /// `inter_in / intra_in`, `None` when there is no intra-community in-degree.
    pub fn ratio(&self) -> Option<f64> {
        (self.intra_in > 0).then(|| self.inter_in as f64 / self.intra_in as f64)
    }
}

pub fn modular_degree_ratio(g: &RetweetGraph, assignment: &[usize]) -> Result<Vec<ModularDegreeRatio>> {
    if assignment.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: assignment.len(),
        });
    }
    Ok((0..g.node_count())
        .map(|i| {
            let (mut inter_in, mut intra_in) = (0, 0);
            for &(j, w) in g.retweeters(i) {
                if assignment[j] == assignment[i] {
                    intra_in += w;
                } else {
                    inter_in += w;
                }
            }
            ModularDegreeRatio {
                node: i,
                inter_in,
                intra_in,
            }
        })
        .collect())
}

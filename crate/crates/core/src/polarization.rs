//! Media-score homophily on the retweet graph.
//!
//! Two views are computed over the unweighted, directed edge set (each
//! aggregated edge counts once, self-retweets are skipped): the Pearson
//! correlation of `(retweeter score, retweeted score)` pairs with a
//! permutation null model, and the categorical mixing matrix of Left/Right
//! classes with its assortativity coefficient.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::RetweetGraph;
use crate::math::{abs, sqrt};
use crate::pca::Class;
use crate::rng;

/// Scored endpoints of every usable edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadSample {
    /// Score of each scored node, indexed by slot.
    values: Vec<f64>,
    /// `(source slot, target slot)` per edge.
    pairs: Vec<(u32, u32)>,
}

impl DyadSample {
    /// `scores[node]` is the node's media score when known.
    pub fn from_graph(g: &RetweetGraph, scores: &[Option<f64>]) -> Result<Self> {
        if scores.len() != g.node_count() {
            return Err(Error::DimensionMismatch {
                expected: g.node_count(),
                found: scores.len(),
            });
        }
        let mut slot = vec![u32::MAX; scores.len()];
        let mut values = Vec::new();
        for (node, s) in scores.iter().enumerate() {
            if let Some(s) = s {
                slot[node] = values.len() as u32;
                values.push(*s);
            }
        }
        let pairs = g
            .edges()
            .iter()
            .filter(|e| e.source != e.target)
            .filter(|e| slot[e.source] != u32::MAX && slot[e.target] != u32::MAX)
            .map(|e| (slot[e.source], slot[e.target]))
            .collect();
        Ok(Self { values, pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn scored_nodes(&self) -> usize {
        self.values.len()
    }

    /// `(source score, target score)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pairs
            .iter()
            .map(|&(s, t)| (self.values[s as usize], self.values[t as usize]))
    }

    /// Pearson correlation with node scores `values` (slot order); `None`
    /// when either margin is constant.
    fn correlation_with(&self, values: &[f64]) -> Option<f64> {
        let n = self.pairs.len() as f64;
        let (mut sx, mut sy) = (0.0, 0.0);
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(s, t) in &self.pairs {
            let (x, y) = (values[s as usize], values[t as usize]);
            sx += x;
            sy += y;
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
        if lo_x == hi_x || lo_y == hi_y {
            return None;
        }
        let (mx, my) = (sx / n, sy / n);
        let (mut cxy, mut cxx, mut cyy) = (0.0, 0.0, 0.0);
        for &(s, t) in &self.pairs {
            let dx = values[s as usize] - mx;
            let dy = values[t as usize] - my;
            cxy += dx * dy;
            cxx += dx * dx;
            cyy += dy * dy;
        }
        Some((cxy / sqrt(cxx * cyy)).clamp(-1.0, 1.0))
    }

    pub fn correlation(&self) -> Result<f64> {
        if self.pairs.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{} scored dyads, need at least 2",
                self.pairs.len()
            )));
        }
        self.correlation_with(&self.values)
            .ok_or_else(|| Error::Degenerate(String::from("zero variance in dyad scores")))
    }
}

/// Pearson correlation of scores across retweet edges and the number of
/// dyads used.
pub fn dyad_correlation(g: &RetweetGraph, scores: &[Option<f64>]) -> Result<(f64, usize)> {
    let sample = DyadSample::from_graph(g, scores)?;
    Ok((sample.correlation()?, sample.len()))
}

/// Summary of the permutation null distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationSummary {
    pub observed: f64,
    /// Replicates requested.
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    /// Replicates skipped because a permuted margin was constant.
    pub skipped: usize,
    /// `(observed − mean) / sd`; `None` when the null has zero spread.
    pub z: Option<f64>,
}

impl PermutationSummary {
    /// More than 1% of replicates were skipped.
    pub fn high_skip_rate(&self) -> bool {
        self.skipped * 100 > self.n
    }
}

/// Null model: the graph stays fixed while the observed scores are
/// reassigned uniformly at random among the originally scored nodes.
/// Replicate `r` shuffles with its own generator keyed by
/// `derive_seed(seed, r)`, and statistics accumulate in replicate order.
pub fn permutation_test(g: &RetweetGraph, scores: &[Option<f64>], n_perm: usize, seed: u64) -> Result<PermutationSummary> {
    let sample = DyadSample::from_graph(g, scores)?;
    permutation_test_sample(&sample, n_perm, seed)
}

pub fn permutation_test_sample(sample: &DyadSample, n_perm: usize, seed: u64) -> Result<PermutationSummary> {
    let observed = sample.correlation()?;
    if n_perm < 2 {
        return Err(Error::InvalidParameter(String::from(
            "need at least two permutations",
        )));
    }
    let mut shuffled = sample.values.clone();
    let (mut count, mut mean, mut m2) = (0usize, 0.0, 0.0);
    let mut skipped = 0;
    for r in 0..n_perm {
        shuffled.copy_from_slice(&sample.values);
        rng::shuffle(&mut shuffled, &mut rng::stream_rng(seed, r as u64));
        match sample.correlation_with(&shuffled) {
            Some(rho) => {
                count += 1;
                let d = rho - mean;
                mean += d / count as f64;
                m2 += d * (rho - mean);
            }
            None => skipped += 1,
        }
    }
    if count < 2 {
        return Err(Error::Degenerate(String::from(
            "fewer than two usable permutation replicates",
        )));
    }
    let sd = sqrt(m2 / (count - 1) as f64);
    let z = (sd > 0.0).then(|| (observed - mean) / sd);
    Ok(PermutationSummary {
        observed,
        n: n_perm,
        mean,
        sd,
        skipped,
        z,
    })
}

/// Fractions of edges by (source type, target type) with marginals
/// `a` (source) and `b` (target).
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMatrix {
    pub e: Vec<Vec<f64>>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MixingMatrix {
    /// Accepts a square matrix of fractions summing to 1 within 1e-9.
    pub fn from_fractions(e: Vec<Vec<f64>>) -> Result<Self> {
        Self::validate_square(&e)?;
        let total: f64 = e.iter().flatten().sum();
        if abs(total - 1.0) > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "mixing fractions sum to {total}, expected 1"
            )));
        }
        Ok(Self::with_marginals(e))
    }

    /// Normalizes nonnegative counts or rounded fractions to sum 1.
    pub fn from_weights(w: Vec<Vec<f64>>) -> Result<Self> {
        Self::validate_square(&w)?;
        let total: f64 = w.iter().flatten().sum();
        if !(total > 0.0) {
            return Err(Error::InsufficientData(String::from("no classified edges")));
        }
        let e = w
            .into_iter()
            .map(|row| row.into_iter().map(|x| x / total).collect())
            .collect();
        Ok(Self::with_marginals(e))
    }

    fn validate_square(e: &[Vec<f64>]) -> Result<()> {
        let g = e.len();
        if g == 0 {
            return Err(Error::InvalidParameter(String::from("empty mixing matrix")));
        }
        for row in e {
            if row.len() != g {
                return Err(Error::DimensionMismatch {
                    expected: g,
                    found: row.len(),
                });
            }
            if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidParameter(String::from(
                    "mixing entries must be finite and nonnegative",
                )));
            }
        }
        Ok(())
    }

    fn with_marginals(e: Vec<Vec<f64>>) -> Self {
        let g = e.len();
        let a = e.iter().map(|row| row.iter().sum()).collect();
        let b = (0..g).map(|s| e.iter().map(|row| row[s]).sum()).collect();
        Self { e, a, b }
    }
}

/// Left/Right mixing matrix over edges whose endpoints are both classified.
/// Row and column 0 are Left, 1 is Right.
pub fn mixing_matrix(g: &RetweetGraph, classes: &[Class]) -> Result<MixingMatrix> {
    if classes.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: classes.len(),
        });
    }
    let mut counts = vec![vec![0.0; 2]; 2];
    for e in g.edges().iter().filter(|e| e.source != e.target) {
        if let (Some(l), Some(s)) = (classes[e.source].side(), classes[e.target].side()) {
            counts[l][s] += 1.0;
        }
    }
    MixingMatrix::from_weights(counts)
}

/// Newman's assortativity coefficient
/// `r = (Σ e_ll − Σ a_l b_l) / (1 − Σ a_l b_l)`.
pub fn assortativity_r(m: &MixingMatrix) -> Result<f64> {
    let trace: f64 = (0..m.e.len()).map(|l| m.e[l][l]).sum();
    let ab: f64 = m.a.iter().zip(&m.b).map(|(x, y)| x * y).sum();
    let denom = 1.0 - ab;
    if abs(denom) < 1e-12 {
        return Err(Error::Degenerate(String::from(
            "a single class carries all edges",
        )));
    }
    Ok((trace - ab) / denom)
}

/// Full homophily summary.
#[derive(Debug, Clone, PartialEq)]
pub struct AssortativityReport {
    pub rho: f64,
    pub n_dyads: usize,
    pub permutation: PermutationSummary,
    pub r: f64,
    pub mixing: MixingMatrix,
}

pub fn assortativity_report(g: &RetweetGraph, scores: &[Option<f64>], n_perm: usize, seed: u64) -> Result<AssortativityReport> {
    let sample = DyadSample::from_graph(g, scores)?;
    let permutation = permutation_test_sample(&sample, n_perm, seed)?;
    let classes: Vec<Class> = scores
        .iter()
        .map(|s| s.map_or(Class::Unclassified, Class::of_score))
        .collect();
    let mixing = mixing_matrix(g, &classes)?;
    let r = assortativity_r(&mixing)?;
    Ok(AssortativityReport {
        rho: permutation.observed,
        n_dyads: sample.len(),
        permutation,
        r,
        mixing,
    })
}

//! Community detection and community profiles.
//!
//! Two objectives are provided: directed weighted modularity with a
//! resolution parameter (maximized by a Louvain-style search over the
//! symmetrized modularity matrix) and the two-level map equation (minimized
//! by an Infomap-style search over the same move/aggregate scheme).

mod infomap;
mod louvain;
mod mapequation;
mod modularity;
mod net;
mod profile;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use infomap::infomap;
pub use louvain::{louvain, resolution_sweep, SweepEntry, SweepLevel, DEFAULT_GAMMAS};
pub use mapequation::{map_equation, FlowNetwork, MapEquationParams};
pub use modularity::{modularity, modularity_dense, ModularityParams};
pub use profile::{community_profiles, shannon, CommunityProfile};

/// Improvement threshold for both objectives (modularity units and bits).
pub const MIN_IMPROVEMENT: f64 = 1e-10;

/// How a greedy search orders node visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VisitOrder {
    /// Fresh shuffle every pass, keyed by the seed, aggregation level and pass.
    Seeded(u64),
    /// No shuffling. The given permutation of the input nodes fixes the order
    /// and every index-based tie-break, so permuting the graph together with
    /// this order permutes the result.
    Fixed(Vec<usize>),
}

impl VisitOrder {
    pub fn natural(n: usize) -> Self {
        VisitOrder::Fixed((0..n).collect())
    }

    /// A fixed order must be a permutation of `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let VisitOrder::Fixed(order) = self {
            let mut seen = vec![false; n];
            if order.len() != n || !order.iter().all(|&v| v < n && !core::mem::replace(&mut seen[v], true)) {
                return Err(Error::InvalidParameter(String::from(
                    "visit order is not a permutation of the nodes",
                )));
            }
        }
        Ok(())
    }
}

/// Community assignment with contiguous ids `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Compacts arbitrary labels to `0..k` in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = BTreeMap::new();
        let assignment = labels
            .iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(*l).or_insert(next)
            })
            .collect();
        Self {
            assignment,
            k: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Self {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn community(&self, node: usize) -> usize {
        self.assignment[node]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of nonempty communities.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); self.k];
        for (node, &c) in self.assignment.iter().enumerate() {
            m[c].push(node);
        }
        m
    }

    /// Equal up to renaming of communities.
    pub fn same_clustering(&self, other: &Partition) -> bool {
        self.len() == other.len() && Partition::from_labels(&self.assignment) == Partition::from_labels(&other.assignment)
    }
}

/// Fraction of nodes whose community maps to their true block under the best
/// one-to-one matching of found communities to true blocks. Nodes in
/// unmatched communities count as disagreements. `truth` must have at most
/// 16 blocks.
pub fn agreement(found: &Partition, truth: &Partition) -> f64 {
    assert_eq!(found.len(), truth.len());
    assert!(truth.k() <= 16);
    if found.is_empty() {
        return 1.0;
    }
    let t = truth.k();
    let mut overlap = vec![vec![0usize; t]; found.k()];
    for (f, tr) in found.assignment.iter().zip(&truth.assignment) {
        overlap[*f][*tr] += 1;
    }
    // dp[mask] = best total overlap using truth blocks in `mask`.
    let full = 1usize << t;
    let mut dp = vec![0usize; full];
    for row in &overlap {
        let prev = dp.clone();
        for mask in 0..full {
            for (b, &o) in row.iter().enumerate() {
                if mask & (1 << b) == 0 {
                    let next = mask | (1 << b);
                    dp[next] = dp[next].max(prev[mask] + o);
                }
            }
        }
    }
    dp.iter().copied().max().unwrap_or(0) as f64 / found.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_compact_in_first_appearance_order() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.assignment(), &[0, 1, 0, 2]);
        assert_eq!(p.k(), 3);
        assert_eq!(p.sizes(), vec![2, 1, 1]);
        assert!(p.same_clustering(&Partition::from_labels(&[1, 2, 1, 0])));
    }

    #[test]
    fn agreement_matches_one_to_one() {
        let truth = Partition::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(agreement(&Partition::from_labels(&[5, 5, 5, 2, 2, 2]), &truth), 1.0);
        // Splitting a block only credits the larger piece.
        let split = Partition::from_labels(&[0, 0, 1, 2, 2, 2]);
        assert!((agreement(&split, &truth) - 5.0 / 6.0).abs() < 1e-12);
        assert!((agreement(&Partition::single(6), &truth) - 0.5).abs() < 1e-12);
    }
}

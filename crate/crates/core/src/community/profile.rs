use alloc::vec;
use alloc::vec::Vec;

use super::Partition;
use crate::error::{Error, Result};
use crate::math::ln;
use crate::pca::Class;

/// Shannon diversity `−Σ p ln p` (natural log) with `0 ln 0 = 0`.
pub fn shannon(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * ln(x)).sum::<f64>()
}

/// Size and Left/Right composition of one community.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityProfile {
    pub community: usize,
    pub size: usize,
    pub n_left: usize,
    pub n_right: usize,
    /// Mean media score over scored members.
    pub mean_score: Option<f64>,
    /// Diversity of the Left/Right split; `None` without classified members.
    pub shannon: Option<f64>,
}

impl CommunityProfile {
    pub fn has_scored_members(&self) -> bool {
        self.mean_score.is_some()
    }
}

/// Profiles every community. `scores[node]` is the node's media score if
/// known; Left/Right fractions use the classified members only.
pub fn community_profiles(partition: &Partition, scores: &[Option<f64>]) -> Result<Vec<CommunityProfile>> {
    if scores.len() != partition.len() {
        return Err(Error::DimensionMismatch {
            expected: partition.len(),
            found: scores.len(),
        });
    }
    let k = partition.k();
    let mut size = vec![0usize; k];
    let mut left = vec![0usize; k];
    let mut right = vec![0usize; k];
    let mut total = vec![0.0; k];
    let mut scored = vec![0usize; k];
    for (node, &c) in partition.assignment().iter().enumerate() {
        size[c] += 1;
        if let Some(s) = scores[node] {
            total[c] += s;
            scored[c] += 1;
            match Class::of_score(s) {
                Class::Left => left[c] += 1,
                Class::Right => right[c] += 1,
                Class::Unclassified => {}
            }
        }
    }
    Ok((0..k)
        .map(|c| {
            let classified = left[c] + right[c];
            let shannon_index = (classified > 0).then(|| {
                let pl = left[c] as f64 / classified as f64;
                shannon(&[pl, 1.0 - pl])
            });
            CommunityProfile {
                community: c,
                size: size[c],
                n_left: left[c],
                n_right: right[c],
                mean_score: (scored[c] > 0).then(|| total[c] / scored[c] as f64),
                shannon: shannon_index,
            }
        })
        .collect())
}

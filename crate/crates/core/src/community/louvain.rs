use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::net::{compact, sweep_order, with_visit_order, Net};
use super::{modularity, ModularityParams, Partition, VisitOrder, MIN_IMPROVEMENT};
use crate::error::{Error, Result};
use crate::graph::RetweetGraph;
use crate::rng;

const MAX_PASSES: usize = 10_000;

/// Default resolution grid for the sweep.
pub const DEFAULT_GAMMAS: [f64; 6] = [0.01, 0.05, 0.1, 1.0, 5.0, 10.0];

/// Greedy modularity maximization: local node moves, then aggregation of
/// communities into super-nodes, repeated until no move improves `Q` by more
/// than [`MIN_IMPROVEMENT`].
///
/// Moves are scored with the symmetrized modularity matrix `(B + Bᵀ)/2`,
/// which gives the same `Q` as `B` for every partition. The gain of putting
/// node `v` into community `c` (with `v` removed from its own) is
/// `e(v,c) − γ (k_v^in S_c^out + k_v^out S_c^in) / w`, where `e(v,c)` counts
/// link weight between `v` and `c` in both directions.
///
/// Graphs without edges come back as singletons.
pub fn louvain(g: &RetweetGraph, params: &ModularityParams, visit: &VisitOrder) -> Result<Partition> {
    params.validate()?;
    let n = g.node_count();
    visit.validate(n)?;
    let w = g.total_weight() as f64;
    if w == 0.0 {
        return Ok(Partition::singletons(n));
    }
    let net = Net::from_graph(g);
    let unit = vec![(); n];
    let labels = with_visit_order(&net, &unit, visit, |net, _| search(net, params.gamma, w, visit));
    Ok(Partition::from_labels(&labels))
}

fn search(net0: &Net, gamma: f64, w: f64, visit: &VisitOrder) -> Vec<usize> {
    let mut membership: Vec<usize> = (0..net0.len()).collect();
    let mut net = net0.clone();
    for level in 0.. {
        let (mut labels, moved) = local_moving(&net, gamma, w, visit, level);
        if !moved {
            break;
        }
        let k = compact(&mut labels);
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        net = net.aggregate(&labels, k);
    }
    membership
}

fn local_moving(net: &Net, gamma: f64, w: f64, visit: &VisitOrder, level: usize) -> (Vec<usize>, bool) {
    let n = net.len();
    let in_s: Vec<f64> = net.inc.iter().map(|l| l.iter().map(|x| x.1).sum()).collect();
    let out_s: Vec<f64> = net.out.iter().map(|l| l.iter().map(|x| x.1).sum()).collect();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut cin = in_s.clone();
    let mut cout = out_s.clone();
    let mut link_to = vec![0.0; n];
    let mut touched = vec![false; n];
    let mut candidates: Vec<usize> = Vec::new();
    let threshold = MIN_IMPROVEMENT * w;
    let mut moved_any = false;

    for pass in 0..MAX_PASSES {
        let mut moved = false;
        for v in sweep_order(n, visit, level, pass) {
            let own = comm[v];
            for &(u, wt) in net.out[v].iter().chain(&net.inc[v]) {
                if u == v {
                    continue;
                }
                let c = comm[u];
                if !touched[c] {
                    touched[c] = true;
                    candidates.push(c);
                }
                link_to[c] += wt;
            }
            cin[own] -= in_s[v];
            cout[own] -= out_s[v];
            let gain = |c: usize, link: f64| link - gamma * (in_s[v] * cout[c] + out_s[v] * cin[c]) / w;
            let own_gain = gain(own, link_to[own]);
            let mut best = own;
            let mut best_gain = own_gain;
            for &c in &candidates {
                let g = gain(c, link_to[c]);
                if g > best_gain {
                    best = c;
                    best_gain = g;
                }
            }
            let target = if best != own && best_gain - own_gain > threshold {
                moved = true;
                best
            } else {
                own
            };
            comm[v] = target;
            cin[target] += in_s[v];
            cout[target] += out_s[v];
            for &c in &candidates {
                touched[c] = false;
                link_to[c] = 0.0;
            }
            candidates.clear();
        }
        if !moved {
            break;
        }
        moved_any = true;
    }
    (comm, moved_any)
}

/// A community that clears the size floor in a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub community: usize,
    pub size: usize,
    /// Mean media score over scored members.
    pub mean_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepLevel {
    pub gamma: f64,
    pub seed: u64,
    /// Total number of communities found.
    pub k: usize,
    pub modularity: f64,
    pub communities: Vec<SweepEntry>,
}

/// One Louvain run per resolution value. Run `i` uses seed
/// `derive_seed(seed, i)`. Only communities with at least `size_floor`
/// members are reported.
pub fn resolution_sweep(
    g: &RetweetGraph,
    gammas: &[f64],
    seed: u64,
    scores: &[Option<f64>],
    size_floor: usize,
) -> Result<Vec<SweepLevel>> {
    if gammas.is_empty() {
        return Err(Error::InvalidParameter(String::from("empty resolution list")));
    }
    if scores.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            found: scores.len(),
        });
    }
    gammas
        .iter()
        .enumerate()
        .map(|(i, &gamma)| {
            let params = ModularityParams::new(gamma)?;
            let run_seed = rng::derive_seed(seed, i as u64);
            let p = louvain(g, &params, &VisitOrder::Seeded(run_seed))?;
            let q = modularity(g, &p, &params)?;
            let mut sums = vec![(0usize, 0.0f64, 0usize); p.k()];
            for (node, &c) in p.assignment().iter().enumerate() {
                sums[c].0 += 1;
                if let Some(s) = scores[node] {
                    sums[c].1 += s;
                    sums[c].2 += 1;
                }
            }
            let communities = sums
                .into_iter()
                .enumerate()
                .filter(|(_, (size, _, _))| *size >= size_floor)
                .map(|(community, (size, total, scored))| SweepEntry {
                    community,
                    size,
                    mean_score: (scored > 0).then(|| total / scored as f64),
                })
                .collect();
            Ok(SweepLevel {
                gamma,
                seed: run_seed,
                k: p.k(),
                modularity: q,
                communities,
            })
        })
        .collect()
}

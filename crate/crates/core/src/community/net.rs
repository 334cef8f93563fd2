// Working network for the greedy searches: f64 link weights, both adjacency
// directions, self-loops kept. Links point from retweeter to retweeted.

use alloc::vec;
use alloc::vec::Vec;

use super::VisitOrder;
use crate::graph::RetweetGraph;
use crate::rng;

#[derive(Debug, Clone)]
pub(crate) struct Net {
    /// `out[u]`: `(v, w)` for links `u → v`, sorted by `v`.
    pub out: Vec<Vec<(usize, f64)>>,
    /// `inc[v]`: `(u, w)` for links `u → v`, sorted by `u`.
    pub inc: Vec<Vec<(usize, f64)>>,
}

impl Net {
    pub fn from_links(n: usize, links: impl Iterator<Item = (usize, usize, f64)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (u, v, w) in links {
            out[u].push((v, w));
            inc[v].push((u, w));
        }
        let mut net = Net { out, inc };
        net.normalize();
        net
    }

    pub fn from_graph(g: &RetweetGraph) -> Self {
        Net::from_links(
            g.node_count(),
            g.edges().iter().map(|e| (e.source, e.target, e.weight as f64)),
        )
    }

    pub fn len(&self) -> usize {
        self.out.len()
    }

    // Sort adjacency and merge repeated neighbors.
    fn normalize(&mut self) {
        for list in self.out.iter_mut().chain(self.inc.iter_mut()) {
            list.sort_by(|a, b| a.0.cmp(&b.0));
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(list.len());
            for &(v, w) in list.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == v => last.1 += w,
                    _ => merged.push((v, w)),
                }
            }
            *list = merged;
        }
    }

    /// Relabels so that new node `p` is old node `order[p]`.
    pub fn permuted(&self, order: &[usize]) -> Net {
        let mut pos = vec![0; order.len()];
        for (p, &old) in order.iter().enumerate() {
            pos[old] = p;
        }
        let links = order
            .iter()
            .enumerate()
            .flat_map(|(p, &old)| self.out[old].iter().map(move |&(v, w)| (p, v, w)))
            .map(|(p, v, w)| (p, pos[v], w))
            .collect::<Vec<_>>();
        Net::from_links(self.len(), links.into_iter())
    }

    /// Collapses nodes with equal label (labels compact `0..k`) into one node;
    /// internal links become self-loops.
    pub fn aggregate(&self, labels: &[usize], k: usize) -> Net {
        let links = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&(v, w)| (labels[u], labels[v], w)))
            .collect::<Vec<_>>();
        Net::from_links(k, links.into_iter())
    }
}

/// Compacts labels to `0..k` in order of first appearance by node index.
pub(crate) fn compact(labels: &mut [usize]) -> usize {
    let mut remap = vec![usize::MAX; labels.len()];
    let mut k = 0;
    for l in labels.iter_mut() {
        if remap[*l] == usize::MAX {
            remap[*l] = k;
            k += 1;
        }
        *l = remap[*l];
    }
    k
}

/// Node sequence for one sweep.
pub(crate) fn sweep_order(n: usize, visit: &VisitOrder, level: usize, pass: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if let VisitOrder::Seeded(seed) = visit {
        let stream = ((level as u64) << 32) | pass as u64;
        rng::shuffle(&mut order, &mut rng::stream_rng(*seed, stream));
    }
    order
}

/// Applies a fixed order by relabeling the network, runs `search` on it and
/// maps the labels back. Seeded orders run on the network as given.
pub(crate) fn with_visit_order<A: Clone>(
    net: &Net,
    attrs: &[A],
    visit: &VisitOrder,
    search: impl FnOnce(&Net, &[A]) -> Vec<usize>,
) -> Vec<usize> {
    match visit {
        VisitOrder::Fixed(order) => {
            let relabeled = net.permuted(order);
            let attrs: Vec<A> = order.iter().map(|&o| attrs[o].clone()).collect();
            let labels = search(&relabeled, &attrs);
            let mut out = vec![0; net.len()];
            for (p, &old) in order.iter().enumerate() {
                out[old] = labels[p];
            }
            out
        }
        VisitOrder::Seeded(_) => search(net, attrs),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_sums_and_keeps_internal_as_self_loops() {
        let net = Net::from_links(3, [(0, 1, 1.0), (1, 0, 2.0), (1, 2, 4.0)].into_iter());
        let agg = net.aggregate(&[0, 0, 1], 2);
        assert_eq!(agg.out[0], vec![(0, 3.0), (1, 4.0)]);
        assert_eq!(agg.inc[1], vec![(0, 4.0)]);
    }

    #[test]
    fn permutation_roundtrip() {
        let net = Net::from_links(3, [(0, 1, 1.0), (2, 0, 5.0)].into_iter());
        let p = net.permuted(&[2, 0, 1]);
        // old 2 -> new 0, old 0 -> new 1, old 1 -> new 2
        assert_eq!(p.out[0], vec![(1, 5.0)]);
        assert_eq!(p.out[1], vec![(2, 1.0)]);
    }

    #[test]
    fn compact_labels() {
        let mut l = vec![2, 2, 0, 1];
        assert_eq!(compact(&mut l), 3);
        assert_eq!(l, vec![0, 0, 1, 2]);
    }
}

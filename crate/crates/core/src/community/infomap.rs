use alloc::vec;
use alloc::vec::Vec;

use super::net::{compact, sweep_order, with_visit_order, Net};
use super::{FlowNetwork, MapEquationParams, Partition, VisitOrder, MIN_IMPROVEMENT};
use crate::error::Result;
use crate::graph::RetweetGraph;
use crate::math::plogp;

const MAX_PASSES: usize = 10_000;

/// Greedy two-level map-equation minimization with the same move/aggregate
/// scheme as [`louvain`](super::louvain). A node may join a neighboring
/// module or an empty one. The result is compared against the one-module
/// solution and the shorter description wins.
///
/// Graphs without edges come back as singletons.
pub fn infomap(g: &RetweetGraph, params: &MapEquationParams, visit: &VisitOrder) -> Result<Partition> {
    params.validate()?;
    let n = g.node_count();
    visit.validate(n)?;
    if g.total_weight() == 0 {
        return Ok(Partition::singletons(n));
    }
    let flow = FlowNetwork::from_graph(g, params)?;
    let net = Net::from_links(n, flow.links.iter().copied());
    let labels = with_visit_order(&net, &flow.node_flow, visit, |net, p| search(net, p, visit));
    let found = Partition::from_labels(&labels);
    let one = Partition::single(n);
    if flow.codelength(&one)? < flow.codelength(&found)? - MIN_IMPROVEMENT {
        Ok(one)
    } else {
        Ok(found)
    }
}

fn search(net0: &Net, p0: &[f64], visit: &VisitOrder) -> Vec<usize> {
    let mut membership: Vec<usize> = (0..net0.len()).collect();
    let mut net = net0.clone();
    let mut p = p0.to_vec();
    for level in 0.. {
        let (mut labels, moved) = local_moving(&net, &p, visit, level);
        if !moved {
            break;
        }
        let k = compact(&mut labels);
        for m in membership.iter_mut() {
            *m = labels[*m];
        }
        let mut agg = vec![0.0; k];
        for (node, &l) in labels.iter().enumerate() {
            agg[l] += p[node];
        }
        p = agg;
        net = net.aggregate(&labels, k);
    }
    membership
}

fn local_moving(net: &Net, p: &[f64], visit: &VisitOrder, level: usize) -> (Vec<usize>, bool) {
    let n = net.len();
    let external = |list: &[(usize, f64)], v: usize| -> f64 { list.iter().filter(|x| x.0 != v).map(|x| x.1).sum() };
    let out_f: Vec<f64> = (0..n).map(|v| external(&net.out[v], v)).collect();

    let mut comm: Vec<usize> = (0..n).collect();
    let mut exit = out_f.clone();
    let mut flow = p.to_vec();
    let mut size = vec![1usize; n];
    let mut empty: Vec<usize> = Vec::new();
    let mut total_exit: f64 = exit.iter().sum();

    let mut to_c = vec![0.0; n];
    let mut from_c = vec![0.0; n];
    let mut touched = vec![false; n];
    let mut candidates: Vec<usize> = Vec::new();
    let mut moved_any = false;

    for pass in 0..MAX_PASSES {
        let mut moved = false;
        for v in sweep_order(n, visit, level, pass) {
            let a = comm[v];
            for &(u, f) in &net.out[v] {
                if u != v {
                    let c = comm[u];
                    if !touched[c] {
                        touched[c] = true;
                        candidates.push(c);
                    }
                    to_c[c] += f;
                }
            }
            for &(u, f) in &net.inc[v] {
                if u != v {
                    let c = comm[u];
                    if !touched[c] {
                        touched[c] = true;
                        candidates.push(c);
                    }
                    from_c[c] += f;
                }
            }

            let exit_a = exit[a] - (out_f[v] - to_c[a]) + from_c[a];
            let flow_a = flow[a] - p[v];
            let before_a = -2.0 * plogp(exit[a]) + plogp(exit[a] + flow[a]);
            let after_a = -2.0 * plogp(exit_a) + plogp(exit_a + flow_a);

            let isolate = if size[a] > 1 { empty.last().copied() } else { None };
            let mut best = a;
            let mut best_delta = 0.0;
            let mut best_exit_b = 0.0;
            for b in candidates.iter().copied().filter(|&c| c != a).chain(isolate) {
                let exit_b = exit[b] + (out_f[v] - to_c[b]) - from_c[b];
                let flow_b = flow[b] + p[v];
                let new_total = total_exit - exit[a] - exit[b] + exit_a + exit_b;
                let delta = plogp(new_total) - plogp(total_exit) + after_a - before_a
                    + (-2.0 * plogp(exit_b) + plogp(exit_b + flow_b))
                    - (-2.0 * plogp(exit[b]) + plogp(exit[b] + flow[b]));
                if delta < best_delta {
                    best = b;
                    best_delta = delta;
                    best_exit_b = exit_b;
                }
            }

            if best != a && best_delta < -MIN_IMPROVEMENT {
                let b = best;
                total_exit += exit_a - exit[a] + best_exit_b - exit[b];
                exit[a] = exit_a;
                exit[b] = best_exit_b;
                flow[a] = flow_a;
                flow[b] += p[v];
                if size[b] == 0 {
                    empty.retain(|&m| m != b);
                }
                size[a] -= 1;
                size[b] += 1;
                if size[a] == 0 {
                    empty.push(a);
                    exit[a] = 0.0;
                    flow[a] = 0.0;
                }
                comm[v] = b;
                moved = true;
            }

            for &c in &candidates {
                touched[c] = false;
                to_c[c] = 0.0;
                from_c[c] = 0.0;
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::map_equation;
    use crate::graph::{build_graph, EdgeRecord};

    fn graph(edges: &[(&str, &str)]) -> RetweetGraph {
        let recs: Vec<_> = edges.iter().map(|&(t, s)| EdgeRecord::new(t, s, 1)).collect();
        build_graph(&recs).unwrap()
    }

    #[test]
    fn disconnected_two_cycles_planted() {
        let g = graph(&[("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")]);
        for seed in 0..10 {
            let p = infomap(&g, &MapEquationParams::default(), &VisitOrder::Seeded(seed)).unwrap();
            assert!(p.same_clustering(&Partition::from_labels(&[0, 0, 1, 1])), "{p:?}");
        }
    }

    #[test]
    fn complete_graph_single_module() {
        let ids = ["a", "b", "c", "d"];
        let mut edges = Vec::new();
        for s in ids {
            for t in ids {
                if s != t {
                    edges.push((t, s));
                }
            }
        }
        let g = graph(&edges);
        let params = MapEquationParams::default();
        let p = infomap(&g, &params, &VisitOrder::Seeded(3)).unwrap();
        assert_eq!(p.k(), 1);
        let l = map_equation(&g, &p, &params).unwrap();
        assert!((l - 2.0).abs() < 1e-9);
    }
}

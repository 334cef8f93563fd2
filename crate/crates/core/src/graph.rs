//! Directed weighted retweet multigraph.
//!
//! Entry `A[i][j]` counts how many times account `j` retweeted account `i`.
//! We call `i` the *target* (the retweeted account) and `j` the *source*
//! (the retweeter). Parallel retweets are aggregated into one integer weight,
//! self-retweets are kept as self-loops.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One input retweet record: `source` retweeted `target` `count` times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub target: String,
    pub source: String,
    pub count: u64,
}

impl EdgeRecord {
    pub fn new(target: impl Into<String>, source: impl Into<String>, count: u64) -> Self {
        Self {
            target: target.into(),
            source: source.into(),
            count,
        }
    }
}

/// Aggregated edge between dense node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub target: usize,
    pub source: usize,
    pub weight: u64,
}

/// Which side of an edge a degree counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

/// Incremental graph construction. Node indices follow first appearance of
/// each external id; within a record the target is registered before the
/// source.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    weights: BTreeMap<(usize, usize), u64>,
    records: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an account that may have no edges.
    pub fn add_node(&mut self, id: &str) -> Result<usize> {
        if id.is_empty() {
            return Err(Error::EmptyId {
                index: self.records,
            });
        }
        Ok(self.intern(id))
    }

    pub fn add_record(&mut self, record: &EdgeRecord) -> Result<()> {
        let index = self.records;
        if record.count == 0 {
            return Err(Error::NonPositiveCount { index });
        }
        if record.target.is_empty() || record.source.is_empty() {
            return Err(Error::EmptyId { index });
        }
        let t = self.intern(&record.target);
        let s = self.intern(&record.source);
        *self.weights.entry((t, s)).or_insert(0) += record.count;
        self.records += 1;
        Ok(())
    }

    fn intern(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(String::from(id));
        self.index.insert(String::from(id), i);
        i
    }

    pub fn build(self) -> RetweetGraph {
        let edges = self
            .weights
            .into_iter()
            .map(|((target, source), weight)| Edge {
                target,
                source,
                weight,
            })
            .collect();
        RetweetGraph::from_parts(self.ids, edges)
    }
}

/// Aggregates `records` into a graph. Fails on the first record with a zero
/// count or an empty id, reporting its position in `records`.
pub fn build_graph(records: &[EdgeRecord]) -> Result<RetweetGraph> {
    let mut builder = GraphBuilder::new();
    for r in records {
        builder.add_record(r)?;
    }
    Ok(builder.build())
}

/// Compressed adjacency: for each node, a contiguous run of `(neighbor, weight)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, u64)>,
}

impl Adjacency {
    fn build(n: usize, pairs: impl Iterator<Item = (usize, usize, u64)>) -> Self {
        let mut buckets: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for (from, to, w) in pairs {
            buckets[from].push((to, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut entries = Vec::new();
        offsets.push(0);
        for mut b in buckets {
            b.sort_unstable();
            entries.extend(b);
            offsets.push(entries.len());
        }
        Self { offsets, entries }
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[(usize, u64)] {
        &self.entries[self.offsets[node]..self.offsets[node + 1]]
    }
}

/// Immutable aggregated retweet graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetweetGraph {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Sorted by `(target, source)`.
    edges: Vec<Edge>,
    /// Per target: `(source, weight)`.
    incoming: Adjacency,
    /// Per source: `(target, weight)`.
    outgoing: Adjacency,
    in_strength: Vec<u64>,
    out_strength: Vec<u64>,
    total_weight: u64,
}

impl RetweetGraph {
    /// Assembles a graph from node ids and aggregated edges. Edges must not
    /// repeat a `(target, source)` pair.
    pub(crate) fn from_parts(ids: Vec<String>, mut edges: Vec<Edge>) -> Self {
        let n = ids.len();
        edges.sort_unstable();
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut in_strength = vec![0u64; n];
        let mut out_strength = vec![0u64; n];
        let mut total_weight = 0u64;
        for e in &edges {
            in_strength[e.target] += e.weight;
            out_strength[e.source] += e.weight;
            total_weight += e.weight;
        }
        let incoming = Adjacency::build(n, edges.iter().map(|e| (e.target, e.source, e.weight)));
        let outgoing = Adjacency::build(n, edges.iter().map(|e| (e.source, e.target, e.weight)));
        Self {
            ids,
            index,
            edges,
            incoming,
            outgoing,
            in_strength,
            out_strength,
            total_weight,
        }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Total weight `w`: the number of retweets.
    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, node: usize) -> &str {
        &self.ids[node]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// `(source, weight)` pairs of accounts that retweeted `node`.
    pub fn retweeters(&self, node: usize) -> &[(usize, u64)] {
        self.incoming.neighbors(node)
    }

    /// `(target, weight)` pairs of accounts that `node` retweeted.
    pub fn retweeted(&self, node: usize) -> &[(usize, u64)] {
        self.outgoing.neighbors(node)
    }

    pub fn in_strength(&self, node: usize) -> u64 {
        self.in_strength[node]
    }

    pub fn out_strength(&self, node: usize) -> u64 {
        self.out_strength[node]
    }

    pub fn in_strengths(&self) -> &[u64] {
        &self.in_strength
    }

    pub fn out_strengths(&self) -> &[u64] {
        &self.out_strength
    }

    /// Per-node `(in_strength, out_strength)`.
    pub fn strengths(&self) -> Vec<(u64, u64)> {
        self.in_strength
            .iter()
            .zip(&self.out_strength)
            .map(|(&i, &o)| (i, o))
            .collect()
    }

    /// Number of nodes with each weighted degree.
    pub fn degree_histogram(&self, direction: Direction) -> BTreeMap<u64, usize> {
        let degrees = match direction {
            Direction::In => &self.in_strength,
            Direction::Out => &self.out_strength,
        };
        let mut hist = BTreeMap::new();
        for &d in degrees {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    /// Edge multiset keyed by external ids; independent of node numbering.
    pub fn edges_by_id(&self) -> BTreeMap<(&str, &str), u64> {
        self.edges
            .iter()
            .map(|e| ((self.id(e.target), self.id(e.source)), e.weight))
            .collect()
    }

    /// Weakly connected components, each sorted ascending, listed in order of
    /// their smallest member.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(u) = queue.pop_front() {
                members.push(u);
                let both = self.incoming.neighbors(u).iter().chain(self.outgoing.neighbors(u));
                for &(v, _) in both {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Induced subgraph on `nodes` (any order, no duplicates). New indices
    /// follow ascending old index. Returns the subgraph and the old→new map.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> (RetweetGraph, Vec<Option<usize>>) {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut map = vec![None; self.node_count()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = Some(new);
        }
        let ids = keep.iter().map(|&i| self.ids[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match (map[e.target], map[e.source]) {
                (Some(t), Some(s)) => Some(Edge {
                    target: t,
                    source: s,
                    weight: e.weight,
                }),
                _ => None,
            })
            .collect();
        (RetweetGraph::from_parts(ids, edges), map)
    }

    /// Subgraph on the largest weakly connected component. Ties go to the
    /// component holding the smallest node index.
    pub fn largest_weak_component(&self) -> Result<(RetweetGraph, Vec<Option<usize>>)> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let components = self.weak_components();
        // Components are ordered by smallest member, so the first maximum wins.
        let mut best = &components[0];
        for c in &components[1..] {
            if c.len() > best.len() {
                best = c;
            }
        }
        Ok(self.induced_subgraph(best))
    }

    /// Graph without the listed accounts (unknown ids are ignored).
    pub fn without_nodes(&self, ids: &[&str]) -> (RetweetGraph, Vec<Option<usize>>) {
        let drop: Vec<usize> = ids.iter().filter_map(|id| self.index_of(id)).collect();
        let keep: Vec<usize> = (0..self.node_count()).filter(|i| !drop.contains(i)).collect();
        self.induced_subgraph(&keep)
    }
}

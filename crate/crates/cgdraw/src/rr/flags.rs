//! Per-node cluster facts: the flags of a virtual edge and the same facts
//! about the rest of the graph.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::model::ClusteredGraph;
use crate::spqr::SpqrTree;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ClusterEdgeFlags {
    /// Some vertex of pert(τ) other than the poles is in μ.
    pub touched: bool,
    /// Every vertex of pert(τ) is in μ.
    pub full: bool,
    /// A pole-to-pole path of μ-vertices exists inside pert(τ).
    pub spined: bool,
    /// Some extensible embedding of pert(τ) has a connected H(τ,μ) touching
    /// both boundary faces, or a pole lies in μ.
    pub traversable: bool,
}

/// Flags for every (node, non-root cluster) pair; node `i` stands for the
/// virtual edge of its parent skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagTable {
    clusters: usize,
    flags: Vec<ClusterEdgeFlags>,
}

impl FlagTable {
    pub fn get(&self, node: usize, cluster: usize) -> ClusterEdgeFlags {
        self.flags[node * self.clusters + cluster]
    }

    pub fn node_count(&self) -> usize {
        self.flags.len() / self.clusters.max(1)
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters
    }
}

/// Labels every virtual edge with its cluster flags. `traversable` comes out
/// of the bottom-up search (see [`super::test_rr_biconnected`]).
pub fn classify_flags(tree: &SpqrTree, cg: &ClusteredGraph) -> FlagTable {
    let facts = node_facts(tree, cg);
    let trav = super::search::traversable_table(tree, cg, &facts);
    let k = cg.cluster_count();
    let mut flags = Vec::with_capacity(facts.len() * k);
    for (i, f) in facts.iter().enumerate() {
        for c in 0..k {
            flags.push(ClusterEdgeFlags {
                touched: f.touched[c],
                full: f.full[c],
                spined: f.spined[c],
                traversable: trav[i][c],
            });
        }
    }
    FlagTable { clusters: k, flags }
}

/// Static facts of one node, indexed by cluster. Cluster 0 (the root) is
/// left all-false.
#[derive(Clone, Debug)]
pub(crate) struct NodeFacts {
    pub touched: Vec<bool>,
    pub full: Vec<bool>,
    pub spined: Vec<bool>,
    /// μ has a vertex outside pert(τ).
    pub rest_touched: Vec<bool>,
    /// Both poles in μ and joined by a μ-path avoiding pert(τ).
    pub rest_spined: Vec<bool>,
}

pub(crate) fn node_facts(tree: &SpqrTree, cg: &ClusteredGraph) -> Vec<NodeFacts> {
    let g = cg.graph();
    let k = cg.cluster_count();
    tree.nodes()
        .iter()
        .map(|nd| {
            let mut in_edges = vec![false; g.m()];
            let mut in_pert = vec![false; g.n()];
            for &e in &nd.edges {
                in_edges[e] = true;
                let (a, b) = g.edge(e);
                in_pert[a] = true;
                in_pert[b] = true;
            }
            let (u, v) = nd.poles;
            let mut f = NodeFacts {
                touched: vec![false; k],
                full: vec![false; k],
                spined: vec![false; k],
                rest_touched: vec![false; k],
                rest_spined: vec![false; k],
            };
            for c in 1..k {
                let mask = cg.mask(c);
                f.touched[c] = (0..g.n()).any(|x| in_pert[x] && x != u && x != v && mask[x]);
                f.full[c] = (0..g.n()).all(|x| !in_pert[x] || mask[x]);
                f.rest_touched[c] = (0..g.n()).any(|x| !in_pert[x] && mask[x]);
                if mask[u] && mask[v] {
                    f.spined[c] = connected_via(g, u, v, |e| in_edges[e], mask);
                    f.rest_spined[c] = connected_via(g, u, v, |e| !in_edges[e], mask);
                }
            }
            f
        })
        .collect()
}

/// Is `t` reachable from `s` over allowed edges between μ-vertices?
fn connected_via(g: &Graph, s: usize, t: usize, allowed: impl Fn(usize) -> bool, mask: &[bool]) -> bool {
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        if x == t {
            return true;
        }
        for &(y, e) in g.adj(x) {
            if !seen[y] && mask[y] && allowed(e) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    false
}

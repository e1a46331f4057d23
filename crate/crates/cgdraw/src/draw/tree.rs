//! The spanning tree 𝒯 whose restriction to every cluster is connected.

use serde::Serialize;

use crate::graph::UnionFind;
use crate::model::{validate, ClusteredGraph};

use super::DrawError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TreeMode {
    General,
    CConnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub ends: (usize, usize),
    /// Graph edge id, or `None` for an auxiliary edge.
    pub graph_edge: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSpanningTree {
    pub edges: Vec<TreeEdge>,
    /// Tree edges of 𝒯(μ) per cluster (cluster 0 holds all of them).
    pub per_cluster: Vec<Vec<usize>>,
}

impl ClusterSpanningTree {
    pub fn auxiliary(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&t| self.edges[t].graph_edge.is_none())
    }

    /// Membership of graph edges in 𝒯.
    pub fn graph_edge_mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for e in self.edges.iter().filter_map(|t| t.graph_edge) {
            mask[e] = true;
        }
        mask
    }
}

/// Builds 𝒯 bottom-up over the inclusion tree. The parts of a cluster are its
/// direct vertices and its child clusters, each already spanned. General
/// mode joins the parts with graph edges where one leads from the part
/// grown so far, and with auxiliary edges otherwise; c-connected mode uses a
/// minimal set of edges of G(μ).
pub fn cluster_spanning_tree(cg: &ClusteredGraph, mode: TreeMode) -> Result<ClusterSpanningTree, DrawError> {
    if mode == TreeMode::CConnected && !validate(cg).is_c_connected {
        return Err(DrawError::NotCConnected);
    }
    let g = cg.graph();
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut edges: Vec<TreeEdge> = Vec::new();
    let mut order = cg.clusters_bottom_up();
    order.push(0);
    for c in order {
        let mask = cg.mask(c);
        let members = cg.members(c);
        let Some(&first) = members.first() else { continue };
        match mode {
            TreeMode::CConnected => {
                for (e, &(a, b)) in g.edges().iter().enumerate() {
                    if mask[a] && mask[b] && uf.union(a, b) {
                        edges.push(TreeEdge { ends: (a, b), graph_edge: Some(e) });
                    }
                }
            }
            TreeMode::General => {
                // grow from the part holding `first`, one part at a time
                loop {
                    let root = uf.find(first);
                    let mut joined = false;
                    for (e, &(a, b)) in g.edges().iter().enumerate() {
                        if !(mask[a] && mask[b]) {
                            continue;
                        }
                        let (ra, rb) = (uf.find(a), uf.find(b));
                        if ra != rb && (ra == root || rb == root) {
                            uf.union(a, b);
                            edges.push(TreeEdge { ends: (a, b), graph_edge: Some(e) });
                            joined = true;
                            break;
                        }
                    }
                    if joined {
                        continue;
                    }
                    match members.iter().find(|&&x| uf.find(x) != root) {
                        Some(&x) => {
                            uf.union(first, x);
                            edges.push(TreeEdge { ends: (first, x), graph_edge: None });
                        }
                        None => break,
                    }
                }
            }
        }
    }
    let per_cluster = (0..cg.cluster_count())
        .map(|c| (0..edges.len()).filter(|&t| cg.contains(c, edges[t].ends.0) && cg.contains(c, edges[t].ends.1)).collect())
        .collect();
    Ok(ClusterSpanningTree { edges, per_cluster })
}

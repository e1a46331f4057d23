//! Drawings with edge-region crossings only.
//!
//! Every cluster is drawn as a thin region around its part of 𝒯. A graph edge
//! outside 𝒯 with both ends in μ leaves and re-enters R(μ) once; an auxiliary
//! tree edge is routed through the faces of a planar embedding of G, and every
//! graph edge it passes over enters and leaves each region containing it.

use std::collections::{BTreeMap, VecDeque};

use serde_json::{json, Value};

use crate::embedding::{dual_graph, faces, planar_embed, FaceSet, RotationSystem};
use crate::graph::UnionFind;
use crate::model::{validate, ClusteredGraph};

use super::geometry::{Crossing, CrossingReport};
use super::tree::{cluster_spanning_tree, ClusterSpanningTree, TreeMode};
use super::DrawError;

/// Path of one auxiliary tree edge through the embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRoute {
    pub tree_edge: usize,
    pub faces: Vec<usize>,
    /// Graph edges passed over, in order.
    pub crossed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaPlan {
    pub embedding: RotationSystem,
    pub tree: ClusterSpanningTree,
    pub mode: TreeMode,
    pub routes: Vec<DualRoute>,
    /// er-crossings per (graph edge, cluster).
    pub ledger: BTreeMap<(usize, usize), usize>,
    pub beta: usize,
}

impl BetaPlan {
    pub fn report(&self) -> CrossingReport {
        let detail: Vec<Crossing> =
            self.ledger.iter().map(|(&(edge, cluster), &count)| Crossing::EdgeRegion { edge, cluster, count }).collect();
        CrossingReport { alpha: 0, beta: self.beta, gamma: 0, detail }
    }

    /// Self-contained plan: recounting needs nothing but this value.
    pub fn to_json(&self, cg: &ClusteredGraph) -> Value {
        let names = cg.vertex_names();
        let edge_json = |e: usize| {
            let (a, b) = cg.graph().edge(e);
            json!([names[a], names[b]])
        };
        let tree: Vec<Value> = self
            .tree
            .edges
            .iter()
            .map(|t| json!({"ends": [names[t.ends.0], names[t.ends.1]], "in_graph": t.graph_edge.is_some()}))
            .collect();
        let clusters: Vec<Value> = (1..cg.cluster_count())
            .map(|c| {
                json!({
                    "id": cg.cluster_name(c),
                    "members": cg.members(c).iter().map(|&v| &names[v]).collect::<Vec<_>>(),
                    "tree_edges": self.tree.per_cluster[c],
                })
            })
            .collect();
        let routes: Vec<Value> = self
            .routes
            .iter()
            .map(|r| json!({"tree_edge": r.tree_edge, "faces": r.faces, "crossed": r.crossed.iter().map(|&e| edge_json(e)).collect::<Vec<_>>()}))
            .collect();
        let ledger: Vec<Value> = self
            .ledger
            .iter()
            .map(|(&(e, c), &k)| json!({"edge": edge_json(e), "cluster": cg.cluster_name(c), "crossings": k}))
            .collect();
        json!({
            "mode": "er",
            "tree_mode": self.mode,
            "embedding": self.embedding.to_json(names),
            "edges": (0..cg.edge_count()).map(edge_json).collect::<Vec<_>>(),
            "tree": tree,
            "clusters": clusters,
            "routes": routes,
            "ledger": ledger,
            "alpha": 0,
            "beta": self.beta,
            "gamma": 0,
        })
    }
}

/// Builds 𝒯, embeds G and fills the er-crossing ledger.
pub fn construct_0b0(cg: &ClusteredGraph) -> Result<(BetaPlan, CrossingReport), DrawError> {
    let embedding = planar_embed(cg.graph()).map_err(|_| DrawError::NonPlanar)?;
    construct_0b0_on(cg, embedding)
}

/// Same as [`construct_0b0`] on a given planar embedding of G.
pub fn construct_0b0_on(cg: &ClusteredGraph, embedding: RotationSystem) -> Result<(BetaPlan, CrossingReport), DrawError> {
    if !embedding.is_planar_embedding() {
        return Err(DrawError::NonPlanar);
    }
    let g = cg.graph();
    let mode = if validate(cg).is_c_connected { TreeMode::CConnected } else { TreeMode::General };
    let tree = cluster_spanning_tree(cg, mode)?;
    let fs = faces(&embedding);
    let in_tree = tree.graph_edge_mask(g.m());
    let mut ledger: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        for c in 1..cg.cluster_count() {
            if cg.contains(c, a) && cg.contains(c, b) {
                *ledger.entry((e, c)).or_default() += 1;
            }
        }
    }
    let router = Router::new(&embedding, &fs);
    let mut routes = Vec::new();
    for t in tree.auxiliary().collect::<Vec<_>>() {
        let (a, b) = tree.edges[t].ends;
        let route = router.route(a, b, t);
        for &e in &route.crossed {
            for c in 1..cg.cluster_count() {
                if tree.per_cluster[c].binary_search(&t).is_ok() {
                    *ledger.entry((e, c)).or_default() += 1;
                }
            }
        }
        routes.push(route);
    }
    let beta = ledger.values().sum();
    let plan = BetaPlan { embedding, tree, mode, routes, ledger, beta };
    let report = plan.report();
    Ok((plan, report))
}

/// Shortest paths in the dual graph. Separate components are drawn side by
/// side, so one face of each (its largest) is merged into a shared outside.
struct Router<'a> {
    fs: &'a FaceSet,
    adj: Vec<Vec<(usize, usize)>>,
    outside: Vec<usize>,
    n_faces: usize,
}

impl<'a> Router<'a> {
    fn new(rs: &RotationSystem, fs: &'a FaceSet) -> Router<'a> {
        let dual = dual_graph(rs);
        let n_faces = dual.face_count;
        let mut uf = UnionFind::new(rs.n());
        for &(a, b) in rs.edges() {
            uf.union(a, b);
        }
        let mut best: BTreeMap<usize, usize> = BTreeMap::new();
        for (f, cycle) in fs.faces.iter().enumerate() {
            let comp = uf.find(rs.tail(cycle[0]));
            let keep = best.get(&comp).is_none_or(|&g| fs.faces[g].len() < cycle.len());
            if keep {
                best.insert(comp, f);
            }
        }
        let outside: Vec<usize> = best.into_values().collect();
        Router { fs, adj: dual.adjacency(), outside, n_faces }
    }

    /// Faces a vertex may start from; isolated vertices sit in the outside.
    fn around(&self, v: usize) -> Vec<usize> {
        if self.fs.incidence[v].is_empty() {
            self.outside.clone()
        } else {
            self.fs.incidence[v].clone()
        }
    }

    fn route(&self, a: usize, b: usize, tree_edge: usize) -> DualRoute {
        let targets = self.around(b);
        let mut prev: Vec<Option<(usize, Option<usize>)>> = vec![None; self.n_faces];
        let mut queue = VecDeque::new();
        for f in self.around(a) {
            prev[f] = Some((f, None));
            queue.push_back(f);
        }
        let mut end = None;
        while let Some(f) = queue.pop_front() {
            if targets.contains(&f) {
                end = Some(f);
                break;
            }
            let mut step: Vec<(usize, Option<usize>)> = self.adj[f].iter().map(|&(h, e)| (h, Some(e))).collect();
            if self.outside.contains(&f) {
                step.extend(self.outside.iter().map(|&h| (h, None)));
            }
            for (h, e) in step {
                if prev[h].is_none() {
                    prev[h] = Some((f, e));
                    queue.push_back(h);
                }
            }
        }
        // with the merged outside the dual is connected, so only an edgeless
        // graph leaves the route empty
        let Some(mut f) = end else {
            return DualRoute { tree_edge, faces: Vec::new(), crossed: Vec::new() };
        };
        let mut faces = vec![f];
        let mut crossed = Vec::new();
        while let Some((p, e)) = prev[f] {
            if p == f && e.is_none() {
                break;
            }
            crossed.extend(e);
            faces.push(p);
            f = p;
        }
        faces.reverse();
        crossed.reverse();
        DualRoute { tree_edge, faces, crossed }
    }
}

//! Rooted SPQR-trees, built straight from the recursive definition.
//!
//! The root is the Q-node of the reference edge. Every other node owns an
//! edge set of `G` (its pertinent graph) and two poles; it is
//!
//! * `Q` when the set is a single edge,
//! * `P` when the poles split it into two or more components,
//! * `S` when it has cut vertices (its blocks form a chain between the poles),
//! * `R` otherwise; the children are found by contracting separation pairs
//!   until the skeleton is triconnected.
//!
//! Every skeleton lists its parent virtual edge explicitly, so skeletons of
//! P-, S- and R-nodes are exactly the classical ones.
//!
//! ```
//! use cgdraw::graph::Graph;
//! use cgdraw::spqr::{build_spqr, NodeKind};
//!
//! let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
//! let t = build_spqr(&c5, 0).unwrap();
//! let s: Vec<_> = t.nodes().iter().filter(|n| n.kind == NodeKind::S).collect();
//! assert_eq!(s.len(), 1);
//! assert_eq!(s[0].skeleton.len(), 5);
//! ```

use serde_json::{json, Value};

use crate::graph::{Graph, UnionFind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpqrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("edge {0} is not in the graph")]
    EdgeNotPresent(usize),
    #[error("node {0} is not a P- or R-node")]
    WrongKind(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    S,
    P,
    Q,
    R,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::S => "S",
            NodeKind::P => "P",
            NodeKind::Q => "Q",
            NodeKind::R => "R",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLink {
    /// The virtual edge standing for the rest of the graph.
    Parent,
    Child(usize),
    /// A real edge of `G` (only in Q-node skeletons).
    Real(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub ends: (usize, usize),
    pub link: EdgeLink,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpqrNode {
    pub kind: NodeKind,
    pub poles: (usize, usize),
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub skeleton: Vec<SkeletonEdge>,
    /// Edge ids of the pertinent graph, sorted.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpqrTree {
    n: usize,
    graph_edges: Vec<(usize, usize)>,
    reference: usize,
    nodes: Vec<SpqrNode>,
}

/// A node seen from a P- or R-node, with the S-node it was reached through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VisibleNode {
    pub node: usize,
    pub via: Option<usize>,
}

pub fn build_spqr(g: &Graph, reference: usize) -> Result<SpqrTree, SpqrError> {
    if reference >= g.m() {
        return Err(SpqrError::EdgeNotPresent(reference));
    }
    let active = (0..g.n()).filter(|&v| g.degree(v) > 0).count();
    let (blocks, _) = g.biconnected_components();
    if blocks.len() != 1 || active != g.n() || g.m() < 2 {
        return Err(SpqrError::NotBiconnected);
    }
    let (s, t) = g.edge(reference);
    let mut tree = SpqrTree { n: g.n(), graph_edges: g.edges().to_vec(), reference, nodes: Vec::new() };
    tree.nodes.push(SpqrNode {
        kind: NodeKind::Q,
        poles: (s, t),
        parent: None,
        children: Vec::new(),
        skeleton: vec![SkeletonEdge { ends: (s, t), link: EdgeLink::Real(reference) }],
        edges: (0..g.m()).collect(),
    });
    let rest: Vec<usize> = (0..g.m()).filter(|&e| e != reference).collect();
    let child = tree.decompose(rest, s, t, 0);
    tree.nodes[0].children.push(child);
    tree.nodes[0].skeleton.push(SkeletonEdge { ends: (s, t), link: EdgeLink::Child(child) });
    Ok(tree)
}

impl SpqrTree {
    pub fn nodes(&self) -> &[SpqrNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &SpqrNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn reference_edge(&self) -> usize {
        self.reference
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn graph_edges(&self) -> &[(usize, usize)] {
        &self.graph_edges
    }

    /// Children before parents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(0, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                out.push(v);
                continue;
            }
            stack.push((v, true));
            for &c in self.nodes[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Skeleton vertices, in order of first appearance.
    pub fn skeleton_vertices(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for se in &self.nodes[id].skeleton {
            for v in [se.ends.0, se.ends.1] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    fn add(&mut self, node: SpqrNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn decompose(&mut self, mut edges: Vec<usize>, s: usize, t: usize, parent: usize) -> usize {
        edges.sort_unstable();
        let id = self.add(SpqrNode {
            kind: NodeKind::Q,
            poles: (s, t),
            parent: Some(parent),
            children: Vec::new(),
            skeleton: Vec::new(),
            edges: edges.clone(),
        });
        if edges.len() == 1 {
            self.nodes[id].skeleton = vec![
                SkeletonEdge { ends: (s, t), link: EdgeLink::Real(edges[0]) },
                SkeletonEdge { ends: (t, s), link: EdgeLink::Parent },
            ];
            return id;
        }
        let triples: Vec<(usize, usize, usize)> = edges
            .iter()
            .map(|&e| {
                let (a, b) = self.graph_edges[e];
                (a, b, e)
            })
            .collect();
        let comps = split_components(self.n, &triples, s, t);
        let mut skeleton = Vec::new();
        let kind;
        if comps.len() >= 2 {
            kind = NodeKind::P;
            for comp in comps {
                let c = self.decompose(comp, s, t, id);
                skeleton.push(SkeletonEdge { ends: (s, t), link: EdgeLink::Child(c) });
            }
        } else if let Some(chain) = self.series_chain(&edges, s, t) {
            kind = NodeKind::S;
            for (a, b, part) in chain {
                let c = self.decompose(part, a, b, id);
                skeleton.push(SkeletonEdge { ends: (a, b), link: EdgeLink::Child(c) });
            }
        } else {
            kind = NodeKind::R;
            for (a, b, part) in self.rigid_parts(&triples, s, t) {
                let c = self.decompose(part, a, b, id);
                skeleton.push(SkeletonEdge { ends: (a, b), link: EdgeLink::Child(c) });
            }
        }
        skeleton.push(SkeletonEdge { ends: (t, s), link: EdgeLink::Parent });
        let children = skeleton
            .iter()
            .filter_map(|se| match se.link {
                EdgeLink::Child(c) => Some(c),
                _ => None,
            })
            .collect();
        let node = &mut self.nodes[id];
        node.kind = kind;
        node.skeleton = skeleton;
        node.children = children;
        id
    }

    /// Blocks of the edge set ordered from `s` to `t`, or `None` when the
    /// set is biconnected.
    fn series_chain(&self, edges: &[usize], s: usize, t: usize) -> Option<Vec<(usize, usize, Vec<usize>)>> {
        let local: Vec<(usize, usize)> = edges.iter().map(|&e| self.graph_edges[e]).collect();
        let sub = Graph::from_edges(self.n, &local);
        let (blocks, is_cut) = sub.biconnected_components();
        if blocks.len() <= 1 {
            return None;
        }
        let block_verts: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                let mut vs: Vec<usize> = b.iter().flat_map(|&e| [local[e].0, local[e].1]).collect();
                vs.sort_unstable();
                vs.dedup();
                vs
            })
            .collect();
        let mut used = vec![false; blocks.len()];
        let mut out = Vec::new();
        let mut cur = s;
        while cur != t {
            let b = (0..blocks.len()).find(|&b| !used[b] && block_verts[b].contains(&cur)).expect("chain of blocks");
            used[b] = true;
            let next = if block_verts[b].contains(&t) {
                t
            } else {
                *block_verts[b].iter().find(|&&v| v != cur && is_cut[v]).expect("cut vertex")
            };
            out.push((cur, next, blocks[b].iter().map(|&e| edges[e]).collect()));
            cur = next;
        }
        debug_assert!(used.iter().all(|&u| u));
        Some(out)
    }

    /// Contracts separation pairs of the skeleton until it is triconnected;
    /// returns the resulting skeleton edges with their edge sets.
    fn rigid_parts(&self, triples: &[(usize, usize, usize)], s: usize, t: usize) -> Vec<(usize, usize, Vec<usize>)> {
        // super-edges; the reference (rest of the graph) is kept separately
        let mut sup: Vec<(usize, usize, Vec<usize>)> = triples.iter().map(|&(a, b, e)| (a, b, vec![e])).collect();
        loop {
            let mut verts: Vec<usize> = sup.iter().flat_map(|x| [x.0, x.1]).collect();
            verts.sort_unstable();
            verts.dedup();
            let mut contracted = false;
            'pairs: for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    let (x, y) = (verts[i], verts[j]);
                    if (x == s && y == t) || (x == t && y == s) {
                        continue;
                    }
                    let mut with_ref: Vec<(usize, usize, usize)> =
                        sup.iter().enumerate().map(|(k, &(a, b, _))| (a, b, k)).collect();
                    with_ref.push((s, t, usize::MAX));
                    let comps = split_components(self.n, &with_ref, x, y);
                    if comps.len() < 2 {
                        continue;
                    }
                    let other: Vec<usize> = comps.into_iter().filter(|c| !c.contains(&usize::MAX)).flatten().collect();
                    if other.len() < 2 {
                        continue;
                    }
                    let mut merged = Vec::new();
                    let mut keep = Vec::new();
                    for (k, se) in sup.drain(..).enumerate() {
                        if other.contains(&k) {
                            merged.extend(se.2);
                        } else {
                            keep.push(se);
                        }
                    }
                    merged.sort_unstable();
                    keep.push((x, y, merged));
                    sup = keep;
                    contracted = true;
                    break 'pairs;
                }
            }
            if !contracted {
                break;
            }
        }
        sup.sort_by_key(|x| x.2[0]);
        sup
    }

    /// Edge ids of `pert(node)`.
    pub fn pertinent(&self, node: usize) -> &[usize] {
        &self.nodes[node].edges
    }

    /// Non-S children, plus the children of every S-child.
    pub fn visible_nodes(&self, node: usize) -> Result<Vec<VisibleNode>, SpqrError> {
        let nd = &self.nodes[node];
        if !matches!(nd.kind, NodeKind::P | NodeKind::R) {
            return Err(SpqrError::WrongKind(node));
        }
        let mut out = Vec::new();
        for &c in &nd.children {
            if self.nodes[c].kind == NodeKind::S {
                out.extend(self.nodes[c].children.iter().map(|&g| VisibleNode { node: g, via: Some(c) }));
            } else {
                out.push(VisibleNode { node: c, via: None });
            }
        }
        Ok(out)
    }

    /// Debug dump: node kinds, poles and skeleton edges, using vertex names.
    pub fn to_json(&self, names: &[String]) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, nd)| {
                let skeleton: Vec<Value> = nd
                    .skeleton
                    .iter()
                    .map(|se| {
                        let link = match se.link {
                            EdgeLink::Parent => json!("parent"),
                            EdgeLink::Child(c) => json!({ "child": c }),
                            EdgeLink::Real(e) => {
                                let (a, b) = self.graph_edges[e];
                                json!({ "edge": [names[a], names[b]] })
                            }
                        };
                        json!({ "ends": [names[se.ends.0], names[se.ends.1]], "link": link })
                    })
                    .collect();
                json!({
                    "id": i,
                    "kind": nd.kind.as_str(),
                    "poles": [names[nd.poles.0], names[nd.poles.1]],
                    "parent": nd.parent,
                    "children": nd.children,
                    "skeleton": skeleton,
                })
            })
            .collect();
        let (a, b) = self.graph_edges[self.reference];
        json!({ "reference": [names[a], names[b]], "nodes": nodes })
    }
}

/// Groups edges `(a, b, id)` by connectivity avoiding `x` and `y`; an edge
/// joining `x` and `y` is a component of its own. Components are ordered by
/// first appearance.
fn split_components(n: usize, edges: &[(usize, usize, usize)], x: usize, y: usize) -> Vec<Vec<usize>> {
    let pole = |v: usize| v == x || v == y;
    let mut uf = UnionFind::new(n);
    for &(a, b, _) in edges {
        if !pole(a) && !pole(b) {
            uf.union(a, b);
        }
    }
    let mut key_of: Vec<usize> = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for &(a, b, id) in edges {
        if pole(a) && pole(b) {
            out.push(vec![id]);
            continue;
        }
        let r = uf.find(if pole(a) { b } else { a });
        if key_of[r] == usize::MAX {
            key_of[r] = out.len();
            out.push(Vec::new());
        }
        out[key_of[r]].push(id);
    }
    out
}

//! Embedded skeletons and the three-property extensibility check.

use crate::embedding::{faces, planar_embed, region_classes, FaceSet, RotationSystem};
use crate::graph::{Graph, UnionFind};
use crate::spqr::{EdgeLink, NodeKind, SpqrTree};

use super::flags::ClusterEdgeFlags;

/// An embedding of `sk(τ)`: local vertex ids map to graph vertices and local
/// edge `k` is skeleton edge `k` of the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonEmbedding {
    pub node: usize,
    pub vertices: Vec<usize>,
    pub rs: RotationSystem,
}

impl SkeletonEmbedding {
    fn local_edges(tree: &SpqrTree, node: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let vertices = tree.skeleton_vertices(node);
        let at = |x: usize| vertices.iter().position(|&y| y == x).unwrap();
        let edges = tree.node(node).skeleton.iter().map(|se| (at(se.ends.0), at(se.ends.1))).collect();
        (vertices, edges)
    }

    /// The unique embedding of an S- or Q-skeleton, or one fixed embedding of
    /// an R-skeleton (the other is its mirror image).
    pub fn canonical(tree: &SpqrTree, node: usize) -> SkeletonEmbedding {
        let (vertices, edges) = Self::local_edges(tree, node);
        let rs = match tree.node(node).kind {
            NodeKind::R => planar_embed(&Graph::from_edges(vertices.len(), &edges)).expect("R-skeletons are planar"),
            NodeKind::P => return Self::parallel(tree, node, &Self::children_order(tree, node)),
            NodeKind::S | NodeKind::Q => {
                let mut rot = vec![Vec::new(); vertices.len()];
                for (k, &(a, b)) in edges.iter().enumerate() {
                    rot[a].push(2 * k);
                    rot[b].push(2 * k + 1);
                }
                RotationSystem::new(vertices.len(), edges, rot).expect("cycle rotation")
            }
        };
        SkeletonEmbedding { node, vertices, rs }
    }

    fn children_order(tree: &SpqrTree, node: usize) -> Vec<usize> {
        (0..tree.node(node).skeleton.len()).filter(|&k| tree.node(node).skeleton[k].link != EdgeLink::Parent).collect()
    }

    /// P-skeleton with the parent edge first and then `order` (skeleton edge
    /// indices) around the first pole.
    pub fn parallel(tree: &SpqrTree, node: usize, order: &[usize]) -> SkeletonEmbedding {
        let (vertices, edges) = Self::local_edges(tree, node);
        let nd = tree.node(node);
        let parent = nd.skeleton.iter().position(|se| se.link == EdgeLink::Parent);
        let u = vertices.iter().position(|&x| x == nd.poles.0).unwrap();
        let dart_at = |k: usize, x: usize| if edges[k].0 == x { 2 * k } else { 2 * k + 1 };
        let seq: Vec<usize> = parent.into_iter().chain(order.iter().copied()).collect();
        let mut rot = vec![Vec::new(); vertices.len()];
        let v = 1 - u;
        rot[u] = seq.iter().map(|&k| dart_at(k, u)).collect();
        rot[v] = seq.iter().rev().map(|&k| dart_at(k, v)).collect();
        let rs = RotationSystem::new(vertices.len(), edges, rot).expect("parallel rotation");
        SkeletonEmbedding { node, vertices, rs }
    }

    pub fn local(&self, x: usize) -> usize {
        self.vertices.iter().position(|&y| y == x).expect("skeleton vertex")
    }

    /// Local dart of skeleton edge `k` leaving graph vertex `from`.
    pub fn dart(&self, k: usize, from: usize) -> usize {
        if self.vertices[self.rs.edges()[k].0] == from {
            2 * k
        } else {
            2 * k + 1
        }
    }

    pub fn faces(&self) -> FaceSet {
        faces(&self.rs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    I,
    Ii,
    Iii,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtensibilityFailure {
    pub cluster: usize,
    pub property: Property,
}

/// Evaluates properties (i)–(iii) on an embedded skeleton. `flags[k][μ]`
/// labels skeleton edge `k`; the parent edge (if any) carries the flags of
/// the rest of the graph. Faces next to the parent edge count as exterior.
pub fn check_skeleton_extensible(
    sk: &SkeletonEmbedding,
    parent: Option<usize>,
    flags: &[Vec<ClusterEdgeFlags>],
) -> Result<(), ExtensibilityFailure> {
    let fs = sk.faces();
    let clusters = flags.first().map_or(0, Vec::len);
    let m = sk.rs.edges().len();
    let side = |k: usize| (fs.dart_face[2 * k], fs.dart_face[2 * k + 1]);
    for c in 1..clusters {
        let fl = |k: usize| flags[k][c];
        // (i): non-full edges inside a region bounded by spined edges
        let class = region_classes(&sk.rs, &fs, |k| fl(k).spined);
        let exterior: Vec<usize> = match parent {
            Some(p) => vec![class[side(p).0], class[side(p).1]],
            None => vec![class[0]],
        };
        for k in 0..m {
            if Some(k) == parent || fl(k).spined || fl(k).full {
                continue;
            }
            if !exterior.contains(&class[side(k).0]) {
                return Err(ExtensibilityFailure { cluster: c, property: Property::I });
            }
        }
        // (ii): faces glued along traversable edges form one piece
        let nf = fs.faces.len();
        let mut uf = UnionFind::new(nf);
        let mut on_trav = vec![false; nf];
        for k in (0..m).filter(|&k| fl(k).traversable) {
            let (a, b) = side(k);
            on_trav[a] = true;
            on_trav[b] = true;
            uf.union(a, b);
        }
        let mut roots: Vec<usize> = (0..nf).filter(|&f| on_trav[f]).map(|f| uf.find(f)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() > 1 {
            return Err(ExtensibilityFailure { cluster: c, property: Property::Ii });
        }
        // (iii)
        let touched: Vec<usize> = (0..m).filter(|&k| fl(k).touched && !fl(k).traversable).collect();
        if roots.len() == 1 {
            if touched.iter().any(|&k| !on_trav[side(k).0] && !on_trav[side(k).1]) {
                return Err(ExtensibilityFailure { cluster: c, property: Property::Iii });
            }
        } else if let Some(&first) = touched.first() {
            let (a, b) = side(first);
            let common = |f: usize| touched.iter().all(|&k| side(k).0 == f || side(k).1 == f);
            if !common(a) && !common(b) {
                return Err(ExtensibilityFailure { cluster: c, property: Property::Iii });
            }
        }
    }
    Ok(())
}

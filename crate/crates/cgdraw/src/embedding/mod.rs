//! Combinatorial planar embeddings.
//!
//! A [`RotationSystem`] stores, for every vertex, the cyclic order of its
//! outgoing darts. Edge `e` owns darts `2e` (first endpoint to second) and
//! `2e + 1` (reverse). Faces are traced with the usual rule: after arriving
//! along a dart, continue with the cyclic successor of its reverse.
//!
//! ```
//! use cgdraw::embedding::{faces, planar_embed};
//! use cgdraw::graph::Graph;
//!
//! let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
//! let rs = planar_embed(&k4).unwrap();
//! assert_eq!(faces(&rs).faces.len(), 4);
//! ```

mod enclose;
mod enumerate;
mod planar;

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::graph::UnionFind;
use crate::model::ClusteredGraph;

pub use enclose::{enclosed_violation, enclosed_violation_mask, region_classes, EnclosureWitness};
pub use enumerate::{DEFAULT_CAP, candidate_count, enumerate_embeddings, enumerate_rotation_systems, RotationIter};
pub use planar::planar_embed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("graph is not planar")]
    NonPlanar,
    #[error("graph has {n} vertices, above the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("malformed rotation: {0}")]
    Malformed(String),
    #[error("unknown cluster `{0}`")]
    UnknownCluster(String),
}

#[inline]
pub fn rev(d: usize) -> usize {
    d ^ 1
}

/// Cyclic orders are stored starting at their smallest dart so that equality
/// is equality of rotation systems.
fn normalize(mut r: Vec<usize>) -> Vec<usize> {
    if let Some(p) = r.iter().enumerate().min_by_key(|&(_, d)| *d).map(|(i, _)| i) {
        r.rotate_left(p);
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSystem {
    n: usize,
    edges: Vec<(usize, usize)>,
    rot: Vec<Vec<usize>>,
    pos: Vec<usize>,
    outer: Option<usize>,
}

impl RotationSystem {
    /// Checks that every dart sits exactly once in the rotation of its tail.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, rot: Vec<Vec<usize>>) -> Result<RotationSystem, EmbeddingError> {
        let rot: Vec<Vec<usize>> = rot.into_iter().map(normalize).collect();
        if rot.len() != n {
            return Err(EmbeddingError::Malformed(format!("{} rotations for {} vertices", rot.len(), n)));
        }
        let mut pos = vec![usize::MAX; 2 * edges.len()];
        for (v, r) in rot.iter().enumerate() {
            for (i, &d) in r.iter().enumerate() {
                if d >= pos.len() {
                    return Err(EmbeddingError::Malformed(format!("dart {d} out of range")));
                }
                let (a, b) = edges[d / 2];
                let tail = if d % 2 == 0 { a } else { b };
                if tail != v {
                    return Err(EmbeddingError::Malformed(format!("dart {d} listed at vertex {v}")));
                }
                if pos[d] != usize::MAX {
                    return Err(EmbeddingError::Malformed(format!("dart {d} listed twice")));
                }
                pos[d] = i;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(EmbeddingError::Malformed(format!("dart {d} missing from its rotation")));
        }
        Ok(RotationSystem { n, edges, rot, pos, outer: None })
    }

    pub(crate) fn new_unchecked(n: usize, edges: Vec<(usize, usize)>, rot: Vec<Vec<usize>>) -> RotationSystem {
        let rot: Vec<Vec<usize>> = rot.into_iter().map(normalize).collect();
        let mut pos = vec![0; 2 * edges.len()];
        for r in &rot {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        RotationSystem { n, edges, rot, pos, outer: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn tail(&self, d: usize) -> usize {
        let (a, b) = self.edges[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: usize) -> usize {
        self.tail(rev(d))
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    /// Next dart counter-clockwise around the tail.
    pub fn succ(&self, d: usize) -> usize {
        let r = &self.rot[self.tail(d)];
        r[(self.pos[d] + 1) % r.len()]
    }

    pub fn pred(&self, d: usize) -> usize {
        let r = &self.rot[self.tail(d)];
        r[(self.pos[d] + r.len() - 1) % r.len()]
    }

    /// Dart following `d` along its face.
    pub fn face_next(&self, d: usize) -> usize {
        self.succ(rev(d))
    }

    /// A dart on the distinguished outer face, if one was chosen.
    pub fn outer_dart(&self) -> Option<usize> {
        self.outer
    }

    pub fn with_outer(mut self, dart: usize) -> RotationSystem {
        assert!(dart < self.dart_count());
        self.outer = Some(dart);
        self
    }

    pub fn set_outer(&mut self, dart: Option<usize>) {
        self.outer = dart;
    }

    /// Mirror image: every rotation reversed.
    pub fn mirror(&self) -> RotationSystem {
        let rot = self.rot.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let mut m = RotationSystem::new_unchecked(self.n, self.edges.clone(), rot);
        // the face left of d becomes the face left of rev(d)
        m.outer = self.outer.map(rev);
        m
    }

    /// Neighbor order around `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.rot[v].iter().map(|&d| self.head(d)).collect()
    }

    /// Dart id for the directed edge `u -> v` of a simple graph.
    pub fn dart_between(&self, u: usize, v: usize) -> Option<usize> {
        self.rot[u].iter().copied().find(|&d| self.head(d) == v)
    }

    /// V - E + F summed per connected component equals 2 per component.
    pub fn is_planar_embedding(&self) -> bool {
        let fs = faces(self);
        let mut uf = UnionFind::new(self.n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut per_comp: BTreeMap<usize, (i64, i64, i64)> = BTreeMap::new();
        for v in 0..self.n {
            per_comp.entry(uf.find(v)).or_default().0 += 1;
        }
        for &(a, _) in &self.edges {
            per_comp.get_mut(&uf.find(a)).unwrap().1 += 1;
        }
        for f in &fs.faces {
            let v = self.tail(f[0]);
            per_comp.get_mut(&uf.find(v)).unwrap().2 += 1;
        }
        per_comp.values().all(|&(v, e, f)| if e == 0 { true } else { v - e + f == 2 })
    }

    /// JSON form: vertex id -> ordered neighbor ids, plus the outer face as a dart.
    pub fn to_json(&self, names: &[String]) -> Value {
        let mut rotation = serde_json::Map::new();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        for v in order {
            let ns: Vec<Value> = self.neighbors(v).into_iter().map(|w| json!(names[w])).collect();
            rotation.insert(names[v].clone(), Value::Array(ns));
        }
        let outer = match self.outer {
            Some(d) => {
                let fs = faces(self);
                let f = fs.dart_face[d];
                let canon = *fs.faces[f].iter().min().unwrap();
                json!([names[self.tail(canon)], names[self.head(canon)]])
            }
            None => Value::Null,
        };
        json!({ "rotation": Value::Object(rotation), "outer_face": outer })
    }

    /// Reads the JSON form against the underlying graph of `cg`.
    pub fn from_json(value: &Value, cg: &ClusteredGraph) -> Result<RotationSystem, EmbeddingError> {
        let g = cg.graph();
        let bad = |m: &str| EmbeddingError::Malformed(m.to_string());
        let rotation = value.get("rotation").and_then(Value::as_object).ok_or_else(|| bad("missing `rotation`"))?;
        let mut rot = vec![Vec::new(); g.n()];
        let mut seen = vec![false; g.n()];
        for (name, list) in rotation {
            let v = cg.vertex_index(name).ok_or_else(|| bad(&format!("unknown vertex `{name}`")))?;
            seen[v] = true;
            let list = list.as_array().ok_or_else(|| bad("neighbor list must be an array"))?;
            for w in list {
                let w = w.as_str().ok_or_else(|| bad("neighbor ids must be strings"))?;
                let wi = cg.vertex_index(w).ok_or_else(|| bad(&format!("unknown vertex `{w}`")))?;
                let e = g.find_edge(v, wi).ok_or_else(|| bad(&format!("no edge {name}-{w}")))?;
                let dart = if g.edge(e).0 == v { 2 * e } else { 2 * e + 1 };
                rot[v].push(dart);
            }
        }
        if let Some(v) = (0..g.n()).find(|&v| !seen[v] && g.degree(v) > 0) {
            return Err(bad(&format!("no rotation for `{}`", cg.vertex_name(v))));
        }
        let mut rs = RotationSystem::new(g.n(), g.edges().to_vec(), rot)?;
        match value.get("outer_face") {
            Some(Value::Array(pair)) if pair.len() == 2 => {
                let a = pair[0].as_str().and_then(|s| cg.vertex_index(s)).ok_or_else(|| bad("bad outer_face"))?;
                let b = pair[1].as_str().and_then(|s| cg.vertex_index(s)).ok_or_else(|| bad("bad outer_face"))?;
                let d = rs.dart_between(a, b).ok_or_else(|| bad("outer_face dart is not an edge"))?;
                rs.outer = Some(d);
            }
            Some(Value::Null) | None => {}
            _ => return Err(bad("outer_face must be a pair of vertex ids")),
        }
        Ok(rs)
    }
}

/// Faces as dart cycles with the vertex incidence map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceSet {
    pub faces: Vec<Vec<usize>>,
    pub dart_face: Vec<usize>,
    pub incidence: Vec<Vec<usize>>,
}

impl FaceSet {
    /// Vertices along face `f`, in traversal order (repeats possible).
    pub fn vertices(&self, rs: &RotationSystem, f: usize) -> Vec<usize> {
        self.faces[f].iter().map(|&d| rs.tail(d)).collect()
    }
}

pub fn faces(rs: &RotationSystem) -> FaceSet {
    let nd = rs.dart_count();
    let mut dart_face = vec![usize::MAX; nd];
    let mut out = Vec::new();
    for start in 0..nd {
        if dart_face[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            dart_face[d] = id;
            cycle.push(d);
            d = rs.face_next(d);
            if d == start {
                break;
            }
        }
        out.push(cycle);
    }
    let mut incidence = vec![Vec::new(); rs.n()];
    for (f, cycle) in out.iter().enumerate() {
        for &d in cycle {
            let v = rs.tail(d);
            if incidence[v].last() != Some(&f) {
                incidence[v].push(f);
            }
        }
    }
    for inc in &mut incidence {
        inc.sort_unstable();
        inc.dedup();
    }
    FaceSet { faces: out, dart_face, incidence }
}

/// Dual multigraph: one vertex per face, one edge per primal edge
/// (`edges[e]` joins the faces on the two sides of primal edge `e`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub face_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DualGraph {
    /// `(neighbor face, primal edge)` lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.face_count];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            if a != b {
                adj[b].push((a, e));
            }
        }
        adj
    }
}

pub fn dual_graph(rs: &RotationSystem) -> DualGraph {
    let fs = faces(rs);
    let edges = (0..rs.edges().len()).map(|e| (fs.dart_face[2 * e], fs.dart_face[2 * e + 1])).collect();
    DualGraph { face_count: fs.faces.len(), edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let rs = planar_embed(&g).unwrap();
        assert_eq!(faces(&rs).faces.len(), 2);
        let dual = dual_graph(&rs);
        assert_eq!(dual.face_count, 2);
        assert_eq!(dual.edges.len(), 3);
        assert!(dual.edges.iter().all(|&(a, b)| a != b));
    }

    #[test]
    fn c4_faces_touch_every_vertex() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let rs = planar_embed(&g).unwrap();
        let fs = faces(&rs);
        assert_eq!(fs.faces.len(), 2);
        assert!(fs.incidence.iter().all(|inc| inc.len() == 2));
        assert_eq!(dual_graph(&rs).edges.len(), 4);
    }

    #[test]
    fn k4_dual_is_k4() {
        let rs = planar_embed(&k4()).unwrap();
        let dual = dual_graph(&rs);
        assert_eq!(dual.face_count, 4);
        let mut pairs: Vec<(usize, usize)> = dual.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort();
        pairs.dedup();
        assert_eq!(pairs.len(), 6);
    }

    #[test]
    fn mirror_keeps_faces_count_and_swaps_sides() {
        let rs = planar_embed(&k4()).unwrap().with_outer(0);
        let m = rs.mirror();
        assert!(m.is_planar_embedding());
        assert_eq!(faces(&m).faces.len(), 4);
        assert_eq!(m.mirror(), rs);
    }

    #[test]
    fn malformed_rotation_is_rejected() {
        let err = RotationSystem::new(2, vec![(0, 1)], vec![vec![0], vec![]]).unwrap_err();
        assert!(matches!(err, EmbeddingError::Malformed(_)));
    }
}

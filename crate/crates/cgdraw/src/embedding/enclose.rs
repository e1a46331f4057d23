//! Enclosure queries: is some vertex outside a cluster trapped inside a
//! cycle made of cluster vertices?
//!
//! Faces of the sub-embedding induced by the cluster are obtained by merging
//! faces of the full embedding across every edge that is not inside the
//! cluster. A vertex outside the cluster is enclosed exactly when its merged
//! class differs from the class of the outer face.

use serde::Serialize;

use super::{faces, EmbeddingError, FaceSet, RotationSystem};
use crate::graph::UnionFind;
use crate::model::ClusteredGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnclosureWitness {
    /// Cycle of cluster vertices, in order.
    pub cycle: Vec<usize>,
    /// A vertex outside the cluster lying inside the cycle.
    pub vertex: usize,
}

/// Class id of every face after merging across edges with `!keep_edge(e)`.
pub fn region_classes(rs: &RotationSystem, fs: &FaceSet, keep_edge: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut uf = UnionFind::new(fs.faces.len());
    for e in 0..rs.edges().len() {
        if !keep_edge(e) {
            uf.union(fs.dart_face[2 * e], fs.dart_face[2 * e + 1]);
        }
    }
    (0..fs.faces.len()).map(|f| uf.find(f)).collect()
}

/// Condition check for one cluster given by name.
pub fn enclosed_violation(
    rs: &RotationSystem,
    outer_face: usize,
    cg: &ClusteredGraph,
    cluster: &str,
) -> Result<Option<EnclosureWitness>, EmbeddingError> {
    let c = cg.cluster_index(cluster).ok_or_else(|| EmbeddingError::UnknownCluster(cluster.to_string()))?;
    if rs.n() != cg.vertex_count() || rs.edges() != cg.graph().edges() {
        return Err(EmbeddingError::Malformed("embedding does not match the graph".into()));
    }
    Ok(enclosed_violation_mask(rs, &faces(rs), outer_face, cg.mask(c)))
}

/// Same check for an arbitrary vertex mask.
pub fn enclosed_violation_mask(
    rs: &RotationSystem,
    fs: &FaceSet,
    outer_face: usize,
    mask: &[bool],
) -> Option<EnclosureWitness> {
    let inside = |e: usize| {
        let (a, b) = rs.edges()[e];
        mask[a] && mask[b]
    };
    let class = region_classes(rs, fs, inside);
    let outer = class[outer_face];
    let x = (0..rs.n()).find(|&v| !mask[v] && !rs.rotation(v).is_empty() && class[fs.dart_face[rs.rotation(v)[0]]] != outer)?;
    let target = class[fs.dart_face[rs.rotation(x)[0]]];
    Some(EnclosureWitness { cycle: separating_cycle(rs, fs, mask, &class, target, x, outer_face), vertex: x })
}

/// Walks boundaries of the merged region containing `x` and returns a simple
/// cycle of cluster vertices separating `x` from the outer face.
fn separating_cycle(
    rs: &RotationSystem,
    fs: &FaceSet,
    mask: &[bool],
    class: &[usize],
    target: usize,
    x: usize,
    outer_face: usize,
) -> Vec<usize> {
    let sub_succ = |d: usize| {
        let r = rs.rotation(rs.tail(d));
        let p = r.iter().position(|&y| y == d).unwrap();
        (1..=r.len()).map(|k| r[(p + k) % r.len()]).find(|&y| mask[rs.head(y)]).unwrap()
    };
    let mut fallback = Vec::new();
    for d in 0..rs.dart_count() {
        if !(mask[rs.tail(d)] && mask[rs.head(d)]) || class[fs.dart_face[d]] != target {
            continue;
        }
        let mut walk = Vec::new();
        let mut cur = d;
        loop {
            walk.push(rs.tail(cur));
            cur = sub_succ(cur ^ 1);
            if cur == d {
                break;
            }
        }
        for cycle in simple_cycles(&walk) {
            let edges: Vec<usize> = (0..cycle.len())
                .map(|i| {
                    let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                    rs.dart_between(a, b).unwrap() / 2
                })
                .collect();
            let sep = region_classes(rs, fs, |e| edges.contains(&e));
            if sep[fs.dart_face[rs.rotation(x)[0]]] != sep[outer_face] {
                return cycle;
            }
        }
        if fallback.is_empty() {
            fallback = walk;
        }
    }
    fallback
}

/// Splits a closed walk at repeated vertices into simple cycles of length >= 3.
fn simple_cycles(walk: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for &v in walk.iter().chain(std::iter::once(&walk[0])) {
        if let Some(p) = stack.iter().position(|&y| y == v) {
            let cyc: Vec<usize> = stack.drain(p..).collect();
            if cyc.len() >= 3 {
                out.push(cyc);
            }
        }
        stack.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::enumerate_embeddings;
    use crate::graph::Graph;

    fn k4_cg() -> ClusteredGraph {
        ClusteredGraph::parse(
            "cg 1\nv a\nv b\nv c\nv d\ne a b\ne a c\ne a d\ne b c\ne b d\ne c d\nc mu root\nm a mu\nm b mu\nm c mu\nm d root\n",
        )
        .unwrap()
    }

    fn face_with(rs: &RotationSystem, fs: &FaceSet, vs: &[usize]) -> usize {
        (0..fs.faces.len())
            .find(|&f| {
                let mut fv = fs.vertices(rs, f);
                fv.sort();
                fv == vs
            })
            .unwrap()
    }

    #[test]
    fn k4_outer_face_decides() {
        let cg = k4_cg();
        let rs = enumerate_embeddings(cg.graph(), 8).unwrap().next().unwrap();
        let fs = faces(&rs);
        let abc = face_with(&rs, &fs, &[0, 1, 2]);
        let abd = face_with(&rs, &fs, &[0, 1, 3]);
        let w = enclosed_violation(&rs, abc, &cg, "mu").unwrap().unwrap();
        assert_eq!(w.vertex, 3);
        let mut cyc = w.cycle.clone();
        cyc.sort();
        assert_eq!(cyc, vec![0, 1, 2]);
        assert_eq!(enclosed_violation(&rs, abd, &cg, "mu").unwrap(), None);
    }

    #[test]
    fn forests_never_enclose() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let mask = [true, true, false, false];
        for rs in enumerate_embeddings(&g, 8).unwrap() {
            let fs = faces(&rs);
            let outer = fs.dart_face[rs.outer_dart().unwrap()];
            assert!(enclosed_violation_mask(&rs, &fs, outer, &mask).is_none());
        }
    }
}

//! Embedded pertinent graphs and their classification with respect to a
//! cluster.
//!
//! An embedding of `pert(τ)` is kept together with the parent edge `e`
//! joining the poles `(u, v)`. At a pole the stored rotation is linear: the
//! darts after `e` in cyclic order. The left face `f′` is the face of `e`'s
//! dart `u→v`, the right face `f″` the face of `v→u`.

use std::collections::BTreeMap;

use crate::embedding::{faces, region_classes, RotationSystem};
use crate::graph::{Graph, UnionFind};

use super::skeleton::SkeletonEmbedding;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PertEmbedding {
    pub poles: (usize, usize),
    /// Graph darts around each vertex of the pertinent graph.
    pub rotation: BTreeMap<usize, Vec<usize>>,
    /// Graph edge ids, sorted.
    pub edges: Vec<usize>,
}

impl PertEmbedding {
    /// A single edge between the poles.
    pub fn edge(g: &Graph, e: usize, poles: (usize, usize)) -> PertEmbedding {
        let d = if g.edge(e).0 == poles.0 { 2 * e } else { 2 * e + 1 };
        let rotation = BTreeMap::from([(poles.0, vec![d]), (poles.1, vec![d ^ 1])]);
        PertEmbedding { poles, rotation, edges: vec![e] }
    }

    /// Flip around the poles.
    pub fn mirror(&self) -> PertEmbedding {
        let rotation = self.rotation.iter().map(|(&x, r)| (x, r.iter().rev().copied().collect())).collect();
        PertEmbedding { poles: self.poles, rotation, edges: self.edges.clone() }
    }

    /// Substitutes one embedded part per non-parent skeleton edge.
    pub fn compose(sk: &SkeletonEmbedding, parent: usize, poles: (usize, usize), parts: &[Option<PertEmbedding>]) -> PertEmbedding {
        let mut rotation = BTreeMap::new();
        let mut edges = Vec::new();
        for part in parts.iter().flatten() {
            edges.extend_from_slice(&part.edges);
            for (&x, r) in &part.rotation {
                if x != part.poles.0 && x != part.poles.1 {
                    rotation.insert(x, r.clone());
                }
            }
        }
        for (li, &x) in sk.vertices.iter().enumerate() {
            let rot = sk.rs.rotation(li);
            let is_pole = x == poles.0 || x == poles.1;
            let start = if is_pole { rot.iter().position(|&d| d / 2 == parent).expect("parent edge at pole") + 1 } else { 0 };
            let mut out = Vec::new();
            for t in 0..rot.len() {
                let d = rot[(start + t) % rot.len()];
                if d / 2 == parent {
                    continue;
                }
                let part = parts[d / 2].as_ref().expect("part for every child edge");
                out.extend_from_slice(&part.rotation[&x]);
            }
            rotation.insert(x, out);
        }
        edges.sort_unstable();
        PertEmbedding { poles, rotation, edges }
    }

    /// Closes the embedding with graph edge `reference` joining the poles.
    pub fn close(&self, g: &Graph, reference: usize) -> RotationSystem {
        let mut rot = vec![Vec::new(); g.n()];
        let d = if g.edge(reference).0 == self.poles.0 { 2 * reference } else { 2 * reference + 1 };
        for (&x, r) in &self.rotation {
            if x == self.poles.0 {
                rot[x].push(d);
            } else if x == self.poles.1 {
                rot[x].push(d ^ 1);
            }
            rot[x].extend_from_slice(r);
        }
        RotationSystem::new(g.n(), g.edges().to_vec(), rot).expect("composed rotation covers every dart")
    }

    pub(crate) fn local(&self, g: &Graph) -> LocalView {
        let vertices: Vec<usize> = self.rotation.keys().copied().collect();
        let at = |x: usize| vertices.binary_search(&x).unwrap();
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&e| (at(g.edge(e).0), at(g.edge(e).1))).collect();
        let k = edges.len();
        edges.push((at(self.poles.0), at(self.poles.1)));
        let dart = |d: usize| 2 * self.edges.binary_search(&(d / 2)).unwrap() + (d & 1);
        let rot = vertices
            .iter()
            .map(|&x| {
                let mut r = Vec::new();
                if x == self.poles.0 {
                    r.push(2 * k);
                } else if x == self.poles.1 {
                    r.push(2 * k + 1);
                }
                r.extend(self.rotation[&x].iter().map(|&d| dart(d)));
                r
            })
            .collect();
        let rs = RotationSystem::new(vertices.len(), edges, rot).expect("local rotation");
        LocalView { vertices, rs, pseudo: k }
    }
}

pub(crate) struct LocalView {
    pub vertices: Vec<usize>,
    pub rs: RotationSystem,
    pub pseudo: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingType {
    Traversable,
    Sided,
    Bisided,
    Kernelized,
    Unfeasible,
    Untouched,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpineKind {
    SideSpined,
    CentralSpined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingClass {
    pub kind: EmbeddingType,
    pub spine_kind: Option<SpineKind>,
    /// H(τ,μ) reaches f′ / f″.
    pub left: bool,
    pub right: bool,
    /// Every vertex on the boundary of f′ / f″ is in μ.
    pub left_clean: bool,
    pub right_clean: bool,
}

/// Classifies an embedded pertinent graph against the vertex set `mask`.
pub fn classify_embedding(g: &Graph, pert: &PertEmbedding, mask: &[bool]) -> EmbeddingClass {
    let view = pert.local(g);
    let rs = &view.rs;
    let fs = faces(rs);
    let k = view.pseudo;
    let in_mu = |i: usize| mask[view.vertices[i]];
    let (fl, fr) = (fs.dart_face[2 * k], fs.dart_face[2 * k + 1]);
    let face_clean = |f: usize| fs.faces[f].iter().all(|&d| in_mu(rs.tail(d)));
    let (u, v) = rs.edges()[k];
    let spined = in_mu(u) && in_mu(v) && {
        let lg = Graph::from_edges(rs.n(), &rs.edges()[..k]);
        let keep: Vec<bool> = (0..rs.n()).map(in_mu).collect();
        lg.path_masked(u, v, &keep).is_some()
    };
    let mut out = EmbeddingClass {
        kind: EmbeddingType::Untouched,
        spine_kind: None,
        left: false,
        right: false,
        left_clean: face_clean(fl),
        right_clean: face_clean(fr),
    };
    if spined {
        out.spine_kind =
            Some(if out.left_clean || out.right_clean { SpineKind::SideSpined } else { SpineKind::CentralSpined });
    }
    let members: Vec<usize> = (0..rs.n()).filter(|&i| in_mu(i)).collect();
    if members.is_empty() {
        return out;
    }
    let class = region_classes(rs, &fs, |e| e != k && in_mu(rs.edges()[e].0) && in_mu(rs.edges()[e].1));
    let outer = class[fl];
    let enclosed = (0..rs.n()).any(|i| !in_mu(i) && class[fs.dart_face[rs.rotation(i)[0]]] != outer);
    let mut uf = UnionFind::new(rs.n());
    for face in &fs.faces {
        let on: Vec<usize> = face.iter().map(|&d| rs.tail(d)).filter(|&i| in_mu(i)).collect();
        for w in on.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut comps: BTreeMap<usize, (bool, bool)> = BTreeMap::new();
    for &i in &members {
        let root = uf.find(i);
        let entry = comps.entry(root).or_default();
        entry.0 |= fs.incidence[i].contains(&fl);
        entry.1 |= fs.incidence[i].contains(&fr);
    }
    out.left = comps.values().any(|c| c.0);
    out.right = comps.values().any(|c| c.1);
    let sides: Vec<(bool, bool)> = comps.into_values().collect();
    out.kind = if enclosed {
        EmbeddingType::Unfeasible
    } else {
        match sides.as_slice() {
            [(true, true)] => EmbeddingType::Traversable,
            [(true, false)] | [(false, true)] => EmbeddingType::Sided,
            [(false, false)] => EmbeddingType::Kernelized,
            [(true, false), (false, true)] | [(false, true), (true, false)] => EmbeddingType::Bisided,
            _ => EmbeddingType::Unfeasible,
        }
    };
    out
}

//! Region-region-only drawings.
//!
//! With a fixed embedding the question is local: every cluster μ must have a
//! connected face-adjacency graph H(μ), and no cycle of μ-vertices may trap a
//! vertex outside μ. [`check_fixed_embedding`] evaluates exactly that, and
//! [`oracle_test_rr`] runs it over every embedding of a small graph.
//!
//! [`test_rr_biconnected`] decides the variable-embedding question for
//! biconnected graphs without enumerating embeddings; see [`search`].

mod flags;
mod gamma;
mod pert;
mod search;
mod skeleton;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::embedding::{self, faces, EmbeddingError, FaceSet, RotationSystem};
use crate::graph::{Graph, UnionFind};
use crate::model::ClusteredGraph;

pub use flags::{classify_flags, ClusterEdgeFlags, FlagTable};
pub use gamma::{construct_00c, GammaPlan, Route};
pub use pert::{classify_embedding, EmbeddingClass, EmbeddingType, PertEmbedding, SpineKind};
pub use search::test_rr_biconnected;
pub use skeleton::{check_skeleton_extensible, ExtensibilityFailure, Property, SkeletonEmbedding};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is not planar")]
    NonPlanar,
    #[error("{n} vertices exceed the oracle cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("embedding does not admit a region-region drawing: {0}")]
    InfeasibleEmbedding(String),
    #[error("embedding does not match the graph: {0}")]
    Mismatch(String),
    #[error("unknown cluster `{0}`")]
    UnknownCluster(String),
}

impl From<EmbeddingError> for RrError {
    fn from(e: EmbeddingError) -> Self {
        match e {
            EmbeddingError::NonPlanar => RrError::NonPlanar,
            EmbeddingError::CapExceeded { n, cap } => RrError::CapExceeded { n, cap },
            EmbeddingError::UnknownCluster(c) => RrError::UnknownCluster(c),
            other => RrError::Mismatch(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// H(μ) is disconnected.
    Disconnected,
    /// A cycle of μ-vertices encloses a vertex outside μ.
    Enclosure,
    /// No embedding of some SPQR node extends, for any reference edge.
    NotExtensible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RrViolation {
    pub cluster: String,
    pub condition: Condition,
    pub location: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub verdict: Verdict,
    /// Witness embedding; its outer face is the one of `outer_dart()`.
    pub witness_embedding: Option<RotationSystem>,
    pub violation: Option<RrViolation>,
}

impl FeasibilityResult {
    pub fn feasible(rs: RotationSystem) -> FeasibilityResult {
        FeasibilityResult { verdict: Verdict::Feasible, witness_embedding: Some(rs), violation: None }
    }

    pub fn infeasible(violation: RrViolation) -> FeasibilityResult {
        FeasibilityResult { verdict: Verdict::Infeasible, witness_embedding: None, violation: Some(violation) }
    }

    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }

    pub fn to_json(&self, cg: &ClusteredGraph) -> Value {
        json!({
            "verdict": self.verdict,
            "witness_embedding": self.witness_embedding.as_ref().map(|rs| rs.to_json(cg.vertex_names())),
            "violation": self.violation,
        })
    }
}

/// H(μ) on the vertices of μ, with the vertex list mapping local ids back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGraph {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

fn check_matches(cg: &ClusteredGraph, rs: &RotationSystem) -> Result<(), RrError> {
    if rs.n() != cg.vertex_count() || rs.edges() != cg.graph().edges() {
        return Err(RrError::Mismatch("vertex or edge lists differ".into()));
    }
    Ok(())
}

/// Two vertices of μ are adjacent when some face has both on its boundary.
pub fn h_mu(rs: &RotationSystem, cg: &ClusteredGraph, cluster: &str) -> Result<HGraph, RrError> {
    check_matches(cg, rs)?;
    let c = cg.cluster_index(cluster).ok_or_else(|| RrError::UnknownCluster(cluster.to_string()))?;
    let fs = faces(rs);
    let vertices = cg.members(c).to_vec();
    let mut local = vec![usize::MAX; cg.vertex_count()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let mut graph = Graph::new(vertices.len());
    let mut seen = std::collections::BTreeSet::new();
    for f in 0..fs.faces.len() {
        let mut on: Vec<usize> = fs.vertices(rs, f).into_iter().filter(|&v| local[v] != usize::MAX).collect();
        on.sort_unstable();
        on.dedup();
        for (i, &a) in on.iter().enumerate() {
            for &b in &on[i + 1..] {
                if seen.insert((a, b)) {
                    graph.add_edge(local[a], local[b]);
                }
            }
        }
    }
    Ok(HGraph { vertices, graph })
}

/// First pair of μ-vertices in different components of H(μ), if any.
fn h_split(rs: &RotationSystem, fs: &FaceSet, mask: &[bool]) -> Option<(usize, usize)> {
    let mut uf = UnionFind::new(rs.n());
    for f in 0..fs.faces.len() {
        let mut first = None;
        for &d in &fs.faces[f] {
            let v = rs.tail(d);
            if mask[v] {
                match first {
                    None => first = Some(v),
                    Some(a) => {
                        uf.union(a, v);
                    }
                }
            }
        }
    }
    let members: Vec<usize> = (0..rs.n()).filter(|&v| mask[v]).collect();
    let a = *members.first()?;
    let ra = uf.find(a);
    members.into_iter().find(|&b| uf.find(b) != ra).map(|b| (a, b))
}

/// Feasibility of one embedding, with the outer face given by one of its darts.
pub fn check_fixed_embedding(cg: &ClusteredGraph, rs: &RotationSystem, outer_dart: usize) -> Result<FeasibilityResult, RrError> {
    check_matches(cg, rs)?;
    if outer_dart >= rs.dart_count() {
        return Err(RrError::Mismatch(format!("dart {outer_dart} out of range")));
    }
    let fs = faces(rs);
    Ok(check_with_faces(cg, rs, &fs, outer_dart).map_or_else(
        || FeasibilityResult::feasible(rs.clone().with_outer(outer_dart)),
        FeasibilityResult::infeasible,
    ))
}

/// The first violated condition, clusters in canonical order.
fn check_with_faces(cg: &ClusteredGraph, rs: &RotationSystem, fs: &FaceSet, outer_dart: usize) -> Option<RrViolation> {
    let names = cg.vertex_names();
    for c in 1..cg.cluster_count() {
        let mask = cg.mask(c);
        if let Some((a, b)) = h_split(rs, fs, mask) {
            return Some(RrViolation {
                cluster: cg.cluster_name(c).to_string(),
                condition: Condition::Disconnected,
                location: format!("{} and {} share no chain of faces", names[a], names[b]),
            });
        }
        if let Some(w) = embedding::enclosed_violation_mask(rs, fs, fs.dart_face[outer_dart], mask) {
            let cycle: Vec<&str> = w.cycle.iter().map(|&v| names[v].as_str()).collect();
            return Some(RrViolation {
                cluster: cg.cluster_name(c).to_string(),
                condition: Condition::Enclosure,
                location: format!("cycle {} encloses {}", cycle.join("-"), names[w.vertex]),
            });
        }
    }
    None
}

/// Exhaustive test: every rotation system, every outer face. Rotation systems
/// are checked in parallel batches; the first feasible one in enumeration
/// order wins, so the result is deterministic.
pub fn oracle_test_rr(cg: &ClusteredGraph, cap: usize) -> Result<FeasibilityResult, RrError> {
    let n = cg.vertex_count();
    if n > cap {
        return Err(RrError::CapExceeded { n, cap });
    }
    let g = cg.graph();
    if g.m() == 0 {
        let rs = RotationSystem::new(n, Vec::new(), vec![Vec::new(); n])?;
        // a single face holds every vertex
        return Ok(FeasibilityResult::feasible(rs));
    }
    let mut first_violation = None;
    let mut iter = embedding::enumerate_rotation_systems(g, cap)?;
    loop {
        let batch: Vec<RotationSystem> = iter.by_ref().take(256).collect();
        if batch.is_empty() {
            break;
        }
        let found = batch.par_iter().find_map_first(|rs| {
            let fs = faces(rs);
            fs.faces
                .iter()
                .find(|f| check_with_faces(cg, rs, &fs, f[0]).is_none())
                .map(|f| rs.clone().with_outer(f[0]))
        });
        if let Some(rs) = found {
            return Ok(FeasibilityResult::feasible(rs));
        }
        if first_violation.is_none() {
            let fs = faces(&batch[0]);
            first_violation = check_with_faces(cg, &batch[0], &fs, fs.faces[0][0]);
        }
    }
    Ok(FeasibilityResult::infeasible(first_violation.unwrap_or_else(|| RrViolation {
        cluster: cg.cluster_name(0).to_string(),
        condition: Condition::NotExtensible,
        location: "no embedding".into(),
    })))
}

//! Drawings with region-region crossings only, built on a feasible embedding.
//!
//! Every cluster μ gets a hub inside each face that has μ-vertices on its
//! boundary, joined to those vertices; a spanning tree of this star graph is
//! what the region boundary closely surrounds. Two unrelated clusters whose
//! trees share a face cross once for each extra alternation of their
//! attachment points around that face.

use std::collections::{BTreeMap, VecDeque};

use serde_json::{json, Value};

use crate::embedding::{faces, FaceSet, RotationSystem};
use crate::model::ClusteredGraph;

use super::{check_fixed_embedding, RrError};

/// Spanning structure of one cluster: hubs are faces, spokes join a vertex
/// to the hub of a face it lies on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Route {
    pub cluster: usize,
    pub hubs: Vec<usize>,
    pub spokes: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaPlan {
    pub embedding: RotationSystem,
    pub routes: Vec<Route>,
    /// Crossings per unordered pair of non-root clusters, keyed `(a, b)` with `a < b`.
    pub ledger: BTreeMap<(usize, usize), usize>,
    pub gamma: usize,
}

impl GammaPlan {
    /// Symmetric ledger lookup.
    pub fn crossings(&self, a: usize, b: usize) -> usize {
        let key = (a.min(b), a.max(b));
        self.ledger.get(&key).copied().unwrap_or(0)
    }

    pub fn to_json(&self, cg: &ClusteredGraph) -> Value {
        let names = cg.vertex_names();
        let routes: Vec<Value> = self
            .routes
            .iter()
            .map(|r| {
                json!({
                    "cluster": cg.cluster_name(r.cluster),
                    "hubs": r.hubs,
                    "spokes": r.spokes.iter().map(|&(v, f)| json!([names[v], f])).collect::<Vec<_>>(),
                })
            })
            .collect();
        let ledger: Vec<Value> = self
            .ledger
            .iter()
            .map(|(&(a, b), &k)| json!({"a": cg.cluster_name(a), "b": cg.cluster_name(b), "crossings": k}))
            .collect();
        let fs = faces(&self.embedding);
        let face_list: Vec<Vec<&String>> =
            (0..fs.faces.len()).map(|f| fs.vertices(&self.embedding, f).into_iter().map(|v| &names[v]).collect()).collect();
        let clusters: Vec<Value> = (1..cg.cluster_count())
            .map(|c| json!({"id": cg.cluster_name(c), "parent": cg.cluster_name(cg.parent(c))}))
            .collect();
        json!({
            "mode": "rr",
            "embedding": self.embedding.to_json(names),
            "faces": face_list,
            "clusters": clusters,
            "routes": routes,
            "ledger": ledger,
            "alpha": 0,
            "beta": 0,
            "gamma": self.gamma,
        })
    }
}

/// Builds the hub-and-spoke routes and the rr-crossing ledger.
pub fn construct_00c(cg: &ClusteredGraph, rs: &RotationSystem, outer_dart: usize) -> Result<GammaPlan, RrError> {
    let check = check_fixed_embedding(cg, rs, outer_dart)?;
    if let Some(v) = check.violation {
        return Err(RrError::InfeasibleEmbedding(format!("cluster {}: {}", v.cluster, v.location)));
    }
    let fs = faces(rs);
    let routes: Vec<Route> = (1..cg.cluster_count()).map(|c| route(cg, rs, &fs, c)).collect();
    let mut ledger = BTreeMap::new();
    for a in 1..cg.cluster_count() {
        for b in a + 1..cg.cluster_count() {
            let k = if cg.unrelated(a, b) { pair_crossings(rs, &fs, &routes[a - 1], &routes[b - 1]) } else { 0 };
            ledger.insert((a, b), k);
        }
    }
    let gamma = ledger.values().sum();
    Ok(GammaPlan { embedding: rs.clone().with_outer(outer_dart), routes, ledger, gamma })
}

/// BFS spanning tree of the vertex/hub incidence graph of one cluster.
fn route(cg: &ClusteredGraph, rs: &RotationSystem, fs: &FaceSet, c: usize) -> Route {
    let members = cg.members(c);
    let mut hubs = Vec::new();
    let mut spokes = Vec::new();
    let Some(&start) = members.first() else {
        return Route { cluster: c, hubs, spokes };
    };
    let mut seen_v = vec![false; rs.n()];
    let mut seen_f = vec![false; fs.faces.len()];
    seen_v[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &f in &fs.incidence[v] {
            if seen_f[f] {
                continue;
            }
            seen_f[f] = true;
            hubs.push(f);
            spokes.push((v, f));
            for w in fs.vertices(rs, f) {
                if cg.contains(c, w) && !seen_v[w] {
                    seen_v[w] = true;
                    spokes.push((w, f));
                    queue.push_back(w);
                }
            }
        }
    }
    hubs.sort_unstable();
    spokes.sort_unstable();
    Route { cluster: c, hubs, spokes }
}

/// Σ over shared hub faces of max(0, blocks/2 − 1), where blocks counts the
/// maximal runs of one cluster in the circular order of attachment points.
fn pair_crossings(rs: &RotationSystem, fs: &FaceSet, a: &Route, b: &Route) -> usize {
    let mut total = 0;
    for &f in a.hubs.iter().filter(|f| b.hubs.binary_search(f).is_ok()) {
        let attached = |r: &Route, v: usize| r.spokes.binary_search(&(v, f)).is_ok();
        let mut seq = Vec::new();
        let mut seen = Vec::new();
        for v in fs.vertices(rs, f) {
            if seen.contains(&v) {
                continue;
            }
            seen.push(v);
            if attached(a, v) {
                seq.push(0u8);
            } else if attached(b, v) {
                seq.push(1u8);
            }
        }
        total += (alternation_blocks(&seq) / 2).saturating_sub(1);
    }
    total
}

/// Maximal runs of equal labels in a circular sequence.
fn alternation_blocks(seq: &[u8]) -> usize {
    if seq.is_empty() {
        return 0;
    }
    let changes = (0..seq.len()).filter(|&i| seq[i] != seq[(i + 1) % seq.len()]).count();
    changes.max(1)
}

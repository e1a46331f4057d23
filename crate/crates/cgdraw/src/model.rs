//! Clustered graphs: the data model, validation and the `.cg` text format.
//!
//! A clustered graph is a simple graph together with a rooted inclusion tree.
//! The root cluster is implicit, always called `root`, and never drawn. Each
//! vertex belongs directly to exactly one cluster (its leaf cluster); the
//! vertex set of a cluster is the union over its subtree.
//!
//! ```
//! use cgdraw::model::ClusteredGraph;
//!
//! let cg = ClusteredGraph::parse("cg 1\nv a\nv b\ne a b\nc k root\nm a k\nm b k\n").unwrap();
//! assert_eq!(cg.vertex_count(), 2);
//! assert_eq!(cg.edge_count(), 1);
//! assert_eq!(cg.cluster_names(), ["root", "k"]);
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::Graph;

pub const ROOT: &str = "root";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown identifier `{id}`")]
    UnknownIdentifier { line: usize, id: String },
    #[error("line {line}: duplicate membership for vertex `{vertex}`")]
    DuplicateMembership { line: usize, vertex: String },
    #[error("vertex without cluster membership: `{0}`")]
    MissingMembership(String),
    #[error("cluster hierarchy is not a tree rooted at `root`: {0}")]
    NotATree(String),
    #[error("duplicate declaration of `{0}`")]
    Duplicate(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("`root` is reserved")]
    Reserved,
    #[error("unknown cluster `{0}`")]
    UnknownCluster(String),
}

/// Immutable clustered graph. Vertex and cluster indices follow the
/// canonical (lexicographic) order of their ids; cluster 0 is `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusteredGraph {
    vertex_names: Vec<String>,
    cluster_names: Vec<String>,
    parent: Vec<usize>,
    membership: Vec<usize>,
    graph: Graph,
    children: Vec<Vec<usize>>,
    members: Vec<Vec<usize>>,
    masks: Vec<Vec<bool>>,
    depth: Vec<usize>,
}

/// Incremental construction by id; validated and canonicalized by [`Builder::build`].
#[derive(Clone, Debug, Default)]
pub struct Builder {
    vertices: BTreeSet<String>,
    membership: BTreeMap<String, String>,
    clusters: BTreeMap<String, String>,
    edges: BTreeSet<(String, String)>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder::default()
    }

    pub fn vertex(&mut self, id: impl Into<String>) -> &mut Self {
        self.vertices.insert(id.into());
        self
    }

    /// Declares a vertex directly inside `cluster`.
    pub fn vertex_in(&mut self, id: impl Into<String>, cluster: impl Into<String>) -> &mut Self {
        let id = id.into();
        self.vertices.insert(id.clone());
        self.membership.insert(id, cluster.into());
        self
    }

    pub fn cluster(&mut self, id: impl Into<String>, parent: impl Into<String>) -> &mut Self {
        self.clusters.insert(id.into(), parent.into());
        self
    }

    pub fn edge(&mut self, a: impl Into<String>, b: impl Into<String>) -> &mut Self {
        let (a, b) = (a.into(), b.into());
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.insert(key);
        self
    }

    pub fn build(&self) -> Result<ClusteredGraph, ModelError> {
        let vertices: Vec<(String, String)> = self
            .vertices
            .iter()
            .map(|v| (v.clone(), self.membership.get(v).cloned().unwrap_or_else(|| ROOT.to_string())))
            .collect();
        let clusters: Vec<(String, String)> =
            self.clusters.iter().map(|(c, p)| (c.clone(), p.clone())).collect();
        let edges: Vec<(String, String)> = self.edges.iter().cloned().collect();
        ClusteredGraph::from_parts(&vertices, &clusters, &edges)
    }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

impl ClusteredGraph {
    /// Builds from `(vertex, leaf cluster)`, `(cluster, parent)` and edge lists.
    pub fn from_parts(
        vertices: &[(String, String)],
        clusters: &[(String, String)],
        edges: &[(String, String)],
    ) -> Result<ClusteredGraph, ModelError> {
        let mut vertex_names: Vec<String> = vertices.iter().map(|(v, _)| v.clone()).collect();
        vertex_names.sort();
        for w in vertex_names.windows(2) {
            if w[0] == w[1] {
                return Err(ModelError::Duplicate(w[0].clone()));
            }
        }
        if vertex_names.iter().any(|v| v == ROOT) {
            return Err(ModelError::Reserved);
        }
        let mut cluster_names: Vec<String> = clusters.iter().map(|(c, _)| c.clone()).collect();
        cluster_names.sort();
        for w in cluster_names.windows(2) {
            if w[0] == w[1] {
                return Err(ModelError::Duplicate(w[0].clone()));
            }
        }
        if cluster_names.iter().any(|c| c == ROOT) {
            return Err(ModelError::Reserved);
        }
        cluster_names.insert(0, ROOT.to_string());
        let cidx: HashMap<&str, usize> =
            cluster_names.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
        let vidx: HashMap<&str, usize> =
            vertex_names.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();

        let mut parent = vec![0usize; cluster_names.len()];
        for (c, p) in clusters {
            let pi = *cidx.get(p.as_str()).ok_or_else(|| ModelError::UnknownCluster(p.clone()))?;
            parent[cidx[c.as_str()]] = pi;
        }
        // every cluster must reach the root without revisiting
        for start in 1..cluster_names.len() {
            let mut seen = BTreeSet::new();
            let mut c = start;
            while c != 0 {
                if !seen.insert(c) {
                    return Err(ModelError::NotATree(format!(
                        "cycle through cluster `{}`",
                        cluster_names[start]
                    )));
                }
                c = parent[c];
            }
        }

        let mut membership = vec![0usize; vertex_names.len()];
        for (v, c) in vertices {
            membership[vidx[v.as_str()]] =
                *cidx.get(c.as_str()).ok_or_else(|| ModelError::UnknownCluster(c.clone()))?;
        }

        let mut graph = Graph::new(vertex_names.len());
        let mut pairs = BTreeSet::new();
        for (a, b) in edges {
            let ia = *vidx.get(a.as_str()).ok_or_else(|| ModelError::UnknownIdentifier {
                line: 0,
                id: a.clone(),
            })?;
            let ib = *vidx.get(b.as_str()).ok_or_else(|| ModelError::UnknownIdentifier {
                line: 0,
                id: b.clone(),
            })?;
            if ia == ib {
                return Err(ModelError::SelfLoop(a.clone()));
            }
            pairs.insert((ia.min(ib), ia.max(ib)));
        }
        for (a, b) in pairs {
            graph.add_edge(a, b);
        }
        Ok(ClusteredGraph::assemble(vertex_names, cluster_names, parent, membership, graph))
    }

    fn assemble(
        vertex_names: Vec<String>,
        cluster_names: Vec<String>,
        parent: Vec<usize>,
        membership: Vec<usize>,
        graph: Graph,
    ) -> ClusteredGraph {
        let k = cluster_names.len();
        let n = vertex_names.len();
        let mut children = vec![Vec::new(); k];
        for c in 1..k {
            children[parent[c]].push(c);
        }
        let mut depth = vec![0usize; k];
        for c in 1..k {
            let mut d = 0;
            let mut x = c;
            while x != 0 {
                x = parent[x];
                d += 1;
            }
            depth[c] = d;
        }
        let mut masks = vec![vec![false; n]; k];
        for v in 0..n {
            let mut c = membership[v];
            loop {
                masks[c][v] = true;
                if c == 0 {
                    break;
                }
                c = parent[c];
            }
        }
        let members = masks
            .iter()
            .map(|m| (0..n).filter(|&v| m[v]).collect())
            .collect();
        ClusteredGraph { vertex_names, cluster_names, parent, membership, graph, children, members, masks, depth }
    }

    /// Parses the `.cg` text format.
    pub fn parse(text: &str) -> Result<ClusteredGraph, ModelError> {
        let mut header_seen = false;
        let mut vertices: Vec<(String, usize)> = Vec::new();
        let mut edges: Vec<(String, String, usize)> = Vec::new();
        let mut clusters: Vec<(String, String, usize)> = Vec::new();
        let mut members: BTreeMap<String, (String, usize)> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.is_empty() {
                continue;
            }
            let syntax = |message: &str| ModelError::Syntax { line, message: message.to_string() };
            if !header_seen {
                if tokens != ["cg", "1"] {
                    return Err(syntax("expected header `cg 1`"));
                }
                header_seen = true;
                continue;
            }
            let arity = match tokens[0] {
                "v" => 2,
                "e" | "c" | "m" => 3,
                other => return Err(syntax(&format!("unknown record `{other}`"))),
            };
            if tokens.len() != arity {
                return Err(syntax(&format!("`{}` takes {} argument(s)", tokens[0], arity - 1)));
            }
            for t in &tokens[1..] {
                if !valid_id(t) {
                    return Err(syntax(&format!("invalid identifier `{t}`")));
                }
            }
            match tokens[0] {
                "v" => {
                    if tokens[1] == ROOT {
                        return Err(ModelError::Reserved);
                    }
                    vertices.push((tokens[1].to_string(), line));
                }
                "e" => edges.push((tokens[1].to_string(), tokens[2].to_string(), line)),
                "c" => {
                    if tokens[1] == ROOT {
                        return Err(ModelError::Reserved);
                    }
                    clusters.push((tokens[1].to_string(), tokens[2].to_string(), line));
                }
                _ => {
                    if members.contains_key(tokens[1]) {
                        return Err(ModelError::DuplicateMembership { line, vertex: tokens[1].to_string() });
                    }
                    members.insert(tokens[1].to_string(), (tokens[2].to_string(), line));
                }
            }
        }
        if !header_seen {
            return Err(ModelError::Syntax { line: 1, message: "expected header `cg 1`".into() });
        }

        let vset: BTreeSet<&str> = vertices.iter().map(|(v, _)| v.as_str()).collect();
        let mut cset: BTreeSet<&str> = clusters.iter().map(|(c, _, _)| c.as_str()).collect();
        cset.insert(ROOT);
        for (a, b, line) in &edges {
            for x in [a, b] {
                if !vset.contains(x.as_str()) {
                    return Err(ModelError::UnknownIdentifier { line: *line, id: x.clone() });
                }
            }
            if a == b {
                return Err(ModelError::SelfLoop(a.clone()));
            }
        }
        for (_, p, line) in &clusters {
            if !cset.contains(p.as_str()) {
                return Err(ModelError::UnknownIdentifier { line: *line, id: p.clone() });
            }
        }
        for (v, (c, line)) in &members {
            if !vset.contains(v.as_str()) {
                return Err(ModelError::UnknownIdentifier { line: *line, id: v.clone() });
            }
            if !cset.contains(c.as_str()) {
                return Err(ModelError::UnknownIdentifier { line: *line, id: c.clone() });
            }
        }
        let mut vertex_parts = Vec::new();
        for (v, _) in &vertices {
            let c = members.get(v).ok_or_else(|| ModelError::MissingMembership(v.clone()))?;
            vertex_parts.push((v.clone(), c.0.clone()));
        }
        let cluster_parts: Vec<(String, String)> =
            clusters.iter().map(|(c, p, _)| (c.clone(), p.clone())).collect();
        let edge_parts: Vec<(String, String)> = edges.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
        ClusteredGraph::from_parts(&vertex_parts, &cluster_parts, &edge_parts)
    }

    /// Canonical `.cg` text: ids sorted, one record per line.
    pub fn serialize(&self) -> String {
        let mut out = String::from("cg 1\n");
        for v in &self.vertex_names {
            let _ = writeln!(out, "v {v}");
        }
        for &(a, b) in self.graph.edges() {
            let _ = writeln!(out, "e {} {}", self.vertex_names[a], self.vertex_names[b]);
        }
        for c in 1..self.cluster_names.len() {
            let _ = writeln!(out, "c {} {}", self.cluster_names[c], self.cluster_names[self.parent[c]]);
        }
        for (v, name) in self.vertex_names.iter().enumerate() {
            let _ = writeln!(out, "m {} {}", name, self.cluster_names[self.membership[v]]);
        }
        out
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.m()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_names.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_names.binary_search_by(|x| x.as_str().cmp(id)).ok()
    }

    pub fn cluster_names(&self) -> &[String] {
        &self.cluster_names
    }

    pub fn cluster_name(&self, c: usize) -> &str {
        &self.cluster_names[c]
    }

    pub fn cluster_index(&self, id: &str) -> Option<usize> {
        if id == ROOT {
            return Some(0);
        }
        self.cluster_names[1..].binary_search_by(|x| x.as_str().cmp(id)).ok().map(|i| i + 1)
    }

    /// Parent cluster; the root is its own parent.
    pub fn parent(&self, c: usize) -> usize {
        self.parent[c]
    }

    pub fn child_clusters(&self, c: usize) -> &[usize] {
        &self.children[c]
    }

    /// Vertices placed directly in `c`.
    pub fn direct_vertices(&self, c: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.membership[v] == c).collect()
    }

    /// Leaf cluster of a vertex.
    pub fn leaf_cluster(&self, v: usize) -> usize {
        self.membership[v]
    }

    pub fn depth(&self, c: usize) -> usize {
        self.depth[c]
    }

    /// V(μ), sorted.
    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// Membership mask of V(μ).
    pub fn mask(&self, c: usize) -> &[bool] {
        &self.masks[c]
    }

    pub fn contains(&self, c: usize, v: usize) -> bool {
        self.masks[c][v]
    }

    /// True when `a` is a proper ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut x = b;
        while x != 0 {
            x = self.parent[x];
            if x == a {
                return true;
            }
        }
        false
    }

    /// True for pairs that may cross: distinct and neither is an ancestor of the other.
    pub fn unrelated(&self, a: usize, b: usize) -> bool {
        a != b && !self.is_ancestor(a, b) && !self.is_ancestor(b, a)
    }

    /// Non-root clusters in post-order (children before parents).
    pub fn clusters_bottom_up(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..self.cluster_count()).collect();
        order.sort_by_key(|&c| std::cmp::Reverse(self.depth[c]));
        order
    }

    /// V(μ) and the edges of G(μ).
    pub fn cluster_subgraph(&self, id: &str) -> Result<ClusterSubgraph, ModelError> {
        let c = self.cluster_index(id).ok_or_else(|| ModelError::UnknownCluster(id.to_string()))?;
        let mask = &self.masks[c];
        let edges = self.graph.edges().iter().copied().filter(|&(a, b)| mask[a] && mask[b]).collect();
        Ok(ClusterSubgraph { vertices: self.members[c].clone(), edges })
    }

    /// A copy with every id renamed; indices are re-canonicalized.
    pub fn renamed(&self, vertex: impl Fn(&str) -> String, cluster: impl Fn(&str) -> String) -> ClusteredGraph {
        let vs: Vec<(String, String)> = (0..self.vertex_count())
            .map(|v| {
                let c = self.membership[v];
                let cname = if c == 0 { ROOT.to_string() } else { cluster(&self.cluster_names[c]) };
                (vertex(&self.vertex_names[v]), cname)
            })
            .collect();
        let cs: Vec<(String, String)> = (1..self.cluster_count())
            .map(|c| {
                let p = self.parent[c];
                let pname = if p == 0 { ROOT.to_string() } else { cluster(&self.cluster_names[p]) };
                (cluster(&self.cluster_names[c]), pname)
            })
            .collect();
        let es: Vec<(String, String)> = self
            .graph
            .edges()
            .iter()
            .map(|&(a, b)| (vertex(&self.vertex_names[a]), vertex(&self.vertex_names[b])))
            .collect();
        ClusteredGraph::from_parts(&vs, &cs, &es).expect("renaming keeps the instance valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub subject: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_planar: bool,
    pub is_c_connected: bool,
    pub is_flat: bool,
    pub is_biconnected: bool,
    pub violations: Vec<Violation>,
}

/// Computes the structural flags of a clustered graph.
pub fn validate(cg: &ClusteredGraph) -> ValidationReport {
    let g = cg.graph();
    let is_planar = crate::embedding::planar_embed(g).is_ok();
    let is_flat = (1..cg.cluster_count()).all(|c| cg.child_clusters(c).is_empty());
    let mut violations = Vec::new();
    let mut is_c_connected = true;
    for c in 0..cg.cluster_count() {
        if cg.members(c).is_empty() {
            if c != 0 {
                violations.push(Violation {
                    kind: "empty-cluster".into(),
                    subject: cg.cluster_name(c).into(),
                    message: format!("cluster `{}` contains no vertex", cg.cluster_name(c)),
                });
            }
            continue;
        }
        let (count, _) = g.components_masked(cg.mask(c));
        if count != 1 {
            is_c_connected = false;
        }
    }
    ValidationReport { is_planar, is_c_connected, is_flat, is_biconnected: g.is_biconnected(), violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let cg = ClusteredGraph::parse("cg 1\nv a\nv b\ne a b\nc k root\nm a k\nm b k").unwrap();
        assert_eq!(cg.vertex_count(), 2);
        assert_eq!(cg.edge_count(), 1);
        assert_eq!(cg.cluster_names(), ["root", "k"]);
        assert_eq!(cg.members(1), &[0, 1]);
    }

    #[test]
    fn missing_membership() {
        let err = ClusteredGraph::parse("cg 1\nv a\nv b\ne a b\nm a root\n").unwrap_err();
        assert_eq!(err, ModelError::MissingMembership("b".into()));
        assert!(err.to_string().contains("vertex without cluster membership"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = ClusteredGraph::parse("cg 1\nv a\ne a zz\nm a root\n").unwrap_err();
        assert_eq!(err, ModelError::UnknownIdentifier { line: 3, id: "zz".into() });
        let err = ClusteredGraph::parse("cg 1\nv a\nm a root\nm a root\n").unwrap_err();
        assert_eq!(err, ModelError::DuplicateMembership { line: 4, vertex: "a".into() });
        let err = ClusteredGraph::parse("cg 1\nv a\nq a\n").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 3, .. }));
        let err = ClusteredGraph::parse("cg 2\n").unwrap_err();
        assert!(matches!(err, ModelError::Syntax { line: 1, .. }));
    }

    #[test]
    fn forest_is_rejected() {
        let err = ClusteredGraph::parse("cg 1\nv a\nc x y\nc y x\nm a x\n").unwrap_err();
        assert!(matches!(err, ModelError::NotATree(_)));
    }

    #[test]
    fn comments_and_order_do_not_matter() {
        let a = ClusteredGraph::parse("cg 1 # header\nm b k\ne b a\nv b\nc k root\nv a\nm a root\n").unwrap();
        let text = a.serialize();
        assert_eq!(text, "cg 1\nv a\nv b\ne a b\nc k root\nm a root\nm b k\n");
        assert_eq!(ClusteredGraph::parse(&text).unwrap(), a);
    }

    #[test]
    fn triangle_flags() {
        let cg = ClusteredGraph::parse("cg 1\nv a\nv b\nv c\ne a b\ne b c\ne a c\nc k root\nm a k\nm b k\nm c k\n")
            .unwrap();
        let r = validate(&cg);
        assert!(r.is_planar && r.is_c_connected && r.is_flat && r.is_biconnected);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn root_subgraph_is_everything() {
        let cg = ClusteredGraph::parse("cg 1\nv a\nv b\nv c\ne a b\nc k root\nm a root\nm b root\nm c k\n").unwrap();
        let root = cg.cluster_subgraph("root").unwrap();
        assert_eq!(root.vertices, vec![0, 1, 2]);
        assert_eq!(root.edges, vec![(0, 1)]);
        let k = cg.cluster_subgraph("k").unwrap();
        assert_eq!(k.vertices, vec![2]);
        assert!(k.edges.is_empty());
        assert!(cg.cluster_subgraph("nope").is_err());
    }
}

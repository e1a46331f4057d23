//! Deterministic instance families.
//!
//! Multigraph gadgets (`m` parallel copies of an edge) are always emitted
//! subdivided, as `m` paths of length two. Vertex and cluster ids spell out
//! the construction: `ab_3` is the pendant `[ab]_3`, `s_ab_3` the midpoint of
//! the third path between `a` and `b`, `mu_ab_3` the cluster `μ(a,b)_3`.
//!
//! ```
//! use cgdraw::generators::{gen, Family, FamilySpec};
//!
//! let cg = gen(&FamilySpec::new(Family::SunFlat, 8)).unwrap();
//! assert_eq!(cg.vertex_count(), 16);
//! assert_eq!(cg.cluster_count(), 1 + 4 + 1);
//! ```

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::{enclosed_violation_mask, faces, planar_embed, RotationSystem};
use crate::graph::Graph;
use crate::model::{Builder, ClusteredGraph, ROOT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("bad parameter for {family}: {message}")]
    BadParameter { family: Family, message: String },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    AbcSum,
    K5MinusDe,
    MatchingK5,
    NestedTrianglesFlat,
    NestedTrianglesNonflat,
    SunFlat,
    SunNonflat,
    InfeasibleParallel,
    InfeasibleTriconnected,
    OsmosisC1,
    OsmosisC2,
    OsmosisC3,
    CplanarRandom,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::AbcSum,
        Family::K5MinusDe,
        Family::MatchingK5,
        Family::NestedTrianglesFlat,
        Family::NestedTrianglesNonflat,
        Family::SunFlat,
        Family::SunNonflat,
        Family::InfeasibleParallel,
        Family::InfeasibleTriconnected,
        Family::OsmosisC1,
        Family::OsmosisC2,
        Family::OsmosisC3,
        Family::CplanarRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::AbcSum => "abc-sum",
            Family::K5MinusDe => "k5-minus-de",
            Family::MatchingK5 => "matching-k5",
            Family::NestedTrianglesFlat => "nested-triangles-flat",
            Family::NestedTrianglesNonflat => "nested-triangles-nonflat",
            Family::SunFlat => "sun-flat",
            Family::SunNonflat => "sun-nonflat",
            Family::InfeasibleParallel => "infeasible-parallel",
            Family::InfeasibleTriconnected => "infeasible-triconnected",
            Family::OsmosisC1 => "osmosis-c1",
            Family::OsmosisC2 => "osmosis-c2",
            Family::OsmosisC3 => "osmosis-c3",
            Family::CplanarRandom => "cplanar-random",
        }
    }

    /// Smallest valid size parameter, handy for tests and CLI defaults.
    pub fn smallest(self) -> usize {
        match self {
            Family::AbcSum | Family::OsmosisC1 | Family::OsmosisC2 | Family::OsmosisC3 => 1,
            Family::K5MinusDe => 14,
            Family::MatchingK5 => 20,
            Family::NestedTrianglesFlat | Family::NestedTrianglesNonflat => 6,
            Family::SunFlat | Family::SunNonflat => 4,
            Family::InfeasibleParallel | Family::InfeasibleTriconnected => 0,
            Family::CplanarRandom => 4,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Family, GenError> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

/// `n` is the family's size parameter: the vertex count for most families,
/// the gadget multiplicity `m` for `abc-sum` and the osmosis templates, and
/// ignored by the two fixed `infeasible-*` instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize) -> FamilySpec {
        FamilySpec { family, n, seed: 0 }
    }

    pub fn with_seed(mut self, seed: u64) -> FamilySpec {
        self.seed = seed;
        self
    }
}

const FIVE: [&str; 5] = ["a", "b", "c", "d", "e"];

pub fn gen(spec: &FamilySpec) -> Result<ClusteredGraph, GenError> {
    let n = spec.n;
    let bad = |message: &str| Err(GenError::BadParameter { family: spec.family, message: message.to_string() });
    let mut b = Builder::new();
    match spec.family {
        Family::AbcSum => {
            if n == 0 {
                return bad("m must be at least 1");
            }
            for x in FIVE {
                b.cluster(format!("mu_{x}"), ROOT).vertex_in(x, format!("mu_{x}"));
            }
            for (i, u) in FIVE.iter().enumerate() {
                for v in &FIVE[i + 1..] {
                    for k in 1..=n {
                        pendant_pair(&mut b, u, v, k);
                    }
                }
            }
        }
        Family::K5MinusDe => {
            if n < 14 || (n - 5) % 9 != 0 {
                return bad("n must be 5 + 9m with m >= 1");
            }
            let m = (n - 5) / 9;
            b.cluster("mu1", ROOT).cluster("mu2", ROOT).cluster("mu3", ROOT);
            for x in ["a", "b", "c"] {
                b.vertex_in(x, "mu1");
            }
            b.vertex_in("d", "mu2").vertex_in("e", "mu3");
            for (u, v) in pairs_except(&[("d", "e")]) {
                paths(&mut b, u, v, m, "mu1");
            }
        }
        Family::MatchingK5 => {
            if n == 0 || n % 20 != 0 {
                return bad("n must be a positive multiple of 20");
            }
            let k = n / 20;
            for i in 1..=5 {
                b.cluster(format!("mu{i}"), ROOT);
            }
            for i in 1..=5 {
                for j in i + 1..=5 {
                    for t in 1..=k {
                        let x = format!("x{i}{j}_{t}");
                        let y = format!("y{i}{j}_{t}");
                        b.vertex_in(&x, format!("mu{i}")).vertex_in(&y, format!("mu{j}")).edge(x, y);
                    }
                }
            }
        }
        Family::NestedTrianglesFlat | Family::NestedTrianglesNonflat => {
            if n < 3 || n % 3 != 0 {
                return bad("n must be a positive multiple of 3");
            }
            let k = n / 3;
            let flat = spec.family == Family::NestedTrianglesFlat;
            for i in 1..=k {
                let parent = if flat || i == k { ROOT.to_string() } else { format!("mu{}", i + 1) };
                b.cluster(format!("mu{i}"), parent);
                for x in ["a", "b", "c"] {
                    b.vertex_in(format!("{x}{i}"), format!("mu{i}"));
                }
                b.edge(format!("a{i}"), format!("b{i}")).edge(format!("b{i}"), format!("c{i}")).edge(format!("c{i}"), format!("a{i}"));
                if i < k {
                    for x in ["a", "b", "c"] {
                        b.edge(format!("{x}{i}"), format!("{x}{}", i + 1));
                    }
                }
            }
            b.cluster("mu_a", ROOT).cluster("mu_b", ROOT).vertex_in("va", "mu_a").vertex_in("vb", "mu_b");
            for x in ["a", "b", "c"] {
                b.edge("va", format!("{x}1")).edge("vb", format!("{x}{k}"));
            }
        }
        Family::SunFlat | Family::SunNonflat => {
            let flat = spec.family == Family::SunFlat;
            if flat && (n < 4 || n % 2 != 0) {
                return bad("n must be even and at least 4");
            }
            if !flat && (n < 4 || n % 4 != 0) {
                return bad("n must be a positive multiple of 4");
            }
            b.cluster("mu_star", ROOT);
            for i in 1..=n {
                let next = i % n + 1;
                b.vertex_in(format!("v{i}"), "mu_star");
                b.edge(format!("v{i}"), format!("v{next}"));
                b.edge(format!("u{i}"), format!("v{i}")).edge(format!("u{i}"), format!("v{next}"));
            }
            if flat {
                for i in 1..=n / 2 {
                    b.cluster(format!("mu{i}"), ROOT);
                    b.vertex_in(format!("u{i}"), format!("mu{i}")).vertex_in(format!("u{}", n / 2 + i), format!("mu{i}"));
                }
            } else {
                for i in 1..=n {
                    let parent = if i + 2 <= n { format!("mu{}", i + 2) } else { ROOT.to_string() };
                    b.cluster(format!("mu{i}"), parent).vertex_in(format!("u{i}"), format!("mu{i}"));
                }
            }
        }
        Family::InfeasibleParallel => {
            for c in ["mu1", "mu2", "mu3"] {
                b.cluster(c, ROOT);
            }
            b.vertex("s").vertex("t");
            b.vertex_in("p1", "mu1").vertex_in("x1", "mu1");
            b.vertex_in("x2", "mu2").vertex_in("p3", "mu2");
            b.vertex_in("x3", "mu3").vertex_in("p4", "mu3");
            for p in ["p1", "p3", "p4"] {
                b.edge("s", p).edge(p, "t");
            }
            b.edge("s", "x1").edge("x1", "x2").edge("x2", "x3").edge("x3", "t");
        }
        Family::InfeasibleTriconnected => {
            b.cluster("mu", ROOT);
            for x in ["a", "b", "c"] {
                b.vertex_in(x, "mu");
            }
            b.vertex("d").vertex("e");
            b.edge("a", "b").edge("b", "c").edge("c", "a");
            for apex in ["d", "e"] {
                for x in ["a", "b", "c"] {
                    b.edge(apex, x);
                }
            }
        }
        Family::OsmosisC1 | Family::OsmosisC2 | Family::OsmosisC3 => {
            if n == 0 {
                return bad("m must be at least 1");
            }
            for x in FIVE {
                b.vertex(x);
            }
            for (u, v) in pairs_except(&[("a", "d"), ("c", "e"), ("a", "e"), ("c", "d")]) {
                paths(&mut b, u, v, n, ROOT);
            }
            for k in 1..=n {
                pendant_pair(&mut b, "a", "e", k);
                pendant_pair(&mut b, "c", "d", k);
            }
            match spec.family {
                Family::OsmosisC1 => {
                    b.edge("a", "d").edge("c", "e");
                }
                Family::OsmosisC2 => {
                    b.edge("c", "e").cluster("mu_ad", ROOT).vertex_in("a", "mu_ad").vertex_in("d", "mu_ad");
                }
                _ => {
                    b.cluster("mu_ad", ROOT).vertex_in("a", "mu_ad").vertex_in("d", "mu_ad");
                    b.cluster("mu_ce", ROOT).vertex_in("c", "mu_ce").vertex_in("e", "mu_ce");
                }
            }
        }
        Family::CplanarRandom => {
            if n < 4 {
                return bad("n must be at least 4");
            }
            return Ok(cplanar_random(n, spec.seed));
        }
    }
    Ok(b.build().expect("generator output is well formed"))
}

fn pairs_except(skip: &[(&str, &str)]) -> Vec<(&'static str, &'static str)> {
    let mut out = Vec::new();
    for (i, u) in FIVE.iter().enumerate() {
        for v in &FIVE[i + 1..] {
            if !skip.contains(&(u, v)) {
                out.push((*u, *v));
            }
        }
    }
    out
}

/// `m` length-2 paths between `u` and `v`, midpoints placed in `cluster`.
fn paths(b: &mut Builder, u: &str, v: &str, m: usize, cluster: &str) {
    for k in 1..=m {
        let mid = format!("s_{u}{v}_{k}");
        b.vertex_in(&mid, cluster).edge(u, &mid).edge(&mid, v);
    }
}

/// Pendants `[uv]_k` at `u` and `[vu]_k` at `v` sharing the cluster `μ(u,v)_k`.
fn pendant_pair(b: &mut Builder, u: &str, v: &str, k: usize) {
    let c = format!("mu_{u}{v}_{k}");
    let (x, y) = (format!("{u}{v}_{k}"), format!("{v}{u}_{k}"));
    b.cluster(&c, ROOT).vertex_in(&x, &c).vertex_in(&y, &c).edge(u, x).edge(v, y);
}

/// Random biconnected planar graph on `n >= 3` vertices: a stacked
/// triangulation with edges deleted (each with probability `thin`) as long
/// as biconnectivity survives. Returns the graph and a planar embedding.
pub fn random_biconnected_planar(n: usize, thin: f64, rng: &mut impl Rng) -> (Graph, RotationSystem) {
    assert!(n >= 3);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut tri: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    for v in 3..n {
        let f = rng.gen_range(0..tri.len());
        let [x, y, z] = tri.swap_remove(f);
        edges.extend([(x, v), (y, v), (z, v)]);
        tri.extend([[x, y, v], [y, z, v], [z, x, v]]);
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.shuffle(rng);
    let mut alive = vec![true; edges.len()];
    for e in order {
        if !rng.gen_bool(thin) {
            continue;
        }
        alive[e] = false;
        let kept: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| alive[i]).map(|i| edges[i]).collect();
        if !Graph::from_edges(n, &kept).is_biconnected() {
            alive[e] = true;
        }
    }
    let kept: Vec<(usize, usize)> = (0..edges.len()).filter(|&i| alive[i]).map(|i| edges[i]).collect();
    let g = Graph::from_edges(n, &kept);
    let rs = planar_embed(&g).expect("subgraph of a planar graph");
    (g, rs)
}

/// A clustered graph that is c-planar with respect to the embedding it was
/// grown on: clusters are connected and never enclose foreign vertices.
fn cplanar_random(n: usize, seed: u64) -> ClusteredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (g, rs) = random_biconnected_planar(n, 0.4, &mut rng);
    let fs = faces(&rs);
    let outer = fs.dart_face[rs.outer_dart().unwrap()];
    // cluster tree as parent indices; cluster 0 is the root
    let mut parent = vec![0usize];
    let mut leaf = vec![0usize; n];
    let attempts = 1 + n / 3;
    for _ in 0..attempts {
        let host = rng.gen_range(0..parent.len());
        let pool: Vec<usize> = (0..n).filter(|&v| leaf[v] == host).collect();
        if pool.len() < 2 {
            continue;
        }
        let target = rng.gen_range(1..=pool.len().div_ceil(2).max(1));
        let start = *pool.choose(&mut rng).unwrap();
        let mut in_pool = vec![false; n];
        pool.iter().for_each(|&v| in_pool[v] = true);
        let mut grown = vec![start];
        let mut mask = vec![false; n];
        mask[start] = true;
        while grown.len() < target {
            let frontier: Vec<usize> = grown
                .iter()
                .flat_map(|&v| g.adj(v).iter().map(|&(w, _)| w))
                .filter(|&w| in_pool[w] && !mask[w])
                .collect();
            let Some(&w) = frontier.choose(&mut rng) else { break };
            mask[w] = true;
            grown.push(w);
        }
        // absorb enclosed vertices of the host; give up if a foreign one is trapped
        let mut ok = true;
        loop {
            match enclosed_violation_mask(&rs, &fs, outer, &mask) {
                None => break,
                Some(w) if in_pool[w.vertex] => {
                    mask[w.vertex] = true;
                }
                Some(_) => {
                    ok = false;
                    break;
                }
            }
        }
        let members: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
        if !ok || members.len() == pool.len() || !connected_within(&g, &mask) {
            continue;
        }
        let id = parent.len();
        parent.push(host);
        members.iter().for_each(|&v| leaf[v] = id);
    }
    let mut b = Builder::new();
    for (c, &p) in parent.iter().enumerate().skip(1) {
        let pname = if p == 0 { ROOT.to_string() } else { format!("k{p}") };
        b.cluster(format!("k{c}"), pname);
    }
    for (v, &c) in leaf.iter().enumerate() {
        let cname = if c == 0 { ROOT.to_string() } else { format!("k{c}") };
        b.vertex_in(format!("v{v}"), cname);
    }
    for &(x, y) in g.edges() {
        b.edge(format!("v{x}"), format!("v{y}"));
    }
    b.build().expect("generator output is well formed")
}

fn connected_within(g: &Graph, mask: &[bool]) -> bool {
    let (count, _) = g.components_masked(mask);
    count <= 1
}

#![allow(dead_code)]

use cgdraw::constraints::{satisfies, ConsecutivityProblem, TwoSatProblem};
use cgdraw::draw::{GeometricDrawing, Point};
use cgdraw::generators::random_biconnected_planar;
use cgdraw::graph::Graph;
use cgdraw::model::ClusteredGraph;
use cgdraw::spqr::{EdgeLink, SpqrTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random biconnected planar graph on `n` vertices with a random flat or
/// two-level clustering.
pub fn random_case(seed: u64, n: usize) -> ClusteredGraph {
    clustered(seed, n, 3, 0.3, 0.8)
}

/// Like [`random_case`] with up to `max_k` clusters, root probability
/// `p_root` and edge thinning drawn below `max_thin`.
pub fn clustered(seed: u64, n: usize, max_k: usize, p_root: f64, max_thin: f64) -> ClusteredGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thin = if max_thin > 0.0 { rng.gen_range(0.0..max_thin) } else { 0.0 };
    let (g, _) = random_biconnected_planar(n, thin, &mut rng);
    with_clusters(&g, &mut rng, max_k, p_root)
}

/// A random flat or two-level clustering of `g` with up to `max_k` clusters;
/// each vertex stays in the root with probability `p_root`.
pub fn with_clusters(g: &Graph, rng: &mut impl Rng, max_k: usize, p_root: f64) -> ClusteredGraph {
    let n = g.n();
    let k = rng.gen_range(1..=max_k);
    let two_level = rng.gen_bool(0.4);
    let clusters: Vec<(String, String)> = (0..k)
        .map(|i| {
            let parent = if two_level && i > 0 && rng.gen_bool(0.5) { format!("c{}", rng.gen_range(0..i)) } else { "root".into() };
            (format!("c{i}"), parent)
        })
        .collect();
    let vertices: Vec<(String, String)> = (0..n)
        .map(|v| {
            let c = if rng.gen_bool(p_root) { "root".to_string() } else { format!("c{}", rng.gen_range(0..k)) };
            (format!("v{v}"), c)
        })
        .collect();
    let edges: Vec<(String, String)> = g.edges().iter().map(|&(a, b)| (format!("v{a}"), format!("v{b}"))).collect();
    ClusteredGraph::from_parts(&vertices, &clusters, &edges).expect("valid clustered graph")
}

/// Every ordering of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub fn brute_pq(p: &ConsecutivityProblem) -> bool {
    permutations(p.universe)
        .into_iter()
        .any(|o| satisfies(&o, &p.constraints) && p.pinned.map_or(true, |x| o[0] == x))
}

pub fn truth_table(p: &TwoSatProblem) -> bool {
    (0u32..1 << p.vars).any(|bits| {
        let a: Vec<bool> = (0..p.vars).map(|i| bits >> i & 1 == 1).collect();
        p.is_satisfied_by(&a)
    })
}

/// Expands virtual edges from the root and returns, per graph edge, how many
/// times it was reached. Also checks that parent/child virtual edges agree.
pub fn recompose(t: &SpqrTree) -> Vec<usize> {
    let mut hits = vec![0; t.graph_edges().len()];
    let mut stack = vec![t.root()];
    while let Some(id) = stack.pop() {
        let nd = t.node(id);
        for se in &nd.skeleton {
            match se.link {
                EdgeLink::Real(e) => {
                    let (a, b) = t.graph_edges()[e];
                    assert!(se.ends == (a, b) || se.ends == (b, a), "real edge with wrong ends");
                    hits[e] += 1;
                }
                EdgeLink::Child(c) => {
                    let child = t.node(c);
                    assert_eq!(child.parent, Some(id));
                    let back: Vec<_> = child.skeleton.iter().filter(|s| s.link == EdgeLink::Parent).collect();
                    assert_eq!(back.len(), 1, "one parent edge per skeleton");
                    let same = |p: (usize, usize), q: (usize, usize)| p == q || p == (q.1, q.0);
                    assert!(same(back[0].ends, se.ends));
                    assert!(same(child.poles, se.ends));
                    stack.push(c);
                }
                EdgeLink::Parent => {}
            }
        }
    }
    hits
}

pub fn pts(list: &[(f64, f64)]) -> Vec<Point> {
    list.iter().map(|&(x, y)| Point::new(x, y)).collect()
}

/// Two top-level clusters `A` and `B`; vertices given as points.
pub fn drawing(points: &[(f64, f64)], edges: &[(usize, usize)], a: &[(f64, f64)], b: &[(f64, f64)]) -> GeometricDrawing {
    GeometricDrawing {
        vertex_names: (0..points.len()).map(|i| format!("v{i}")).collect(),
        points: pts(points),
        edges: edges.to_vec(),
        cluster_names: vec!["root".into(), "A".into(), "B".into()],
        cluster_parent: vec![0, 0, 0],
        regions: vec![None, (!a.is_empty()).then(|| pts(a)), (!b.is_empty()).then(|| pts(b))],
    }
}

/// Square with two slots cut from the top: a two-tooth comb.
pub const COMB: [(f64, f64); 8] = [(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (2.0, 3.0), (2.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)];

/// Three teeth: a horizontal line at height 2 meets the boundary five times
/// between x = 0.5 and x = 6.
pub const COMB3: [(f64, f64); 12] = [
    (0.0, 0.0), (5.0, 0.0), (5.0, 3.0), (4.0, 3.0), (4.0, 1.0), (3.0, 1.0), (3.0, 3.0),
    (2.0, 3.0), (2.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0),
];

/// Horizontal band through the teeth of [`COMB`].
pub const BAND: [(f64, f64); 4] = [(-1.0, 1.5), (4.0, 1.5), (4.0, 2.5), (-1.0, 2.5)];

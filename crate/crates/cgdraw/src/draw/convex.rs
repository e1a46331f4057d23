//! Drawings with edge-edge crossings only: vertices on a convex arc, grouped
//! so every cluster occupies a contiguous stretch of it.

use crate::model::ClusteredGraph;

use super::geometry::{convex_hull, Crossing, CrossingReport, GeometricDrawing, Point};

/// Vertex order in which every cluster is contiguous: a depth-first walk of
/// the inclusion tree, direct members before child clusters.
pub fn cluster_order(cg: &ClusteredGraph) -> Vec<usize> {
    fn walk(cg: &ClusteredGraph, c: usize, out: &mut Vec<usize>) {
        out.extend(cg.direct_vertices(c));
        for &child in cg.child_clusters(c) {
            walk(cg, child, out);
        }
    }
    let mut out = Vec::with_capacity(cg.vertex_count());
    walk(cg, 0, &mut out);
    out
}

/// Places vertex `σ[t]` at `(t, t²/n)` and draws every cluster as a slightly
/// inflated convex hull, deeper clusters inflated less. Crossings are read
/// off the order: two chords of a convex curve cross exactly when their
/// endpoints interleave, and no edge or other cluster enters a hull it has no
/// business in, so beta and gamma are zero.
pub fn construct_a00(cg: &ClusteredGraph) -> (GeometricDrawing, CrossingReport) {
    let n = cg.vertex_count();
    let sigma = cluster_order(cg);
    let mut slot = vec![0; n];
    for (t, &v) in sigma.iter().enumerate() {
        slot[v] = t;
    }
    let scale = n.max(1) as f64;
    let points: Vec<Point> = (0..n).map(|v| Point::new(slot[v] as f64, (slot[v] * slot[v]) as f64 / scale)).collect();

    // A point of the arc is at least 1/n vertically and about 1/(2.3n)
    // perpendicularly away from any chord it is not an endpoint of.
    let clearance = 1.0 / (2.3 * scale);
    let height = (1..cg.cluster_count()).map(|c| cg.depth(c)).max().unwrap_or(1).max(1);
    let mut regions = vec![None; cg.cluster_count()];
    for (c, region) in regions.iter_mut().enumerate().skip(1) {
        if cg.members(c).is_empty() {
            continue;
        }
        let r = 0.4 * clearance * (height - cg.depth(c) + 1) as f64 / height as f64;
        let blob: Vec<Point> = cg
            .members(c)
            .iter()
            .flat_map(|&v| {
                let p = points[v];
                (0..8).map(move |k| {
                    let a = std::f64::consts::FRAC_PI_4 * k as f64 + std::f64::consts::FRAC_PI_8;
                    Point::new(p.x + r * a.cos(), p.y + r * a.sin())
                })
            })
            .collect();
        *region = Some(convex_hull(&blob));
    }

    let edges = cg.graph().edges().to_vec();
    let mut detail = Vec::new();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            if interleave(edges[a], edges[b], &slot) {
                detail.push(Crossing::EdgeEdge { a, b, count: 1 });
            }
        }
    }
    let report = CrossingReport { alpha: detail.len(), beta: 0, gamma: 0, detail };
    let drawing = GeometricDrawing {
        vertex_names: cg.vertex_names().to_vec(),
        points,
        edges,
        cluster_names: cg.cluster_names().to_vec(),
        cluster_parent: (0..cg.cluster_count()).map(|c| cg.parent(c)).collect(),
        regions,
    };
    (drawing, report)
}

fn interleave(e: (usize, usize), f: (usize, usize), slot: &[usize]) -> bool {
    let (a, b) = (slot[e.0].min(slot[e.1]), slot[e.0].max(slot[e.1]));
    let inside = |x: usize| a < slot[x] && slot[x] < b;
    let shared = e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
    !shared && inside(f.0) != inside(f.1)
}

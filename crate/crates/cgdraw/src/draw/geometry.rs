//! Straight-line drawings with polygonal regions and exact crossing counts.
//!
//! Counting follows the usual conventions: an edge crossing the boundary of
//! a region `k` times makes ⌊k/2⌋ er-crossings, and two unrelated regions make
//! one rr-crossing less than the number of connected pieces of their
//! set difference. Touching configurations (a vertex on a boundary, an edge
//! through a polygon corner, overlapping segments) have no well-defined count;
//! they trigger a deterministic perturbation and a retry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::DrawError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// `p` on the closed segment `ab`, assuming the three points are collinear.
fn within(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// A drawing of a clustered graph: points, straight edges and one polygon per
/// non-root cluster. Cluster 0 is the root and never has a polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricDrawing {
    pub vertex_names: Vec<String>,
    pub points: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
    pub cluster_names: Vec<String>,
    /// Parent of each cluster; the root is its own parent.
    pub cluster_parent: Vec<usize>,
    pub regions: Vec<Option<Vec<Point>>>,
}

impl GeometricDrawing {
    fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut x = b;
        while x != 0 {
            x = self.cluster_parent[x];
            if x == a {
                return true;
            }
        }
        false
    }

    pub fn unrelated(&self, a: usize, b: usize) -> bool {
        a != b && !self.is_ancestor(a, b) && !self.is_ancestor(b, a)
    }

    pub fn depth(&self, c: usize) -> usize {
        let mut d = 0;
        let mut x = c;
        while x != 0 {
            x = self.cluster_parent[x];
            d += 1;
        }
        d
    }

    fn map_points(&self, f: impl Fn(usize, Point) -> Point) -> GeometricDrawing {
        let mut k = self.points.len();
        let mut out = self.clone();
        out.points = self.points.iter().enumerate().map(|(i, &p)| f(i, p)).collect();
        for poly in out.regions.iter_mut().flatten() {
            for p in poly.iter_mut() {
                *p = f(k, *p);
                k += 1;
            }
        }
        out
    }

    fn extent(&self) -> f64 {
        let all = self.points.iter().chain(self.regions.iter().flatten().flatten());
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for p in all {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if lo.x > hi.x {
            1.0
        } else {
            (hi.x - lo.x).max(hi.y - lo.y).max(1.0)
        }
    }

    pub fn to_json(&self) -> Value {
        let regions: Vec<Value> = self
            .regions
            .iter()
            .enumerate()
            .filter_map(|(c, r)| r.as_ref().map(|poly| (c, poly)))
            .map(|(c, poly)| {
                json!({
                    "cluster": self.cluster_names[c],
                    "parent": self.cluster_names[self.cluster_parent[c]],
                    "polygon": poly.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "vertices": self.vertex_names.iter().zip(&self.points).map(|(v, p)| json!({"id": v, "x": p.x, "y": p.y})).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|&(a, b)| [&self.vertex_names[a], &self.vertex_names[b]]).collect::<Vec<_>>(),
            "regions": regions,
        })
    }

    /// Reads the layout written by [`GeometricDrawing::to_json`].
    pub fn from_json(value: &Value) -> Result<GeometricDrawing, DrawError> {
        let bad = |what: &str| DrawError::MalformedPlan(what.to_string());
        let mut vertex_names = Vec::new();
        let mut points = Vec::new();
        for v in value["vertices"].as_array().ok_or_else(|| bad("vertices"))? {
            vertex_names.push(v["id"].as_str().ok_or_else(|| bad("vertex id"))?.to_string());
            points.push(Point::new(
                v["x"].as_f64().ok_or_else(|| bad("vertex x"))?,
                v["y"].as_f64().ok_or_else(|| bad("vertex y"))?,
            ));
        }
        let index = |s: &Value| -> Result<usize, DrawError> {
            let s = s.as_str().ok_or_else(|| bad("edge endpoint"))?;
            vertex_names.iter().position(|v| v == s).ok_or_else(|| bad(&format!("unknown vertex `{s}`")))
        };
        let mut edges = Vec::new();
        for e in value["edges"].as_array().ok_or_else(|| bad("edges"))? {
            edges.push((index(&e[0])?, index(&e[1])?));
        }
        let mut cluster_names = vec!["root".to_string()];
        let mut parents_named = vec![String::from("root")];
        let mut regions = vec![None];
        for r in value["regions"].as_array().ok_or_else(|| bad("regions"))? {
            cluster_names.push(r["cluster"].as_str().ok_or_else(|| bad("cluster"))?.to_string());
            parents_named.push(r["parent"].as_str().ok_or_else(|| bad("parent"))?.to_string());
            let mut poly = Vec::new();
            for p in r["polygon"].as_array().ok_or_else(|| bad("polygon"))? {
                poly.push(Point::new(p[0].as_f64().ok_or_else(|| bad("x"))?, p[1].as_f64().ok_or_else(|| bad("y"))?));
            }
            regions.push(Some(poly));
        }
        let cluster_parent = parents_named
            .iter()
            .map(|p| cluster_names.iter().position(|c| c == p).ok_or_else(|| bad(&format!("unknown cluster `{p}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeometricDrawing { vertex_names, points, edges, cluster_names, cluster_parent, regions })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Crossing {
    EdgeEdge { a: usize, b: usize, count: usize },
    EdgeRegion { edge: usize, cluster: usize, count: usize },
    RegionRegion { a: usize, b: usize, count: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub detail: Vec<Crossing>,
}

/// Retries after the first attempt; the offset grows tenfold each time.
const MAX_RETRIES: usize = 6;

#[derive(Debug)]
struct Degenerate;

/// Counts every ee-, er- and rr-crossing of a straight-line drawing.
pub fn count_crossings_geometric(d: &GeometricDrawing) -> Result<CrossingReport, DrawError> {
    if let Ok(r) = count_once(d) {
        return Ok(r);
    }
    let scale = d.extent();
    for attempt in 1..=MAX_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(attempt as u64);
        let eps = scale * 1e-10 * 10f64.powi(attempt as i32);
        let offsets: Vec<(f64, f64)> = (0..d.points.len() + d.regions.iter().flatten().map(Vec::len).sum::<usize>())
            .map(|_| (rng.gen_range(-eps..eps), rng.gen_range(-eps..eps)))
            .collect();
        let moved = d.map_points(|i, p| Point::new(p.x + offsets[i].0, p.y + offsets[i].1));
        if let Ok(r) = count_once(&moved) {
            return Ok(r);
        }
    }
    Err(DrawError::DegeneratePosition { attempts: MAX_RETRIES + 1 })
}

fn count_once(d: &GeometricDrawing) -> Result<CrossingReport, Degenerate> {
    let regions: Vec<Option<Vec<Point>>> = d.regions.iter().map(|r| r.as_ref().map(|p| ccw(p))).collect();
    let seg = |e: usize| (d.points[d.edges[e].0], d.points[d.edges[e].1]);
    let m = d.edges.len();

    let ee: Vec<Vec<Crossing>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            for b in a + 1..m {
                let (ea, eb) = (d.edges[a], d.edges[b]);
                let shared = [ea.0, ea.1].iter().filter(|x| **x == eb.0 || **x == eb.1).count();
                if edge_pair_crosses(seg(a), seg(b), shared)? {
                    out.push(Crossing::EdgeEdge { a, b, count: 1 });
                }
            }
            Ok(out)
        })
        .collect::<Result<_, Degenerate>>()?;

    let er: Vec<Vec<Crossing>> = (0..m)
        .into_par_iter()
        .map(|e| {
            let mut out = Vec::new();
            for (c, poly) in regions.iter().enumerate() {
                let Some(poly) = poly else { continue };
                let k = boundary_hits(seg(e), poly)?;
                if k >= 2 {
                    out.push(Crossing::EdgeRegion { edge: e, cluster: c, count: k / 2 });
                }
            }
            Ok(out)
        })
        .collect::<Result<_, Degenerate>>()?;

    let pairs: Vec<(usize, usize)> = (0..regions.len())
        .flat_map(|a| (a + 1..regions.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| regions[a].is_some() && regions[b].is_some() && d.unrelated(a, b))
        .collect();
    let rr: Vec<Option<Crossing>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let pieces = difference_pieces(regions[a].as_ref().unwrap(), regions[b].as_ref().unwrap())?;
            let count = pieces.saturating_sub(1);
            Ok((count > 0).then_some(Crossing::RegionRegion { a, b, count }))
        })
        .collect::<Result<_, Degenerate>>()?;

    let detail: Vec<Crossing> = ee.into_iter().flatten().chain(er.into_iter().flatten()).chain(rr.into_iter().flatten()).collect();
    let mut report = CrossingReport { detail, ..Default::default() };
    for c in &report.detail {
        match *c {
            Crossing::EdgeEdge { count, .. } => report.alpha += count,
            Crossing::EdgeRegion { count, .. } => report.beta += count,
            Crossing::RegionRegion { count, .. } => report.gamma += count,
        }
    }
    Ok(report)
}

fn signed_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].x * poly[(i + 1) % n].y - poly[(i + 1) % n].x * poly[i].y).sum::<f64>() / 2.0
}

fn ccw(poly: &[Point]) -> Vec<Point> {
    let mut p = poly.to_vec();
    if signed_area(&p) < 0.0 {
        p.reverse();
    }
    p
}

/// Proper crossing of two edges; edges sharing an endpoint only meet there
/// unless they overlap.
fn edge_pair_crosses(a: (Point, Point), b: (Point, Point), shared: usize) -> Result<bool, Degenerate> {
    if shared >= 2 {
        return Err(Degenerate);
    }
    if shared == 1 {
        // overlap along a common ray
        let (p, q, r) = if a.0 == b.0 || a.0 == b.1 {
            (a.0, a.1, if a.0 == b.0 { b.1 } else { b.0 })
        } else {
            (a.1, a.0, if a.1 == b.0 { b.1 } else { b.0 })
        };
        let dot = (q.x - p.x) * (r.x - p.x) + (q.y - p.y) * (r.y - p.y);
        if orient(p, q, r) == 0.0 && dot > 0.0 {
            return Err(Degenerate);
        }
        return Ok(false);
    }
    proper_crossing(a, b)
}

/// True when the open segments cross at a single interior point; any
/// touching counts as degenerate.
fn proper_crossing(a: (Point, Point), b: (Point, Point)) -> Result<bool, Degenerate> {
    let o1 = orient(a.0, a.1, b.0);
    let o2 = orient(a.0, a.1, b.1);
    let o3 = orient(b.0, b.1, a.0);
    let o4 = orient(b.0, b.1, a.1);
    let touch = (o1 == 0.0 && within(a.0, a.1, b.0))
        || (o2 == 0.0 && within(a.0, a.1, b.1))
        || (o3 == 0.0 && within(b.0, b.1, a.0))
        || (o4 == 0.0 && within(b.0, b.1, a.1));
    if touch {
        return Err(Degenerate);
    }
    Ok((o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0) && o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0)
}

fn boundary_hits(s: (Point, Point), poly: &[Point]) -> Result<usize, Degenerate> {
    let n = poly.len();
    let mut k = 0;
    for i in 0..n {
        if proper_crossing(s, (poly[i], poly[(i + 1) % n]))? {
            k += 1;
        }
    }
    Ok(k)
}

/// Even-odd test; callers guarantee `p` is off the boundary.
pub(crate) fn inside(p: Point, poly: &[Point]) -> bool {
    let n = poly.len();
    let mut odd = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x > p.x {
                odd = !odd;
            }
        }
    }
    odd
}

/// Number of connected pieces of `A \ B` for simple counter-clockwise
/// polygons whose boundaries meet transversally.
fn difference_pieces(a: &[Point], b: &[Point]) -> Result<usize, Degenerate> {
    let (na, nb) = (a.len(), b.len());
    // crossing points, recorded on both boundaries with their edge parameter
    let mut on_a: Vec<Vec<(f64, usize)>> = vec![Vec::new(); na];
    let mut on_b: Vec<Vec<(f64, usize)>> = vec![Vec::new(); nb];
    let mut xs: Vec<Point> = Vec::new();
    for i in 0..na {
        let s = (a[i], a[(i + 1) % na]);
        for j in 0..nb {
            let t = (b[j], b[(j + 1) % nb]);
            if proper_crossing(s, t)? {
                let d1 = orient(t.0, t.1, s.0);
                let d2 = orient(t.0, t.1, s.1);
                let u = d1 / (d1 - d2);
                let p = Point::new(s.0.x + u * (s.1.x - s.0.x), s.0.y + u * (s.1.y - s.0.y));
                let e1 = orient(s.0, s.1, t.0);
                let e2 = orient(s.0, s.1, t.1);
                let w = e1 / (e1 - e2);
                on_a[i].push((u, xs.len()));
                on_b[j].push((w, xs.len()));
                xs.push(p);
            }
        }
    }
    if xs.is_empty() {
        // nested or disjoint
        let a_in_b = inside(a[0], b);
        return Ok(usize::from(!a_in_b));
    }
    // arrangement nodes: crossings, then corners of A, then corners of B
    let node_a = |i: usize| xs.len() + i;
    let node_b = |j: usize| xs.len() + na + j;
    let mut pos = xs.clone();
    pos.extend_from_slice(a);
    pos.extend_from_slice(b);
    // half-edges as (from, to, on_a, forward along the boundary orientation)
    let mut half: Vec<(usize, usize, bool)> = Vec::new();
    let chain = |nodes: Vec<usize>, is_a: bool, half: &mut Vec<(usize, usize, bool)>| {
        for w in nodes.windows(2) {
            half.push((w[0], w[1], is_a));
            half.push((w[1], w[0], is_a));
        }
    };
    for (poly, hits, node, is_a) in [(a, &mut on_a, &node_a as &dyn Fn(usize) -> usize, true), (b, &mut on_b, &node_b, false)] {
        for i in 0..poly.len() {
            hits[i].sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut nodes = vec![node(i)];
            nodes.extend(hits[i].iter().map(|&(_, id)| id));
            nodes.push(node((i + 1) % poly.len()));
            chain(nodes, is_a, &mut half);
        }
    }
    // half-edge 2k is forward along its polygon, 2k+1 backward
    let total = pos.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (h, &(u, _, _)) in half.iter().enumerate() {
        out[u].push(h);
    }
    let angle = |h: usize| {
        let (u, v, _) = half[h];
        (pos[v].y - pos[u].y).atan2(pos[v].x - pos[u].x)
    };
    for list in &mut out {
        list.sort_by(|&x, &y| angle(x).total_cmp(&angle(y)));
    }
    let mut slot = vec![0; half.len()];
    for list in &out {
        for (k, &h) in list.iter().enumerate() {
            slot[h] = k;
        }
    }
    // the face on the left of u→v continues with the out-edge clockwise
    // from v→u around v
    let next = |h: usize| {
        let t = h ^ 1;
        let v = half[t].0;
        let list = &out[v];
        list[(slot[t] + list.len() - 1) % list.len()]
    };
    let mut seen = vec![false; half.len()];
    let mut pieces = 0;
    for start in 0..half.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(h);
            h = next(h);
        }
        let area: f64 = cycle
            .iter()
            .map(|&h| {
                let (p, q) = (pos[half[h].0], pos[half[h].1]);
                p.x * q.y - q.x * p.y
            })
            .sum();
        if area <= 0.0 {
            continue;
        }
        // membership from any boundary piece: its own polygon by direction,
        // the other polygon by the midpoint
        let h = cycle[0];
        let (u, v, is_a) = half[h];
        let mid = Point::new((pos[u].x + pos[v].x) / 2.0, (pos[u].y + pos[v].y) / 2.0);
        let forward = h % 2 == 0;
        let (in_a, in_b) = if is_a { (forward, inside(mid, b)) } else { (inside(mid, a), forward) };
        if in_a && !in_b {
            pieces += 1;
        }
    }
    Ok(pieces)
}

/// Convex hull by monotone chain, counter-clockwise, without collinear points.
pub(crate) fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut p = points.to_vec();
    p.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while hull.len() >= start + 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    hull
}

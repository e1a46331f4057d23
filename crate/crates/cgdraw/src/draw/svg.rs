//! SVG output. Geometric drawings are rendered as they are; er and rr plans
//! get a schematic picture of the embedding with the routes on top.

use std::fmt::Write;

use crate::embedding::{faces, FaceSet, RotationSystem};
use crate::model::ClusteredGraph;
use crate::rr::GammaPlan;

use super::beta::BetaPlan;
use super::geometry::{GeometricDrawing, Point};

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

fn color(c: usize) -> &'static str {
    PALETTE[c % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Maps drawing coordinates into the canvas, y pointing up.
struct Frame {
    lo: Point,
    scale: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a Point>) -> Frame {
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if lo.x > hi.x {
            return Frame { lo: Point::new(0.0, 0.0), scale: 1.0 };
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Frame { lo, scale: (SIZE - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale, SIZE - MARGIN - (p.y - self.lo.y) * self.scale)
    }
}

fn open() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn vertices(out: &mut String, frame: &Frame, names: &[String], points: &[Point]) {
    for (name, &p) in names.iter().zip(points) {
        let (x, y) = frame.map(p);
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"black\"><title>{}</title></circle>", escape(name));
    }
}

fn edges(out: &mut String, frame: &Frame, list: &[(usize, usize)], points: &[Point]) {
    for &(a, b) in list {
        let (x1, y1) = frame.map(points[a]);
        let (x2, y2) = frame.map(points[b]);
        let _ = writeln!(out, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#444\" stroke-width=\"1.2\"/>");
    }
}

/// Regions are nested polygons; outer clusters get thicker strokes.
pub fn to_svg(d: &GeometricDrawing) -> String {
    let frame = Frame::fit(d.points.iter().chain(d.regions.iter().flatten().flatten()));
    let mut out = open();
    let mut order: Vec<usize> = (0..d.regions.len()).filter(|&c| d.regions[c].is_some()).collect();
    order.sort_by_key(|&c| d.depth(c));
    let deepest = order.iter().map(|&c| d.depth(c)).max().unwrap_or(1);
    for c in order {
        let poly = d.regions[c].as_ref().unwrap();
        let pts: Vec<String> = poly.iter().map(|&p| frame.map(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let width = 1.0 + (deepest - d.depth(c)) as f64;
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.08\" stroke=\"{}\" stroke-width=\"{width}\"><title>{}</title></polygon>",
            pts.join(" "),
            color(c),
            color(c),
            escape(&d.cluster_names[c])
        );
    }
    edges(&mut out, &frame, &d.edges, &d.points);
    vertices(&mut out, &frame, &d.vertex_names, &d.points);
    out.push_str("</svg>\n");
    out
}

/// Barycentric layout: one face on a circle, everything else relaxed to the
/// average of its neighbors. Planar for triconnected graphs, a sketch
/// otherwise.
fn layout(rs: &RotationSystem, fs: &FaceSet) -> Vec<Point> {
    let n = rs.n();
    let mut pos = vec![Point::new(0.0, 0.0); n];
    let mut pinned = vec![false; n];
    let outer = rs.outer_dart().map(|d| fs.dart_face[d]).or_else(|| (0..fs.faces.len()).max_by_key(|&f| fs.faces[f].len()));
    if let Some(f) = outer {
        let mut ring = Vec::new();
        for v in fs.vertices(rs, f) {
            if !ring.contains(&v) {
                ring.push(v);
            }
        }
        for (k, &v) in ring.iter().enumerate() {
            let a = std::f64::consts::TAU * k as f64 / ring.len() as f64;
            pos[v] = Point::new(a.cos(), a.sin());
            pinned[v] = true;
        }
    }
    // unreached vertices spread on a small inner circle to stay visible
    for v in (0..n).filter(|&v| !pinned[v]) {
        let a = std::f64::consts::TAU * v as f64 / n as f64;
        pos[v] = Point::new(0.3 * a.cos(), 0.3 * a.sin());
    }
    for _ in 0..300 {
        for v in (0..n).filter(|&v| !pinned[v]) {
            let nb = rs.neighbors(v);
            if nb.is_empty() {
                continue;
            }
            let (sx, sy) = nb.iter().fold((0.0, 0.0), |(x, y), &w| (x + pos[w].x, y + pos[w].y));
            pos[v] = Point::new(sx / nb.len() as f64, sy / nb.len() as f64);
        }
    }
    pos
}

fn centroid(rs: &RotationSystem, fs: &FaceSet, pos: &[Point], f: usize) -> Point {
    let vs = fs.vertices(rs, f);
    let (sx, sy) = vs.iter().fold((0.0, 0.0), |(x, y), &v| (x + pos[v].x, y + pos[v].y));
    Point::new(sx / vs.len() as f64, sy / vs.len() as f64)
}

fn polyline(out: &mut String, frame: &Frame, pts: &[Point], stroke: &str, dashed: bool, title: &str) {
    let coords: Vec<String> = pts.iter().map(|&p| frame.map(p)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let dash = if dashed { " stroke-dasharray=\"6,4\"" } else { "" };
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"2\"{dash}><title>{}</title></polyline>",
        coords.join(" "),
        escape(title)
    );
}

fn schematic(cg: &ClusteredGraph, rs: &RotationSystem, overlay: impl FnOnce(&mut String, &Frame, &FaceSet, &[Point])) -> String {
    let fs = faces(rs);
    let pos = layout(rs, &fs);
    let frame = Frame::fit(pos.iter());
    let mut out = open();
    edges(&mut out, &frame, rs.edges(), &pos);
    overlay(&mut out, &frame, &fs, &pos);
    vertices(&mut out, &frame, cg.vertex_names(), &pos);
    out.push_str("</svg>\n");
    out
}

/// Tree edges per cluster, auxiliary ones along their face routes.
pub fn er_svg(cg: &ClusteredGraph, plan: &BetaPlan) -> String {
    let rs = &plan.embedding;
    schematic(cg, rs, |out, frame, fs, pos| {
        for c in 1..cg.cluster_count() {
            for &t in &plan.tree.per_cluster[c] {
                let te = plan.tree.edges[t];
                let (a, b) = te.ends;
                let mut pts = vec![pos[a]];
                if let Some(r) = plan.routes.iter().find(|r| r.tree_edge == t) {
                    pts.extend(r.faces.iter().map(|&f| centroid(rs, fs, pos, f)));
                }
                pts.push(pos[b]);
                polyline(out, frame, &pts, color(c), te.graph_edge.is_none(), cg.cluster_name(c));
            }
        }
    })
}

/// Hubs at face centroids with spokes to the attached vertices.
pub fn rr_svg(cg: &ClusteredGraph, plan: &GammaPlan) -> String {
    let rs = &plan.embedding;
    schematic(cg, rs, |out, frame, fs, pos| {
        for r in &plan.routes {
            for &(v, f) in &r.spokes {
                polyline(out, frame, &[pos[v], centroid(rs, fs, pos, f)], color(r.cluster), false, cg.cluster_name(r.cluster));
            }
        }
    })
}

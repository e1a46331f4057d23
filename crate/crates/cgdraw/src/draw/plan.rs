//! Recounting serialized plans from their own contents.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

use super::geometry::{count_crossings_geometric, GeometricDrawing};
use super::DrawError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
}

impl Totals {
    /// The totals a plan claims for itself.
    pub fn claimed(plan: &Value) -> Result<Totals, DrawError> {
        let get = |k: &str| plan[k].as_u64().map(|x| x as usize).ok_or_else(|| bad(k));
        Ok(Totals { alpha: get("alpha")?, beta: get("beta")?, gamma: get("gamma")? })
    }
}

fn bad(what: &str) -> DrawError {
    DrawError::MalformedPlan(what.to_string())
}

fn strs(v: &Value, what: &str) -> Result<Vec<String>, DrawError> {
    v.as_array()
        .ok_or_else(|| bad(what))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad(what)))
        .collect()
}

fn pair(v: &Value) -> Result<(String, String), DrawError> {
    let s = strs(v, "vertex pair")?;
    match s.as_slice() {
        [a, b] => Ok(if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) }),
        _ => Err(bad("vertex pair")),
    }
}

/// Recomputes alpha, beta and gamma of a plan written by `draw`.
pub fn recount(plan: &Value) -> Result<Totals, DrawError> {
    match plan["mode"].as_str() {
        Some("ee") => {
            let d = GeometricDrawing::from_json(&plan["drawing"])?;
            let r = count_crossings_geometric(&d)?;
            Ok(Totals { alpha: r.alpha, beta: r.beta, gamma: r.gamma })
        }
        Some("er") => recount_er(plan),
        Some("rr") => recount_rr(plan),
        _ => Err(bad("mode")),
    }
}

fn recount_er(plan: &Value) -> Result<Totals, DrawError> {
    let tree = plan["tree"].as_array().ok_or_else(|| bad("tree"))?;
    let mut in_tree = BTreeSet::new();
    for t in tree {
        if t["in_graph"].as_bool().ok_or_else(|| bad("in_graph"))? {
            in_tree.insert(pair(&t["ends"])?);
        }
    }
    let clusters = plan["clusters"].as_array().ok_or_else(|| bad("clusters"))?;
    let mut members = Vec::new();
    let mut tree_edges = Vec::new();
    for c in clusters {
        members.push(strs(&c["members"], "members")?.into_iter().collect::<BTreeSet<_>>());
        let te: Vec<u64> = c["tree_edges"].as_array().ok_or_else(|| bad("tree_edges"))?.iter().filter_map(Value::as_u64).collect();
        tree_edges.push(te);
    }
    let mut beta = 0;
    for e in plan["edges"].as_array().ok_or_else(|| bad("edges"))? {
        let (a, b) = pair(e)?;
        if in_tree.contains(&(a.clone(), b.clone())) {
            continue;
        }
        beta += members.iter().filter(|m| m.contains(&a) && m.contains(&b)).count();
    }
    for r in plan["routes"].as_array().ok_or_else(|| bad("routes"))? {
        let t = r["tree_edge"].as_u64().ok_or_else(|| bad("tree_edge"))?;
        let crossed = r["crossed"].as_array().ok_or_else(|| bad("crossed"))?.len();
        beta += crossed * tree_edges.iter().filter(|te| te.contains(&t)).count();
    }
    Ok(Totals { alpha: 0, beta, gamma: 0 })
}

fn recount_rr(plan: &Value) -> Result<Totals, DrawError> {
    let faces: Vec<Vec<String>> =
        plan["faces"].as_array().ok_or_else(|| bad("faces"))?.iter().map(|f| strs(f, "face")).collect::<Result<_, _>>()?;
    let mut parent: BTreeMap<String, String> = BTreeMap::new();
    for c in plan["clusters"].as_array().ok_or_else(|| bad("clusters"))? {
        parent.insert(
            c["id"].as_str().ok_or_else(|| bad("cluster id"))?.to_string(),
            c["parent"].as_str().ok_or_else(|| bad("cluster parent"))?.to_string(),
        );
    }
    let ancestor = |a: &str, b: &str| {
        let mut x = b.to_string();
        while let Some(p) = parent.get(&x) {
            if p == a {
                return true;
            }
            x = p.clone();
        }
        false
    };
    // cluster → face → attached vertices
    let mut attach: BTreeMap<String, BTreeMap<usize, BTreeSet<String>>> = BTreeMap::new();
    for r in plan["routes"].as_array().ok_or_else(|| bad("routes"))? {
        let c = r["cluster"].as_str().ok_or_else(|| bad("route cluster"))?.to_string();
        let entry = attach.entry(c).or_default();
        for s in r["spokes"].as_array().ok_or_else(|| bad("spokes"))? {
            let v = s[0].as_str().ok_or_else(|| bad("spoke vertex"))?.to_string();
            let f = s[1].as_u64().ok_or_else(|| bad("spoke face"))? as usize;
            entry.entry(f).or_default().insert(v);
        }
    }
    let names: Vec<&String> = attach.keys().collect();
    let mut gamma = 0;
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            if ancestor(a, b) || ancestor(b, a) {
                continue;
            }
            for (f, va) in &attach[*a] {
                let Some(vb) = attach[*b].get(f) else { continue };
                let face = faces.get(*f).ok_or_else(|| bad("face id"))?;
                let mut seq = Vec::new();
                let mut seen = BTreeSet::new();
                for v in face {
                    if !seen.insert(v) {
                        continue;
                    }
                    if va.contains(v) {
                        seq.push(0);
                    } else if vb.contains(v) {
                        seq.push(1);
                    }
                }
                let runs = if seq.is_empty() { 0 } else { (0..seq.len()).filter(|&k| seq[k] != seq[(k + 1) % seq.len()]).count().max(1) };
                gamma += (runs / 2).saturating_sub(1);
            }
        }
    }
    Ok(Totals { alpha: 0, beta: 0, gamma })
}

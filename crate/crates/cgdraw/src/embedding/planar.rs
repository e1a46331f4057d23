//! Planarity testing and embedding by path addition (Demoucron, Malgrange,
//! Pertuiset), one biconnected block at a time. Quadratic-ish, which is
//! plenty for the instance sizes in this crate.

use std::collections::{HashMap, VecDeque};

use super::{EmbeddingError, RotationSystem};
use crate::graph::Graph;

/// Planar rotation system of `g` (edge ids preserved). The outer face is the
/// face of dart 0 when the graph has an edge.
pub fn planar_embed(g: &Graph) -> Result<RotationSystem, EmbeddingError> {
    let n = g.n();
    if n >= 3 && g.m() > 3 * n - 6 {
        return Err(EmbeddingError::NonPlanar);
    }
    let (blocks, _) = g.biconnected_components();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in &blocks {
        let local = embed_block(g, block)?;
        for (v, darts) in local {
            rot[v].extend(darts);
        }
    }
    let mut rs = RotationSystem::new(n, g.edges().to_vec(), rot)?;
    if g.m() > 0 {
        rs.set_outer(Some(0));
    }
    Ok(rs)
}

fn dart_of(g: &Graph, u: usize, v: usize) -> usize {
    let e = g.find_edge(u, v).expect("edge present");
    if g.edge(e).0 == u {
        2 * e
    } else {
        2 * e + 1
    }
}

/// Embeds one block; returns per-vertex rotations over that block's darts.
fn embed_block(g: &Graph, block: &[usize]) -> Result<Vec<(usize, Vec<usize>)>, EmbeddingError> {
    if block.len() == 1 {
        let (a, b) = g.edge(block[0]);
        return Ok(vec![(a, vec![2 * block[0]]), (b, vec![2 * block[0] + 1])]);
    }
    let mut in_block = vec![false; g.m()];
    let mut verts = Vec::new();
    let mut is_vert = vec![false; g.n()];
    for &e in block {
        in_block[e] = true;
        let (a, b) = g.edge(e);
        for x in [a, b] {
            if !is_vert[x] {
                is_vert[x] = true;
                verts.push(x);
            }
        }
    }
    let bn = verts.len();
    if bn >= 3 && block.len() > 3 * bn - 6 {
        return Err(EmbeddingError::NonPlanar);
    }

    // initial cycle: edge (a,b) plus a shortest b-a path avoiding it
    let e0 = block[0];
    let (a, b) = g.edge(e0);
    let mut prev = vec![usize::MAX; g.n()];
    prev[b] = b;
    let mut queue = VecDeque::from([b]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in g.adj(v) {
            if in_block[e] && e != e0 && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    let mut cycle = vec![a];
    let mut x = a;
    while x != b {
        x = prev[x];
        cycle.push(x);
    }
    // cycle = a ... b, closing edge b-a

    let mut in_h = vec![false; g.n()];
    let mut edge_in_h = vec![false; g.m()];
    for i in 0..cycle.len() {
        let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        in_h[u] = true;
        edge_in_h[g.find_edge(u, v).unwrap()] = true;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut embedded = cycle.len();

    while embedded < block.len() {
        let fragments = fragments(g, block, &in_h, &edge_in_h);
        let mut chosen: Option<(usize, usize)> = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|x| faces[f].contains(x)))
                .collect();
            if admissible.is_empty() {
                return Err(EmbeddingError::NonPlanar);
            }
            if admissible.len() == 1 {
                chosen = Some((i, admissible[0]));
                break;
            }
            if chosen.is_none() {
                chosen = Some((i, admissible[0]));
            }
        }
        let (fi, face) = chosen.expect("at least one fragment remains");
        let path = fragment_path(g, &fragments[fi], &in_h, &in_block);
        for w in path.windows(2) {
            edge_in_h[g.find_edge(w[0], w[1]).unwrap()] = true;
        }
        for &v in &path {
            in_h[v] = true;
        }
        embedded += path.len() - 1;
        let (f1, f2) = split_face(&faces[face], &path);
        faces[face] = f1;
        faces.push(f2);
    }

    // rotation from faces: after x -> y along a face, y's successor of (y->x) is (y->z)
    let mut succ: HashMap<usize, usize> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (x, y, z) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            succ.insert(dart_of(g, y, x), dart_of(g, y, z));
        }
    }
    let mut out = Vec::with_capacity(bn);
    for &v in &verts {
        let first = g
            .adj(v)
            .iter()
            .filter(|&&(_, e)| in_block[e])
            .map(|&(w, _)| dart_of(g, v, w))
            .min()
            .unwrap();
        let mut order = vec![first];
        let mut d = succ[&first];
        while d != first {
            order.push(d);
            d = succ[&d];
        }
        out.push((v, order));
    }
    Ok(out)
}

struct Fragment {
    attachments: Vec<usize>,
    /// Non-embedded vertices of the fragment (empty for a single chord).
    inner: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn fragments(g: &Graph, block: &[usize], in_h: &[bool], edge_in_h: &[bool]) -> Vec<Fragment> {
    let mut out = Vec::new();
    let mut comp = vec![usize::MAX; g.n()];
    let mut block_vertex = vec![false; g.n()];
    let mut in_block = vec![false; g.m()];
    for &e in block {
        in_block[e] = true;
        let (a, b) = g.edge(e);
        block_vertex[a] = true;
        block_vertex[b] = true;
    }
    for &e in block {
        let (a, b) = g.edge(e);
        if !edge_in_h[e] && in_h[a] && in_h[b] {
            out.push(Fragment { attachments: vec![a, b], inner: Vec::new(), chord: Some((a, b)) });
        }
    }
    for s in 0..g.n() {
        if !block_vertex[s] || in_h[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = s;
        comp[s] = id;
        let mut inner = vec![s];
        let mut attachments = Vec::new();
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.adj(v) {
                if !in_block[e] {
                    continue;
                }
                if in_h[w] {
                    if !attachments.contains(&w) {
                        attachments.push(w);
                    }
                } else if comp[w] == usize::MAX {
                    comp[w] = id;
                    inner.push(w);
                    queue.push_back(w);
                }
            }
        }
        attachments.sort_unstable();
        out.push(Fragment { attachments, inner, chord: None });
    }
    out
}

/// A path through the fragment between two distinct attachment vertices.
fn fragment_path(g: &Graph, frag: &Fragment, in_h: &[bool], in_block: &[bool]) -> Vec<usize> {
    if let Some((a, b)) = frag.chord {
        return vec![a, b];
    }
    let a = frag.attachments[0];
    let mut is_inner = vec![false; g.n()];
    for &v in &frag.inner {
        is_inner[v] = true;
    }
    let mut prev = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &(w, e) in g.adj(a) {
        if in_block[e] && is_inner[w] && prev[w] == usize::MAX {
            prev[w] = a;
            queue.push_back(w);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(w, e) in g.adj(v) {
            if !in_block[e] {
                continue;
            }
            if in_h[w] && w != a {
                let mut path = vec![w, v];
                let mut x = v;
                while prev[x] != a {
                    x = prev[x];
                    path.push(x);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if is_inner[w] && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

/// Splits a face (directed vertex cycle) along a path between two of its vertices.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().unwrap();
    let k = face.len();
    let s = face.iter().position(|&x| x == a).unwrap();
    let rotated: Vec<usize> = (0..k).map(|i| face[(s + i) % k]).collect();
    let i = rotated.iter().position(|&x| x == b).unwrap();
    let mut f1: Vec<usize> = rotated[..=i].to_vec();
    f1.extend(path[1..path.len() - 1].iter().rev());
    let mut f2: Vec<usize> = path[..path.len() - 1].to_vec();
    f2.extend(&rotated[i..]);
    (f1, f2)
}

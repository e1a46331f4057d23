//! Exhaustive embedding enumeration for small connected graphs.
//!
//! Every vertex contributes `(deg - 1)!` cyclic orders; the product is
//! filtered by Euler's formula. Reflections are distinct rotation systems
//! and both are produced.

use super::{faces, EmbeddingError, RotationSystem};
use crate::graph::Graph;

pub const DEFAULT_CAP: usize = 8;

/// Number of candidate rotation systems, saturating.
pub fn candidate_count(g: &Graph) -> u128 {
    (0..g.n()).fold(1u128, |acc, v| {
        let d = g.degree(v).max(1) as u128;
        (1..d).fold(acc, |a, k| a.saturating_mul(k))
    })
}

fn cyclic_orders(darts: &[usize]) -> Vec<Vec<usize>> {
    if darts.len() <= 2 {
        return vec![darts.to_vec()];
    }
    let first = darts[0];
    let mut rest: Vec<usize> = darts[1..].to_vec();
    let mut out = Vec::new();
    permute(&mut rest, 0, &mut |p| {
        let mut v = Vec::with_capacity(darts.len());
        v.push(first);
        v.extend_from_slice(p);
        out.push(v);
    });
    out
}

fn permute(items: &mut Vec<usize>, k: usize, emit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        emit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, emit);
        items.swap(k, i);
    }
}

/// Lazily walks every planar rotation system of a connected graph.
///
/// Vertices are fixed one at a time in breadth-first order, and a partial
/// choice is abandoned as soon as the part fixed so far is not planar.
pub struct RotationIter {
    n: usize,
    edges: Vec<(usize, usize)>,
    order: Vec<usize>,
    choices: Vec<Vec<Vec<usize>>>,
    /// Choice index per level; levels `0..depth` are fixed.
    pick: Vec<usize>,
    depth: usize,
    done: bool,
    head: Vec<usize>,
    assigned: Vec<bool>,
    succ: Vec<usize>,
    seen: Vec<bool>,
}

impl RotationIter {
    /// Moves to the next sibling, backing up as needed.
    fn bump(&mut self) {
        while self.depth > 0 {
            let level = self.depth - 1;
            let v = self.order[level];
            self.pick[level] += 1;
            if self.pick[level] < self.choices[v].len() {
                self.set(level);
                return;
            }
            self.assigned[v] = false;
            self.depth -= 1;
        }
        self.done = true;
    }

    fn set(&mut self, level: usize) {
        self.assigned[self.order[level]] = true;
    }

    fn descend(&mut self) {
        self.pick[self.depth] = 0;
        self.set(self.depth);
        self.depth += 1;
    }

    /// Is the rotation induced on the fixed vertices planar? Deleting edges
    /// never raises the genus, so a non-planar prefix cannot be completed.
    /// The breadth-first order keeps the fixed part connected.
    fn promising(&mut self) -> bool {
        let mut edges = 0;
        let mut touched = 0;
        for level in 0..self.depth {
            let v = self.order[level];
            let r = &self.choices[v][self.pick[level]];
            let kept: Vec<usize> = r.iter().copied().filter(|&d| self.assigned[self.head[d]]).collect();
            if !kept.is_empty() {
                touched += 1;
            }
            edges += kept.len();
            for i in 0..kept.len() {
                self.succ[kept[i]] = kept[(i + 1) % kept.len()];
            }
        }
        let edges = edges / 2;
        if edges == 0 {
            return true;
        }
        self.seen.iter_mut().for_each(|s| *s = false);
        let mut faces = 0;
        for start in 0..self.succ.len() {
            if self.seen[start] || !self.assigned[self.head[start]] || !self.assigned[self.head[start ^ 1]] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !self.seen[d] {
                self.seen[d] = true;
                d = self.succ[d ^ 1];
            }
        }
        touched + faces == edges + 2
    }
}

impl Iterator for RotationIter {
    type Item = RotationSystem;

    fn next(&mut self) -> Option<RotationSystem> {
        while !self.done {
            if !self.promising() {
                self.bump();
                continue;
            }
            if self.depth < self.n {
                self.descend();
                continue;
            }
            let rot: Vec<Vec<usize>> = (0..self.n)
                .map(|v| {
                    let level = self.order.iter().position(|&x| x == v).unwrap();
                    self.choices[v][self.pick[level]].clone()
                })
                .collect();
            self.bump();
            return Some(RotationSystem::new_unchecked(self.n, self.edges.clone(), rot));
        }
        None
    }
}

/// All planar rotation systems (no outer face chosen).
pub fn enumerate_rotation_systems(g: &Graph, cap: usize) -> Result<RotationIter, EmbeddingError> {
    if g.n() > cap {
        return Err(EmbeddingError::CapExceeded { n: g.n(), cap });
    }
    if !g.is_connected() {
        return Err(EmbeddingError::Disconnected);
    }
    let choices: Vec<Vec<Vec<usize>>> = (0..g.n())
        .map(|v| {
            let mut darts: Vec<usize> = g
                .adj(v)
                .iter()
                .map(|&(_, e)| if g.edge(e).0 == v { 2 * e } else { 2 * e + 1 })
                .collect();
            darts.sort_unstable();
            cyclic_orders(&darts)
        })
        .collect();
    let mut order = Vec::with_capacity(g.n());
    if g.n() > 0 {
        let start = (0..g.n()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v))).unwrap();
        let mut seen = vec![false; g.n()];
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in g.adj(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let nd = 2 * g.m();
    let head = (0..nd).map(|d| if d % 2 == 0 { g.edge(d / 2).1 } else { g.edge(d / 2).0 }).collect();
    Ok(RotationIter {
        n: g.n(),
        edges: g.edges().to_vec(),
        order,
        choices,
        pick: vec![0; g.n()],
        depth: 0,
        done: g.n() == 0,
        head,
        assigned: vec![false; g.n()],
        succ: vec![0; nd],
        seen: vec![false; nd],
    })
}

/// Every (rotation system, outer face) pair; the outer face is recorded as
/// the smallest dart on it.
pub fn enumerate_embeddings(g: &Graph, cap: usize) -> Result<impl Iterator<Item = RotationSystem>, EmbeddingError> {
    let iter = enumerate_rotation_systems(g, cap)?;
    Ok(iter.flat_map(|rs| {
        let fs = faces(&rs);
        let outers: Vec<usize> = fs.faces.iter().map(|f| *f.iter().min().unwrap()).collect();
        outers.into_iter().map(move |d| rs.clone().with_outer(d))
    }))
}

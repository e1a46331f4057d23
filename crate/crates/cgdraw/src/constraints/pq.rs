//! Consecutive-ones reduction.
//!
//! Constraint sets are grouped into overlap components (two sets overlap
//! when they intersect and neither contains the other). The block order of
//! an overlap component is unique up to reversal, so each component is
//! built incrementally and fails as soon as a set cannot be made
//! contiguous. Component unions form a laminar family; nesting them yields
//! a PQ-tree whose frontier is a valid ordering.

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsecutivityProblem {
    /// Elements are `0..universe`.
    pub universe: usize,
    pub constraints: Vec<Vec<usize>>,
    /// Element forced to the front of the ordering.
    pub pinned: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PqNode {
    Leaf(usize),
    /// Children in any order.
    P(Vec<PqNode>),
    /// Children in this order or its reverse.
    Q(Vec<PqNode>),
}

impl PqNode {
    fn frontier_into(&self, out: &mut Vec<usize>) {
        match self {
            PqNode::Leaf(x) => out.push(*x),
            PqNode::P(ch) | PqNode::Q(ch) => ch.iter().for_each(|c| c.frontier_into(out)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqTree {
    pub root: PqNode,
}

impl PqTree {
    pub fn frontier(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.frontier_into(&mut out);
        out
    }
}

/// True when every constraint occupies a contiguous stretch of `order`.
pub fn satisfies(order: &[usize], constraints: &[Vec<usize>]) -> bool {
    let mut pos = vec![usize::MAX; order.iter().max().map_or(0, |m| m + 1)];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    constraints.iter().all(|c| {
        if c.is_empty() {
            return true;
        }
        let mut ps: Vec<usize> = c.iter().map(|&x| pos[x]).collect();
        ps.sort_unstable();
        ps.dedup();
        ps.last().unwrap() - ps[0] + 1 == ps.len()
    })
}

/// A linear order of `0..universe` satisfying every constraint, with the
/// pinned element first; `None` when no such order exists.
pub fn pq_reduce(p: &ConsecutivityProblem) -> Option<Vec<usize>> {
    let tree = pq_tree(p)?;
    let mut order = tree.frontier();
    if let Some(x) = p.pinned {
        if order.last() == Some(&x) {
            order.reverse();
        }
        debug_assert_eq!(order.first(), Some(&x));
    }
    debug_assert!(satisfies(&order, &p.constraints));
    Some(order)
}

pub fn pq_tree(p: &ConsecutivityProblem) -> Option<PqTree> {
    let n = p.universe;
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut push = |mut s: Vec<usize>| {
        s.sort_unstable();
        s.dedup();
        assert!(s.iter().all(|&x| x < n), "constraint element outside the universe");
        if s.len() >= 2 && s.len() < n && !sets.contains(&s) {
            sets.push(s);
        }
    };
    for c in &p.constraints {
        push(c.clone());
    }
    if let Some(x) = p.pinned {
        assert!(x < n, "pinned element outside the universe");
        push((0..n).filter(|&y| y != x).collect());
    }

    let masks: Vec<Vec<bool>> = sets
        .iter()
        .map(|s| {
            let mut m = vec![false; n];
            s.iter().for_each(|&x| m[x] = true);
            m
        })
        .collect();
    let overlaps = |a: usize, b: usize| {
        let common = sets[a].iter().filter(|&&x| masks[b][x]).count();
        common > 0 && common < sets[a].len() && common < sets[b].len()
    };

    // overlap components, each listed in BFS order
    let k = sets.len();
    let mut seen = vec![false; k];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..k {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut order = vec![s];
        let mut head = 0;
        while head < order.len() {
            let a = order[head];
            head += 1;
            for b in 0..k {
                if !seen[b] && overlaps(a, b) {
                    seen[b] = true;
                    order.push(b);
                }
            }
        }
        comps.push(order);
    }

    let mut built: Vec<Component> = Vec::new();
    for order in &comps {
        built.push(Component::build(n, order.iter().map(|&s| &sets[s]))?);
    }
    built.sort_by(|a, b| b.union.len().cmp(&a.union.len()).then(a.sets.cmp(&b.sets)));

    // laminar nesting: parent = smallest earlier union containing this one
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); built.len()];
    let mut top = Vec::new();
    for c in 0..built.len() {
        let parent = (0..c).rev().find(|&q| built[c].union.iter().all(|&x| built[q].in_union[x]));
        match parent {
            Some(q) => children[q].push(c),
            None => top.push(c),
        }
    }
    let mut covered = vec![false; n];
    for &c in &top {
        built[c].union.iter().for_each(|&x| covered[x] = true);
    }
    let mut items: Vec<PqNode> = top.iter().map(|&c| assemble(&built, &children, c)).collect();
    items.extend((0..n).filter(|&x| !covered[x]).map(PqNode::Leaf));
    Some(PqTree { root: wrap_p(items) })
}

fn wrap_p(mut items: Vec<PqNode>) -> PqNode {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        PqNode::P(items)
    }
}

fn assemble(built: &[Component], children: &[Vec<usize>], c: usize) -> PqNode {
    let comp = &built[c];
    let mut per_block: Vec<Vec<usize>> = vec![Vec::new(); comp.blocks.len()];
    for &ch in &children[c] {
        let first = built[ch].union[0];
        let b = comp.blocks.iter().position(|blk| blk.contains(&first)).unwrap();
        per_block[b].push(ch);
    }
    let nodes: Vec<PqNode> = comp
        .blocks
        .iter()
        .zip(&per_block)
        .map(|(blk, kids)| {
            let mut taken = vec![false; blk.len()];
            let mut items: Vec<PqNode> = Vec::new();
            for &ch in kids {
                for (i, x) in blk.iter().enumerate() {
                    if built[ch].in_union[*x] {
                        taken[i] = true;
                    }
                }
                items.push(assemble(built, children, ch));
            }
            items.extend(blk.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&x, _)| PqNode::Leaf(x)));
            wrap_p(items)
        })
        .collect();
    if nodes.len() == 1 {
        nodes.into_iter().next().unwrap()
    } else {
        PqNode::Q(nodes)
    }
}

struct Component {
    /// Number of sets, used to order equal unions (a lone set is the outer one).
    sets: usize,
    union: Vec<usize>,
    in_union: Vec<bool>,
    blocks: Vec<Vec<usize>>,
}

impl Component {
    fn build<'a>(n: usize, mut sets: impl Iterator<Item = &'a Vec<usize>>) -> Option<Component> {
        let first = sets.next().unwrap();
        let mut blocks: Vec<Vec<usize>> = vec![first.clone()];
        let mut count = 1;
        let mut block_of = vec![usize::MAX; n];
        first.iter().for_each(|&x| block_of[x] = 0);
        for s in sets {
            count += 1;
            let mut in_s = vec![false; n];
            s.iter().for_each(|&x| in_s[x] = true);
            let fresh: Vec<usize> = s.iter().copied().filter(|&x| block_of[x] == usize::MAX).collect();
            let touched: Vec<usize> = s.iter().filter_map(|&x| (block_of[x] != usize::MAX).then_some(block_of[x])).collect();
            let i = *touched.iter().min()?;
            let j = *touched.iter().max()?;
            let full = |b: usize| blocks[b].iter().all(|&x| in_s[x]);
            if (i + 1..j).any(|b| !full(b)) {
                return None;
            }
            let last = blocks.len() - 1;
            // split a block into (outside S, inside S) or the reverse
            let split = |blk: &Vec<usize>, s_last: bool| -> Vec<Vec<usize>> {
                let (ins, outs): (Vec<usize>, Vec<usize>) = blk.iter().partition(|&&x| in_s[x]);
                let parts = if s_last { [outs, ins] } else { [ins, outs] };
                parts.into_iter().filter(|p| !p.is_empty()).collect()
            };
            let mut next: Vec<Vec<usize>> = Vec::new();
            if i == j {
                if fresh.is_empty() {
                    // contained in one block: no overlap with any placed set
                    continue;
                }
                if i == last {
                    next.extend(blocks[..i].iter().cloned());
                    next.extend(split(&blocks[i], true));
                    next.push(fresh);
                } else if i == 0 {
                    next.push(fresh);
                    next.extend(split(&blocks[0], false));
                    next.extend(blocks[1..].iter().cloned());
                } else {
                    return None;
                }
            } else {
                let (front, back) = if fresh.is_empty() {
                    (false, false)
                } else if j == last && full(j) {
                    (false, true)
                } else if i == 0 && full(i) {
                    (true, false)
                } else {
                    return None;
                };
                if front {
                    next.push(fresh.clone());
                }
                next.extend(blocks[..i].iter().cloned());
                next.extend(split(&blocks[i], true));
                next.extend(blocks[i + 1..j].iter().cloned());
                next.extend(split(&blocks[j], false));
                next.extend(blocks[j + 1..].iter().cloned());
                if back {
                    next.push(fresh);
                }
            }
            blocks = next;
            for (b, blk) in blocks.iter().enumerate() {
                blk.iter().for_each(|&x| block_of[x] = b);
            }
        }
        let mut union: Vec<usize> = blocks.concat();
        union.sort_unstable();
        let mut in_union = vec![false; n];
        union.iter().for_each(|&x| in_union[x] = true);
        Some(Component { sets: count, union, in_union, blocks })
    }
}

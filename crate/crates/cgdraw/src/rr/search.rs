//! Variable-embedding test for biconnected clustered graphs.
//!
//! For a reference edge ρ the SPQR-tree is processed bottom-up. At every P-
//! or R-node τ the skeleton embedding is fixed (R: one canonical rotation;
//! P: every order of the children allowed by the consecutivity constraints
//! of spined and full edges), and the children visible through S-chains are
//! flipped by a 2-SAT formula. What the rest of the graph can observe of an
//! embedded `pert(τ)` is summarized per cluster μ:
//!
//! * when μ has vertices on both sides of the poles (and no pole in μ): how
//!   H(τ,μ) meets the boundary faces f′ and f″ — traversable, sided left,
//!   sided right, or bisided;
//! * when both poles are in μ and μ-paths exist on both sides: whether the
//!   boundary path along f′ (resp. f″) consists of μ-vertices only.
//!
//! Each node keeps the embeddings whose summaries are maximal, up to a flip
//! around the poles; usually there is one. Everything else about the
//! embedding is either already decided inside `pert(τ)` or invisible from
//! outside. At the top, candidates are assembled into full embeddings and
//! confirmed with the fixed-embedding check, so a feasible answer always
//! carries a verified witness.

use rayon::prelude::*;

use crate::constraints::{pq_reduce, satisfies, two_sat_solve, ConsecutivityProblem, Lit, TwoSatProblem};
use crate::embedding::{faces, planar_embed, region_classes, FaceSet};
use crate::graph::{Graph, UnionFind};
use crate::model::ClusteredGraph;
use crate::spqr::{build_spqr, EdgeLink, NodeKind, SpqrTree, VisibleNode};

use super::flags::{node_facts, NodeFacts};
use super::pert::{classify_embedding, EmbeddingType, PertEmbedding};
use super::skeleton::SkeletonEmbedding;
use super::{check_with_faces, Condition, FeasibilityResult, RrError, RrViolation};

/// Largest P-node whose child orders are enumerated; bigger ones take the
/// single order produced by the PQ-reduction.
const MAX_ENUMERATED_PARALLEL: usize = 7;
/// Summary items beyond which targets are chosen greedily.
const MAX_EXACT_ITEMS: usize = 8;
const MAX_COMBOS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cls {
    T,
    L,
    R,
    B,
}

impl Cls {
    fn flip(self) -> Cls {
        match self {
            Cls::L => Cls::R,
            Cls::R => Cls::L,
            x => x,
        }
    }

    fn covers(self, other: Cls) -> bool {
        self == other || self == Cls::T || (other == Cls::B && self != Cls::B)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Sig {
    cls: Vec<Cls>,
    clean: Vec<(bool, bool)>,
}

impl Sig {
    fn flip(&self) -> Sig {
        Sig { cls: self.cls.iter().map(|c| c.flip()).collect(), clean: self.clean.iter().map(|&(l, r)| (r, l)).collect() }
    }

    fn covers(&self, o: &Sig) -> bool {
        self.cls.iter().zip(&o.cls).all(|(a, b)| a.covers(*b))
            && self.clean.iter().zip(&o.clean).all(|(a, b)| (a.0 || !b.0) && (a.1 || !b.1))
    }
}

#[derive(Clone, Debug)]
struct Cand {
    sig: Sig,
    sigma: usize,
    picks: Vec<usize>,
    flips: Vec<bool>,
}

struct NodeResult {
    sigmas: Vec<SkeletonEmbedding>,
    visible: Vec<VisibleNode>,
    tracked_cls: Vec<usize>,
    tracked_clean: Vec<usize>,
    cands: Vec<Cand>,
}

/// Where a visible child sits in the skeleton embedding.
struct Slot {
    edge: usize,
    /// Skeleton faces seen by the child's left and right side, unflipped.
    left: usize,
    right: usize,
}

struct Frame {
    fs: FaceSet,
    parent: usize,
    fl: usize,
    fr: usize,
    slots: Vec<Slot>,
    /// Child node behind each skeleton edge (`None` for the parent edge).
    edge_node: Vec<Option<usize>>,
}

impl Frame {
    fn sides(&self, k: usize) -> (usize, usize) {
        (self.fs.dart_face[2 * k], self.fs.dart_face[2 * k + 1])
    }
}

/// Enclosure data of one cluster in one skeleton embedding.
struct EnclosureReq {
    /// (visible child, skeleton face) whose facing side must be clean.
    inner: Vec<(usize, usize)>,
    left_ok: bool,
    left: Vec<(usize, usize)>,
    right_ok: bool,
    right: Vec<(usize, usize)>,
}

/// H(τ,μ) at skeleton level: fixed pieces, pieces choosing one of two faces,
/// and bisided pieces.
#[derive(Default)]
struct ConnModel {
    roots: Vec<usize>,
    fixed_roots: Vec<usize>,
    fixed_faces: Vec<usize>,
    sided: Vec<(usize, usize, usize)>,
    bisided: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Connected,
    Is(Cls),
}

type Clauses = Vec<(Lit, Lit)>;

fn lit(i: usize, flipped: bool) -> Lit {
    Lit { var: i, positive: flipped }
}

impl ConnModel {
    fn clauses(&self, target: Target, fl: usize, fr: usize) -> Option<Clauses> {
        let root = |f: usize| self.roots[f];
        let fc = &self.fixed_roots;
        let allowed: Box<dyn Fn(usize) -> bool> = match target {
            Target::Is(Cls::T) => {
                if fc.len() != 1 || root(fl) != fc[0] || root(fr) != fc[0] {
                    return None;
                }
                let r = fc[0];
                Box::new(move |f| root(f) == r)
            }
            Target::Is(side @ (Cls::L | Cls::R)) => {
                let (near, far) = if side == Cls::L { (fl, fr) } else { (fr, fl) };
                match fc.len() {
                    0 if self.bisided.is_empty() => Box::new(move |f| f == near),
                    1 if root(near) == fc[0] && root(far) != fc[0] => {
                        let r = fc[0];
                        Box::new(move |f| root(f) == r)
                    }
                    _ => return None,
                }
            }
            Target::Is(Cls::B) => {
                let (rl, rr) = (root(fl), root(fr));
                if rl == rr || fc.iter().any(|&r| r != rl && r != rr) {
                    return None;
                }
                Box::new(move |f| root(f) == rl || root(f) == rr)
            }
            Target::Connected => match fc.len() {
                0 => {
                    if !self.bisided.is_empty() {
                        return None;
                    }
                    return Some(self.same_face_clauses());
                }
                1 => {
                    let r = fc[0];
                    Box::new(move |f| root(f) == r)
                }
                _ => return None,
            },
        };
        if self.bisided.iter().any(|&(a, b)| !allowed(a) || !allowed(b)) {
            return None;
        }
        let mut out = Vec::new();
        for &(i, f0, f1) in &self.sided {
            match (allowed(f0), allowed(f1)) {
                (true, true) => {}
                (true, false) => out.push((lit(i, false), lit(i, false))),
                (false, true) => out.push((lit(i, true), lit(i, true))),
                (false, false) => return None,
            }
        }
        Some(out)
    }

    /// Every sided piece picks the same face.
    fn same_face_clauses(&self) -> Clauses {
        let mut out = Vec::new();
        for (x, &(i, a0, a1)) in self.sided.iter().enumerate() {
            for &(j, b0, b1) in &self.sided[x + 1..] {
                for (ai, fa) in [(false, a0), (true, a1)] {
                    for (bj, fb) in [(false, b0), (true, b1)] {
                        if fa != fb {
                            out.push((lit(i, !ai), lit(j, !bj)));
                        }
                    }
                }
            }
        }
        out
    }

    /// Class reached under a flip assignment; `None` when H(τ,μ) is not one of
    /// the four admissible shapes.
    fn achieved(&self, x: &[bool], fl: usize, fr: usize) -> Option<Cls> {
        let mut groups: Vec<usize> = self.fixed_faces.iter().map(|&f| self.roots[f]).collect();
        for &(i, f0, f1) in &self.sided {
            groups.push(self.roots[if x[i] { f1 } else { f0 }]);
        }
        for &(a, b) in &self.bisided {
            groups.push(self.roots[a]);
            groups.push(self.roots[b]);
        }
        groups.sort_unstable();
        groups.dedup();
        let (rl, rr) = (self.roots[fl], self.roots[fr]);
        match groups.as_slice() {
            [g] => match (*g == rl, *g == rr) {
                (true, true) => Some(Cls::T),
                (true, false) => Some(Cls::L),
                (false, true) => Some(Cls::R),
                _ => None,
            },
            [a, b] if (*a == rl && *b == rr) || (*a == rr && *b == rl) => Some(Cls::B),
            _ => None,
        }
    }
}

/// Clause forcing the side of visible child `i` that faces `face` to be clean.
fn clean_clauses(i: usize, face: usize, slot: &Slot, clean: (bool, bool), out: &mut Clauses) {
    // unflipped, the left side faces slot.left
    let (need_unflipped, need_flipped) = if face == slot.left { (clean.0, clean.1) } else { (clean.1, clean.0) };
    if !need_unflipped {
        out.push((lit(i, true), lit(i, true)));
    }
    if !need_flipped {
        out.push((lit(i, false), lit(i, false)));
    }
}

fn satisfiable(vars: usize, clauses: &Clauses) -> Option<Vec<bool>> {
    let mut p = TwoSatProblem::new(vars);
    for &(a, b) in clauses {
        p.clause(a, b);
    }
    two_sat_solve(&p)
}

struct Search<'a> {
    g: &'a Graph,
    cg: &'a ClusteredGraph,
    tree: &'a SpqrTree,
    facts: &'a [NodeFacts],
    results: Vec<Option<NodeResult>>,
    /// First node found without extensible embedding, with the cluster blamed.
    failure: Option<(usize, usize)>,
}

impl<'a> Search<'a> {
    fn new(cg: &'a ClusteredGraph, tree: &'a SpqrTree, facts: &'a [NodeFacts]) -> Search<'a> {
        Search { g: cg.graph(), cg, tree, facts, results: (0..tree.nodes().len()).map(|_| None).collect(), failure: None }
    }

    fn clusters(&self) -> std::ops::Range<usize> {
        1..self.cg.cluster_count()
    }

    fn pole_in(&self, node: usize, c: usize) -> bool {
        let (u, v) = self.tree.node(node).poles;
        self.cg.contains(c, u) || self.cg.contains(c, v)
    }

    fn top(&self) -> usize {
        self.tree.node(self.tree.root()).children[0]
    }

    /// Runs the bottom-up pass; false as soon as some node has no candidate.
    fn run(&mut self) -> bool {
        let top = self.top();
        for id in self.tree.post_order() {
            let kind = self.tree.node(id).kind;
            let ok = match kind {
                NodeKind::Q if id == self.tree.root() => continue,
                NodeKind::Q => {
                    self.q_node(id);
                    true
                }
                NodeKind::S if id != top => continue,
                _ => self.process(id),
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn tracked(&self, id: usize) -> (Vec<usize>, Vec<usize>) {
        let f = &self.facts[id];
        let (u, v) = self.tree.node(id).poles;
        let cls = self.clusters().filter(|&c| f.touched[c] && f.rest_touched[c] && !self.pole_in(id, c)).collect();
        let clean = self
            .clusters()
            .filter(|&c| self.cg.contains(c, u) && self.cg.contains(c, v) && f.spined[c] && f.rest_spined[c])
            .collect();
        (cls, clean)
    }

    fn q_node(&mut self, id: usize) {
        let (tracked_cls, tracked_clean) = self.tracked(id);
        let sig = Sig { cls: Vec::new(), clean: vec![(true, true); tracked_clean.len()] };
        self.results[id] = Some(NodeResult {
            sigmas: Vec::new(),
            visible: Vec::new(),
            tracked_cls,
            tracked_clean,
            cands: vec![Cand { sig, sigma: 0, picks: Vec::new(), flips: Vec::new() }],
        });
    }

    fn child_class(&self, node: usize, cand: &Cand, c: usize) -> Option<Cls> {
        let r = self.results[node].as_ref()?;
        r.tracked_cls.iter().position(|&x| x == c).map(|p| cand.sig.cls[p])
    }

    fn child_clean(&self, node: usize, cand: &Cand, c: usize) -> (bool, bool) {
        let r = self.results[node].as_ref().unwrap();
        match r.tracked_clean.iter().position(|&x| x == c) {
            Some(p) => cand.sig.clean[p],
            None => {
                let full = self.facts[node].full[c];
                (full, full)
            }
        }
    }

    fn sigmas(&self, id: usize, visible: &[VisibleNode]) -> Option<Vec<SkeletonEmbedding>> {
        let nd = self.tree.node(id);
        if nd.kind != NodeKind::P {
            return Some(vec![SkeletonEmbedding::canonical(self.tree, id)]);
        }
        let ks: Vec<usize> = (0..nd.skeleton.len()).filter(|&k| nd.skeleton[k].link != EdgeLink::Parent).collect();
        let child = |j: usize| match nd.skeleton[ks[j]].link {
            EdgeLink::Child(c) => c,
            _ => unreachable!("P-skeleton edges other than the parent are children"),
        };
        let mut constraints = Vec::new();
        for c in self.clusters() {
            let full: Vec<usize> = (0..ks.len()).filter(|&j| self.facts[child(j)].full[c]).collect();
            let spined: Vec<usize> =
                (0..ks.len()).filter(|&j| self.facts[child(j)].spined[c] && !self.facts[child(j)].full[c]).collect();
            if full.is_empty() {
                for (a, &x) in spined.iter().enumerate() {
                    for &y in &spined[a + 1..] {
                        constraints.push(vec![x, y]);
                    }
                }
            } else {
                constraints.push(full.clone());
                for &s in &spined {
                    let mut set = full.clone();
                    set.push(s);
                    constraints.push(set);
                }
            }
        }
        let problem = ConsecutivityProblem { universe: ks.len(), constraints, pinned: None };
        let base = pq_reduce(&problem)?;
        let orders: Vec<Vec<usize>> = if ks.len() <= MAX_ENUMERATED_PARALLEL {
            permutations(ks.len())
                .into_iter()
                .filter(|p| p[0] < p[p.len() - 1] && satisfies(p, &problem.constraints))
                .collect()
        } else {
            let mut p = problem.clone();
            p.constraints.extend(self.traversal_constraints(id, visible, &ks, &child));
            vec![pq_reduce(&p).unwrap_or(base)]
        };
        Some(
            orders
                .into_iter()
                .map(|o| SkeletonEmbedding::parallel(self.tree, id, &o.iter().map(|&j| ks[j]).collect::<Vec<_>>()))
                .collect(),
        )
    }

    /// The second constraint family for large P-nodes: traversable children
    /// consecutive, touched ones next to them.
    fn traversal_constraints(
        &self,
        id: usize,
        _visible: &[VisibleNode],
        ks: &[usize],
        child: &dyn Fn(usize) -> usize,
    ) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for c in self.clusters() {
            let trav: Vec<usize> = (0..ks.len()).filter(|&j| self.node_traversable(child(j), c)).collect();
            let touched: Vec<usize> = (0..ks.len())
                .filter(|&j| self.facts[child(j)].touched[c] && !trav.contains(&j) && !self.pole_in(id, c))
                .collect();
            if trav.is_empty() {
                for (a, &x) in touched.iter().enumerate() {
                    for &y in &touched[a + 1..] {
                        out.push(vec![x, y]);
                    }
                }
            } else {
                out.push(trav.clone());
                for &t in &touched {
                    let mut set = trav.clone();
                    set.push(t);
                    out.push(set);
                }
            }
        }
        out
    }

    fn node_traversable(&self, node: usize, c: usize) -> bool {
        if self.pole_in(node, c) {
            return true;
        }
        let nd = self.tree.node(node);
        if nd.kind == NodeKind::S {
            let inner = self.tree.skeleton_vertices(node).into_iter().any(|x| self.cg.contains(c, x));
            return inner || nd.children.iter().any(|&ch| self.node_traversable(ch, c));
        }
        match &self.results[node] {
            Some(r) => r.cands.iter().any(|cand| self.child_class(node, cand, c) == Some(Cls::T)),
            None => false,
        }
    }

    fn frame(&self, id: usize, sk: &SkeletonEmbedding, visible: &[VisibleNode]) -> Frame {
        let nd = self.tree.node(id);
        let fs = sk.faces();
        let parent = nd.skeleton.iter().position(|se| se.link == EdgeLink::Parent).expect("parent edge");
        let (u, v) = nd.poles;
        let fl = fs.dart_face[sk.dart(parent, u)];
        let fr = fs.dart_face[sk.dart(parent, v)];
        let edge_node: Vec<Option<usize>> = nd
            .skeleton
            .iter()
            .map(|se| match se.link {
                EdgeLink::Child(c) => Some(c),
                _ => None,
            })
            .collect();
        let edge_of = |c: usize| edge_node.iter().position(|&x| x == Some(c)).unwrap();
        // the child's left side faces the skeleton face of the dart from its
        // second pole to its first
        let side_faces = |sk: &SkeletonEmbedding, fs: &FaceSet, k: usize, poles: (usize, usize)| {
            (fs.dart_face[sk.dart(k, poles.1)], fs.dart_face[sk.dart(k, poles.0)])
        };
        let slots = visible
            .iter()
            .map(|vn| {
                let cp = self.tree.node(vn.node).poles;
                match vn.via {
                    None => {
                        let k = edge_of(vn.node);
                        let (left, right) = side_faces(sk, &fs, k, cp);
                        Slot { edge: k, left, right }
                    }
                    Some(s) => {
                        let k = edge_of(s);
                        let sp = self.tree.node(s).poles;
                        let (s_left, s_right) = side_faces(sk, &fs, k, sp);
                        let ssk = SkeletonEmbedding::canonical(self.tree, s);
                        let sfs = ssk.faces();
                        let snd = self.tree.node(s);
                        let sparent = snd.skeleton.iter().position(|se| se.link == EdgeLink::Parent).unwrap();
                        let s_lface = sfs.dart_face[ssk.dart(sparent, sp.0)];
                        let sk_edge = snd.skeleton.iter().position(|se| se.link == EdgeLink::Child(vn.node)).unwrap();
                        let (cl, cr) = side_faces(&ssk, &sfs, sk_edge, cp);
                        let map = |f: usize| if f == s_lface { s_left } else { s_right };
                        Slot { edge: k, left: map(cl), right: map(cr) }
                    }
                }
            })
            .collect();
        Frame { fs, parent, fl, fr, slots, edge_node }
    }

    /// Spined-cycle requirements for cluster `c`; `None` when some region
    /// bounded by spined edges holds a non-full edge.
    fn enclosure(&self, id: usize, sk: &SkeletonEmbedding, fr: &Frame, c: usize) -> Option<EnclosureReq> {
        let keep = |k: usize| match fr.edge_node[k] {
            None => self.facts[id].rest_spined[c],
            Some(n) => self.facts[n].spined[c],
        };
        let m = sk.rs.edges().len();
        let mut req =
            EnclosureReq { inner: Vec::new(), left_ok: true, left: Vec::new(), right_ok: true, right: Vec::new() };
        let any_kept = (0..m).any(|k| k != fr.parent && keep(k));
        let class = if any_kept { region_classes(&sk.rs, &fr.fs, keep) } else { Vec::new() };
        let exterior = |f: usize| !any_kept || class[f] == class[fr.fl] || class[f] == class[fr.fr];
        for k in (0..m).filter(|&k| k != fr.parent) {
            let node = fr.edge_node[k].unwrap();
            let (a, b) = fr.sides(k);
            if !keep(k) {
                if !exterior(a) && !self.facts[node].full[c] {
                    return None;
                }
                if a == fr.fl || b == fr.fl {
                    req.left_ok = false;
                }
                if a == fr.fr || b == fr.fr {
                    req.right_ok = false;
                }
                continue;
            }
            for (i, slot) in fr.slots.iter().enumerate().filter(|(_, s)| s.edge == k) {
                for f in [slot.left, slot.right] {
                    if !exterior(f) {
                        req.inner.push((i, f));
                    }
                    if f == fr.fl {
                        req.left.push((i, f));
                    }
                    if f == fr.fr {
                        req.right.push((i, f));
                    }
                }
            }
        }
        Some(req)
    }

    fn conn_model(&self, sk: &SkeletonEmbedding, fr: &Frame, visible: &[VisibleNode], picks: &[usize], c: usize) -> ConnModel {
        let nf = fr.fs.faces.len();
        let mut uf = UnionFind::new(nf);
        let mut fixed_sets: Vec<Vec<usize>> = Vec::new();
        for (li, &x) in sk.vertices.iter().enumerate() {
            if self.cg.contains(c, x) {
                fixed_sets.push(fr.fs.incidence[li].clone());
            }
        }
        for (k, node) in fr.edge_node.iter().enumerate() {
            let Some(s) = *node else { continue };
            if self.tree.node(s).kind != NodeKind::S {
                continue;
            }
            let sp = self.tree.node(s).poles;
            let joint = self.tree.skeleton_vertices(s).into_iter().any(|w| w != sp.0 && w != sp.1 && self.cg.contains(c, w));
            if joint {
                let (a, b) = fr.sides(k);
                fixed_sets.push(vec![a, b]);
            }
        }
        let mut model = ConnModel::default();
        for (i, vn) in visible.iter().enumerate() {
            let cand = &self.results[vn.node].as_ref().unwrap().cands[picks[i]];
            let slot = &fr.slots[i];
            match self.child_class(vn.node, cand, c) {
                Some(Cls::T) => fixed_sets.push(vec![slot.left, slot.right]),
                Some(Cls::L) => model.sided.push((i, slot.left, slot.right)),
                Some(Cls::R) => model.sided.push((i, slot.right, slot.left)),
                Some(Cls::B) => model.bisided.push((slot.left, slot.right)),
                None => {}
            }
        }
        for set in &fixed_sets {
            for w in set.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        model.roots = (0..nf).map(|f| uf.find(f)).collect();
        model.fixed_faces = fixed_sets.iter().map(|s| s[0]).collect();
        model.fixed_roots = model.fixed_faces.iter().map(|&f| model.roots[f]).collect();
        model.fixed_roots.sort_unstable();
        model.fixed_roots.dedup();
        model
    }

    fn process(&mut self, id: usize) -> bool {
        let nd = self.tree.node(id);
        let visible: Vec<VisibleNode> = if nd.kind == NodeKind::S {
            nd.children.iter().map(|&c| VisibleNode { node: c, via: None }).collect()
        } else {
            self.tree.visible_nodes(id).expect("P or R node")
        };
        let (tracked_cls, tracked_clean) = self.tracked(id);
        let Some(sigmas) = self.sigmas(id, &visible) else {
            self.fail(id, None);
            return false;
        };
        let counts: Vec<usize> = visible.iter().map(|vn| self.results[vn.node].as_ref().unwrap().cands.len()).collect();
        let mut cands: Vec<Cand> = Vec::new();
        let mut blame = None;
        for (si, sk) in sigmas.iter().enumerate() {
            let fr = self.frame(id, sk, &visible);
            let mut encl = Vec::new();
            let mut dead = false;
            for c in self.clusters() {
                match self.enclosure(id, sk, &fr, c) {
                    Some(r) => encl.push(r),
                    None => {
                        blame.get_or_insert(c);
                        dead = true;
                        break;
                    }
                }
            }
            if dead {
                continue;
            }
            for picks in combos(&counts) {
                self.solve_frame(id, si, sk, &fr, &visible, &picks, &encl, &tracked_cls, &tracked_clean, &mut cands, &mut blame);
            }
        }
        let ok = !cands.is_empty();
        if !ok {
            self.fail(id, blame);
        }
        #[cfg(debug_assertions)]
        let verify = ok && nd.edges.len() <= 40;
        self.results[id] = Some(NodeResult { sigmas, visible, tracked_cls, tracked_clean, cands });
        #[cfg(debug_assertions)]
        if verify {
            self.verify(id);
        }
        ok
    }

    fn fail(&mut self, id: usize, cluster: Option<usize>) {
        if self.failure.is_none() {
            self.failure = Some((id, cluster.unwrap_or(0)));
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn solve_frame(
        &self,
        id: usize,
        si: usize,
        sk: &SkeletonEmbedding,
        fr: &Frame,
        visible: &[VisibleNode],
        picks: &[usize],
        encl: &[EnclosureReq],
        tracked_cls: &[usize],
        tracked_clean: &[usize],
        out: &mut Vec<Cand>,
        blame: &mut Option<usize>,
    ) {
        let vars = visible.len();
        let cand_of = |i: usize| &self.results[visible[i].node].as_ref().unwrap().cands[picks[i]];
        let mut hard: Clauses = Vec::new();
        let mut models: Vec<Option<ConnModel>> = Vec::new();
        for c in self.clusters() {
            let req = &encl[c - 1];
            for &(i, f) in &req.inner {
                clean_clauses(i, f, &fr.slots[i], self.child_clean(visible[i].node, cand_of(i), c), &mut hard);
            }
            if !self.facts[id].touched[c] {
                models.push(None);
                continue;
            }
            let model = self.conn_model(sk, fr, visible, picks, c);
            if !tracked_cls.contains(&c) {
                match model.clauses(Target::Connected, fr.fl, fr.fr) {
                    Some(cl) => hard.extend(cl),
                    None => {
                        blame.get_or_insert(c);
                        return;
                    }
                }
            }
            models.push(Some(model));
        }
        if satisfiable(vars, &hard).is_none() {
            blame.get_or_insert(0);
            return;
        }
        // per tracked item, the clause sets of its options in preference order
        let mut items: Vec<Vec<Clauses>> = Vec::new();
        for &c in tracked_cls {
            let model = models[c - 1].as_ref().unwrap();
            let opts: Vec<Clauses> = [Cls::T, Cls::L, Cls::R, Cls::B]
                .into_iter()
                .filter_map(|t| model.clauses(Target::Is(t), fr.fl, fr.fr))
                .collect();
            if opts.is_empty() {
                blame.get_or_insert(c);
                return;
            }
            items.push(opts);
        }
        for &c in tracked_clean {
            let req = &encl[c - 1];
            let side = |ok: bool, list: &[(usize, usize)]| -> Option<Clauses> {
                if !ok {
                    return None;
                }
                let mut cl = Vec::new();
                for &(i, f) in list {
                    clean_clauses(i, f, &fr.slots[i], self.child_clean(visible[i].node, cand_of(i), c), &mut cl);
                }
                Some(cl)
            };
            let (l, r) = (side(req.left_ok, &req.left), side(req.right_ok, &req.right));
            let mut opts = Vec::new();
            if let (Some(a), Some(b)) = (&l, &r) {
                opts.push([a.clone(), b.clone()].concat());
            }
            opts.extend(l);
            opts.extend(r);
            opts.push(Vec::new());
            items.push(opts);
        }
        let exact = items.len() <= MAX_EXACT_ITEMS;
        let mut leaves = Vec::new();
        dfs(vars, &items, 0, &mut hard, exact, &mut leaves);
        for x in leaves {
            let mut sig = Sig { cls: Vec::new(), clean: Vec::new() };
            for &c in tracked_cls {
                let model = models[c - 1].as_ref().unwrap();
                sig.cls.push(model.achieved(&x, fr.fl, fr.fr).expect("targets keep H(τ,μ) admissible"));
            }
            for &c in tracked_clean {
                let req = &encl[c - 1];
                let holds = |ok: bool, list: &[(usize, usize)]| {
                    ok && list.iter().all(|&(i, f)| {
                        let (l, r) = self.child_clean(visible[i].node, cand_of(i), c);
                        let faces_left = (f == fr.slots[i].left) != x[i];
                        if faces_left {
                            l
                        } else {
                            r
                        }
                    })
                };
                sig.clean.push((holds(req.left_ok, &req.left), holds(req.right_ok, &req.right)));
            }
            insert_pareto(out, Cand { sig, sigma: si, picks: picks.to_vec(), flips: x });
        }
    }

    /// The embedding described by a candidate of `node`.
    fn materialize(&self, node: usize, cand: &Cand) -> PertEmbedding {
        let nd = self.tree.node(node);
        if nd.kind == NodeKind::Q {
            let e = nd.skeleton.iter().find_map(|se| if let EdgeLink::Real(e) = se.link { Some(e) } else { None });
            return PertEmbedding::edge(self.g, e.unwrap(), nd.poles);
        }
        let r = self.results[node].as_ref().unwrap();
        let sk = &r.sigmas[cand.sigma];
        let part = |i: usize| {
            let vn = r.visible[i];
            let cr = self.results[vn.node].as_ref().unwrap();
            let p = self.materialize(vn.node, &cr.cands[cand.picks[i]]);
            if cand.flips[i] {
                p.mirror()
            } else {
                p
            }
        };
        let parent = nd.skeleton.iter().position(|se| se.link == EdgeLink::Parent).unwrap();
        let parts: Vec<Option<PertEmbedding>> = nd
            .skeleton
            .iter()
            .map(|se| match se.link {
                EdgeLink::Child(c) if self.tree.node(c).kind == NodeKind::S => {
                    let snd = self.tree.node(c);
                    let ssk = SkeletonEmbedding::canonical(self.tree, c);
                    let sparent = snd.skeleton.iter().position(|x| x.link == EdgeLink::Parent).unwrap();
                    let sparts: Vec<Option<PertEmbedding>> = snd
                        .skeleton
                        .iter()
                        .map(|x| match x.link {
                            EdgeLink::Child(gc) => {
                                let i = r.visible.iter().position(|vn| vn.node == gc).unwrap();
                                Some(part(i))
                            }
                            _ => None,
                        })
                        .collect();
                    Some(PertEmbedding::compose(&ssk, sparent, snd.poles, &sparts))
                }
                EdgeLink::Child(c) => {
                    let i = r.visible.iter().position(|vn| vn.node == c).unwrap();
                    Some(part(i))
                }
                _ => None,
            })
            .collect();
        PertEmbedding::compose(sk, parent, nd.poles, &parts)
    }

    /// Recomputes every candidate summary from the assembled embedding.
    #[cfg(debug_assertions)]
    fn verify(&self, id: usize) {
        let r = self.results[id].as_ref().unwrap();
        for cand in &r.cands {
            let pert = self.materialize(id, cand);
            for (p, &c) in r.tracked_cls.iter().enumerate() {
                let ec = classify_embedding(self.g, &pert, self.cg.mask(c));
                let got = match (ec.kind, ec.left) {
                    (EmbeddingType::Traversable, _) => Some(Cls::T),
                    (EmbeddingType::Sided, true) => Some(Cls::L),
                    (EmbeddingType::Sided, false) => Some(Cls::R),
                    (EmbeddingType::Bisided, _) => Some(Cls::B),
                    _ => None,
                };
                assert_eq!(got, Some(cand.sig.cls[p]), "class of cluster {c} at node {id}");
            }
            for (p, &c) in r.tracked_clean.iter().enumerate() {
                let ec = classify_embedding(self.g, &pert, self.cg.mask(c));
                assert_eq!((ec.left_clean, ec.right_clean), cand.sig.clean[p], "clean sides of cluster {c} at node {id}");
            }
        }
    }

    /// Assembles the candidates of the root's child and confirms them.
    /// Closes each top candidate with the reference edge and checks both
    /// faces next to it as the outer face; the first failure explains a miss.
    fn finish(&self) -> Result<crate::embedding::RotationSystem, Option<RrViolation>> {
        let top = self.top();
        let r = self.results[top].as_ref().ok_or(None)?;
        let mut first = None;
        for cand in &r.cands {
            let pert = self.materialize(top, cand);
            let rs = pert.close(self.g, self.tree.reference_edge());
            let fs = faces(&rs);
            let rho = self.tree.reference_edge();
            for d in [2 * rho, 2 * rho + 1] {
                match check_with_faces(self.cg, &rs, &fs, d) {
                    None => return Ok(rs.with_outer(d)),
                    Some(v) => {
                        first.get_or_insert(v);
                    }
                }
            }
        }
        Err(first)
    }
}

fn dfs(vars: usize, items: &[Vec<Clauses>], depth: usize, acc: &mut Clauses, exact: bool, leaves: &mut Vec<Vec<bool>>) {
    if depth == items.len() {
        if let Some(x) = satisfiable(vars, acc) {
            leaves.push(x);
        }
        return;
    }
    for opt in &items[depth] {
        let before = acc.len();
        acc.extend_from_slice(opt);
        if satisfiable(vars, acc).is_some() {
            let found = leaves.len();
            dfs(vars, items, depth + 1, acc, exact, leaves);
            if !exact && leaves.len() > found {
                acc.truncate(before);
                return;
            }
        }
        acc.truncate(before);
    }
}

fn insert_pareto(set: &mut Vec<Cand>, cand: Cand) {
    let flipped = cand.sig.flip();
    if set.iter().any(|c| c.sig.covers(&cand.sig) || c.sig.covers(&flipped)) {
        return;
    }
    set.retain(|c| !(cand.sig.covers(&c.sig) || flipped.covers(&c.sig)));
    set.push(cand);
}

fn combos(counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![0; counts.len()]];
    if counts.iter().any(|&c| c == 0) {
        return Vec::new();
    }
    loop {
        let mut next = out.last().unwrap().clone();
        let mut i = 0;
        while i < counts.len() {
            next[i] += 1;
            if next[i] < counts[i] {
                break;
            }
            next[i] = 0;
            i += 1;
        }
        if i == counts.len() || out.len() >= MAX_COMBOS {
            return out;
        }
        out.push(next);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap(k - 1, a, out);
}

/// Tests one reference edge.
fn test_reference(cg: &ClusteredGraph, tree: &SpqrTree) -> Result<crate::embedding::RotationSystem, RrViolation> {
    let facts = node_facts(tree, cg);
    let mut s = Search::new(cg, tree, &facts);
    if s.run() {
        match s.finish() {
            Ok(rs) => return Ok(rs),
            Err(Some(v)) => return Err(v),
            Err(None) => {}
        }
    }
    let (node, mut c) = s.failure.unwrap_or((s.top(), 0));
    let nd = tree.node(node);
    if c == 0 {
        // no single cluster was singled out: name one that meets the node
        let inside = |v: usize| nd.edges.iter().any(|&e| tree.graph_edges()[e].0 == v || tree.graph_edges()[e].1 == v);
        c = (1..cg.cluster_count()).find(|&k| cg.members(k).iter().any(|&v| inside(v))).unwrap_or(0);
    }
    let names = cg.vertex_names();
    Err(RrViolation {
        cluster: cg.cluster_name(c).to_string(),
        condition: Condition::NotExtensible,
        location: format!("{}-node with poles {},{}", nd.kind.as_str(), names[nd.poles.0], names[nd.poles.1]),
    })
}

/// Decides whether a clustered graph with biconnected underlying graph has a
/// drawing whose only crossings are between region boundaries. Every edge is
/// tried as the reference edge, in canonical order; the first success wins.
pub fn test_rr_biconnected(cg: &ClusteredGraph) -> Result<FeasibilityResult, RrError> {
    let g = cg.graph();
    if g.m() < 2 || !g.is_biconnected() {
        return Err(RrError::NotBiconnected);
    }
    planar_embed(g).map_err(|_| RrError::NonPlanar)?;
    let outcomes: Vec<Option<Result<_, RrViolation>>> = (0..g.m())
        .into_par_iter()
        .map(|rho| {
            let tree = build_spqr(g, rho).ok()?;
            Some(test_reference(cg, &tree))
        })
        .collect();
    let mut first_violation = None;
    for o in outcomes.into_iter().flatten() {
        match o {
            Ok(rs) => return Ok(FeasibilityResult::feasible(rs)),
            Err(v) => {
                first_violation.get_or_insert(v);
            }
        }
    }
    Ok(FeasibilityResult::infeasible(first_violation.expect("at least one reference edge")))
}

/// Traversability per (node, cluster) for the flag table.
pub(crate) fn traversable_table(tree: &SpqrTree, cg: &ClusteredGraph, facts: &[NodeFacts]) -> Vec<Vec<bool>> {
    let mut s = Search::new(cg, tree, facts);
    s.run();
    (0..tree.nodes().len())
        .map(|id| {
            (0..cg.cluster_count())
                .map(|c| {
                    if c == 0 {
                        return false;
                    }
                    if s.node_traversable(id, c) {
                        return true;
                    }
                    // untracked clusters: look at the first embedding found
                    let nd = tree.node(id);
                    match (&s.results[id], nd.kind) {
                        (Some(r), NodeKind::P | NodeKind::R) if !r.cands.is_empty() && facts[id].touched[c] => {
                            let pert = s.materialize(id, &r.cands[0]);
                            classify_embedding(cg.graph(), &pert, cg.mask(c)).kind == EmbeddingType::Traversable
                        }
                        _ => false,
                    }
                })
                .collect()
        })
        .collect()
}

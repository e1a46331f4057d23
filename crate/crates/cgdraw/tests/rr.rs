mod common;

use cgdraw::embedding::{enclosed_violation_mask, enumerate_rotation_systems, faces, planar_embed, RotationSystem};
use cgdraw::generators::{gen, Family, FamilySpec};
use cgdraw::graph::Graph;
use cgdraw::model::{validate, Builder, ClusteredGraph};
use cgdraw::rr::{
    check_fixed_embedding, check_skeleton_extensible, classify_embedding, classify_flags, construct_00c, h_mu,
    oracle_test_rr, test_rr_biconnected, ClusterEdgeFlags, Condition, EmbeddingType, PertEmbedding, Property, RrError,
    SkeletonEmbedding, SpineKind,
};
use cgdraw::spqr::{build_spqr, EdgeLink, NodeKind};
use proptest::prelude::*;

fn build(vertices: &[(&str, &str)], clusters: &[&str], edges: &[(&str, &str)]) -> ClusteredGraph {
    let mut b = Builder::new();
    for c in clusters {
        b.cluster(*c, "root");
    }
    for &(v, c) in vertices {
        b.vertex_in(v, c);
    }
    for &(x, y) in edges {
        b.edge(x, y);
    }
    b.build().unwrap()
}

fn k4() -> ClusteredGraph {
    build(
        &[("a", "mu"), ("b", "mu"), ("c", "mu"), ("d", "root")],
        &["mu"],
        &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
    )
}

/// A dart of the face whose vertex set is exactly `names`.
fn face_dart(cg: &ClusteredGraph, rs: &RotationSystem, names: &[&str]) -> usize {
    let fs = faces(rs);
    let mut want: Vec<usize> = names.iter().map(|n| cg.vertex_index(n).unwrap()).collect();
    want.sort_unstable();
    (0..fs.faces.len())
        .find(|&f| {
            let mut vs = fs.vertices(rs, f);
            vs.sort_unstable();
            vs == want
        })
        .map(|f| fs.faces[f][0])
        .expect("face exists")
}

// ---------- H(μ) and the fixed-embedding check ----------

#[test]
fn h_mu_examples() {
    let c4 = build(
        &[("v1", "mu"), ("v2", "root"), ("v3", "mu"), ("v4", "root")],
        &["mu"],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
    );
    let h = h_mu(&planar_embed(c4.graph()).unwrap(), &c4, "mu").unwrap();
    assert_eq!(h.vertices.len(), 2);
    assert_eq!(h.graph.m(), 1);

    let path = build(&[("v1", "mu"), ("v2", "root"), ("v3", "mu")], &["mu"], &[("v1", "v2"), ("v2", "v3")]);
    let h = h_mu(&planar_embed(path.graph()).unwrap(), &path, "mu").unwrap();
    assert!(h.graph.is_connected());

    assert_eq!(h_mu(&planar_embed(path.graph()).unwrap(), &path, "nu"), Err(RrError::UnknownCluster("nu".into())));
}

#[test]
fn infeasible_parallel_splits_some_h_mu_in_every_embedding() {
    let cg = gen(&FamilySpec::new(Family::InfeasibleParallel, 0)).unwrap();
    let mut count = 0;
    for rs in enumerate_rotation_systems(cg.graph(), 8).unwrap() {
        count += 1;
        let split = ["mu1", "mu2", "mu3"].iter().any(|c| !h_mu(&rs, &cg, c).unwrap().graph.is_connected());
        assert!(split);
    }
    assert!(count > 0);
}

#[test]
fn k4_outer_face_decides() {
    let cg = k4();
    let rs = planar_embed(cg.graph()).unwrap();
    let ok = check_fixed_embedding(&cg, &rs, face_dart(&cg, &rs, &["a", "b", "d"])).unwrap();
    assert!(ok.is_feasible());
    let bad = check_fixed_embedding(&cg, &rs, face_dart(&cg, &rs, &["a", "b", "c"])).unwrap();
    let v = bad.violation.unwrap();
    assert_eq!(v.cluster, "mu");
    assert_eq!(v.condition, Condition::Enclosure);
    assert!(v.location.ends_with("encloses d"), "{}", v.location);
}

#[test]
fn root_only_clustering_is_always_feasible() {
    let cg = build(
        &[("a", "root"), ("b", "root"), ("c", "root"), ("d", "root")],
        &[],
        &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
    );
    for rs in enumerate_rotation_systems(cg.graph(), 8).unwrap() {
        for d in 0..rs.dart_count() {
            assert!(check_fixed_embedding(&cg, &rs, d).unwrap().is_feasible());
        }
    }
    assert!(oracle_test_rr(&cg, 8).unwrap().is_feasible());
    assert!(test_rr_biconnected(&cg).unwrap().is_feasible());
}

#[test]
fn mismatched_embedding_is_an_error() {
    let cg = k4();
    let other = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let rs = planar_embed(&other).unwrap();
    assert!(matches!(check_fixed_embedding(&cg, &rs, 0), Err(RrError::Mismatch(_))));
}

// ---------- flags ----------

fn flags_of(cg: &ClusteredGraph, reference: (&str, &str), node: impl Fn(&cgdraw::spqr::SpqrTree) -> usize, cluster: &str) -> ClusterEdgeFlags {
    let (a, b) = (cg.vertex_index(reference.0).unwrap(), cg.vertex_index(reference.1).unwrap());
    let tree = build_spqr(cg.graph(), cg.graph().find_edge(a, b).unwrap()).unwrap();
    let table = classify_flags(&tree, cg);
    table.get(node(&tree), cg.cluster_index(cluster).unwrap())
}

#[test]
fn flag_examples() {
    // triangle u, v, w; the Q-node of uv with u, v in μ
    let tri = build(&[("u", "mu"), ("v", "mu"), ("w", "root")], &["mu"], &[("u", "v"), ("v", "w"), ("u", "w")]);
    let uv = tri.graph().find_edge(tri.vertex_index("u").unwrap(), tri.vertex_index("v").unwrap()).unwrap();
    let q = |t: &cgdraw::spqr::SpqrTree| {
        (0..t.nodes().len()).find(|&i| t.node(i).kind == NodeKind::Q && t.node(i).skeleton[0].link == EdgeLink::Real(uv) && i != t.root()).unwrap()
    };
    let f = flags_of(&tri, ("u", "w"), q, "mu");
    assert!(f.spined && f.traversable && !f.touched);

    // theta u-x-v, u-y-v with reference uv: the S-node through x
    let theta = |x_in: &str, uv_in: &str| {
        build(
            &[("u", uv_in), ("v", uv_in), ("x", x_in), ("y", "root")],
            &["mu"],
            &[("u", "v"), ("u", "x"), ("x", "v"), ("u", "y"), ("y", "v")],
        )
    };
    let through_x = |cg: &ClusteredGraph| {
        let x = cg.vertex_index("x").unwrap();
        move |t: &cgdraw::spqr::SpqrTree| {
            (0..t.nodes().len())
                .find(|&i| t.node(i).kind == NodeKind::S && t.node(i).skeleton.iter().any(|s| s.ends.0 == x || s.ends.1 == x))
                .unwrap()
        }
    };
    let only_x = theta("mu", "root");
    let f = flags_of(&only_x, ("u", "v"), through_x(&only_x), "mu");
    assert!(f.touched && !f.full && !f.spined);
    let all = theta("mu", "mu");
    let f = flags_of(&all, ("u", "v"), through_x(&all), "mu");
    assert!(f.touched && f.full && f.spined && f.traversable);
}

// ---------- embedded pertinent graphs ----------

/// `paths` internal vertices joining poles `u` and `v`, drawn in the given
/// order, plus the reference edge uv. Returns the pertinent embedding.
fn parallel_paths(cg: &ClusteredGraph, paths: &[&str]) -> PertEmbedding {
    let g = cg.graph();
    let id = |s: &str| cg.vertex_index(s).unwrap();
    let (u, v) = (id("u"), id("v"));
    let dart = |a: usize, b: usize| {
        let e = g.find_edge(a, b).unwrap();
        if g.edge(e).0 == a { 2 * e } else { 2 * e + 1 }
    };
    let mut rotation = std::collections::BTreeMap::new();
    rotation.insert(u, paths.iter().map(|p| dart(u, id(p))).collect());
    rotation.insert(v, paths.iter().rev().map(|p| dart(v, id(p))).collect());
    let mut edges = Vec::new();
    for p in paths {
        rotation.insert(id(p), vec![dart(id(p), v), dart(id(p), u)]);
        edges.push(g.find_edge(u, id(p)).unwrap());
        edges.push(g.find_edge(id(p), v).unwrap());
    }
    edges.sort_unstable();
    PertEmbedding { poles: (u, v), rotation, edges }
}

fn fan(members: &[(&str, &str)], paths: &[&str]) -> ClusteredGraph {
    let mut vs = vec![("u", "root"), ("v", "root")];
    for &(x, c) in members {
        if let Some(slot) = vs.iter_mut().find(|s| s.0 == x) {
            slot.1 = c;
        } else {
            vs.push((x, c));
        }
    }
    for p in paths {
        if !vs.iter().any(|s| s.0 == *p) {
            vs.push((p, "root"));
        }
    }
    let mut es = vec![("u", "v")];
    for p in paths {
        es.push(("u", p));
        es.push((p, "v"));
    }
    build(&vs, &["mu"], &es)
}

#[test]
fn embedding_class_examples() {
    let mask = |cg: &ClusteredGraph| cg.mask(cg.cluster_index("mu").unwrap()).to_vec();

    let sided = fan(&[("x", "mu")], &["x", "y"]);
    let class = classify_embedding(sided.graph(), &parallel_paths(&sided, &["x", "y"]), &mask(&sided));
    assert_eq!(class.kind, EmbeddingType::Sided);
    assert_eq!(class.spine_kind, None);

    let full = fan(&[("u", "mu"), ("v", "mu"), ("x", "mu"), ("y", "mu")], &["x", "y"]);
    let class = classify_embedding(full.graph(), &parallel_paths(&full, &["x", "y"]), &mask(&full));
    assert_eq!(class.kind, EmbeddingType::Traversable);
    assert_eq!(class.spine_kind, Some(SpineKind::SideSpined));

    let bisided = fan(&[("x", "mu"), ("y", "mu")], &["x", "z", "y"]);
    let class = classify_embedding(bisided.graph(), &parallel_paths(&bisided, &["x", "z", "y"]), &mask(&bisided));
    assert_eq!(class.kind, EmbeddingType::Bisided);

    // the middle path alone touches neither boundary face
    let kernel = fan(&[("z", "mu")], &["x", "z", "y"]);
    let class = classify_embedding(kernel.graph(), &parallel_paths(&kernel, &["x", "z", "y"]), &mask(&kernel));
    assert_eq!(class.kind, EmbeddingType::Kernelized);

    let untouched = fan(&[], &["x", "y"]);
    let class = classify_embedding(untouched.graph(), &parallel_paths(&untouched, &["x", "y"]), &mask(&untouched));
    assert_eq!(class.kind, EmbeddingType::Untouched);
}

// ---------- skeleton extensibility ----------

/// W4 (hub h, rim r1..r4) plus o joined to r1, r2, r3; reference o-r1.
fn wheel_tree() -> (Graph, cgdraw::spqr::SpqrTree, usize) {
    // 0 = h, 1..=4 = rim, 5 = o
    let g = Graph::from_edges(
        6,
        &[(5, 1), (1, 2), (2, 3), (3, 4), (4, 1), (0, 1), (0, 2), (0, 3), (0, 4), (5, 2), (5, 3)],
    );
    let t = build_spqr(&g, 0).unwrap();
    let r = t.node(t.root()).children[0];
    assert_eq!(t.node(r).kind, NodeKind::R);
    (g, t, r)
}

#[test]
fn untouched_rigid_skeleton_passes() {
    let (_, t, r) = wheel_tree();
    let sk = SkeletonEmbedding::canonical(&t, r);
    let parent = t.node(r).skeleton.iter().position(|s| s.link == EdgeLink::Parent);
    let flags = vec![vec![ClusterEdgeFlags::default(); 2]; t.node(r).skeleton.len()];
    assert_eq!(check_skeleton_extensible(&sk, parent, &flags), Ok(()));
}

#[test]
fn spined_cycle_around_a_non_full_edge_fails_property_i() {
    let (_, t, r) = wheel_tree();
    let sk = SkeletonEmbedding::canonical(&t, r);
    let nd = t.node(r);
    let parent = nd.skeleton.iter().position(|s| s.link == EdgeLink::Parent);
    let rim = |e: (usize, usize)| (1..=4).contains(&e.0) && (1..=4).contains(&e.1);
    let spined = ClusterEdgeFlags { touched: false, full: true, spined: true, traversable: true };
    let touched = ClusterEdgeFlags { touched: true, full: false, spined: false, traversable: false };
    let flags: Vec<Vec<ClusterEdgeFlags>> = nd
        .skeleton
        .iter()
        .map(|s| {
            let f = if rim(s.ends) { spined } else if s.ends.0 == 0 || s.ends.1 == 0 { touched } else { ClusterEdgeFlags::default() };
            vec![ClusterEdgeFlags::default(), f]
        })
        .collect();
    let err = check_skeleton_extensible(&sk, parent, &flags).unwrap_err();
    assert_eq!((err.cluster, err.property), (1, Property::I));
}

#[test]
fn p_skeleton_touched_edges_must_flank_the_traversable_one() {
    // four parallel paths between u and v plus the reference edge
    let g = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1), (0, 5), (5, 1)]);
    let t = build_spqr(&g, 0).unwrap();
    let p = t.node(t.root()).children[0];
    let nd = t.node(p);
    assert_eq!(nd.kind, NodeKind::P);
    let parent = nd.skeleton.iter().position(|s| s.link == EdgeLink::Parent).unwrap();
    let children: Vec<usize> = (0..nd.skeleton.len()).filter(|&k| k != parent).collect();
    let (trav, a, b) = (children[0], children[1], children[2]);
    let mut flags = vec![vec![ClusterEdgeFlags::default(); 2]; nd.skeleton.len()];
    flags[trav][1] = ClusterEdgeFlags { touched: true, full: false, spined: false, traversable: true };
    for k in [a, b] {
        flags[k][1] = ClusterEdgeFlags { touched: true, full: false, spined: false, traversable: false };
    }
    let mut passing = 0;
    for order in permutations(&children) {
        let sk = SkeletonEmbedding::parallel(&t, p, &order);
        let got = check_skeleton_extensible(&sk, Some(parent), &flags).is_ok();
        // cyclic order: parent, then `order`
        let cyc: Vec<usize> = std::iter::once(parent).chain(order.iter().copied()).collect();
        let at = |k: usize| cyc.iter().position(|&x| x == k).unwrap();
        let next_to = |x: usize, y: usize| (at(x) + 1) % cyc.len() == at(y) || (at(y) + 1) % cyc.len() == at(x);
        assert_eq!(got, next_to(a, trav) && next_to(b, trav), "order {order:?}");
        passing += usize::from(got);
    }
    assert!(passing > 0);
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

// ---------- variable embedding ----------

#[test]
fn infeasible_fixtures_are_rejected() {
    for family in [Family::InfeasibleParallel, Family::InfeasibleTriconnected] {
        let cg = gen(&FamilySpec::new(family, 0)).unwrap();
        let r = test_rr_biconnected(&cg).unwrap();
        assert!(!r.is_feasible(), "{family}");
        assert!(r.violation.unwrap().cluster != "root");
        assert!(!oracle_test_rr(&cg, 8).unwrap().is_feasible(), "{family}");
    }
}

#[test]
fn k4_witness_keeps_d_outside() {
    let cg = k4();
    let r = test_rr_biconnected(&cg).unwrap();
    let rs = r.witness_embedding.expect("feasible");
    let outer = rs.outer_dart().unwrap();
    assert!(check_fixed_embedding(&cg, &rs, outer).unwrap().is_feasible());
    let fs = faces(&rs);
    let mu = cg.mask(cg.cluster_index("mu").unwrap());
    assert!(enclosed_violation_mask(&rs, &fs, fs.dart_face[outer], mu).is_none());
    assert!(fs.vertices(&rs, fs.dart_face[outer]).contains(&cg.vertex_index("d").unwrap()));
}

#[test]
fn preconditions_are_reported() {
    let path = build(&[("a", "root"), ("b", "root"), ("c", "root")], &[], &[("a", "b"), ("b", "c")]);
    assert_eq!(test_rr_biconnected(&path), Err(RrError::NotBiconnected));
    let mut b = Builder::new();
    let names = ["a", "b", "c", "d", "e"];
    for v in names {
        b.vertex(v);
    }
    for i in 0..5 {
        for j in i + 1..5 {
            b.edge(names[i], names[j]);
        }
    }
    let k5 = b.build().unwrap();
    assert_eq!(test_rr_biconnected(&k5), Err(RrError::NonPlanar));
    let big = gen(&FamilySpec::new(Family::SunFlat, 16)).unwrap();
    assert!(matches!(oracle_test_rr(&big, 8), Err(RrError::CapExceeded { .. })));
}

// ---------- the ⟨0,0,γ⟩ construction ----------

#[test]
fn single_cluster_has_no_rr_crossing() {
    let cg = k4();
    let rs = planar_embed(cg.graph()).unwrap();
    let plan = construct_00c(&cg, &rs, face_dart(&cg, &rs, &["a", "b", "d"])).unwrap();
    assert_eq!(plan.gamma, 0);
    let err = construct_00c(&cg, &rs, face_dart(&cg, &rs, &["a", "b", "c"])).unwrap_err();
    assert!(matches!(err, RrError::InfeasibleEmbedding(_)));
}

#[test]
fn alternating_clusters_on_c4_cross() {
    let cg = build(
        &[("v1", "mu"), ("v2", "nu"), ("v3", "mu"), ("v4", "nu")],
        &["mu", "nu"],
        &[("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v1")],
    );
    let rs = planar_embed(cg.graph()).unwrap();
    let plan = construct_00c(&cg, &rs, 0).unwrap();
    let (mu, nu) = (cg.cluster_index("mu").unwrap(), cg.cluster_index("nu").unwrap());
    assert!(plan.crossings(mu, nu) >= 1);
    assert_eq!(plan.crossings(mu, nu), plan.crossings(nu, mu));
    assert_eq!(plan.gamma, plan.ledger.values().sum::<usize>());
}

#[test]
fn sun_flat_gamma_is_quadratic() {
    for n in [8, 12, 16] {
        let cg = gen(&FamilySpec::new(Family::SunFlat, n)).unwrap();
        let r = test_rr_biconnected(&cg).unwrap();
        let rs = r.witness_embedding.expect("sun graphs are feasible");
        let plan = construct_00c(&cg, &rs, rs.outer_dart().unwrap()).unwrap();
        let h = n / 2;
        assert!(plan.gamma >= h * (h - 1) / 2, "n={n}: gamma {}", plan.gamma);
    }
}

/// Per pair of clusters, at most ⌊|f|/2⌋ − 1 crossings on each face f.
fn gamma_cap(cg: &ClusteredGraph, rs: &RotationSystem) -> usize {
    let fs = faces(rs);
    let per_pair: usize = (0..fs.faces.len())
        .map(|f| {
            let mut vs = fs.vertices(rs, f);
            vs.sort_unstable();
            vs.dedup();
            (vs.len() / 2).saturating_sub(1)
        })
        .sum();
    let k = cg.cluster_count() - 1;
    k * k.saturating_sub(1) / 2 * per_pair
}

// ---------- properties ----------

fn flags_are_coherent(cg: &ClusteredGraph, reference: usize) -> Result<(), TestCaseError> {
    let tree = build_spqr(cg.graph(), reference).unwrap();
    let table = classify_flags(&tree, cg);
    for node in 0..tree.nodes().len() {
        let internal = {
            let nd = tree.node(node);
            let mut vs: Vec<usize> = nd.edges.iter().flat_map(|&e| [cg.graph().edge(e).0, cg.graph().edge(e).1]).collect();
            vs.sort_unstable();
            vs.dedup();
            vs.iter().any(|&v| v != nd.poles.0 && v != nd.poles.1)
        };
        for c in 1..cg.cluster_count() {
            let f = table.get(node, c);
            prop_assert!(!f.full || f.spined, "full without spined");
            prop_assert!(!f.spined || f.traversable, "spined without traversable");
            prop_assert!(!(f.full && internal) || f.touched, "full without touched");
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn flag_coherence(seed in any::<u64>(), n in 4usize..=9) {
        let cg = common::random_case(seed, n);
        let m = cg.edge_count();
        flags_are_coherent(&cg, (seed % m as u64) as usize)?;
    }

    #[test]
    fn renaming_never_changes_the_verdict(seed in any::<u64>(), n in 4usize..=8) {
        let cg = common::random_case(seed, n);
        let renamed = cg.renamed(|v| format!("q{}", v.len() * 7 % 3) + &v.chars().rev().collect::<String>(), |c| format!("z_{c}"));
        let a = test_rr_biconnected(&cg).unwrap();
        let b = test_rr_biconnected(&renamed).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn feasible_answers_are_self_consistent(seed in any::<u64>(), n in 4usize..=9) {
        let cg = common::random_case(seed, n);
        let r = test_rr_biconnected(&cg).unwrap();
        if let Some(rs) = r.witness_embedding {
            let outer = rs.outer_dart().unwrap();
            prop_assert!(check_fixed_embedding(&cg, &rs, outer).unwrap().is_feasible());
            let plan = construct_00c(&cg, &rs, outer).unwrap();
            prop_assert_eq!(plan.gamma, plan.ledger.values().sum::<usize>());
            prop_assert!(plan.gamma <= gamma_cap(&cg, &rs));
            for (&(a, b), &k) in &plan.ledger {
                prop_assert!(a < b);
                if !cg.unrelated(a, b) {
                    prop_assert_eq!(k, 0);
                }
            }
        } else {
            prop_assert!(r.violation.is_some());
        }
    }

    #[test]
    fn cplanar_instances_are_feasible(seed in any::<u64>(), n in 4usize..=14) {
        let cg = gen(&FamilySpec::new(Family::CplanarRandom, n).with_seed(seed)).unwrap();
        prop_assert!(validate(&cg).is_biconnected);
        prop_assert!(test_rr_biconnected(&cg).unwrap().is_feasible());
    }
}

//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cgdraw::constraints::{pq_reduce, satisfies, two_sat_solve, ConsecutivityProblem, Lit, TwoSatProblem};
use cgdraw::draw::{construct_0b0, construct_a00, count_crossings_geometric, recount, Totals};
use cgdraw::embedding::enumerate_rotation_systems;
use cgdraw::generators::{gen, random_biconnected_planar, Family, FamilySpec};
use cgdraw::graph::Graph;
use cgdraw::model::ClusteredGraph;
use cgdraw::rr::{check_fixed_embedding, construct_00c, oracle_test_rr, test_rr_biconnected};
use cgdraw::spqr::build_spqr;
use common::{brute_pq, drawing, recompose, truth_table, BAND, COMB, COMB3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("took {:.1?}, budget {:.0?}", t, budget))
}

fn family(f: Family, n: usize) -> ClusteredGraph {
    gen(&FamilySpec::new(f, n)).expect("generator accepts the size")
}

fn infeasible_fixtures() -> Result<String, String> {
    let mut notes = Vec::new();
    for f in [Family::InfeasibleParallel, Family::InfeasibleTriconnected] {
        let cg = family(f, 0);
        let start = Instant::now();
        let r = test_rr_biconnected(&cg).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(1))?;
        ensure(!r.is_feasible(), || format!("{f} reported feasible"))?;
        notes.push(format!("{f} infeasible in {:.1?}", start.elapsed()));
    }
    Ok(notes.join(", "))
}

/// Smallest relabeled edge list: equal for isomorphic graphs.
fn canonical(g: &Graph) -> Vec<(usize, usize)> {
    common::permutations(g.n())
        .into_iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap()
}

/// Pairwise non-isomorphic biconnected planar graphs, 4 ≤ n ≤ 7.
fn graph_library() -> Vec<Graph> {
    let quota = [(4, 3), (5, 10), (6, 21), (7, 30)];
    let mut out = Vec::new();
    for (n, want) in quota {
        let mut seen = BTreeSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..4000 {
            if seen.len() == want {
                break;
            }
            let thin = rng.gen_range(0.0..0.95);
            let (g, _) = random_biconnected_planar(n, thin, &mut rng);
            if seen.insert(canonical(&g)) {
                out.push(g);
            }
        }
    }
    out
}

fn oracle_equivalence() -> Result<String, String> {
    let start = Instant::now();
    let graphs = graph_library();
    ensure(graphs.len() >= 60, || format!("library has only {} graphs", graphs.len()))?;
    let mut cases = 0;
    let mut feasible = 0;
    let mut bad = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for j in 0..8 {
            let cg = if j % 2 == 0 { common::with_clusters(g, &mut rng, 2 + j % 3, 0.3) } else { common::with_clusters(g, &mut rng, 3 + j % 3, 0.0) };
            let fast = test_rr_biconnected(&cg).map_err(|e| e.to_string())?;
            let slow = oracle_test_rr(&cg, 8).map_err(|e| e.to_string())?;
            if let Some(rs) = &fast.witness_embedding {
                let ok = check_fixed_embedding(&cg, rs, rs.outer_dart().unwrap()).map_err(|e| e.to_string())?;
                ensure(ok.is_feasible(), || format!("graph {i} clustering {j}: witness fails the fixed check"))?;
            }
            cases += 1;
            feasible += usize::from(slow.is_feasible());
            if fast.verdict != slow.verdict {
                bad.push(format!("graph {i} clustering {j}"));
            }
        }
    }
    ensure(bad.is_empty(), || format!("{} disagreements, first: {}", bad.len(), bad[0]))?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{} graphs x 8 clusterings = {cases} cases ({feasible} feasible), 0 disagreements in {:.1?}",
        graphs.len(),
        start.elapsed()
    ))
}

fn a00_bounds() -> Result<String, String> {
    let start = Instant::now();
    let mut instances: Vec<ClusteredGraph> = (0..150).map(|s| common::random_case(s, 4 + (s % 7) as usize)).collect();
    instances.push(family(Family::K5MinusDe, 14));
    instances.push(family(Family::NestedTrianglesNonflat, 12));
    instances.push(family(Family::AbcSum, 2));
    for (i, cg) in instances.iter().enumerate() {
        let (d, report) = construct_a00(cg);
        let geo = count_crossings_geometric(&d).map_err(|e| e.to_string())?;
        ensure(geo.beta == 0 && geo.gamma == 0, || format!("instance {i}: beta {} gamma {}", geo.beta, geo.gamma))?;
        ensure(geo.alpha == report.alpha, || format!("instance {i}: claimed {} counted {}", report.alpha, geo.alpha))?;
        let m = cg.edge_count();
        ensure(2 * geo.alpha <= m * m, || format!("instance {i}: alpha {} above |E|^2/2", geo.alpha))?;
    }
    let alphas: Vec<usize> = [40, 80, 160].iter().map(|&n| construct_a00(&family(Family::MatchingK5, n)).1.alpha).collect();
    let ratios: Vec<f64> = alphas.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    ensure(ratios.iter().all(|r| (3.0..=5.0).contains(r)), || format!("alphas {alphas:?}, ratios {ratios:.2?}"))?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} instances geometric-clean; matching-k5 alphas {alphas:?}, ratios {ratios:.2?}", instances.len()))
}

fn nested_triangles_beta() -> Result<String, String> {
    let start = Instant::now();
    let mut seen = Vec::new();
    for n in [30, 60, 120] {
        let cg = family(Family::NestedTrianglesFlat, n);
        let (plan, report) = construct_0b0(&cg).map_err(|e| e.to_string())?;
        let beta = report.beta;
        ensure(6 * beta >= n && beta <= 3 * n, || format!("n={n}: beta {beta} outside [n/6, 3n]"))?;
        let in_tree = plan.tree.graph_edge_mask(cg.edge_count());
        let closed: usize = cg
            .graph()
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, _)| !in_tree[e])
            .map(|(_, &(a, b))| (1..cg.cluster_count()).filter(|&c| cg.contains(c, a) && cg.contains(c, b)).count())
            .sum();
        ensure(beta == closed, || format!("n={n}: beta {beta}, closed form {closed}"))?;
        let again = recount(&plan.to_json(&cg)).map_err(|e| e.to_string())?;
        ensure(again == Totals { alpha: 0, beta, gamma: 0 }, || format!("n={n}: recount {again:?}"))?;
        seen.push(beta);
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("beta {seen:?} for n = 30, 60, 120; closed form exact"))
}

/// Fixed constant for the quadratic upper bound on γ.
const GAMMA_C: usize = 1;

fn sun_gamma() -> Result<String, String> {
    let start = Instant::now();
    let mut seen = Vec::new();
    for n in [16, 32, 64] {
        let cg = family(Family::SunFlat, n);
        let r = test_rr_biconnected(&cg).map_err(|e| e.to_string())?;
        let rs = r.witness_embedding.ok_or_else(|| format!("n={n}: no witness embedding"))?;
        let plan = construct_00c(&cg, &rs, rs.outer_dart().unwrap()).map_err(|e| e.to_string())?;
        let h = n / 2;
        ensure(plan.gamma >= h * (h - 1) / 2, || format!("n={n}: gamma {} below {}", plan.gamma, h * (h - 1) / 2))?;
        ensure(plan.gamma <= GAMMA_C * n * n, || format!("n={n}: gamma {} above {GAMMA_C}n^2", plan.gamma))?;
        seen.push(plan.gamma);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("gamma {seen:?} for n = 16, 32, 64 (lower bound met, <= {GAMMA_C}n^2)"))
}

fn counting_rules() -> Result<String, String> {
    let count = |d| count_crossings_geometric(&d).map_err(|e| e.to_string());
    let five = count(drawing(&[(0.5, 2.0), (6.0, 2.0)], &[(0, 1)], &COMB3, &[]))?;
    ensure(five.beta == 2, || format!("5 boundary hits gave {} er-crossings", five.beta))?;
    let three = count(drawing(&[(0.5, 0.5), (-0.5, 2.0)], &[], &COMB, &BAND))?;
    ensure(three.gamma == 2, || format!("3-piece difference gave {} rr-crossings", three.gamma))?;
    let once = count(drawing(&[(0.5, 0.5), (6.0, 0.5)], &[(0, 1)], &COMB, &[]))?;
    ensure(once.beta == 0, || format!("single piercing gave {}", once.beta))?;
    Ok("5 hits -> 2, 3 pieces -> 2, single piercing -> 0".into())
}

fn random_pq(rng: &mut ChaCha8Rng) -> ConsecutivityProblem {
    let universe = rng.gen_range(2..=8);
    let constraints = (0..rng.gen_range(0..6))
        .map(|_| {
            let set: BTreeSet<usize> = (0..rng.gen_range(1..=universe)).map(|_| rng.gen_range(0..universe)).collect();
            set.into_iter().collect()
        })
        .collect();
    let pinned = rng.gen_bool(0.3).then(|| rng.gen_range(0..universe));
    ConsecutivityProblem { universe, constraints, pinned }
}

fn random_sat(rng: &mut ChaCha8Rng) -> TwoSatProblem {
    let vars = rng.gen_range(1..=10);
    let lit = |rng: &mut ChaCha8Rng| Lit { var: rng.gen_range(0..vars), positive: rng.gen_bool(0.5) };
    let clauses = (0..rng.gen_range(0..3 * vars)).map(|_| (lit(rng), lit(rng))).collect();
    TwoSatProblem { vars, clauses }
}

fn structural_suites() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let n = rng.gen_range(3..=12);
        let thin = rng.gen_range(0.0..0.9);
        let (g, _) = random_biconnected_planar(n, thin, &mut rng);
        let t = build_spqr(&g, rng.gen_range(0..g.m())).map_err(|e| e.to_string())?;
        ensure(recompose(&t) == vec![1; g.m()], || format!("SPQR case {i} does not recompose"))?;
    }
    for i in 0..200 {
        let p = random_pq(&mut rng);
        let got = pq_reduce(&p);
        ensure(got.is_some() == brute_pq(&p), || format!("PQ case {i} disagrees"))?;
        if let Some(o) = got {
            ensure(satisfies(&o, &p.constraints), || format!("PQ case {i}: bad order"))?;
        }
    }
    for i in 0..500 {
        let p = random_sat(&mut rng);
        let got = two_sat_solve(&p);
        ensure(got.is_some() == truth_table(&p), || format!("2-SAT case {i} disagrees"))?;
        if let Some(a) = got {
            ensure(p.is_satisfied_by(&a), || format!("2-SAT case {i}: bad assignment"))?;
        }
    }
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let counts = [&c4, &k4].map(|g| enumerate_rotation_systems(g, 8).map(|it| it.count()).unwrap_or(0));
    ensure(counts == [1, 2], || format!("rotation systems C4/K4: {counts:?}"))?;
    Ok("SPQR 500, PQ 200, 2-SAT 500 agree with their oracles; C4 -> 1, K4 -> 2 rotation systems".into())
}

fn main() -> ExitCode {
    let checks: [(&str, Check); 7] = [
        ("infeasible fixtures", infeasible_fixtures),
        ("oracle equivalence", oracle_equivalence),
        ("edge-edge bounds", a00_bounds),
        ("edge-region flat c-connected", nested_triangles_beta),
        ("region-region quadratic growth", sun_gamma),
        ("counting rules", counting_rules),
        ("structural suites", structural_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

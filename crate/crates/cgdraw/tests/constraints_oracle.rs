mod common;

use cgdraw::constraints::{pq_reduce, satisfies, two_sat_solve, ConsecutivityProblem, Lit, TwoSatProblem};
use common::{brute_pq, truth_table};
use proptest::prelude::*;

fn pq_problem() -> impl Strategy<Value = ConsecutivityProblem> {
    (2usize..=7).prop_flat_map(|n| {
        let set = proptest::collection::btree_set(0..n, 1..=n).prop_map(|s| s.into_iter().collect::<Vec<_>>());
        (Just(n), proptest::collection::vec(set, 0..6), proptest::option::of(0..n)).prop_map(|(universe, constraints, pinned)| {
            ConsecutivityProblem { universe, constraints, pinned }
        })
    })
}

fn sat_problem() -> impl Strategy<Value = TwoSatProblem> {
    (1usize..=10).prop_flat_map(|vars| {
        let lit = (0..vars, any::<bool>()).prop_map(|(var, positive)| Lit { var, positive });
        proptest::collection::vec((lit.clone(), lit), 0..30).prop_map(move |clauses| TwoSatProblem { vars, clauses })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn pq_matches_permutation_oracle(p in pq_problem()) {
        let got = pq_reduce(&p);
        prop_assert_eq!(got.is_some(), brute_pq(&p));
        if let Some(o) = got {
            prop_assert!(satisfies(&o, &p.constraints));
            if let Some(x) = p.pinned {
                prop_assert_eq!(o[0], x);
            }
        }
    }

    #[test]
    fn pq_feasibility_ignores_constraint_order(p in pq_problem(), seed in any::<u64>()) {
        let mut q = p.clone();
        let k = q.constraints.len();
        if k > 1 {
            q.constraints.rotate_left((seed as usize) % k);
            q.constraints.reverse();
        }
        prop_assert_eq!(pq_reduce(&p).is_some(), pq_reduce(&q).is_some());
    }

    #[test]
    fn two_sat_matches_truth_table(p in sat_problem()) {
        match two_sat_solve(&p) {
            Some(a) => prop_assert!(p.is_satisfied_by(&a)),
            None => prop_assert!(!truth_table(&p)),
        }
        prop_assert_eq!(two_sat_solve(&p).is_some(), truth_table(&p));
    }
}

use mclp::generator::{generate, Distribution, GeneratorConfig};
use mclp::solvers::{brute_force_solve, dp_solve, greedy_solve, preprocess};
use mclp::{build_coverage, marginal_benefit, validate_solution, BudgetMode, Instance, SolverConfig};
use proptest::prelude::*;

fn small_instance(seed: u64, n: usize, m: usize, p: usize, clustered: bool, exactly: bool) -> Instance {
    generate(&GeneratorConfig {
        n,
        m,
        budget: Some(p),
        budget_mode: if exactly { BudgetMode::Exactly } else { BudgetMode::AtMost },
        radius: 25.0,
        distribution: if clustered { Distribution::Clustered } else { Distribution::Uniform },
        seed,
        ..GeneratorConfig::default()
    })
    .unwrap()
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1usize..=12, 1usize..=10, any::<bool>(), any::<bool>())
        .prop_flat_map(|(seed, n, m, c, e)| (Just((seed, n, m, c, e)), 1..=m.min(4)))
        .prop_map(|((seed, n, m, c, e), p)| small_instance(seed, n, m, p, c, e))
}

#[test]
fn random_ten_by_eight_matches_enumeration() {
    for seed in 0..10 {
        let inst = small_instance(seed, 10, 8, 3, seed % 2 == 0, false);
        let cov = build_coverage(&inst);
        let (dp, stats) = dp_solve(&inst, &cov, &SolverConfig::default());
        let oracle = brute_force_solve(&inst, &cov).unwrap();
        assert!(stats.exact);
        assert_eq!(dp.objective, oracle.objective, "seed {seed}");
        assert!(validate_solution(&dp, &inst, &cov).is_clean());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_equals_oracle_and_dominates_greedy(inst in arb_instance()) {
        let cov = build_coverage(&inst);
        let (dp, stats) = dp_solve(&inst, &cov, &SolverConfig::default());
        let oracle = brute_force_solve(&inst, &cov).unwrap();
        let (greedy, _) = greedy_solve(&inst, &cov);
        prop_assert!(stats.exact);
        prop_assert_eq!(dp.objective, oracle.objective);
        prop_assert!(dp.objective >= greedy.objective);
        prop_assert!(greedy.objective >= (1.0 - (-1.0f64).exp()) * oracle.objective);
        for sol in [&dp, &oracle, &greedy] {
            prop_assert!(validate_solution(sol, &inst, &cov).is_clean());
        }
    }

    #[test]
    fn preprocessing_keeps_the_optimum(inst in arb_instance()) {
        let cov = build_coverage(&inst);
        let reduced = preprocess(&cov);
        let raw = brute_force_solve(&inst, &cov).unwrap().objective;
        let (on_reduced, _) = dp_solve(&inst, &reduced.coverage, &SolverConfig { enable_preprocess: false, ..SolverConfig::default() });
        prop_assert_eq!(on_reduced.objective, raw);
    }

    #[test]
    fn optimum_grows_with_budget(seed: u64, n in 1usize..=12, m in 2usize..=8) {
        let inst = small_instance(seed, n, m, 1, false, false);
        let mut last = 0.0;
        for p in 1..=m {
            let at_p = inst.with_budget(p).unwrap();
            let (sol, _) = dp_solve(&at_p, &build_coverage(&at_p), &SolverConfig::default());
            prop_assert!(sol.objective >= last);
            last = sol.objective;
        }
    }

    #[test]
    fn optimum_grows_with_radius(seed: u64, n in 1usize..=12, m in 1usize..=8) {
        let inst = small_instance(seed, n, m, m.min(3), true, false);
        let mut last = 0.0;
        for r in [5.0, 10.0, 20.0, 40.0, 80.0] {
            let at_r = inst.with_radius(r).unwrap();
            let (sol, _) = dp_solve(&at_r, &build_coverage(&at_r), &SolverConfig::default());
            prop_assert!(sol.objective >= last);
            last = sol.objective;
        }
    }

    #[test]
    fn greedy_gains_never_increase(seed: u64, n in 1usize..=40, m in 1usize..=15) {
        let inst = small_instance(seed, n, m, m, false, false);
        let cov = build_coverage(&inst);
        let (sol, _) = greedy_solve(&inst, &cov);
        // replay the greedy picks in selection order by recomputing the argmax
        let mut mask = cov.empty_mask();
        let mut remaining: Vec<usize> = sol.selected.clone();
        let mut last = f64::INFINITY;
        while !remaining.is_empty() {
            let (k, gain) = remaining
                .iter()
                .enumerate()
                .map(|(k, &j)| (k, marginal_benefit(j, &mask, &cov, &inst)))
                .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
            prop_assert!(gain <= last);
            last = gain;
            mask.union_with(&cov.facility_sets[remaining.remove(k)]);
        }
    }

    #[test]
    fn solution_fields_recompute_exactly(inst in arb_instance()) {
        let cov = build_coverage(&inst);
        let (sol, _) = dp_solve(&inst, &cov, &SolverConfig::default());
        let again = mclp::Solution::from_selection(sol.selected.clone(), &inst, &cov, "dp");
        prop_assert_eq!(again, sol);
    }
}

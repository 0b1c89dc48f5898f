use crate::coverage::CoverageStructure;
use crate::error::{Error, Result};
use crate::model::{BudgetMode, Instance};
use crate::solution::Solution;

/// Largest number of subsets the exhaustive solver will enumerate.
pub const COMBINATION_CAP: u128 = 10_000_000;

/// Number of subsets of `m` facilities the exhaustive solver visits.
pub fn subset_count(m: usize, budget: usize, mode: BudgetMode) -> u128 {
    let sizes = match mode {
        BudgetMode::AtMost => 0..=budget,
        BudgetMode::Exactly => budget..=budget,
    };
    sizes.map(|k| binomial(m, k)).fold(0u128, |a, b| a.saturating_add(b))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Enumerates every admissible facility subset and returns the best one.
///
/// Ties go to the lexicographically smallest ascending id list. Coverage is
/// evaluated through the per-demand neighbor lists rather than the
/// facility bitsets, so this stays independent of the DP's mask arithmetic.
pub fn brute_force_solve(instance: &Instance, coverage: &CoverageStructure) -> Result<Solution> {
    let m = coverage.m();
    let budget = instance.budget().min(m);
    let subsets = subset_count(m, budget, instance.budget_mode());
    if subsets > COMBINATION_CAP {
        return Err(Error::CombinationCap {
            subsets,
            cap: COMBINATION_CAP,
        });
    }
    let sizes = match instance.budget_mode() {
        BudgetMode::AtMost => 0..=budget,
        BudgetMode::Exactly => budget..=budget,
    };

    let mut open = vec![false; m];
    let mut best: Option<(f64, Vec<usize>)> = None;
    for k in sizes {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            for &j in &combo {
                open[j] = true;
            }
            let value: f64 = coverage
                .demand_neighbors
                .iter()
                .enumerate()
                .filter(|(_, near)| near.iter().any(|&j| open[j]))
                .map(|(i, _)| instance.weight(i))
                .sum();
            for &j in &combo {
                open[j] = false;
            }
            let better = match &best {
                None => true,
                Some((v, ids)) => value > *v || (value == *v && combo < *ids),
            };
            if better {
                best = Some((value, combo.clone()));
            }
            if !next_combination(&mut combo, m) {
                break;
            }
        }
    }

    let (_, selected) = best.expect("at least one subset size is enumerated");
    Ok(Solution::from_selection(selected, instance, coverage, "brute"))
}

/// Advances `combo` to the next k-subset of `0..m` in lexicographic order.
fn next_combination(combo: &mut [usize], m: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < m - k + i {
            combo[i] += 1;
            for t in i + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

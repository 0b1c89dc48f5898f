use super::{marginal_benefit, SolveStats};
use crate::coverage::CoverageStructure;
use crate::model::{BudgetMode, Instance};
use crate::solution::Solution;
use std::time::Instant;

/// Repeatedly opens the facility with the largest marginal benefit, ties to
/// the lowest id.
///
/// In `AtMost` mode it stops once no facility adds weight. In `Exactly`
/// mode it keeps opening zero-gain facilities (lowest id first) until the
/// budget is met.
pub fn greedy_solve(instance: &Instance, coverage: &CoverageStructure) -> (Solution, SolveStats) {
    let start = Instant::now();
    let (selected, _, evaluations) = greedy_sequence(instance, coverage);
    let solution = Solution::from_selection(selected, instance, coverage, "greedy");
    let stats = SolveStats {
        states_expanded: evaluations,
        wall_time: start.elapsed(),
        exact: false,
        ..SolveStats::default()
    };
    (solution, stats)
}

/// Selection order, per-step gains, and the number of marginal evaluations.
pub(crate) fn greedy_sequence(instance: &Instance, coverage: &CoverageStructure) -> (Vec<usize>, Vec<f64>, u64) {
    let m = coverage.m();
    let mut mask = coverage.empty_mask();
    let mut open = vec![false; m];
    let mut selected = Vec::with_capacity(instance.budget());
    let mut gains = Vec::with_capacity(instance.budget());
    let mut evaluations = 0u64;

    while selected.len() < instance.budget() {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..m).filter(|&j| !open[j]) {
            evaluations += 1;
            let gain = marginal_benefit(j, &mask, coverage, instance);
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((j, gain));
            }
        }
        let Some((j, gain)) = best else { break };
        if gain <= 0.0 && instance.budget_mode() == BudgetMode::AtMost {
            break;
        }
        open[j] = true;
        mask.union_with(&coverage.facility_sets[j]);
        selected.push(j);
        gains.push(gain);
    }
    (selected, gains, evaluations)
}

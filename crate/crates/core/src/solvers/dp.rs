//! Exact dynamic programming over coverage-mask states.
//!
//! The knapsack-style table `DP[k][f]` (best coverage with at most `f`
//! facilities among the first `k`) cannot be filled from scalars alone: the
//! gain of taking facility `k` depends on *which* demand points are already
//! covered, not just on how many facilities were spent. Each cell is
//! therefore a set of states `(mask, count, value)`, and the scalar value
//! is the maximum over the masks in the cell. With `n` demand points there
//! are at most `2^n` masks per count, which gives the `O(m * 2^n * p)`
//! worst case.
//!
//! Facilities are processed one at a time. Every state either skips the
//! facility (it survives unchanged into the next layer) or takes it (its
//! mask grows by the facility's coverage set and its count by one). Only
//! the current layer is kept in memory. The reductions, each switchable
//! through [`SolverConfig`]:
//!
//! * dominance: `(mask, f)` is dropped if some `(mask', f')` in the same
//!   layer has `mask' ⊇ mask` and `f' <= f`; whatever completes the first
//!   also completes the second at least as well;
//! * symmetry merge: states with identical masks collapse to the one with
//!   the fewest facilities;
//! * greedy bound: the greedy objective seeds an incumbent, and a state is
//!   dropped when its value plus the largest `budget - f` standalone set
//!   weights still ahead cannot reach it, or, failing that, its value plus
//!   the largest `budget - f` gains relative to its own mask;
//! * facility ordering: heavy facilities first, which tightens the bound;
//! * preprocessing: facilities whose sets are contained in another's are
//!   removed up front (see [`preprocess`]).
//!
//! States that use the whole budget cannot grow, so only the best of them
//! is retained.

use super::greedy::greedy_solve;
use super::{pad_selection, preprocess, SolveStats, SolverConfig};
use crate::bitset::DemandSet;
use crate::coverage::{coverage_value, CoverageStructure};
use crate::model::{BudgetMode, Instance};
use crate::solution::Solution;
use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::time::Instant;

const NO_PARENT: u32 = u32::MAX;

/// One DP state: the demand covered, the facilities spent, and the covered
/// weight. `choice_trace` indexes the backtracking arena.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierState {
    pub mask: DemandSet,
    pub count: usize,
    pub value: f64,
    pub choice_trace: u32,
}

#[derive(Debug, Clone, Copy)]
struct TraceNode {
    facility: u32,
    parent: u32,
}

/// Parent-pointer record of every take transition.
#[derive(Debug, Default)]
struct TraceArena {
    nodes: Vec<TraceNode>,
}

impl TraceArena {
    fn push(&mut self, facility: usize, parent: u32) -> u32 {
        let id = u32::try_from(self.nodes.len()).expect("trace arena exceeds u32 range");
        self.nodes.push(TraceNode {
            facility: facility as u32,
            parent,
        });
        id
    }

    fn backtrack(&self, mut at: u32) -> Vec<usize> {
        let mut out = Vec::new();
        while at != NO_PARENT {
            let node = self.nodes[at as usize];
            out.push(node.facility as usize);
            at = node.parent;
        }
        out.sort_unstable();
        out
    }
}

/// Deterministic layer order: value descending, then more covered points,
/// then fewer facilities, then mask. A state's dominators always sort
/// before it because the covered weight is monotone under set inclusion.
fn state_order(a: &FrontierState, b: &FrontierState) -> Ordering {
    b.value
        .total_cmp(&a.value)
        .then_with(|| b.mask.count().cmp(&a.mask.count()))
        .then_with(|| a.count.cmp(&b.count))
        .then_with(|| a.mask.cmp(&b.mask))
}

/// `table[t][c]`: sum of the `c` largest standalone weights among the
/// facilities at positions `t..`.
fn completion_bounds(standalone_in_order: &[f64], budget: usize) -> Vec<Vec<f64>> {
    let len = standalone_in_order.len();
    let mut table = vec![vec![0.0; budget + 1]; len + 1];
    let mut suffix: Vec<f64> = Vec::with_capacity(len);
    for t in (0..len).rev() {
        let w = standalone_in_order[t];
        let at = suffix.partition_point(|&x| x >= w);
        suffix.insert(at, w);
        let mut acc = 0.0;
        for (c, cell) in table[t].iter_mut().enumerate().skip(1) {
            if let Some(&x) = suffix.get(c - 1) {
                acc += x;
            }
            *cell = acc;
        }
    }
    table
}

struct Outcome {
    solution: Solution,
    stats: SolveStats,
    #[cfg_attr(not(test), allow(dead_code))]
    frontier: Vec<FrontierState>,
}

/// Solves to optimality unless the state or time limit truncates the
/// search, in which case the best state found is returned with
/// `stats.exact == false`.
pub fn dp_solve(instance: &Instance, coverage: &CoverageStructure, config: &SolverConfig) -> (Solution, SolveStats) {
    let out = run(instance, coverage, config);
    (out.solution, out.stats)
}

/// Final layer of the search, for inspection in tests.
#[cfg(test)]
pub(crate) fn final_frontier(instance: &Instance, coverage: &CoverageStructure, config: &SolverConfig) -> Vec<FrontierState> {
    run(instance, coverage, config).frontier
}

fn run(instance: &Instance, coverage: &CoverageStructure, config: &SolverConfig) -> Outcome {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let budget = instance.budget();
    let state_limit = config.state_limit.max(1);
    let out_of_time = || config.time_limit.is_some_and(|limit| start.elapsed() >= limit);

    let reduced = config.enable_preprocess.then(|| preprocess(coverage));
    let (work, original_ids): (&CoverageStructure, Vec<usize>) = match &reduced {
        Some(p) => {
            stats.facilities_removed_preprocess = p.removed(coverage.m()) as u64;
            (&p.coverage, p.original_ids.clone())
        }
        None => (coverage, (0..coverage.m()).collect()),
    };

    let standalone: Vec<f64> = work
        .facility_sets
        .iter()
        .map(|s| coverage_value(s, instance))
        .collect();
    let mut order: Vec<usize> = (0..work.m()).collect();
    if config.enable_facility_ordering {
        order.sort_by(|&a, &b| {
            standalone[b]
                .total_cmp(&standalone[a])
                .then(original_ids[a].cmp(&original_ids[b]))
        });
    }

    let incumbent_solution = config
        .enable_greedy_bound
        .then(|| greedy_solve(instance, coverage).0);
    let bounds = completion_bounds(&order.iter().map(|&j| standalone[j]).collect::<Vec<_>>(), budget);
    let tolerance = 1e-9 * coverage.total_weight.max(0.0);

    let mut arena = TraceArena::default();
    let mut frontier = vec![FrontierState {
        mask: work.empty_mask(),
        count: 0,
        value: 0.0,
        choice_trace: NO_PARENT,
    }];
    let mut best_full: Option<FrontierState> = None;
    let mut truncated = false;

    for (t, &j) in order.iter().enumerate() {
        if out_of_time() {
            truncated = true;
            break;
        }
        let set = &work.facility_sets[j];
        let mut takes = Vec::new();
        for (k, state) in frontier.iter().enumerate() {
            if state.count >= budget {
                continue;
            }
            if config.enable_dominance_pruning && set.is_subset(&state.mask) {
                // taking adds nothing; the skip branch dominates
                stats.states_pruned_dominance += 1;
                continue;
            }
            if k % 4096 == 4095 && out_of_time() {
                truncated = true;
                break;
            }
            let mask = state.mask.union(set);
            let value = coverage_value(&mask, instance);
            let choice_trace = arena.push(original_ids[j], state.choice_trace);
            stats.states_expanded += 1;
            let next = FrontierState {
                mask,
                count: state.count + 1,
                value,
                choice_trace,
            };
            if next.count == budget {
                retire(&mut best_full, next, &arena);
            } else {
                takes.push(next);
            }
        }
        frontier.extend(takes);

        if config.enable_symmetry_merge {
            merge_identical(&mut frontier);
        }
        if config.enable_dominance_pruning {
            stats.states_pruned_dominance += nondominated(&mut frontier);
        }
        if let Some(greedy) = &incumbent_solution {
            let best_seen = frontier
                .iter()
                .map(|s| s.value)
                .chain(best_full.as_ref().map(|s| s.value))
                .fold(greedy.objective, f64::max);
            let ahead = &bounds[t + 1];
            let remaining = &order[t + 1..];
            let threshold = best_seen - tolerance;
            let before = frontier.len();
            let mut gains = Vec::with_capacity(remaining.len());
            frontier.retain(|s| {
                let slots = budget - s.count;
                if s.value + ahead[slots] < threshold {
                    return false;
                }
                // tighter: gains relative to this state's mask
                s.value + masked_completion(s, remaining, work, instance, slots, &mut gains) >= threshold
            });
            stats.bound_prunes += (before - frontier.len()) as u64;
        }
        if frontier.len() > state_limit {
            frontier.sort_by(state_order);
            frontier.truncate(state_limit);
            truncated = true;
        }
        if truncated {
            break;
        }
    }

    let mut best = best_state(&frontier, best_full.as_ref(), &arena);
    if let Some(greedy) = &incumbent_solution {
        if greedy.objective > best.0 {
            best = (greedy.objective, greedy.selected.clone());
        }
    }
    let mut selected = best.1;
    if instance.budget_mode() == BudgetMode::Exactly {
        pad_selection(&mut selected, budget, coverage.m());
    }

    stats.exact = !truncated;
    stats.wall_time = start.elapsed();
    Outcome {
        solution: Solution::from_selection(selected, instance, coverage, "dp"),
        stats,
        frontier,
    }
}

/// Sum of the `slots` largest marginal gains, relative to `state.mask`,
/// among the facilities still ahead. Coverage is submodular, so no
/// completion can gain more.
fn masked_completion(
    state: &FrontierState,
    remaining: &[usize],
    work: &CoverageStructure,
    instance: &Instance,
    slots: usize,
    gains: &mut Vec<f64>,
) -> f64 {
    if slots == 0 || remaining.is_empty() {
        return 0.0;
    }
    gains.clear();
    gains.extend(
        remaining
            .iter()
            .map(|&j| coverage_value(&work.facility_sets[j].difference(&state.mask), instance)),
    );
    if gains.len() > slots {
        gains.select_nth_unstable_by(slots - 1, |a, b| b.total_cmp(a));
        gains.truncate(slots);
    }
    gains.iter().sum()
}

/// Keeps the better of two full-budget states.
fn retire(slot: &mut Option<FrontierState>, candidate: FrontierState, arena: &TraceArena) {
    let replace = match slot {
        None => true,
        Some(current) => match candidate.value.total_cmp(&current.value) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => arena.backtrack(candidate.choice_trace) < arena.backtrack(current.choice_trace),
        },
    };
    if replace {
        *slot = Some(candidate);
    }
}

/// Collapses identical masks, keeping the fewest facilities (earliest on ties).
fn merge_identical(frontier: &mut Vec<FrontierState>) {
    let mut slot: HashMap<DemandSet, usize> = HashMap::with_capacity(frontier.len());
    let mut keep: Vec<FrontierState> = Vec::with_capacity(frontier.len());
    for state in frontier.drain(..) {
        match slot.entry(state.mask.clone()) {
            Entry::Occupied(e) => {
                let k = *e.get();
                if state.count < keep[k].count {
                    keep[k] = state;
                }
            }
            Entry::Vacant(e) => {
                e.insert(keep.len());
                keep.push(state);
            }
        }
    }
    *frontier = keep;
}

/// Removes dominated states in place; returns how many were removed.
fn nondominated(frontier: &mut Vec<FrontierState>) -> u64 {
    frontier.sort_by(state_order);
    let before = frontier.len();
    let mut kept: Vec<FrontierState> = Vec::with_capacity(before);
    for state in frontier.drain(..) {
        let dominated = kept
            .iter()
            .any(|k| k.count <= state.count && k.mask.is_superset(&state.mask));
        if !dominated {
            kept.push(state);
        }
    }
    *frontier = kept;
    (before - frontier.len()) as u64
}

/// Highest value, then fewest facilities, then smallest id list.
fn best_state(frontier: &[FrontierState], full: Option<&FrontierState>, arena: &TraceArena) -> (f64, Vec<usize>) {
    let all = || frontier.iter().chain(full);
    let top = all().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
    let fewest = all().filter(|s| s.value == top).map(|s| s.count).min().unwrap_or(0);
    let selected = all()
        .filter(|s| s.value == top && s.count == fewest)
        .map(|s| arena.backtrack(s.choice_trace))
        .min()
        .unwrap_or_default();
    (top.max(0.0), selected)
}

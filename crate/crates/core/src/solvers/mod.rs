//! Greedy, exact frontier DP and exhaustive solvers.

mod brute;
mod dp;
mod greedy;
mod preprocess;

pub use brute::{brute_force_solve, subset_count, COMBINATION_CAP};
pub use dp::{dp_solve, FrontierState};
pub use greedy::greedy_solve;
pub use preprocess::{preprocess, Preprocessed};

use crate::bitset::DemandSet;
use crate::coverage::{coverage_value, CoverageStructure};
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::solution::Solution;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

/// Switches for the DP's state-space reductions plus its resource caps.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Drop a state when another state covers a superset with no more facilities.
    pub enable_dominance_pruning: bool,
    /// Collapse states with identical coverage masks.
    pub enable_symmetry_merge: bool,
    /// Seed an incumbent with the greedy solution and prune by an optimistic bound.
    pub enable_greedy_bound: bool,
    /// Visit facilities by descending standalone coverage weight.
    pub enable_facility_ordering: bool,
    /// Remove facilities whose coverage set is contained in another's.
    pub enable_preprocess: bool,
    /// Largest frontier kept after any layer; beyond it the best states by value survive.
    pub state_limit: usize,
    pub time_limit: Option<Duration>,
}

pub const DEFAULT_STATE_LIMIT: usize = 1_000_000;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            enable_dominance_pruning: true,
            enable_symmetry_merge: true,
            enable_greedy_bound: true,
            enable_facility_ordering: true,
            enable_preprocess: true,
            state_limit: DEFAULT_STATE_LIMIT,
            time_limit: None,
        }
    }
}

impl SolverConfig {
    /// Every reduction off; only the caps remain.
    pub fn plain() -> Self {
        SolverConfig {
            enable_dominance_pruning: false,
            enable_symmetry_merge: false,
            enable_greedy_bound: false,
            enable_facility_ordering: false,
            enable_preprocess: false,
            ..SolverConfig::default()
        }
    }

    /// Config with the reduction flags set from the low five bits of `bits`
    /// (dominance, symmetry, greedy bound, ordering, preprocess).
    pub fn from_flag_bits(bits: u8) -> Self {
        SolverConfig {
            enable_dominance_pruning: bits & 1 != 0,
            enable_symmetry_merge: bits & 2 != 0,
            enable_greedy_bound: bits & 4 != 0,
            enable_facility_ordering: bits & 8 != 0,
            enable_preprocess: bits & 16 != 0,
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.state_limit == 0 {
            return Err(Error::invariant("state_limit", "state_limit must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub states_expanded: u64,
    pub states_pruned_dominance: u64,
    pub facilities_removed_preprocess: u64,
    pub bound_prunes: u64,
    /// Not serialized: it would make otherwise identical runs differ.
    #[serde(skip)]
    pub wall_time: Duration,
    /// True only when the objective is a proven optimum.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Dp,
    Greedy,
    Brute,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Dp => "dp",
            SolverKind::Greedy => "greedy",
            SolverKind::Brute => "brute",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dp" => Ok(SolverKind::Dp),
            "greedy" => Ok(SolverKind::Greedy),
            "brute" => Ok(SolverKind::Brute),
            other => Err(format!("unknown solver `{other}` (expected dp, greedy or brute)")),
        }
    }
}

/// Runs the chosen solver. Only the exhaustive solver can fail (on its
/// combination cap).
pub fn solve(
    kind: SolverKind,
    instance: &Instance,
    coverage: &CoverageStructure,
    config: &SolverConfig,
) -> Result<(Solution, SolveStats)> {
    match kind {
        SolverKind::Dp => {
            config.validate()?;
            Ok(dp_solve(instance, coverage, config))
        }
        SolverKind::Greedy => Ok(greedy_solve(instance, coverage)),
        SolverKind::Brute => {
            let start = std::time::Instant::now();
            let solution = brute_force_solve(instance, coverage)?;
            let stats = SolveStats {
                states_expanded: subset_count(coverage.m(), instance.budget(), instance.budget_mode())
                    .min(u64::MAX as u128) as u64,
                wall_time: start.elapsed(),
                exact: true,
                ..SolveStats::default()
            };
            Ok((solution, stats))
        }
    }
}

/// Weight newly covered by adding facility `j` to a selection that already
/// covers `current_mask`.
pub fn marginal_benefit(
    j: usize,
    current_mask: &DemandSet,
    coverage: &CoverageStructure,
    instance: &Instance,
) -> f64 {
    coverage_value(&coverage.facility_sets[j].difference(current_mask), instance)
}

/// Appends lowest-index unused facilities until `target` are selected.
pub(crate) fn pad_selection(selected: &mut Vec<usize>, target: usize, m: usize) {
    let mut used = vec![false; m];
    for &j in selected.iter() {
        used[j] = true;
    }
    for (j, &taken) in used.iter().enumerate() {
        if selected.len() >= target {
            break;
        }
        if !taken {
            selected.push(j);
        }
    }
}

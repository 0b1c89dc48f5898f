//! Solutions and their feasibility check.

use crate::bitset::DemandSet;
use crate::coverage::{coverage_value, CoverageStructure};
use crate::model::{BudgetMode, Instance};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Open facilities, ascending.
    pub selected: Vec<usize>,
    /// Demand points within reach of an open facility.
    pub covered_mask: DemandSet,
    pub objective: f64,
    pub solver_name: String,
}

impl Solution {
    /// Assembles a solution whose mask and objective are recomputed from
    /// the selected facilities.
    pub fn from_selection(
        mut selected: Vec<usize>,
        instance: &Instance,
        coverage: &CoverageStructure,
        solver_name: impl Into<String>,
    ) -> Self {
        selected.sort_unstable();
        selected.dedup();
        let covered_mask = coverage.covered_by(&selected);
        let objective = coverage_value(&covered_mask, instance);
        Solution {
            selected,
            covered_mask,
            objective,
            solver_name: solver_name.into(),
        }
    }

    /// Objective as a percentage of total demand weight. Zero when every
    /// weight is zero.
    pub fn coverage_percent(&self, total_weight: f64) -> f64 {
        coverage_percent(self.objective, total_weight)
    }
}

pub fn coverage_percent(objective: f64, total_weight: f64) -> f64 {
    if total_weight > 0.0 {
        100.0 * objective / total_weight
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// More facilities than the budget allows.
    BudgetExceeded { selected: usize, budget: usize },
    /// Exact-budget instance with too few facilities.
    BudgetNotMet { selected: usize, budget: usize },
    UnknownFacility { id: usize },
    DuplicateFacility { id: usize },
    /// Mask width does not match the number of demand points.
    MaskWidth { width: usize, n: usize },
    /// A demand point is claimed covered but no open facility reaches it.
    CoverageOverClaim { demand: usize },
    /// A demand point is reachable by an open facility but not claimed.
    CoverageUnderClaim { demand: usize },
    ObjectiveMismatch { claimed: f64, actual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BudgetExceeded { selected, budget } => {
                write!(f, "budget: {selected} facilities selected, at most {budget} allowed")
            }
            Violation::BudgetNotMet { selected, budget } => {
                write!(f, "budget: {selected} facilities selected, exactly {budget} required")
            }
            Violation::UnknownFacility { id } => write!(f, "selection: facility {id} does not exist"),
            Violation::DuplicateFacility { id } => write!(f, "selection: facility {id} listed twice"),
            Violation::MaskWidth { width, n } => {
                write!(f, "coverage: mask has width {width}, instance has {n} demand points")
            }
            Violation::CoverageOverClaim { demand } => {
                write!(f, "coverage: demand {demand} claimed covered but no selected facility reaches it")
            }
            Violation::CoverageUnderClaim { demand } => {
                write!(f, "coverage: demand {demand} is reached by a selected facility but not claimed")
            }
            Violation::ObjectiveMismatch { claimed, actual } => {
                write!(f, "objective: claimed {claimed}, covered weight is {actual}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "ok: solution is feasible and consistent");
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        Ok(())
    }
}

/// Relative tolerance for comparing a stored objective against the
/// recomputed one; stored files round numbers to 12 significant digits.
const OBJECTIVE_TOLERANCE: f64 = 1e-9;

/// Checks the budget, the exact-union coverage rule and the objective.
pub fn validate_solution(
    solution: &Solution,
    instance: &Instance,
    coverage: &CoverageStructure,
) -> ValidationReport {
    let mut violations = Vec::new();
    let budget = instance.budget();
    let k = solution.selected.len();
    match instance.budget_mode() {
        BudgetMode::AtMost if k > budget => {
            violations.push(Violation::BudgetExceeded { selected: k, budget })
        }
        BudgetMode::Exactly if k > budget => {
            violations.push(Violation::BudgetExceeded { selected: k, budget })
        }
        BudgetMode::Exactly if k < budget => {
            violations.push(Violation::BudgetNotMet { selected: k, budget })
        }
        _ => {}
    }

    let mut seen = vec![false; coverage.m()];
    let mut valid_ids = Vec::with_capacity(k);
    for &j in &solution.selected {
        if j >= coverage.m() {
            violations.push(Violation::UnknownFacility { id: j });
        } else if std::mem::replace(&mut seen[j], true) {
            violations.push(Violation::DuplicateFacility { id: j });
        } else {
            valid_ids.push(j);
        }
    }

    let n = instance.n();
    if solution.covered_mask.width() != n {
        violations.push(Violation::MaskWidth {
            width: solution.covered_mask.width(),
            n,
        });
    } else {
        let reached = coverage.covered_by(&valid_ids);
        for i in solution.covered_mask.difference(&reached).iter() {
            violations.push(Violation::CoverageOverClaim { demand: i });
        }
        for i in reached.difference(&solution.covered_mask).iter() {
            violations.push(Violation::CoverageUnderClaim { demand: i });
        }
        let actual = coverage_value(&solution.covered_mask, instance);
        let scale = instance.total_weight().max(1.0);
        // a NaN objective must fail too
        let consistent = (solution.objective - actual).abs() <= OBJECTIVE_TOLERANCE * scale;
        if !consistent {
            violations.push(Violation::ObjectiveMismatch {
                claimed: solution.objective,
                actual,
            });
        }
    }

    ValidationReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::build_coverage;

    fn three_sites() -> (Instance, CoverageStructure) {
        let inst = Instance::from_coords(
            &[(0.0, 0.0, 1.0), (10.0, 0.0, 2.0), (20.0, 0.0, 3.0)],
            &[(0.0, 0.0), (10.0, 0.0), (20.0, 0.0)],
            1.0,
            2,
            BudgetMode::AtMost,
        )
        .unwrap();
        let cov = build_coverage(&inst);
        (inst, cov)
    }

    #[test]
    fn consistent_solution_is_clean() {
        let (inst, cov) = three_sites();
        let s = Solution::from_selection(vec![2, 1], &inst, &cov, "test");
        assert_eq!(s.selected, vec![1, 2]);
        assert_eq!(s.objective, 5.0);
        assert!(validate_solution(&s, &inst, &cov).is_clean());
    }

    #[test]
    fn over_claim_with_nothing_selected() {
        let (inst, cov) = three_sites();
        let s = Solution {
            selected: vec![],
            covered_mask: DemandSet::from_indices(3, [0]),
            objective: 1.0,
            solver_name: "bad".into(),
        };
        let report = validate_solution(&s, &inst, &cov);
        assert_eq!(report.violations, vec![Violation::CoverageOverClaim { demand: 0 }]);
    }

    #[test]
    fn under_claim_and_objective_mismatch() {
        let (inst, cov) = three_sites();
        let s = Solution {
            selected: vec![0, 1],
            covered_mask: DemandSet::from_indices(3, [0]),
            objective: 3.0,
            solver_name: "bad".into(),
        };
        let report = validate_solution(&s, &inst, &cov);
        assert!(report.violations.contains(&Violation::CoverageUnderClaim { demand: 1 }));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ObjectiveMismatch { .. })));
    }

    #[test]
    fn budget_violations() {
        let (inst, cov) = three_sites();
        let s = Solution::from_selection(vec![0, 1, 2], &inst, &cov, "greedy");
        let report = validate_solution(&s, &inst, &cov);
        assert_eq!(
            report.violations,
            vec![Violation::BudgetExceeded { selected: 3, budget: 2 }]
        );

        let exact = inst.with_budget_mode(BudgetMode::Exactly);
        let s = Solution::from_selection(vec![0], &exact, &cov, "greedy");
        let report = validate_solution(&s, &exact, &cov);
        assert_eq!(
            report.violations,
            vec![Violation::BudgetNotMet { selected: 1, budget: 2 }]
        );
    }

    #[test]
    fn unknown_and_duplicate_ids() {
        let (inst, cov) = three_sites();
        let s = Solution {
            selected: vec![0, 0, 7],
            covered_mask: DemandSet::from_indices(3, [0]),
            objective: 1.0,
            solver_name: "bad".into(),
        };
        let report = validate_solution(&s, &inst, &cov);
        assert!(report.violations.contains(&Violation::DuplicateFacility { id: 0 }));
        assert!(report.violations.contains(&Violation::UnknownFacility { id: 7 }));
    }
}

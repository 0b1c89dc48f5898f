//! Sensitivity sweeps and solver comparisons.
//!
//! Reports serialize to CSV with a fixed column order and percentages at
//! two decimals, and to canonical JSON mirroring the structs.

use crate::coverage::{build_coverage, CoverageStructure};
use crate::error::{Error, Result};
use crate::io::to_canonical;
use crate::model::{BudgetMode, Instance};
use crate::solution::{coverage_percent, Solution};
use crate::solvers::{greedy_solve, solve, SolveStats, SolverConfig, SolverKind};
use serde::Serialize;
use std::fmt::Write as _;

/// Coverage percentage per facility used. `None` when no facility is used.
pub fn efficiency(coverage_percent: f64, facilities_used: usize) -> Option<f64> {
    (facilities_used > 0).then(|| coverage_percent / facilities_used as f64)
}

/// Differences between consecutive coverages; the first entry has no
/// predecessor and is `None`.
pub fn marginal_column(coverages: &[f64]) -> Vec<Option<f64>> {
    let mut out = Vec::with_capacity(coverages.len());
    if !coverages.is_empty() {
        out.push(None);
    }
    out.extend(coverages.windows(2).map(|w| Some(w[1] - w[0])));
    out
}

/// Facilities that add coverage when the selection is replayed in
/// ascending id order. In `Exactly` mode every selected facility counts.
pub fn facilities_used(solution: &Solution, coverage: &CoverageStructure, mode: BudgetMode) -> usize {
    if mode == BudgetMode::Exactly {
        return solution.selected.len();
    }
    let mut mask = coverage.empty_mask();
    let mut used = 0;
    for &j in &solution.selected {
        let set = &coverage.facility_sets[j];
        if !set.is_subset(&mask) {
            used += 1;
            mask.union_with(set);
        }
    }
    used
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Solved to proven optimality.
    Exact,
    /// Greedy result; no optimality claim.
    Heuristic,
    /// The DP hit its state or time limit.
    Truncated,
    Failed,
}

impl RowStatus {
    fn of(kind: SolverKind, stats: &SolveStats) -> Self {
        match (kind, stats.exact) {
            (_, true) => RowStatus::Exact,
            (SolverKind::Greedy, false) => RowStatus::Heuristic,
            _ => RowStatus::Truncated,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            RowStatus::Exact => "exact",
            RowStatus::Heuristic => "heuristic",
            RowStatus::Truncated => "truncated",
            RowStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter_value: f64,
    pub coverage_percent: f64,
    pub facilities_used: usize,
    pub derived_metric: Option<f64>,
    pub objective: f64,
    pub status: RowStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub parameter_name: String,
    pub solver_name: String,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn to_csv(&self) -> String {
        let (param, metric) = match self.parameter_name.as_str() {
            "budget" => ("budget", "marginal_percent"),
            _ => ("radius", "efficiency"),
        };
        let mut out = format!("{param},coverage_percent,facilities_used,{metric},status\n");
        for row in &self.rows {
            let value = if param == "budget" {
                format!("{}", row.parameter_value as u64)
            } else {
                format!("{}", row.parameter_value)
            };
            if row.status == RowStatus::Failed {
                let _ = writeln!(out, "{value},,,,failed");
                continue;
            }
            let metric = row.derived_metric.map(|d| format!("{d:.2}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{value},{:.2},{},{metric},{}",
                row.coverage_percent,
                row.facilities_used,
                row.status.as_str()
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_canonical(self)
    }
}

struct RowOutcome {
    coverage_percent: f64,
    facilities_used: usize,
    objective: f64,
    status: RowStatus,
}

fn solve_row(instance: &Instance, kind: SolverKind, config: &SolverConfig) -> Result<RowOutcome> {
    let coverage = build_coverage(instance);
    let (solution, stats) = solve(kind, instance, &coverage, config)?;
    Ok(RowOutcome {
        coverage_percent: solution.coverage_percent(coverage.total_weight),
        facilities_used: facilities_used(&solution, &coverage, instance.budget_mode()),
        objective: solution.objective,
        status: RowStatus::of(kind, &stats),
    })
}

fn failed_row(parameter_value: f64, err: Error) -> SweepRow {
    SweepRow {
        parameter_value,
        coverage_percent: 0.0,
        facilities_used: 0,
        derived_metric: None,
        objective: 0.0,
        status: RowStatus::Failed,
        error: Some(err.to_string()),
    }
}

fn check_ascending(values: &[f64], name: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invariant(name, "at least one value is required"));
    }
    if values.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::invariant(name, "values must be strictly ascending"));
    }
    Ok(())
}

/// Re-solves the same points and sites at each radius. Rows carry
/// [`efficiency`] as the derived metric.
pub fn radius_sweep(
    instance: &Instance,
    radii: &[f64],
    budget: usize,
    kind: SolverKind,
    config: &SolverConfig,
) -> Result<SweepReport> {
    check_ascending(radii, "radii")?;
    let base = instance.with_budget(budget)?;
    let mut rows = Vec::with_capacity(radii.len());
    for &radius in radii {
        let row = match base.with_radius(radius).and_then(|inst| solve_row(&inst, kind, config)) {
            Ok(r) => SweepRow {
                parameter_value: radius,
                coverage_percent: r.coverage_percent,
                facilities_used: r.facilities_used,
                derived_metric: efficiency(r.coverage_percent, r.facilities_used),
                objective: r.objective,
                status: r.status,
                error: None,
            },
            Err(e) => failed_row(radius, e),
        };
        rows.push(row);
    }
    Ok(SweepReport {
        parameter_name: "radius".into(),
        solver_name: kind.to_string(),
        rows,
    })
}

/// Re-solves the instance at each budget. Rows carry the coverage gain
/// over the previous row as the derived metric.
pub fn budget_sweep(
    instance: &Instance,
    budgets: &[usize],
    kind: SolverKind,
    config: &SolverConfig,
) -> Result<SweepReport> {
    check_ascending(&budgets.iter().map(|&b| b as f64).collect::<Vec<_>>(), "budgets")?;
    let mut rows: Vec<SweepRow> = Vec::with_capacity(budgets.len());
    for &budget in budgets {
        let row = match instance.with_budget(budget).and_then(|inst| solve_row(&inst, kind, config)) {
            Ok(r) => SweepRow {
                parameter_value: budget as f64,
                coverage_percent: r.coverage_percent,
                facilities_used: r.facilities_used,
                derived_metric: None,
                objective: r.objective,
                status: r.status,
                error: None,
            },
            Err(e) => failed_row(budget as f64, e),
        };
        rows.push(row);
    }
    let coverages: Vec<f64> = rows.iter().map(|r| r.coverage_percent).collect();
    let marginals = marginal_column(&coverages);
    for k in 1..rows.len() {
        if rows[k].status != RowStatus::Failed && rows[k - 1].status != RowStatus::Failed {
            rows[k].derived_metric = marginals[k];
        }
    }
    Ok(SweepReport {
        parameter_name: "budget".into(),
        solver_name: kind.to_string(),
        rows,
    })
}

/// Size classes by number of demand points: small below 40, medium below
/// 70, large from 70 up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    Small,
    Medium,
    Large,
}

impl SizeClass {
    pub const SMALL_BELOW: usize = 40;
    pub const MEDIUM_BELOW: usize = 70;

    pub fn of(n: usize) -> Self {
        if n < Self::SMALL_BELOW {
            SizeClass::Small
        } else if n < Self::MEDIUM_BELOW {
            SizeClass::Medium
        } else {
            SizeClass::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub instance_label: String,
    pub n: usize,
    pub m: usize,
    pub budget: usize,
    pub size_class: SizeClass,
    pub dp_coverage_percent: f64,
    pub greedy_coverage_percent: f64,
    pub improvement_percent: f64,
    pub dp_exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSummary {
    pub size_class: SizeClass,
    pub instances: usize,
    pub exact_instances: usize,
    pub mean_dp_coverage_percent: f64,
    pub mean_greedy_coverage_percent: f64,
    pub mean_improvement_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub summary: Vec<ClassSummary>,
}

impl ComparisonReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "instance_label,n,m,budget,size_class,dp_coverage_percent,greedy_coverage_percent,improvement_percent,dp_exact\n",
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{:.2},{:.2},{:.2},{}",
                r.instance_label,
                r.n,
                r.m,
                r.budget,
                r.size_class.as_str(),
                r.dp_coverage_percent,
                r.greedy_coverage_percent,
                r.improvement_percent,
                r.dp_exact
            );
        }
        for s in &self.summary {
            let _ = writeln!(
                out,
                "mean,,,,{},{:.2},{:.2},{:.2},{}",
                s.size_class.as_str(),
                s.mean_dp_coverage_percent,
                s.mean_greedy_coverage_percent,
                s.mean_improvement_percent,
                s.exact_instances == s.instances
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_canonical(self)
    }
}

/// Runs the DP and greedy solvers on every instance and summarizes by
/// size class. Each instance keeps its own budget.
pub fn compare_solvers(instances: &[(String, Instance)], config: &SolverConfig) -> ComparisonReport {
    let rows: Vec<ComparisonRow> = instances
        .iter()
        .map(|(label, inst)| {
            let coverage = build_coverage(inst);
            let (dp, stats) = crate::solvers::dp_solve(inst, &coverage, config);
            let (greedy, _) = greedy_solve(inst, &coverage);
            let dp_pct = coverage_percent(dp.objective, coverage.total_weight);
            let greedy_pct = coverage_percent(greedy.objective, coverage.total_weight);
            ComparisonRow {
                instance_label: label.clone(),
                n: inst.n(),
                m: inst.m(),
                budget: inst.budget(),
                size_class: SizeClass::of(inst.n()),
                dp_coverage_percent: dp_pct,
                greedy_coverage_percent: greedy_pct,
                improvement_percent: dp_pct - greedy_pct,
                dp_exact: stats.exact,
            }
        })
        .collect();

    let summary = [SizeClass::Small, SizeClass::Medium, SizeClass::Large]
        .into_iter()
        .filter_map(|class| {
            let members: Vec<&ComparisonRow> = rows.iter().filter(|r| r.size_class == class).collect();
            if members.is_empty() {
                return None;
            }
            let mean = |f: fn(&ComparisonRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / members.len() as f64;
            Some(ClassSummary {
                size_class: class,
                instances: members.len(),
                exact_instances: members.iter().filter(|r| r.dp_exact).count(),
                mean_dp_coverage_percent: mean(|r| r.dp_coverage_percent),
                mean_greedy_coverage_percent: mean(|r| r.greedy_coverage_percent),
                mean_improvement_percent: mean(|r| r.improvement_percent),
            })
        })
        .collect();

    ComparisonReport { rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, GeneratorConfig};

    #[test]
    fn efficiency_reproduces_radius_table() {
        let table = [(72.4, 8, 9.05), (85.3, 7, 12.19), (94.1, 6, 15.68), (98.2, 5, 19.64)];
        for (cov, used, expected) in table {
            let e = efficiency(cov, used).unwrap();
            assert!((e - expected).abs() <= 0.005, "{cov}/{used} = {e}");
        }
        assert_eq!(efficiency(100.0, 1), Some(100.0));
        assert_eq!(efficiency(50.0, 0), None);
    }

    #[test]
    fn marginal_column_examples() {
        let m = marginal_column(&[58.3, 71.2]);
        assert_eq!(m[0], None);
        assert!((m[1].unwrap() - 12.9).abs() < 1e-9);
        let m = marginal_column(&[91.4, 96.8, 98.9]);
        assert_eq!(m[0], None);
        assert!((m[1].unwrap() - 5.4).abs() < 1e-9);
        assert!((m[2].unwrap() - 2.1).abs() < 1e-9);
        assert_eq!(marginal_column(&[50.0, 50.0]), vec![None, Some(0.0)]);
        assert!(marginal_column(&[]).is_empty());
    }

    fn line_instance() -> Instance {
        // four points on a line, sites above each pair
        Instance::from_coords(
            &[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (2.0, 0.0, 1.0), (3.0, 0.0, 1.0)],
            &[(0.5, 0.0), (2.5, 0.0), (1.5, 0.0)],
            0.6,
            1,
            BudgetMode::AtMost,
        )
        .unwrap()
    }

    #[test]
    fn radius_saturation_uses_one_facility() {
        let report = radius_sweep(&line_instance(), &[0.6, 2.0], 2, SolverKind::Dp, &SolverConfig::default()).unwrap();
        assert_eq!(report.rows[0].coverage_percent, 100.0);
        assert_eq!(report.rows[0].facilities_used, 2);
        assert_eq!(report.rows[0].derived_metric, Some(50.0));
        assert_eq!(report.rows[1].coverage_percent, 100.0);
        assert_eq!(report.rows[1].facilities_used, 1);
        assert_eq!(report.rows[1].derived_metric, Some(100.0));
    }

    #[test]
    fn sweeps_reject_unsorted_values() {
        let inst = line_instance();
        assert!(radius_sweep(&inst, &[2.0, 1.0], 1, SolverKind::Dp, &SolverConfig::default()).is_err());
        assert!(radius_sweep(&inst, &[], 1, SolverKind::Dp, &SolverConfig::default()).is_err());
        assert!(budget_sweep(&inst, &[2, 2], SolverKind::Dp, &SolverConfig::default()).is_err());
    }

    #[test]
    fn budget_sweep_marks_out_of_range_rows_failed() {
        let report = budget_sweep(&line_instance(), &[1, 2, 5], SolverKind::Dp, &SolverConfig::default()).unwrap();
        assert_eq!(report.rows[0].derived_metric, None);
        assert_eq!(report.rows[1].derived_metric, Some(50.0));
        assert_eq!(report.rows[2].status, RowStatus::Failed);
        assert_eq!(report.rows[2].derived_metric, None);
        assert_eq!(
            report.to_csv(),
            "budget,coverage_percent,facilities_used,marginal_percent,status\n\
             1,50.00,1,,exact\n2,100.00,2,50.00,exact\n5,,,,failed\n"
        );
    }

    #[test]
    fn budget_equal_to_m_covers_union() {
        let inst = line_instance();
        let report = budget_sweep(&inst, &[1, 2, 3], SolverKind::Dp, &SolverConfig::default()).unwrap();
        let cov = build_coverage(&inst);
        let all: Vec<usize> = (0..inst.m()).collect();
        let union = crate::coverage::coverage_value(&cov.covered_by(&all), &inst);
        assert_eq!(report.rows[2].coverage_percent, 100.0 * union / inst.total_weight());
        assert_eq!(report.rows[2].facilities_used, 2);
    }

    #[test]
    fn brute_rows_fail_above_cap() {
        let config = GeneratorConfig { n: 5, m: 60, budget: Some(1), ..GeneratorConfig::default() };
        let inst = generate(&config).unwrap();
        let report = budget_sweep(&inst, &[1, 30], SolverKind::Brute, &SolverConfig::default()).unwrap();
        assert_eq!(report.rows[0].status, RowStatus::Exact);
        assert_eq!(report.rows[1].status, RowStatus::Failed);
        assert!(report.rows[1].error.as_deref().unwrap().contains("cap"));
    }

    #[test]
    fn greedy_optimal_on_disjoint_sets() {
        let inst = line_instance().with_budget(2).unwrap();
        let report = compare_solvers(&[("line".into(), inst)], &SolverConfig::default());
        assert_eq!(report.rows[0].improvement_percent, 0.0);
        assert_eq!(report.summary.len(), 1);
        assert_eq!(report.summary[0].size_class, SizeClass::Small);
    }

    #[test]
    fn size_class_thresholds() {
        assert_eq!(SizeClass::of(10), SizeClass::Small);
        assert_eq!(SizeClass::of(39), SizeClass::Small);
        assert_eq!(SizeClass::of(40), SizeClass::Medium);
        assert_eq!(SizeClass::of(69), SizeClass::Medium);
        assert_eq!(SizeClass::of(70), SizeClass::Large);
    }

    #[test]
    fn exactly_mode_counts_every_pick() {
        let inst = line_instance().with_budget(3).unwrap().with_budget_mode(BudgetMode::Exactly);
        let cov = build_coverage(&inst);
        let sol = Solution::from_selection(vec![0, 1, 2], &inst, &cov, "x");
        assert_eq!(facilities_used(&sol, &cov, BudgetMode::Exactly), 3);
        assert_eq!(facilities_used(&sol, &cov, BudgetMode::AtMost), 2);
    }
}

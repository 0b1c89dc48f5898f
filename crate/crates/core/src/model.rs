//! Problem data: demand points, candidate sites, radius and budget.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Euclidean distance in the plane.
pub fn distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPoint {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

impl DemandPoint {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacilitySite {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

impl FacilitySite {
    pub fn position(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Whether the budget caps the number of open facilities or fixes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    #[default]
    AtMost,
    Exactly,
}

impl BudgetMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BudgetMode::AtMost => "at_most",
            BudgetMode::Exactly => "exactly",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "at_most" | "at-most" => Some(BudgetMode::AtMost),
            "exactly" => Some(BudgetMode::Exactly),
            _ => None,
        }
    }
}

impl fmt::Display for BudgetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A complete, validated problem instance.
///
/// Construction checks every invariant, so a value of this type is always
/// solvable: at least one demand point and one site, `1 <= budget <= m`,
/// a positive finite radius, finite coordinates and nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    demand_points: Vec<DemandPoint>,
    sites: Vec<FacilitySite>,
    radius: f64,
    budget: usize,
    budget_mode: BudgetMode,
}

impl Instance {
    pub fn new(
        demand_points: Vec<DemandPoint>,
        sites: Vec<FacilitySite>,
        radius: f64,
        budget: usize,
        budget_mode: BudgetMode,
    ) -> Result<Self> {
        if demand_points.is_empty() {
            return Err(Error::invariant("demand_points", "at least one demand point is required"));
        }
        if sites.is_empty() {
            return Err(Error::invariant("sites", "at least one site is required"));
        }
        for (k, p) in demand_points.iter().enumerate() {
            if p.id != k {
                return Err(Error::invariant(
                    format!("demand_points[{k}].id"),
                    format!("expected id {k}, found {}", p.id),
                ));
            }
            check_finite(&format!("demand_points[{k}].x"), p.x)?;
            check_finite(&format!("demand_points[{k}].y"), p.y)?;
            check_finite(&format!("demand_points[{k}].weight"), p.weight)?;
            if p.weight < 0.0 {
                return Err(Error::invariant(
                    format!("demand_points[{k}].weight"),
                    format!("weight must be nonnegative, found {}", p.weight),
                ));
            }
        }
        for (k, s) in sites.iter().enumerate() {
            if s.id != k {
                return Err(Error::invariant(
                    format!("sites[{k}].id"),
                    format!("expected id {k}, found {}", s.id),
                ));
            }
            check_finite(&format!("sites[{k}].x"), s.x)?;
            check_finite(&format!("sites[{k}].y"), s.y)?;
        }
        check_radius(radius)?;
        check_budget(budget, sites.len())?;
        Ok(Instance {
            demand_points,
            sites,
            radius,
            budget,
            budget_mode,
        })
    }

    /// Builds an instance from `(x, y, weight)` demand tuples and `(x, y)`
    /// site tuples, assigning ids by position.
    pub fn from_coords(
        demands: &[(f64, f64, f64)],
        sites: &[(f64, f64)],
        radius: f64,
        budget: usize,
        budget_mode: BudgetMode,
    ) -> Result<Self> {
        let demand_points = demands
            .iter()
            .enumerate()
            .map(|(id, &(x, y, weight))| DemandPoint { id, x, y, weight })
            .collect();
        let sites = sites
            .iter()
            .enumerate()
            .map(|(id, &(x, y))| FacilitySite { id, x, y })
            .collect();
        Instance::new(demand_points, sites, radius, budget, budget_mode)
    }

    pub fn demand_points(&self) -> &[DemandPoint] {
        &self.demand_points
    }

    pub fn sites(&self) -> &[FacilitySite] {
        &self.sites
    }

    /// Number of demand points.
    pub fn n(&self) -> usize {
        self.demand_points.len()
    }

    /// Number of candidate sites.
    pub fn m(&self) -> usize {
        self.sites.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn budget_mode(&self) -> BudgetMode {
        self.budget_mode
    }

    pub fn weight(&self, demand: usize) -> f64 {
        self.demand_points[demand].weight
    }

    pub fn total_weight(&self) -> f64 {
        self.demand_points.iter().map(|p| p.weight).sum()
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(Instance {
            radius,
            ..self.clone()
        })
    }

    pub fn with_budget(&self, budget: usize) -> Result<Self> {
        check_budget(budget, self.m())?;
        Ok(Instance {
            budget,
            ..self.clone()
        })
    }

    pub fn with_budget_mode(&self, budget_mode: BudgetMode) -> Self {
        Instance {
            budget_mode,
            ..self.clone()
        }
    }
}

fn check_finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invariant(path, format!("must be finite, found {v}")))
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius.is_finite() && radius > 0.0 {
        Ok(())
    } else {
        Err(Error::invariant(
            "radius",
            format!("radius must be positive and finite, found {radius}"),
        ))
    }
}

fn check_budget(budget: usize, m: usize) -> Result<()> {
    if (1..=m).contains(&budget) {
        Ok(())
    } else {
        Err(Error::invariant(
            "budget",
            format!("budget must lie in [1, {m}], found {budget}"),
        ))
    }
}

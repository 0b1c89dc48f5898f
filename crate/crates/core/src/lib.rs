//! Maximal Covering Location Problem: choose up to `p` facility sites so
//! that the total weight of demand points within the service radius of an
//! open site is as large as possible.
//!
//! The crate provides
//!
//! * the data model and coverage computation ([`model`], [`coverage`]);
//! * a greedy heuristic, an exact dynamic program over coverage-mask
//!   states, and an exhaustive oracle ([`solvers`]);
//! * a seeded instance generator ([`generator`]);
//! * radius/budget sweeps and solver comparisons ([`analysis`]);
//! * canonical JSON/CSV formats ([`io`]) and the `mclp` command-line tool.

pub mod analysis;
pub mod bitset;
pub mod cli;
pub mod coverage;
pub mod error;
pub mod generator;
pub mod io;
pub mod model;
pub mod solution;
pub mod solvers;

pub use bitset::DemandSet;
pub use coverage::{build_coverage, coverage_value, CoverageStructure};
pub use error::{Error, Result};
pub use model::{distance, BudgetMode, DemandPoint, FacilitySite, Instance, Point};
pub use solution::{validate_solution, Solution, ValidationReport, Violation};
pub use solvers::{
    brute_force_solve, dp_solve, greedy_solve, marginal_benefit, preprocess, solve, SolveStats,
    SolverConfig, SolverKind,
};

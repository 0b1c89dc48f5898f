//! File formats: instance JSON, solution JSON and run manifests.
//!
//! Every document is written in one canonical form: object keys sorted,
//! two-space indentation, objects and arrays holding only scalars kept on
//! one line, and floats rounded to 12 significant digits then printed in
//! their shortest round-trip form. Writing a parsed canonical file
//! reproduces it byte for byte.

use crate::bitset::DemandSet;
use crate::error::{Error, Result};
use crate::model::{BudgetMode, DemandPoint, FacilitySite, Instance};
use crate::solution::Solution;
use crate::solvers::SolveStats;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn format_number(n: &Number) -> String {
    if n.is_i64() || n.is_u64() {
        return n.to_string();
    }
    let x = round_significant(n.as_f64().expect("JSON numbers are finite"));
    format!("{x}")
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

/// Writes `value` in canonical form, with a trailing newline.
pub fn to_canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

/// Serializes any `Serialize` value canonically.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    to_canonical_json(&serde_json::to_value(value).expect("value serializes to JSON"))
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&format_number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
            } else if items.iter().all(is_scalar) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    push_indent(out, indent + 1);
                    write_value(out, item, indent + 1);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                push_indent(out, indent);
                out.push(']');
            }
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            if keys.is_empty() {
                out.push_str("{}");
            } else if map.values().all(is_scalar) && indent > 0 {
                out.push('{');
                for (k, key) in keys.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&Value::String((*key).clone()).to_string());
                    out.push_str(": ");
                    write_value(out, &map[*key], indent);
                }
                out.push('}');
            } else {
                out.push_str("{\n");
                for (k, key) in keys.iter().enumerate() {
                    push_indent(out, indent + 1);
                    out.push_str(&Value::String((*key).clone()).to_string());
                    out.push_str(": ");
                    write_value(out, &map[*key], indent + 1);
                    out.push_str(if k + 1 < keys.len() { ",\n" } else { "\n" });
                }
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

// ---------------------------------------------------------------------------
// Instance files

const INSTANCE_KEYS: [&str; 5] = ["budget", "budget_mode", "demand_points", "radius", "sites"];

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::schema(join(path, key), "missing key"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    field(obj, key, path)?
        .as_f64()
        .ok_or_else(|| Error::schema(join(path, key), "expected a number"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::schema(if path.is_empty() { "$" } else { path }, "expected an object"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::schema(join(path, k), "unknown key")),
        None => Ok(()),
    }
}

/// Parses an instance file. Errors distinguish malformed JSON
/// ([`Error::Syntax`]), wrong shape ([`Error::Schema`]) and values that
/// break an invariant ([`Error::Invariant`]), each naming the offending key.
pub fn parse_instance(bytes: &[u8]) -> Result<Instance> {
    let root: Value = serde_json::from_slice(bytes)?;
    let top = object(&root, "")?;
    reject_unknown(top, &INSTANCE_KEYS, "")?;

    let radius = number(top, "radius", "")?;
    let budget = field(top, "budget", "")?
        .as_u64()
        .ok_or_else(|| Error::schema("budget", "expected a nonnegative integer"))?;
    let budget_mode = field(top, "budget_mode", "")?
        .as_str()
        .and_then(|s| match s {
            "at_most" => Some(BudgetMode::AtMost),
            "exactly" => Some(BudgetMode::Exactly),
            _ => None,
        })
        .ok_or_else(|| Error::schema("budget_mode", "expected \"at_most\" or \"exactly\""))?;

    let demand_points = field(top, "demand_points", "")?
        .as_array()
        .ok_or_else(|| Error::schema("demand_points", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(id, v)| {
            let path = format!("demand_points[{id}]");
            let obj = object(v, &path)?;
            reject_unknown(obj, &["weight", "x", "y"], &path)?;
            Ok(DemandPoint {
                id,
                x: number(obj, "x", &path)?,
                y: number(obj, "y", &path)?,
                weight: number(obj, "weight", &path)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sites = field(top, "sites", "")?
        .as_array()
        .ok_or_else(|| Error::schema("sites", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(id, v)| {
            let path = format!("sites[{id}]");
            let obj = object(v, &path)?;
            reject_unknown(obj, &["x", "y"], &path)?;
            Ok(FacilitySite {
                id,
                x: number(obj, "x", &path)?,
                y: number(obj, "y", &path)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let budget = usize::try_from(budget).unwrap_or(usize::MAX);
    Instance::new(demand_points, sites, radius, budget, budget_mode)
}

#[derive(Serialize)]
struct PointRecord {
    x: f64,
    y: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<f64>,
}

#[derive(Serialize)]
struct InstanceRecord {
    radius: f64,
    budget: usize,
    budget_mode: BudgetMode,
    demand_points: Vec<PointRecord>,
    sites: Vec<PointRecord>,
}

pub fn serialize_instance(instance: &Instance) -> String {
    let record = InstanceRecord {
        radius: instance.radius(),
        budget: instance.budget(),
        budget_mode: instance.budget_mode(),
        demand_points: instance
            .demand_points()
            .iter()
            .map(|p| PointRecord {
                x: p.x,
                y: p.y,
                weight: Some(p.weight),
            })
            .collect(),
        sites: instance
            .sites()
            .iter()
            .map(|s| PointRecord {
                x: s.x,
                y: s.y,
                weight: None,
            })
            .collect(),
    };
    to_canonical(&record)
}

// ---------------------------------------------------------------------------
// Solution files

/// The on-disk form of a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionRecord {
    pub selected: Vec<usize>,
    pub covered: Vec<usize>,
    pub objective: f64,
    pub coverage_percent: f64,
    pub solver_name: String,
    pub exact: bool,
    pub stats: StatsRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsRecord {
    pub states_expanded: u64,
    pub states_pruned_dominance: u64,
    pub facilities_removed_preprocess: u64,
    pub bound_prunes: u64,
}

impl SolutionRecord {
    pub fn new(solution: &Solution, stats: &SolveStats, total_weight: f64) -> Self {
        SolutionRecord {
            selected: solution.selected.clone(),
            covered: solution.covered_mask.to_vec(),
            objective: solution.objective,
            coverage_percent: solution.coverage_percent(total_weight),
            solver_name: solution.solver_name.clone(),
            exact: stats.exact,
            stats: StatsRecord {
                states_expanded: stats.states_expanded,
                states_pruned_dominance: stats.states_pruned_dominance,
                facilities_removed_preprocess: stats.facilities_removed_preprocess,
                bound_prunes: stats.bound_prunes,
            },
        }
    }

    /// Rebuilds the in-memory solution for an instance with `n` demand points.
    pub fn to_solution(&self, n: usize) -> Result<Solution> {
        if let Some((k, &i)) = self.covered.iter().enumerate().find(|(_, &i)| i >= n) {
            return Err(Error::invariant(
                format!("covered[{k}]"),
                format!("demand id {i} out of range for {n} demand points"),
            ));
        }
        Ok(Solution {
            selected: self.selected.clone(),
            covered_mask: DemandSet::from_indices(n, self.covered.iter().copied()),
            objective: self.objective,
            solver_name: self.solver_name.clone(),
        })
    }

    pub fn to_json(&self) -> String {
        to_canonical(self)
    }
}

/// Canonical solution JSON. The wall-clock time is left out so identical
/// runs write identical files.
pub fn serialize_solution(solution: &Solution, stats: &SolveStats, total_weight: f64) -> String {
    SolutionRecord::new(solution, stats, total_weight).to_json()
}

pub fn parse_solution(bytes: &[u8]) -> Result<SolutionRecord> {
    let value: Value = serde_json::from_slice(bytes)?;
    serde_json::from_value(value).map_err(|e| Error::schema("$", e.to_string()))
}

// ---------------------------------------------------------------------------
// Run manifests

/// Everything needed to repeat a CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_echo: Value,
    pub artifact_paths: Vec<String>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config_echo: Value, artifact_paths: Vec<String>) -> Self {
        RunManifest {
            command: command.into(),
            config_echo,
            artifact_paths,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::build_coverage;
    use crate::generator::{generate, Distribution, GeneratorConfig};
    use crate::solvers::{brute_force_solve, SolveStats};
    use proptest::prelude::*;

    const SMALL: &str = r#"{"radius": 1.5, "budget": 1, "budget_mode": "exactly",
        "demand_points": [{"x": 0, "y": 0, "weight": 2.5}, {"x": 1, "y": 0, "weight": 1}],
        "sites": [{"x": 0.5, "y": 0}]}"#;

    #[test]
    fn canonical_instance_layout() {
        let inst = parse_instance(SMALL.as_bytes()).unwrap();
        assert_eq!(inst.budget_mode(), BudgetMode::Exactly);
        let text = serialize_instance(&inst);
        assert_eq!(
            text,
            "{\n  \"budget\": 1,\n  \"budget_mode\": \"exactly\",\n  \"demand_points\": [\n    \
             {\"weight\": 2.5, \"x\": 0, \"y\": 0},\n    {\"weight\": 1, \"x\": 1, \"y\": 0}\n  ],\n  \
             \"radius\": 1.5,\n  \"sites\": [\n    {\"x\": 0.5, \"y\": 0}\n  ]\n}\n"
        );
        assert_eq!(serialize_instance(&parse_instance(text.as_bytes()).unwrap()), text);
    }

    #[test]
    fn float_rounding() {
        assert_eq!(round_significant(0.1 + 0.2), 0.3);
        assert_eq!(round_significant(-0.0), 0.0);
        assert_eq!(format!("{}", round_significant(123456.78901234567)), "123456.789012");
        assert_eq!(format_number(&Number::from_f64(14.0).unwrap()), "14");
    }

    fn error_path(json: &str) -> (String, &'static str) {
        match parse_instance(json.as_bytes()).unwrap_err() {
            Error::Schema { path, .. } => (path, "schema"),
            Error::Invariant { path, .. } => (path, "invariant"),
            Error::Syntax(_) => (String::new(), "syntax"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn errors_name_the_offending_key() {
        let neg = SMALL.replace("\"weight\": 1}", "\"weight\": -1}");
        assert_eq!(error_path(&neg), ("demand_points[1].weight".into(), "invariant"));
        let over = SMALL.replace("\"budget\": 1", "\"budget\": 2");
        assert_eq!(error_path(&over), ("budget".into(), "invariant"));
        let missing = SMALL.replace("\"radius\": 1.5,", "");
        assert_eq!(error_path(&missing), ("radius".into(), "schema"));
        let no_y = SMALL.replace("{\"x\": 0.5, \"y\": 0}", "{\"x\": 0.5}");
        assert_eq!(error_path(&no_y), ("sites[0].y".into(), "schema"));
        let mode = SMALL.replace("\"exactly\"", "\"sometimes\"");
        assert_eq!(error_path(&mode), ("budget_mode".into(), "schema"));
        let extra = SMALL.replace("\"radius\"", "\"colour\": 1, \"radius\"");
        assert_eq!(error_path(&extra), ("colour".into(), "schema"));
        assert_eq!(error_path("{\"radius\": ").1, "syntax");
        assert_eq!(error_path("[1, 2]"), ("$".into(), "schema"));
        let zero_radius = SMALL.replace("1.5", "0");
        assert_eq!(error_path(&zero_radius), ("radius".into(), "invariant"));
    }

    #[test]
    fn overflowing_numbers_are_rejected() {
        let huge = SMALL.replace("1.5", "1e400");
        assert!(parse_instance(huge.as_bytes()).is_err());
    }

    #[test]
    fn solution_json_worked_example() {
        use crate::solvers::fixtures::with_sets;
        let (inst, cov) = with_sets(&[5.0, 2.0, 3.0, 4.0], &[&[0, 1], &[1, 2], &[2, 3]], 2, BudgetMode::AtMost);
        let sol = brute_force_solve(&inst, &cov).unwrap();
        let stats = SolveStats { exact: true, ..SolveStats::default() };
        let text = serialize_solution(&sol, &stats, inst.total_weight());
        let record = parse_solution(text.as_bytes()).unwrap();
        assert_eq!(record.selected, vec![0, 2]);
        assert_eq!(record.covered, vec![0, 1, 2, 3]);
        assert_eq!(record.objective, 14.0);
        assert_eq!(record.coverage_percent, 100.0);
        assert!(text.contains("\"objective\": 14,"));
        assert_eq!(record.to_json(), text);
    }

    #[test]
    fn empty_selection_json() {
        use crate::solvers::fixtures::with_sets;
        let (inst, cov) = with_sets(&[1.0], &[&[]], 1, BudgetMode::AtMost);
        let sol = crate::greedy_solve(&inst, &cov).0;
        let text = serialize_solution(&sol, &SolveStats::default(), inst.total_weight());
        assert!(text.contains("\"selected\": []"));
        assert!(text.contains("\"objective\": 0,"));
    }

    #[test]
    fn covered_ids_are_range_checked() {
        let record = SolutionRecord {
            selected: vec![],
            covered: vec![5],
            objective: 0.0,
            coverage_percent: 0.0,
            solver_name: "x".into(),
            exact: false,
            stats: StatsRecord {
                states_expanded: 0,
                states_pruned_dominance: 0,
                facilities_removed_preprocess: 0,
                bound_prunes: 0,
            },
        };
        assert!(record.to_solution(3).is_err());
    }

    proptest! {
        #[test]
        fn instance_round_trip_is_canonical(seed: u64, clustered: bool, n in 1usize..25, m in 1usize..8) {
            let config = GeneratorConfig {
                n,
                m,
                budget: Some(1),
                distribution: if clustered { Distribution::Clustered } else { Distribution::Uniform },
                seed,
                ..GeneratorConfig::default()
            };
            let first = serialize_instance(&generate(&config).unwrap());
            let parsed = parse_instance(first.as_bytes()).unwrap();
            let second = serialize_instance(&parsed);
            prop_assert_eq!(&first, &second);
            let cov = build_coverage(&parsed);
            let sol = crate::greedy_solve(&parsed, &cov);
            let text = serialize_solution(&sol.0, &sol.1, parsed.total_weight());
            prop_assert_eq!(parse_solution(text.as_bytes()).unwrap().to_json(), text);
        }
    }
}

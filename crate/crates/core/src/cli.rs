//! The `mclp` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error,
//! 3 solver cap exceeded. Data goes to `--out` files or standard output;
//! diagnostics go to standard error.

use crate::analysis::{budget_sweep, compare_solvers, radius_sweep, SizeClass};
use crate::coverage::build_coverage;
use crate::error::Error;
use crate::generator::{generate, Distribution, GeneratorConfig, Xoshiro256StarStar};
use crate::io::{parse_instance, parse_solution, serialize_instance, serialize_solution, RunManifest};
use crate::model::{BudgetMode, Instance};
use crate::solution::validate_solution;
use crate::solvers::{solve, SolverConfig, SolverKind, DEFAULT_STATE_LIMIT};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mclp", version, about = "Maximal Covering Location Problem solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded synthetic instance.
    Generate(GenerateArgs),
    /// Solve an instance file.
    Solve(SolveArgs),
    /// Solve one instance at several radii (CSV columns: radius, coverage %, facilities used, efficiency).
    SweepRadius(SweepRadiusArgs),
    /// Solve one instance at several budgets (CSV columns: budget, coverage %, facilities used, marginal %).
    SweepBudget(SweepBudgetArgs),
    /// Compare the DP and greedy solvers on instance files or a generated batch.
    ///
    /// Size classes by demand points: small n < 40, medium 40 <= n < 70, large n >= 70.
    Compare(CompareArgs),
    /// Check a solution file against an instance; exit 0 iff it is feasible and consistent.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    AtMost,
    Exactly,
}

impl From<ModeArg> for BudgetMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::AtMost => BudgetMode::AtMost,
            ModeArg::Exactly => BudgetMode::Exactly,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Dp,
    Greedy,
    Brute,
}

impl From<SolverArg> for SolverKind {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Dp => SolverKind::Dp,
            SolverArg::Greedy => SolverKind::Greedy,
            SolverArg::Brute => SolverKind::Brute,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistributionArg {
    Uniform,
    Clustered,
}

impl From<DistributionArg> for Distribution {
    fn from(d: DistributionArg) -> Self {
        match d {
            DistributionArg::Uniform => Distribution::Uniform,
            DistributionArg::Clustered => Distribution::Clustered,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Manifest file; defaults to `<out>.manifest.json` when --out is given.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GeneratorFlags {
    /// JSON generator config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    /// Budget as a fraction of m, rounded up.
    #[arg(long)]
    budget_fraction: Option<f64>,
    #[arg(long, value_enum)]
    budget_mode: Option<ModeArg>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, value_enum)]
    distribution: Option<DistributionArg>,
    #[arg(long)]
    cluster_count: Option<usize>,
    #[arg(long)]
    cluster_spread: Option<f64>,
    #[arg(long)]
    weight_low: Option<f64>,
    #[arg(long)]
    weight_high: Option<f64>,
    /// Side length of the square region.
    #[arg(long)]
    area: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    generator: GeneratorFlags,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "dp")]
    solver: SolverArg,
    #[arg(long)]
    no_dominance: bool,
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    no_greedy_bound: bool,
    #[arg(long)]
    no_ordering: bool,
    #[arg(long)]
    no_preprocess: bool,
    /// Frontier size cap; exceeding it makes the result inexact.
    #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
    state_limit: usize,
    /// Wall-clock limit in seconds; hitting it makes the result inexact.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl SolverFlags {
    fn config(&self) -> Result<SolverConfig, Failure> {
        let time_limit = match self.time_limit {
            Some(t) if t.is_finite() && t >= 0.0 => Some(Duration::from_secs_f64(t)),
            Some(t) => return Err(Failure::usage(format!("--time-limit must be nonnegative, found {t}"))),
            None => None,
        };
        if self.state_limit == 0 {
            return Err(Failure::usage("--state-limit must be at least 1"));
        }
        Ok(SolverConfig {
            enable_dominance_pruning: !self.no_dominance,
            enable_symmetry_merge: !self.no_symmetry,
            enable_greedy_bound: !self.no_greedy_bound,
            enable_facility_ordering: !self.no_ordering,
            enable_preprocess: !self.no_preprocess,
            state_limit: self.state_limit,
            time_limit,
        })
    }

    fn echo(&self) -> Value {
        json!({
            "solver": SolverKind::from(self.solver).as_str(),
            "dominance": !self.no_dominance,
            "symmetry": !self.no_symmetry,
            "greedy_bound": !self.no_greedy_bound,
            "ordering": !self.no_ordering,
            "preprocess": !self.no_preprocess,
            "state_limit": self.state_limit,
            "time_limit": self.time_limit,
        })
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    solver: SolverFlags,
    /// Override the instance's budget.
    #[arg(long)]
    budget: Option<usize>,
    /// Override the instance's budget mode.
    #[arg(long, value_enum)]
    budget_mode: Option<ModeArg>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepRadiusArgs {
    instance: PathBuf,
    /// Comma-separated ascending radii.
    #[arg(long, value_delimiter = ',', required = true)]
    radii: Vec<f64>,
    /// Budget for every row; defaults to the instance budget.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_enum)]
    budget_mode: Option<ModeArg>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepBudgetArgs {
    instance: PathBuf,
    /// Comma-separated ascending budgets, or a range `a..b` (inclusive).
    #[arg(long, required = true)]
    budgets: String,
    #[arg(long, value_enum)]
    budget_mode: Option<ModeArg>,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Instance files; when none are given a batch is generated.
    instances: Vec<PathBuf>,
    /// Number of generated instances.
    #[arg(long, default_value_t = 30)]
    count: usize,
    #[arg(long, default_value_t = 10)]
    n_min: usize,
    #[arg(long, default_value_t = 15)]
    n_max: usize,
    #[arg(long, default_value_t = 8)]
    m: usize,
    #[arg(long, default_value_t = 0.4)]
    budget_fraction: f64,
    #[arg(long, default_value_t = 20.0)]
    radius: f64,
    /// Alternate uniform and clustered instances.
    #[arg(long)]
    mixed: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    solver: SolverFlags,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    instance: PathBuf,
    solution: PathBuf,
}

/// An error bound to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CombinationCap { .. } => EXIT_CAP,
            Error::InvalidConfig(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => run_generate(a),
        Command::Solve(a) => run_solve(a),
        Command::SweepRadius(a) => run_sweep_radius(a),
        Command::SweepBudget(a) => run_sweep_budget(a),
        Command::Compare(a) => run_compare(a),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read_file(path)?).map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })
}

fn write_output(output: &OutputArgs, contents: &str, command: &str, echo: Value) -> Result<(), Failure> {
    let io_fail = |path: &Path, e: std::io::Error| Failure {
        code: EXIT_DATA,
        message: format!("cannot write {}: {e}", path.display()),
    };
    match &output.out {
        Some(path) => std::fs::write(path, contents).map_err(|e| io_fail(path, e))?,
        None => print!("{contents}"),
    }
    let manifest_path = output.manifest.clone().or_else(|| {
        output.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    if let Some(path) = manifest_path {
        let artifacts = output
            .out
            .iter()
            .map(|p| p.display().to_string())
            .collect();
        let manifest = RunManifest::new(command, echo, artifacts);
        std::fs::write(&path, manifest.to_json()).map_err(|e| io_fail(&path, e))?;
    }
    Ok(())
}

fn apply_overrides(instance: Instance, budget: Option<usize>, mode: Option<ModeArg>) -> Result<Instance, Failure> {
    let instance = match budget {
        Some(b) => instance.with_budget(b)?,
        None => instance,
    };
    Ok(match mode {
        Some(m) => instance.with_budget_mode(m.into()),
        None => instance,
    })
}

fn run_generate(args: GenerateArgs) -> Result<i32, Failure> {
    let flags = &args.generator;
    let mut config = match &flags.config {
        Some(path) => serde_json::from_slice::<GeneratorConfig>(&read_file(path)?)
            .map_err(|e| Failure {
                code: EXIT_DATA,
                message: format!("{}: {e}", path.display()),
            })?,
        None => GeneratorConfig::default(),
    };
    if let Some(v) = flags.n {
        config.n = v;
    }
    if let Some(v) = flags.m {
        config.m = v;
    }
    if let Some(v) = flags.budget {
        config.budget = Some(v);
        config.budget_fraction = None;
    }
    if let Some(v) = flags.budget_fraction {
        config.budget_fraction = Some(v);
        config.budget = None;
    }
    if flags.budget.is_some() && flags.budget_fraction.is_some() {
        return Err(Failure::usage("pass only one of --budget and --budget-fraction"));
    }
    if let Some(v) = flags.budget_mode {
        config.budget_mode = v.into();
    }
    if let Some(v) = flags.radius {
        config.radius = v;
    }
    if let Some(v) = flags.distribution {
        config.distribution = v.into();
    }
    if let Some(v) = flags.cluster_count {
        config.cluster_count = v;
    }
    if let Some(v) = flags.cluster_spread {
        config.cluster_spread = v;
    }
    if let Some(v) = flags.weight_low {
        config.weight_range[0] = v;
    }
    if let Some(v) = flags.weight_high {
        config.weight_range[1] = v;
    }
    if let Some(v) = flags.area {
        config.area = v;
    }
    if let Some(v) = flags.seed {
        config.seed = v;
    }

    let instance = generate(&config)?;
    let echo = serde_json::to_value(&config).expect("config serializes");
    write_output(&args.output, &serialize_instance(&instance), "generate", echo)?;
    eprintln!(
        "generated n={} m={} budget={} ({}) seed={}",
        instance.n(),
        instance.m(),
        instance.budget(),
        instance.budget_mode(),
        config.seed
    );
    Ok(EXIT_OK)
}

fn run_solve(args: SolveArgs) -> Result<i32, Failure> {
    let config = args.solver.config()?;
    let instance = apply_overrides(load_instance(&args.instance)?, args.budget, args.budget_mode)?;
    let coverage = build_coverage(&instance);
    let kind = SolverKind::from(args.solver.solver);
    let (solution, stats) = solve(kind, &instance, &coverage, &config)?;

    let mut echo = args.solver.echo();
    echo["instance"] = json!(args.instance.display().to_string());
    echo["budget"] = json!(instance.budget());
    echo["budget_mode"] = json!(instance.budget_mode().as_str());
    write_output(
        &args.output,
        &serialize_solution(&solution, &stats, coverage.total_weight),
        "solve",
        echo,
    )?;
    eprintln!(
        "{}: objective {} ({:.1}% coverage) with {} facilities, {}, {:.3}s",
        kind,
        solution.objective,
        solution.coverage_percent(coverage.total_weight),
        solution.selected.len(),
        if stats.exact { "exact" } else { "not proven optimal" },
        stats.wall_time.as_secs_f64()
    );
    Ok(EXIT_OK)
}

fn render(format: FormatArg, csv: String, json: String) -> String {
    match format {
        FormatArg::Csv => csv,
        FormatArg::Json => json,
    }
}

fn run_sweep_radius(args: SweepRadiusArgs) -> Result<i32, Failure> {
    let config = args.solver.config()?;
    let instance = apply_overrides(load_instance(&args.instance)?, None, args.budget_mode)?;
    let budget = args.budget.unwrap_or(instance.budget());
    let report = radius_sweep(&instance, &args.radii, budget, args.solver.solver.into(), &config)?;
    let mut echo = args.solver.echo();
    echo["instance"] = json!(args.instance.display().to_string());
    echo["radii"] = json!(args.radii);
    echo["budget"] = json!(budget);
    echo["budget_mode"] = json!(instance.budget_mode().as_str());
    write_output(&args.output, &render(args.format, report.to_csv(), report.to_json()), "sweep-radius", echo)?;
    Ok(EXIT_OK)
}

fn parse_budget_list(list: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::usage(format!("invalid --budgets `{list}`; use `1,2,3` or `1..8`"));
    if let Some((a, b)) = list.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    list.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
        .collect()
}

fn run_sweep_budget(args: SweepBudgetArgs) -> Result<i32, Failure> {
    let config = args.solver.config()?;
    let budgets = parse_budget_list(&args.budgets)?;
    let instance = apply_overrides(load_instance(&args.instance)?, None, args.budget_mode)?;
    let report = budget_sweep(&instance, &budgets, args.solver.solver.into(), &config)?;
    let mut echo = args.solver.echo();
    echo["instance"] = json!(args.instance.display().to_string());
    echo["budgets"] = json!(budgets);
    echo["budget_mode"] = json!(instance.budget_mode().as_str());
    write_output(&args.output, &render(args.format, report.to_csv(), report.to_json()), "sweep-budget", echo)?;
    Ok(EXIT_OK)
}

/// Seeded batch: instance `k` draws its size from a stream seeded with
/// `seed` and is generated with seed `seed + k`.
fn generated_batch(args: &CompareArgs) -> Result<Vec<(String, Instance)>, Failure> {
    if args.n_min == 0 || args.n_min > args.n_max {
        return Err(Failure::usage("need 1 <= --n-min <= --n-max"));
    }
    let mut sizes = Xoshiro256StarStar::seed_from_u64(args.seed);
    let span = (args.n_max - args.n_min + 1) as u64;
    (0..args.count)
        .map(|k| {
            let n = args.n_min + (sizes.next_u64() % span) as usize;
            let distribution = if args.mixed && k % 2 == 1 {
                Distribution::Clustered
            } else {
                Distribution::Uniform
            };
            let config = GeneratorConfig {
                n,
                m: args.m,
                budget: None,
                budget_fraction: Some(args.budget_fraction),
                radius: args.radius,
                distribution,
                seed: args.seed.wrapping_add(k as u64),
                ..GeneratorConfig::default()
            };
            Ok((format!("gen-{k}"), generate(&config)?))
        })
        .collect()
}

fn run_compare(args: CompareArgs) -> Result<i32, Failure> {
    let config = args.solver.config()?;
    let mut echo = args.solver.echo();
    let instances = if args.instances.is_empty() {
        echo["batch"] = json!({
            "count": args.count, "n_min": args.n_min, "n_max": args.n_max, "m": args.m,
            "budget_fraction": args.budget_fraction, "radius": args.radius,
            "mixed": args.mixed, "seed": args.seed,
        });
        generated_batch(&args)?
    } else {
        echo["instances"] = json!(args.instances.iter().map(|p| p.display().to_string()).collect::<Vec<_>>());
        args.instances
            .iter()
            .map(|p| Ok((p.display().to_string(), load_instance(p)?)))
            .collect::<Result<Vec<_>, Failure>>()?
    };
    echo["size_classes"] = json!({
        "small_below": SizeClass::SMALL_BELOW,
        "medium_below": SizeClass::MEDIUM_BELOW,
    });
    let report = compare_solvers(&instances, &config);
    write_output(&args.output, &render(args.format, report.to_csv(), report.to_json()), "compare", echo)?;
    for s in &report.summary {
        eprintln!(
            "{}: {} instances, dp {:.1}%, greedy {:.1}%, improvement {:.1}",
            s.size_class.as_str(),
            s.instances,
            s.mean_dp_coverage_percent,
            s.mean_greedy_coverage_percent,
            s.mean_improvement_percent
        );
    }
    Ok(EXIT_OK)
}

fn run_validate(args: ValidateArgs) -> Result<i32, Failure> {
    let instance = load_instance(&args.instance)?;
    let record = parse_solution(&read_file(&args.solution)?).map_err(|e| Failure {
        code: EXIT_DATA,
        message: format!("{}: {e}", args.solution.display()),
    })?;
    let solution = record.to_solution(instance.n())?;
    let coverage = build_coverage(&instance);
    let report = validate_solution(&solution, &instance, &coverage);
    print!("{report}");
    Ok(if report.is_clean() { EXIT_OK } else { EXIT_DATA })
}

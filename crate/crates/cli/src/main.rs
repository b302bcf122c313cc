//! `speedrobust`: build bags, assign them, probe lower bounds, print the
//! bricks tables and run verification campaigns.
//!
//! Exit status: 0 on success, 1 when an assignment or verification fails,
//! 2 on usage or input errors.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{render, Format};
use speedrobust::bricks::{
    brick_rho, bricks_bags, normalized_surplus_at, robust_bags, surplus_breakpoints, transformation_factor_table,
};
use speedrobust::sand::{lower_bound_probe, rho_bar, sand_bags, SandSequence};
use speedrobust::second_stage::{greedy_trace, integral_assignment, integral_trace, optimal_second_stage};
use speedrobust::verify::{verify_bricks_robustness_with, verify_bricks_success_range_with_progress, RobustnessOptions};
use speedrobust::{makespan, pebble_q, pebbles_bags, Assignment, BagProfile, Instance, Rational, SpeedProfile};

#[derive(Parser, Debug)]
#[command(name = "speedrobust", version, about = "Speed-robust scheduling toolkit")]
struct Cli {
    /// Output encoding.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Worker threads for verification campaigns (default: all cores).
    #[arg(long, global = true, env = "SPEEDROBUST_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build first-stage bags.
    Bags(BagsArgs),
    /// Assign bags to machines once speeds are known.
    Assign(AssignArgs),
    /// Optimal second-stage makespan of bags against every adversary configuration.
    Probe(ProbeArgs),
    /// Print the transformation-factor or surplus tables.
    Tables(TablesArgs),
    /// Check that bricks bags cover n for every m <= m-max, n <= lambda-max * m.
    VerifyRange(VerifyRangeArgs),
    /// Check bricks robustness against every integral speed profile.
    VerifyRobust(VerifyRobustArgs),
    /// Normalized brick surplus at one lambda.
    Surplus(SurplusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sand,
    Pebbles,
    Bricks,
    Auto,
}

#[derive(Args, Debug)]
struct BagsArgs {
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    /// Number of unit jobs (bricks, auto; pebbles without --jobs).
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: u64,
    /// Number of bags (default: m).
    #[arg(long)]
    b: Option<u64>,
    /// Target robustness (bricks default 8/5; pebbles default rho_bar(m, b) + q).
    #[arg(long)]
    rho: Option<Rational>,
    /// Total size for sand (default: m).
    #[arg(long)]
    p: Option<Rational>,
    /// Job sizes for pebbles: comma-separated, or @file holding a JSON array.
    #[arg(long)]
    jobs: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Greedy,
    Integral,
    Optimal,
}

#[derive(Args, Debug)]
struct AssignArgs {
    #[arg(long, value_enum, default_value = "greedy")]
    method: Method,
    /// Bag sizes: comma-separated, or @file holding a JSON array.
    #[arg(long)]
    bags: String,
    /// Machine speeds: comma-separated, or @file holding a JSON array.
    #[arg(long)]
    speeds: String,
    /// Capacity factor for greedy and integral.
    #[arg(long)]
    rho: Option<Rational>,
    /// Include every placement step.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct ProbeArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    b: u64,
    /// Bags summing to m^b (default: the sand bags).
    #[arg(long)]
    bags: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Table {
    F,
    SurplusInt,
    SurplusBreakpoints,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum)]
    which: Table,
    #[arg(long, default_value_t = 60)]
    zmax: u64,
    #[arg(long, default_value_t = 60)]
    lambda_max: u64,
    #[arg(long)]
    rho: Option<Rational>,
}

#[derive(Args, Debug)]
struct VerifyRangeArgs {
    #[arg(long, default_value_t = 144)]
    m_max: u64,
    #[arg(long, default_value_t = 60)]
    lambda_max: u64,
    #[arg(long)]
    rho: Option<Rational>,
    /// Also write the report here (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
    /// No progress on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args, Debug)]
struct VerifyRobustArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    /// Enumerate all profiles when there are at most this many.
    #[arg(long, default_value_t = 2_000_000)]
    exhaustive_limit: u128,
    /// Sampled profiles when enumeration is too large.
    #[arg(long, default_value_t = 20_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SurplusArgs {
    #[arg(long)]
    lambda: Rational,
    #[arg(long)]
    rho: Option<Rational>,
}

/// A command's result and whether it counts as success.
struct Outcome {
    value: Value,
    ok: bool,
}

fn ok(value: Value) -> Result<Outcome> {
    Ok(Outcome { value, ok: true })
}

fn parse_list(arg: &str) -> Result<Vec<Rational>> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {path} as a JSON array of rationals"));
    }
    arg.split(',')
        .map(|s| s.trim().parse::<Rational>().map_err(|e| anyhow!("bad value {s:?}: {e}")))
        .collect()
}

fn integers(values: &[Rational], what: &str) -> Result<Vec<u64>> {
    values
        .iter()
        .map(|v| v.is_integer().then(|| v.floor_u64()).flatten().ok_or_else(|| anyhow!("{what} must be non-negative integers, got {v}")))
        .collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn bags(args: BagsArgs) -> Result<Outcome> {
    let m = args.m;
    let b = args.b.unwrap_or(m);
    if m == 0 || b == 0 {
        bail!("--m and --b must be positive");
    }
    let need_n = || args.n.filter(|&n| n > 0).ok_or_else(|| anyhow!("--n (positive) is required for this mode"));
    match args.mode {
        Mode::Sand => {
            let total = args.p.clone().unwrap_or_else(|| Rational::from(m));
            if !total.is_positive() {
                bail!("--p must be positive");
            }
            let profile = sand_bags(m, b, &total);
            ok(json!({"mode": "sand", "rho": rho_bar(m, b), "total": total, "sizes": profile}))
        }
        Mode::Pebbles => {
            let jobs = match &args.jobs {
                Some(list) => parse_list(list)?,
                None => vec![Rational::one(); need_n()? as usize],
            };
            let instance = Instance::new(jobs, m as usize, b as usize)?;
            let q = pebble_q(&instance);
            let rho = args.rho.clone().unwrap_or_else(|| rho_bar(m, b) + &q);
            let packed = pebbles_bags(&instance, &rho);
            let done = packed.packed_all;
            Ok(Outcome {
                value: json!({
                    "mode": "pebbles",
                    "rho": rho,
                    "q": q,
                    "packed_all": done,
                    "sizes": packed.bag_sizes,
                    "bag_of_job": packed.bag_of_job,
                }),
                ok: done,
            })
        }
        Mode::Bricks => {
            let rho = args.rho.clone().unwrap_or_else(brick_rho);
            let sol = bricks_bags(need_n()?, m, b, &rho);
            let done = sol.successful;
            Ok(Outcome {
                value: json!({
                    "mode": "bricks",
                    "rho": rho,
                    "sizes": sol.bag_sizes,
                    "costs": sol.bag_costs,
                    "total_size": sol.total_size,
                    "successful": done,
                }),
                ok: done,
            })
        }
        Mode::Auto => {
            let r = robust_bags(need_n()?, m, b)?;
            ok(json!({"mode": "auto", "branch": r.branch, "rho": r.rho, "sizes": r.profile}))
        }
    }
}

fn assign(args: AssignArgs) -> Result<Outcome> {
    let bags = BagProfile::new(parse_list(&args.bags)?)?;
    let speeds = SpeedProfile::new(parse_list(&args.speeds)?)?;
    let mut value = json!({
        "method": args.method.to_possible_value().map(|v| v.get_name().to_string()),
        "bags": bags,
        "speeds": speeds,
    });
    let trace = match args.method {
        Method::Optimal => {
            let (best, assignment) = optimal_second_stage(&bags, &speeds)?;
            value["assignment"] = to_value(&assignment);
            value["makespan"] = to_value(&best);
            return ok(value);
        }
        Method::Greedy => {
            let rho = args.rho.clone().ok_or_else(|| anyhow!("--rho is required for greedy"))?;
            value["rho"] = to_value(&rho);
            greedy_trace(bags.sizes(), &speeds, &rho)
        }
        Method::Integral => {
            let rho = args.rho.clone().ok_or_else(|| anyhow!("--rho is required for integral"))?;
            value["rho"] = to_value(&rho);
            let (a, s) = (integers(bags.sizes(), "bags")?, integers(speeds.speeds(), "speeds")?);
            if args.trace {
                integral_trace(&a, &s, &rho)
            } else {
                let (assignment, failure) = match integral_assignment(&a, &s, &rho) {
                    Ok(x) => (Some(x), None),
                    Err(f) => (None, Some(f)),
                };
                speedrobust::AssignmentTrace { steps: Vec::new(), assignment, failure }
            }
        }
    };
    if args.trace {
        value["trace"] = to_value(&trace.steps);
    }
    let success = trace.failure.is_none();
    match (trace.assignment, trace.failure) {
        (Some(assignment), _) => {
            value["makespan"] = to_value(&makespan(&assignment, &bags, &speeds)?);
            value["assignment"] = to_value::<Assignment>(&assignment);
        }
        (None, Some(failure)) => value["failure"] = to_value(&failure),
        (None, None) => unreachable!(),
    }
    Ok(Outcome { value, ok: success })
}

fn probe(args: ProbeArgs) -> Result<Outcome> {
    if args.m == 0 || args.b == 0 {
        bail!("--m and --b must be positive");
    }
    let bags = match &args.bags {
        Some(list) => BagProfile::new(parse_list(list)?)?,
        None => sand_bags(args.m, args.b, &Rational::from(SandSequence::new(args.m, args.b).upper)),
    };
    let r = lower_bound_probe(args.m, args.b, &bags)?;
    ok(json!({
        "m": args.m,
        "b": args.b,
        "bags": bags,
        "rho_bar": rho_bar(args.m, args.b),
        "value": r.value,
        "per_config": r.per_config,
        "worst_config": r.worst_config,
    }))
}

fn tables(args: TablesArgs) -> Result<Outcome> {
    let rho = args.rho.clone().unwrap_or_else(brick_rho);
    if !rho.is_positive() {
        bail!("--rho must be positive");
    }
    let rows: Vec<Value> = match args.which {
        Table::F => transformation_factor_table(args.zmax, &rho)
            .into_iter()
            .map(|r| json!({"z": r.z, "f": r.exact, "approx": r.decimal}))
            .collect(),
        Table::SurplusInt => (1..=args.lambda_max)
            .map(|l| {
                let s = normalized_surplus_at(&Rational::from(l), &rho);
                json!({"lambda": l, "surplus": s, "approx": s.to_decimal(3)})
            })
            .collect(),
        Table::SurplusBreakpoints => {
            if rho != brick_rho() {
                bail!("breakpoints are only tabulated for rho = 8/5");
            }
            if args.lambda_max == 0 {
                bail!("--lambda-max must be at least 1");
            }
            surplus_breakpoints(&Rational::from(args.lambda_max + 1))
                .into_iter()
                .filter_map(|p| {
                    p.retired_cost.map(|cost| {
                        json!({
                            "retired_cost": cost,
                            "lambda": p.lambda,
                            "lambda_approx": p.lambda.to_decimal(3),
                            "surplus": p.surplus,
                            "surplus_approx": p.surplus.to_decimal(3),
                        })
                    })
                })
                .collect()
        }
    };
    ok(Value::Array(rows))
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().ok_or_else(|| anyhow!("--out needs a file name"))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))
}

fn verify_range(args: VerifyRangeArgs) -> Result<Outcome> {
    let rho = args.rho.clone().unwrap_or_else(brick_rho);
    if !rho.is_positive() || args.m_max == 0 || args.lambda_max == 0 {
        bail!("--rho, --m-max and --lambda-max must be positive");
    }
    let quiet = args.quiet;
    let report = verify_bricks_success_range_with_progress(args.m_max, args.lambda_max, &rho, &|done, total| {
        if !quiet && (done % 16 == 0 || done == total) {
            eprintln!("verify-range: {done}/{total} machine counts");
        }
    });
    let passed = report.passed();
    Ok(Outcome { value: to_value(&report), ok: passed })
}

fn verify_robust(args: &VerifyRobustArgs) -> Result<Outcome> {
    if args.n == 0 || args.m == 0 {
        bail!("--n and --m must be positive");
    }
    let options = RobustnessOptions { exhaustive_limit: args.exhaustive_limit, samples: args.samples, seed: args.seed };
    let report = verify_bricks_robustness_with(args.n, args.m, &options);
    let passed = report.passed();
    Ok(Outcome { value: to_value(&report), ok: passed })
}

fn surplus(args: SurplusArgs) -> Result<Outcome> {
    let rho = args.rho.clone().unwrap_or_else(brick_rho);
    if !args.lambda.is_positive() || !rho.is_positive() {
        bail!("--lambda and --rho must be positive");
    }
    let s = normalized_surplus_at(&args.lambda, &rho);
    ok(json!({"lambda": args.lambda, "rho": rho, "surplus": s, "approx": s.to_decimal(3)}))
}

fn run(cli: Cli) -> Result<(String, bool)> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            bail!("--workers must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global()?;
    }
    let mut out_path = None;
    let outcome = match cli.command {
        Command::Bags(a) => bags(a)?,
        Command::Assign(a) => assign(a)?,
        Command::Probe(a) => probe(a)?,
        Command::Tables(a) => tables(a)?,
        Command::VerifyRange(a) => {
            out_path = a.out.clone();
            verify_range(a)?
        }
        Command::VerifyRobust(a) => {
            out_path = a.out.clone();
            verify_robust(&a)?
        }
        Command::Surplus(a) => surplus(a)?,
    };
    let text = render(&outcome.value, cli.format)?;
    if let Some(path) = out_path {
        write_atomic(&path, &text)?;
    }
    Ok((text, outcome.ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

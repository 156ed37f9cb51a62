use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dof_core::curve::{parse_grid, sum_dof_curve};
use dof_core::plan::{check_decoding, plan_for_target, PlanSpec};
use dof_core::report::{self, NumberFormat};
use dof_core::sim::{monte_carlo, Phase2Schedule, SimOptions};
use dof_core::{AntennaConfig, CsitMode, DoFPoint, DoFRegion, SchemePlan};

/// Exact DoF regions, scheme planning and link simulation for order-(K-1)
/// messages in the K-user MIMO broadcast channel.
///
/// Receivers are always reported in canonical order (ascending antenna count).
#[derive(Parser)]
#[command(name = "dof", version)]
struct Cli {
    /// Antenna configuration JSON, e.g. {"M": 2, "N": [1, 1, 1]}.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Base seed for simulation; trial t uses seed + t.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write rationals in CSV output as 12-digit decimals instead of num/den.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Halfspaces, vertices and maximum sum-DoF of a region.
    Region {
        #[arg(long, value_enum, default_value_t = ModeArg::Delayed)]
        mode: ModeArg,
    },
    /// Decide whether the no-CSIT region is strictly inside the delayed-CSIT region.
    Compare,
    /// Normalized symmetric sum-DoF against M/N for both CSIT modes.
    Curve {
        /// Receiver counts, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        k: Vec<u32>,
        /// M/N values: start:stop:step (inclusive) or a comma-separated list.
        #[arg(long, default_value = "1/4:3:1/4")]
        grid: String,
    },
    /// Integer scheme plan for a target tuple, or a check of an explicit plan.
    Plan(PlanArgs),
    /// Monte-Carlo link simulation of a plan.
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Maximum relative recovery error for a receiver to decode.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Complex AWGN standard deviation; zero is noiseless.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Interleaved)]
        schedule: ScheduleArg,
        /// Simulate plans that violate the decoding conditions instead of refusing them.
        #[arg(long)]
        allow_infeasible: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PlanArgs {
    /// Target tuple in canonical receiver order, e.g. "2/5,2/5,2/5".
    #[arg(long)]
    target: Option<String>,
    /// Plan JSON with Q, T, T2 and optional B.
    #[arg(long)]
    plan: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Delayed,
    #[value(name = "noCSIT", alias = "nocsit")]
    NoCsit,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleArg {
    Interleaved,
    RoundRobin,
}

impl From<ScheduleArg> for Phase2Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Interleaved => Phase2Schedule::Interleaved,
            ScheduleArg::RoundRobin => Phase2Schedule::RoundRobin,
        }
    }
}

/// Failures with their process exit codes.
enum Failure {
    Input(anyhow::Error),
    Infeasible(anyhow::Error),
    Simulation(String),
    Internal(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Infeasible(_) => 3,
            Failure::Simulation(_) => 4,
        }
    }
}

impl From<dof_core::Error> for Failure {
    fn from(e: dof_core::Error) -> Self {
        use dof_core::Error::*;
        match e {
            OutsideRegion { .. }
            | DecodingViolation { .. }
            | PhaseTwoBudget { .. }
            | RegimeViolation { .. }
            | PhaseTwoUndefined { .. } => Failure::Infeasible(e.into()),
            _ => Failure::Input(e.into()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn load_config(path: Option<&Path>) -> Outcome<AntennaConfig> {
    let path = path.ok_or_else(|| input(anyhow!("this command needs --config <path>")))?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    Ok(AntennaConfig::from_json(&text)?)
}

struct Output {
    dir: PathBuf,
    format: NumberFormat,
}

impl Output {
    fn write(&self, name: &str, contents: &str) -> Outcome {
        fs::create_dir_all(&self.dir)
            .and_then(|_| fs::write(self.dir.join(name), contents))
            .with_context(|| format!("writing {}", self.dir.join(name).display()))
            .map_err(Failure::Internal)?;
        println!("wrote {}", self.dir.join(name).display());
        Ok(())
    }
}

fn region_cmd(cfg: &AntennaConfig, mode: ModeArg, out: &Output) -> Outcome {
    let modes = match mode {
        ModeArg::Delayed => vec![CsitMode::Delayed],
        ModeArg::NoCsit => vec![CsitMode::NoCsit],
        ModeArg::Both => vec![CsitMode::NoCsit, CsitMode::Delayed],
    };
    println!("config {cfg}");
    let mut vertex_sets = Vec::new();
    for mode in modes {
        let region = match mode {
            CsitMode::NoCsit => DoFRegion::no_csit(cfg),
            CsitMode::Delayed => DoFRegion::delayed_csit(cfg),
        };
        let vertices = region.vertices()?;
        let best = region.max_sum_dof()?;
        out.write(&format!("region_{}.json", mode.tag()), &report::region_json(&region))?;
        out.write(
            &format!("vertices_{}.csv", mode.tag()),
            &report::vertex_csv(cfg.k(), &vertices, out.format),
        )?;
        println!(
            "{}: {} halfspaces, {} vertices, max sum-DoF {}",
            mode.tag(),
            region.halfspaces().len(),
            vertices.len(),
            out.format.render(&best)
        );
        vertex_sets.push(vertices);
    }
    if let [a, b] = vertex_sets.as_slice() {
        println!("vertex sets {}", if a == b { "identical" } else { "differ" });
    }
    Ok(())
}

fn compare_cmd(cfg: &AntennaConfig) -> Outcome {
    let none = DoFRegion::no_csit(cfg);
    let delayed = DoFRegion::delayed_csit(cfg);
    println!("config {cfg}");
    if !none.is_subset(&delayed)? {
        return Err(Failure::Internal(anyhow!(
            "no-CSIT region is not contained in the delayed-CSIT region"
        )));
    }
    match delayed.vertex_outside(&none)? {
        Some(w) => println!("strict inclusion: witness {w} lies in delayedCSIT but not in noCSIT"),
        None => println!("equal"),
    }
    Ok(())
}

fn curve_cmd(ks: &[u32], grid: &str, out: &Output) -> Outcome {
    let ratios = parse_grid(grid)?;
    let points = sum_dof_curve(ks, &ratios)?;
    out.write("curve.csv", &report::curve_csv(&points, out.format))
}

fn resolve_plan(cfg: &AntennaConfig, args: &PlanArgs) -> Outcome<SchemePlan> {
    match (&args.target, &args.plan) {
        (Some(target), _) => {
            let target: DoFPoint = target.parse()?;
            if target.dim() != cfg.k() {
                return Err(input(anyhow!(
                    "target has {} coordinates, config has {} receivers",
                    target.dim(),
                    cfg.k()
                )));
            }
            Ok(plan_for_target(cfg, &target)?)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))
                .map_err(input)?;
            let spec: PlanSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))
                .map_err(input)?;
            Ok(SchemePlan::from_spec(cfg, &spec)?)
        }
        (None, None) => Err(input(anyhow!("give --target or --plan"))),
    }
}

fn plan_cmd(cfg: &AntennaConfig, args: &PlanArgs, out: &Output) -> Outcome {
    let plan = resolve_plan(cfg, args)?;
    out.write("plan.json", &report::plan_json(cfg, &plan)?)?;
    println!("config {cfg}");
    println!(
        "Q={:?} T={:?} T2={} B={} beta={}",
        plan.q, plan.t, plan.t2, plan.b, plan.beta
    );
    check_decoding(cfg, &plan)?;
    println!("decodable, achieves {}", dof_core::plan::achieved_dof(&plan)?);
    Ok(())
}

fn simulate_cmd(
    cfg: &AntennaConfig,
    args: &PlanArgs,
    trials: usize,
    base_seed: u64,
    opts: SimOptions,
    out: &Output,
) -> Outcome {
    let plan = resolve_plan(cfg, args)?;
    let summary = monte_carlo(cfg, &plan, trials, base_seed, &opts)?;
    out.write("trials.csv", &report::trials_csv(cfg.k(), &summary.reports))?;
    out.write(
        "summary.json",
        &report::summary_json(cfg, &plan, base_seed, &opts, &summary),
    )?;
    println!(
        "{}/{} trials decoded at every receiver, worst residual {:.3e}, achieved {}",
        summary.successes, summary.trials, summary.worst_rel_error, summary.achieved
    );
    if summary.successes != summary.trials {
        return Err(Failure::Simulation(format!(
            "{} of {} trials failed",
            summary.trials - summary.successes,
            summary.trials
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = Output {
        dir: cli.out,
        format: if cli.decimal {
            NumberFormat::Decimal
        } else {
            NumberFormat::Exact
        },
    };
    let config = cli.config.as_deref();
    match cli.command {
        Command::Region { mode } => region_cmd(&load_config(config)?, mode, &out),
        Command::Compare => compare_cmd(&load_config(config)?),
        Command::Curve { k, grid } => curve_cmd(&k, &grid, &out),
        Command::Plan(args) => plan_cmd(&load_config(config)?, &args, &out),
        Command::Simulate {
            plan,
            trials,
            tolerance,
            noise,
            schedule,
            allow_infeasible,
        } => {
            if tolerance.is_nan() || tolerance <= 0.0 || noise.is_nan() || noise < 0.0 {
                return Err(input(anyhow!("tolerance must be positive and noise nonnegative")));
            }
            let opts = SimOptions {
                tolerance,
                noise_std: noise,
                allow_infeasible,
                schedule: schedule.into(),
            };
            simulate_cmd(&load_config(config)?, &plan, trials, cli.seed, opts, &out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Simulation(msg) => eprintln!("error: {msg}"),
                Failure::Input(e) | Failure::Infeasible(e) | Failure::Internal(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(f.code())
        }
    }
}

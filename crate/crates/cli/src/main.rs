//! `runway-planner`: capacity envelopes, slot policies, and day plans from
//! the command line.
//!
//! Exit codes: 0 success, 2 validation failure, 3 parse failure, 4 no
//! sustainable policy / unstable system / unreachable tolerance, 5
//! infeasible schedule, 1 anything else.

mod files;

use clap::{Parser, Subcommand};
use files::{ConfigFile, PlanFile, RoundingReport, ScheduleFile};
use runway_core::{
    compare_to_kingman, delay_policy_domain, optimize_slot, plan_day, secondary_demand_domain,
    sustainable_exists, sustainable_policy_domain, ArrivalServiceModel, ControlPoint, Error,
    SlotContext, TransferCosts,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const SEED_ENV_VAR: &str = "RUNWAY_PLANNER_SEED";
const DEFAULT_SEED: u64 = 42;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Validation(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 3,
            CliError::Validation(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidInput(_)
                | Error::OrderingViolation { .. }
                | Error::EndpointViolation { .. }
                | Error::ConvexityViolation { .. }
                | Error::InvalidVariability { .. } => 2,
                Error::NoSustainablePolicy
                | Error::EmptyDomain
                | Error::InfeasibleTolerance
                | Error::UnstableSystem { .. }
                | Error::SaturatedQueue { .. }
                | Error::OutOfRange { .. } => 4,
                Error::InfeasibleSchedule => 5,
                Error::NotAVertex | Error::NumericalFailure(_) => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) => format!("i/o error: {m}"),
            CliError::Parse(m) => format!("parse error: {m}"),
            CliError::Validation(m) => format!("validation error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "runway-planner", version, about = "Runway capacity and slot planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration file and print per-configuration summaries.
    Validate { config: PathBuf },
    /// Write the envelope and derived domain polylines as CSV files.
    Domains {
        config: PathBuf,
        /// Configuration name (defaults to the first in the file).
        #[arg(long)]
        config_name: Option<String>,
        #[arg(long)]
        lambda_a: f64,
        #[arg(long)]
        lambda_d: f64,
        /// Output directory for the CSV files.
        #[arg(long)]
        out: PathBuf,
    },
    /// Pick the delay-cost-minimal service policy for one slot.
    OptimizeSlot {
        config: PathBuf,
        #[arg(long)]
        config_name: Option<String>,
        #[arg(long)]
        lambda_a: f64,
        #[arg(long)]
        lambda_d: f64,
    },
    /// Plan flight transfers over a day and write the plan as JSON.
    PlanDay {
        config: PathBuf,
        schedule: PathBuf,
        /// Output file for the plan.
        #[arg(long)]
        out: PathBuf,
        /// Transfer cost per landing flight (defaults to the config's c_a).
        #[arg(long)]
        transfer_cost_a: Option<f64>,
        /// Transfer cost per takeoff flight (defaults to the config's c_d).
        #[arg(long)]
        transfer_cost_d: Option<f64>,
    },
    /// Simulate a single queue and compare with the closed-form transit time.
    Simulate {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        mu: f64,
        /// Quadratic ratio of momenta of interarrival times (>= 1).
        #[arg(long)]
        qc: f64,
        /// Quadratic ratio of momenta of service times (>= 1).
        #[arg(long)]
        qs: f64,
        /// Number of simulated arrivals.
        #[arg(long)]
        n: usize,
        /// Arrivals to discard before collecting statistics (default n/10).
        #[arg(long)]
        warmup: Option<usize>,
        /// RNG seed (default: RUNWAY_PLANNER_SEED env var, then 42).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { config } => cmd_validate(&config),
        Command::Domains { config, config_name, lambda_a, lambda_d, out } => {
            cmd_domains(&config, config_name.as_deref(), lambda_a, lambda_d, &out)
        }
        Command::OptimizeSlot { config, config_name, lambda_a, lambda_d } => {
            cmd_optimize_slot(&config, config_name.as_deref(), lambda_a, lambda_d)
        }
        Command::PlanDay { config, schedule, out, transfer_cost_a, transfer_cost_d } => {
            cmd_plan_day(&config, &schedule, &out, transfer_cost_a, transfer_cost_d)
        }
        Command::Simulate { lambda, mu, qc, qs, n, warmup, seed } => {
            cmd_simulate(lambda, mu, qc, qs, n, warmup, seed)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn cmd_validate(config_path: &Path) -> Result<(), CliError> {
    let file = ConfigFile::load(config_path)?;
    for entry in &file.configurations {
        let config = entry.to_config()?;
        println!(
            "{}: J={} mu_a_max={:.6} mu_d_max={:.6} q_a={:.6} q_d={:.6}",
            config.name,
            config.envelope.segment_count(),
            config.envelope.mu_a_max(),
            config.envelope.mu_d_max(),
            config.q_a,
            config.q_d,
        );
    }
    println!(
        "tolerances: p_a={:.6} p_d={:.6}; costs: c_a={:.6} c_d={:.6}; slot_minutes={}",
        file.tolerances.p_a, file.tolerances.p_d, file.costs.c_a, file.costs.c_d, file.slot_minutes
    );
    println!("OK: {} configuration(s) valid", file.configurations.len());
    Ok(())
}

fn write_polyline(path: &Path, points: &[ControlPoint]) -> Result<(), CliError> {
    let mut text = String::from("x,y\n");
    for p in points {
        text.push_str(&format!("{:.6},{:.6}\n", p.x, p.y));
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_domains(
    config_path: &Path,
    config_name: Option<&str>,
    lambda_a: f64,
    lambda_d: f64,
    out: &Path,
) -> Result<(), CliError> {
    let file = ConfigFile::load(config_path)?;
    let config = file.select(config_name)?;
    let (p_a, p_d) = (file.tolerances.p_a, file.tolerances.p_d);
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    write_polyline(&out.join("envelope.csv"), config.envelope.points())?;
    println!("envelope {}: wrote envelope.csv", config.name);

    let secondary = secondary_demand_domain(&config.envelope, config.q_a, config.q_d, p_a, p_d)?;
    write_polyline(&out.join("secondary_demand.csv"), secondary.vertices())?;
    println!("secondary demand domain: wrote secondary_demand.csv");

    let ctx = SlotContext::new(
        config.envelope.clone(),
        config.q_a,
        config.q_d,
        p_a,
        p_d,
        lambda_a,
        lambda_d,
    )?;
    if !sustainable_exists(&ctx) {
        println!("verdict: no sustainable policy for lambda=({lambda_a}, {lambda_d})");
        return Err(Error::NoSustainablePolicy.into());
    }
    let policy_domain = sustainable_policy_domain(&ctx)?;
    let corner = policy_domain.corner();
    write_polyline(&out.join("sustainable_policy.csv"), policy_domain.points())?;
    let delay = delay_policy_domain(&ctx)?;
    write_polyline(&out.join("delay_policy.csv"), delay.vertices())?;
    println!("sustainable corner: mu_a_cong={:.6} mu_d_cong={:.6}", corner.x, corner.y);
    println!("delay caps: p_a={:.6} p_d={:.6}", delay.p_a, delay.p_d);
    println!("verdict: sustainable policy exists");
    Ok(())
}

fn cmd_optimize_slot(
    config_path: &Path,
    config_name: Option<&str>,
    lambda_a: f64,
    lambda_d: f64,
) -> Result<(), CliError> {
    let file = ConfigFile::load(config_path)?;
    let config = file.select(config_name)?;
    let costs = file.delay_costs()?;
    let ctx = SlotContext::new(
        config.envelope.clone(),
        config.q_a,
        config.q_d,
        file.tolerances.p_a,
        file.tolerances.p_d,
        lambda_a,
        lambda_d,
    )?;
    let policy = optimize_slot(&ctx, &costs)?;
    println!("z_a={:.6} z_d={:.6}", policy.z_a, policy.z_d);
    println!(
        "mu_a={:.6} mu_d={:.6} cost={:.6}",
        policy.mu_a, policy.mu_d, policy.expected_cost
    );
    Ok(())
}

fn cmd_plan_day(
    config_path: &Path,
    schedule_path: &Path,
    out: &Path,
    transfer_cost_a: Option<f64>,
    transfer_cost_d: Option<f64>,
) -> Result<(), CliError> {
    let file = ConfigFile::load(config_path)?;
    let schedule = ScheduleFile::load(schedule_path)?;
    let registry = file.registry()?;
    let day = schedule.to_day(&file.tolerances)?;
    let transfer_costs = TransferCosts::new(
        transfer_cost_a.unwrap_or(file.costs.c_a),
        transfer_cost_d.unwrap_or(file.costs.c_d),
    )?;
    let delay_costs = file.delay_costs()?;

    let plan = plan_day(&day, &registry, &transfer_costs, &delay_costs)?;
    let output = PlanFile {
        slot_minutes: file.slot_minutes,
        total_transfer_cost: plan.total_transfer_cost,
        total_delay_cost: plan.total_delay_cost,
        transfers: &plan.transfers,
        policies: &plan.policies,
        rounded_transfers: RoundingReport::from_plan(&plan),
    };
    let text = serde_json::to_string_pretty(&output)
        .map_err(|e| CliError::Io(format!("serializing plan: {e}")))?;
    std::fs::write(out, text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    println!(
        "planned {} slot(s): transfer_cost={:.6} delay_cost={:.6}",
        day.len(),
        plan.total_transfer_cost,
        plan.total_delay_cost
    );
    println!("plan written to {}", out.display());
    Ok(())
}

fn cmd_simulate(
    lambda: f64,
    mu: f64,
    qc: f64,
    qs: f64,
    n: usize,
    warmup: Option<usize>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let seed = seed
        .or_else(|| std::env::var(SEED_ENV_VAR).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_SEED);
    let warmup = warmup.unwrap_or(n / 10);
    let model = ArrivalServiceModel::from_rates(lambda, mu, qc, qs)?;
    let report = compare_to_kingman(&model, n, warmup, seed)?;
    println!(
        "simulated_z={:.6} formula_z={:.6} relative_gap={:.6}",
        report.simulated_transit_time, report.formula_transit_time, report.relative_gap
    );
    println!(
        "mean_queue_length={:.6} arrivals={} warmup={} seed={}",
        report.result.mean_queue_length, report.result.arrivals_served, warmup, seed
    );
    Ok(())
}

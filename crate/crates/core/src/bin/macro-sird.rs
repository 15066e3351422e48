use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use macro_sird::report::{
    export_loss_csv, export_plot_csv, export_quarterly_csv, export_trajectory_csv, format_quarterly,
};
use macro_sird::scenario::load_scenario_file;
use macro_sird::{
    policy_sweep_with, quarterly_table, run_scenario, ConfigError, Execution, RegimeKind, ScenarioConfig,
};

const CONFIG_ERROR: u8 = 1;
const MODEL_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "macro-sird", version, about = "Macro-SIRD lockdown policy simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write the trajectory, quarterly table and plot data.
    Run(RunArgs),
    /// Evaluate the loss over a (theta0, mu) grid of soft lockdown rules.
    Sweep(SweepArgs),
    /// Check a configuration file and print the resolved scenario.
    Validate(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML scenario; omitted keys take their defaults.
    #[arg(short, long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    days: Option<u32>,
    /// none, hard or soft
    #[arg(long)]
    regime: Option<RegimeKind>,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(short, long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    days: Option<u32>,
    /// Comma-separated theta0 values; 1 means no lockdown.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    thetas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.5, 1.0, 2.0])]
    mus: Vec<f64>,
    /// Loss power (1 linear, 2 quadratic).
    #[arg(long)]
    m: Option<f64>,
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    horizon: Option<u32>,
    /// Evaluate cells on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

enum Failure {
    Config(String),
    Model(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(args: &ConfigArgs) -> Result<ScenarioConfig, ConfigError> {
    match &args.config {
        Some(path) => load_scenario_file(path),
        None => Ok(ScenarioConfig::default()),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Model(format!("creating {}: {e}", dir.display())))
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let mut cfg = load(&args.config)?;
    if let Some(d) = args.days {
        cfg.run_days = d;
    }
    if let Some(k) = args.regime {
        cfg.policy.kind = k;
    }
    if let Some(t) = args.theta0 {
        cfg.policy.theta0 = t;
    }
    if let Some(mu) = args.mu {
        cfg.policy.mu = mu;
    }
    cfg.finalize()?;

    let traj = run_scenario(&cfg).map_err(|e| Failure::Model(e.to_string()))?;
    ensure_dir(&args.out)?;
    let model = |e: macro_sird::ExportError| Failure::Model(e.to_string());
    export_trajectory_csv(&traj, &args.out.join("trajectory.csv")).map_err(model)?;
    export_plot_csv(&traj, &args.out.join("plot_data.csv")).map_err(model)?;
    match quarterly_table(&traj) {
        Ok(rows) => {
            export_quarterly_csv(&rows, &args.out.join("quarterly.csv")).map_err(model)?;
            print!("{}", format_quarterly(&rows));
        }
        Err(e) => eprintln!("quarterly table skipped: {e}"),
    }
    if let Some(last) = traj.last() {
        println!(
            "day {}: deaths {:.0} ({:.3}% of N), output gap {:.4}, lockdown episodes {}",
            last.day,
            last.deaths,
            100.0 * last.deaths / traj.population,
            last.output_gap,
            traj.lockdown_episodes().len()
        );
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let mut cfg = load(&args.config)?;
    if let Some(m) = args.m {
        cfg.loss.m_power = m;
    }
    if let Some(chi) = args.chi {
        cfg.loss.chi = chi;
    }
    if let Some(h) = args.horizon {
        cfg.loss.horizon_days = h;
    }
    cfg.run_days = args.days.unwrap_or(cfg.run_days.max(cfg.loss.horizon_days));
    cfg.finalize()?;

    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let report = policy_sweep_with(&cfg, &args.thetas, &args.mus, &cfg.loss, exec)?;
    ensure_dir(&args.out)?;
    export_loss_csv(&report, &args.out.join("loss_surface.csv")).map_err(|e| Failure::Model(e.to_string()))?;
    for c in report.failed() {
        eprintln!(
            "cell theta0={} mu={} failed: {}",
            c.theta0,
            c.mu,
            c.error.as_deref().unwrap_or("")
        );
    }
    match report.argmin_cell() {
        Some(best) => println!(
            "argmin: regime {} theta0={} mu={} psi={:e}",
            best.regime,
            best.theta0,
            best.mu,
            best.psi().unwrap_or(f64::NAN)
        ),
        None => return Err(Failure::Model("every grid cell failed".into())),
    }
    Ok(())
}

fn validate(args: ConfigArgs) -> Result<(), Failure> {
    let cfg = load(&args)?;
    print!("{}", cfg.to_toml()?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(CONFIG_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(CONFIG_ERROR)
        }
        Err(Failure::Model(msg)) => {
            eprintln!("model error: {msg}");
            ExitCode::from(MODEL_ERROR)
        }
    }
}

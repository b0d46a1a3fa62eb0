use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod output;

use config::{AlphaGrid, Engine, ExperimentConfig, Format, Sweep};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Physics(#[from] rectiflow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Physics(e) if e.is_numerical() => 3,
            CliError::Physics(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rectiflow", version, about = "Heat-rectifier performance and Pareto-front experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config; flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Device family or comma-separated list (A, B, C).
    #[arg(long, global = true, value_delimiter = ',', ignore_case = true)]
    device: Option<Vec<Device>>,

    #[arg(long, global = true, value_enum)]
    engine: Option<EngineArg>,

    /// `uniform:N` or a comma-separated list of values in [0, 1].
    #[arg(long, global = true)]
    alpha_grid: Option<String>,

    /// Hot temperatures: `from:to:points` or a comma-separated list.
    #[arg(long, global = true)]
    t_hot: Option<String>,

    /// Maximize R subject to J ≥ j_min (γε) in `tradeoff`.
    #[arg(long, global = true)]
    j_min: Option<f64>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "RECTIFLOW_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Currents, R and η at single parameter points.
    Point,
    /// Optimal (χ, δ, g) per T_h and α, or max R under `j_min`.
    Tradeoff,
    /// Pareto fronts per device and T_h, with a max-η summary.
    Pareto,
    /// Dominance labels between two devices over a (T_h, δ|g) grid.
    Regions,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum Device {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::from_path(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(devs) = &cli.device {
        cfg.devices = devs
            .iter()
            .map(|d| match d {
                Device::A => rectiflow::DeviceFamily::A,
                Device::B => rectiflow::DeviceFamily::B,
                Device::C => rectiflow::DeviceFamily::C,
            })
            .collect();
    }
    if let Some(e) = cli.engine {
        cfg.engine = match e {
            EngineArg::Analytic => Engine::Analytic,
            EngineArg::Numeric => Engine::Numeric,
            EngineArg::Both => Engine::Both,
        };
    }
    if let Some(t) = &cli.t_hot {
        cfg.t_hot = Sweep::parse_flag(t)?;
    }
    if let Some(j) = cli.j_min {
        cfg.j_min = Some(j);
    }
    if let Some(a) = &cli.alpha_grid {
        cfg.alpha_grid = AlphaGrid::parse_flag(a)?;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(out) = &cli.out {
        cfg.output = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let cfg = resolve(&cli)?;
    let run = commands::Run {
        config: &cfg,
        out: cfg.output.as_ref().map(PathBuf::from),
    };
    match cli.command {
        Command::Point => run.point(),
        Command::Tradeoff => run.tradeoff(),
        Command::Pareto => run.pareto(),
        Command::Regions => run.regions(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

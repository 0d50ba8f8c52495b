//! `taols`: K-sweep estimation, synthetic data and CO₂ forcing conversion.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "taols",
    version,
    about = "Transformed and augmented OLS for forcing/temperature data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep K over a dataset and write the CSV table, charts and summary.
    Estimate(EstimateArgs),
    /// Write a synthetic multicointegrated dataset in the combined schema.
    Simulate(SimulateArgs),
    /// Convert a `year,co2_ppm` file into a `year,forcing_wm2` file.
    ForcingFromCo2(ForcingArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Text,
}

#[derive(Args, Debug, Default)]
pub struct EstimateArgs {
    /// Combined CSV with year, forcing_wm2 and temp_anomaly_c columns.
    #[arg(long, conflicts_with_all = ["forcing", "temperature"])]
    pub input: Option<PathBuf>,
    /// Forcing file (`year,<value>`); requires --temperature.
    #[arg(long, requires = "temperature")]
    pub forcing: Option<PathBuf>,
    /// Temperature file (`year,<value>`); requires --forcing.
    #[arg(long, requires = "forcing")]
    pub temperature: Option<PathBuf>,
    /// `key = value` file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub k_min: Option<usize>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub k_step: Option<usize>,
    /// Confidence level in (0, 1).
    #[arg(long)]
    pub level: Option<f64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Artifacts to write (comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
    /// Heteroskedasticity-robust (HC1) standard errors.
    #[arg(long)]
    pub robust_se: bool,
    /// Omit the timestamp line so reruns are byte-identical.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NoiseKind {
    None,
    Iid,
    Ar1,
    Spiked,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 500)]
    pub t: usize,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 20.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub noise: NoiseKind,
    /// Innovation standard deviation of the noise.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// AR(1) coefficient for `--noise ar1`.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.05)]
    pub spike_prob: f64,
    #[arg(long, default_value_t = 10.0)]
    pub spike_scale: f64,
    /// Standard deviation of the temperature increments.
    #[arg(long, default_value_t = 1.0)]
    pub sigma_s: f64,
    #[arg(long, default_value_t = 1850, allow_negative_numbers = true)]
    pub start_year: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ForcingArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Reference concentration C0 in ppm.
    #[arg(long, default_value_t = taols::forcing::PREINDUSTRIAL_CO2_PPM)]
    pub baseline: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(a) => commands::run_estimate(a),
        Command::Simulate(a) => commands::run_simulate(a),
        Command::ForcingFromCo2(a) => commands::run_forcing(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

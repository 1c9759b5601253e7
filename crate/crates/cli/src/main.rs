mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use eelkit::sim::DistributionSpec;
use eelkit::Method;

use crate::error::CliError;

/// Empirical likelihood and extended empirical likelihood for a mean.
#[derive(Parser, Debug)]
#[command(name = "eelkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a statistic at one parameter value.
    Eval(EvalArgs),
    /// Confidence intervals for a scalar mean.
    Ci(CiArgs),
    /// Test whether points lie in a confidence region.
    Region(RegionArgs),
    /// Trace a level contour of a bivariate statistic.
    Contour(ContourArgs),
    /// Monte Carlo coverage of the true mean.
    Coverage(SimArgs),
    /// Monte Carlo mean interval lengths for a scalar scenario.
    Lengths(SimArgs),
    /// Bartlett constant from data or a named distribution.
    Bartlett(BartlettArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// CSV file with one observation per row; standard input when absent.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Bartlett constant for eel2 and bel; estimated from scalar data when absent.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Parameter value, comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CiArgs {
    /// One or more methods, comma-separated.
    #[arg(long, value_parser = parse_method, value_delimiter = ',', required = true)]
    method: Vec<Method>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("threshold").required(true).args(["level", "critical"])))]
#[command(group(ArgGroup::new("where").required(true).args(["theta", "points"])))]
struct RegionArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Confidence level; the threshold is the chi-square quantile.
    #[arg(long)]
    level: Option<f64>,
    /// Explicit threshold for the statistic.
    #[arg(long)]
    critical: Option<f64>,
    /// A single point, comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// CSV file of points to test, one per row.
    #[arg(long)]
    points: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("height").required(true).args(["tau", "level"])))]
struct ContourArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Contour height of the statistic.
    #[arg(long)]
    tau: Option<f64>,
    /// Confidence level; the height is the chi-square(2) quantile.
    #[arg(long)]
    level: Option<f64>,
    #[arg(long, default_value_t = 64)]
    rays: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(long, value_parser = parse_dist)]
    dist: DistributionSpec,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, value_parser = parse_method, value_delimiter = ',', default_value = "oel,eel1")]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Fixed Bartlett constant; per-sample estimate for scalar data when absent.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").args(["input", "dist"])))]
struct BartlettArgs {
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Theoretical constant of a scalar distribution.
    #[arg(long, value_parser = parse_dist)]
    dist: Option<DistributionSpec>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: eelkit::EelError| e.to_string())
}

fn parse_dist(s: &str) -> Result<DistributionSpec, String> {
    s.parse().map_err(|e: eelkit::EelError| e.to_string())
}

/// Worker thread cap from `EELKIT_THREADS`.
fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var("EELKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(t) if t >= 1 => Ok(Some(t)),
            _ => Err(CliError::Usage(format!("EELKIT_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Ci(a) => commands::ci(a),
        Command::Region(a) => commands::region(a),
        Command::Contour(a) => commands::contour(a),
        Command::Coverage(a) => commands::coverage(a, thread_cap()?),
        Command::Lengths(a) => commands::lengths(a, thread_cap()?),
        Command::Bartlett(a) => commands::bartlett(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("eelkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

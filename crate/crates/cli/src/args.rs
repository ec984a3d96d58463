use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nitm", version, about = "Non-iterative transformation method for Blasius-class problems")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Values given here override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Integration step in star variables.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub step: Option<f64>,

    /// Comma-separated truncated boundaries, tried in order.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub boundaries: Option<Vec<f64>>,

    /// Relative agreement required between successive boundaries.
    #[arg(long = "lambda-tol", global = true, allow_hyphen_values = true)]
    pub lambda_tol: Option<f64>,

    /// Seeded sign of f*''(0): +1 or -1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub sign: Option<String>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Write the rescaled profile as CSV.
    #[arg(long, global = true)]
    pub profile: Option<PathBuf>,

    /// key=value file with defaults for step, boundaries, lambda_tol, format and out.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classic flat plate: boundary-by-boundary shear and the accepted value.
    Blasius,
    /// One row per star parameter value.
    Sweep(SweepArgs),
    /// Single moving-wall solve.
    MovingWall(StarArgs),
    /// Single slip-flow solve.
    Slip(StarArgs),
    /// Single gasification solve.
    Gasification(StarArgs),
    /// Most negative wall parameter b reachable on the +1 branch.
    CriticalB(CriticalArgs),
    /// Solve for the star parameter that yields a requested physical parameter.
    Target(TargetArgs),
    /// Small-eta power series against the integrated solution.
    SeriesCheck(SeriesArgs),
    /// Truncated-boundary error bound and its empirical check.
    Rubel(RubelArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub problem: String,

    /// Explicit comma-separated star values.
    #[arg(long, value_delimiter = ',', conflicts_with = "range", allow_hyphen_values = true)]
    pub values: Option<Vec<f64>>,

    /// `start,end,count`: evenly spaced star values, both ends included.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub range: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct StarArgs {
    /// Star parameter (b*, c* or s*).
    #[arg(long, visible_aliases = ["b-star", "c-star", "s-star"], allow_hyphen_values = true)]
    pub star: f64,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long = "b-star-min", allow_hyphen_values = true)]
    pub b_star_min: Option<f64>,

    #[arg(long = "b-star-max", allow_hyphen_values = true)]
    pub b_star_max: Option<f64>,

    /// Number of log-spaced scan points.
    #[arg(long)]
    pub points: Option<usize>,

    /// Golden-section tolerance in b*.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,

    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[arg(long)]
    pub problem: String,

    #[arg(long, group = "goal", allow_hyphen_values = true)]
    pub b: Option<f64>,

    #[arg(long, group = "goal", allow_hyphen_values = true)]
    pub c: Option<f64>,

    #[arg(long, group = "goal", allow_hyphen_values = true)]
    pub s: Option<f64>,

    #[arg(long, group = "goal", allow_hyphen_values = true)]
    pub target: Option<f64>,

    /// Secant starting pair `x0,x1` in star values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub from: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long = "eta-max", default_value_t = 0.5, allow_hyphen_values = true)]
    pub eta_max: f64,
}

#[derive(Debug, Args)]
pub struct RubelArgs {
    /// Truncated boundary in star variables.
    #[arg(long = "M", default_value_t = 4.0, allow_hyphen_values = true)]
    pub m: f64,
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use octarec::matchings::FormulaPath;
use octarec::{Point, SemifieldKind};

mod commands;
mod report;

/// Exact evolution, matching formulas and periodicity checks for the
/// bounded octahedron and cube recurrences.
#[derive(Parser, Debug)]
#[command(name = "octarec", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Input document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output document, or counterexample dump for checks.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Width of the box.
    #[arg(long, global = true)]
    pub m: Option<i64>,

    /// Height of the box; also the size of triangles and prisms.
    #[arg(long, global = true)]
    pub n: Option<i64>,

    /// Size of triangles, half-strips and prisms.
    #[arg(long, global = true)]
    pub size: Option<i64>,

    #[arg(long, global = true, default_value = "rational")]
    pub semifield: SemifieldKind,

    /// Space-time point `x,y,t` (or `x,y,z` in the prism).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,

    /// Sample points per case.
    #[arg(long, global = true, default_value_t = 10)]
    pub samples: usize,

    /// Random cases to run when no input is given.
    #[arg(long, global = true, default_value_t = 1)]
    pub cases: usize,

    #[arg(long, global = true, default_value = "wbar")]
    pub path: FormulaPath,

    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Random state on a random section of an m x n box.
    Gen,
    /// Evolve a state to a shifted or explicitly given section.
    Evolve {
        /// JSON file holding the target heights, `heights[y][x]`.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Raise every height by this even amount.
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Value at a point by running the recurrence.
    Value,
    /// Value at a point by the matching formula.
    Formula,
    /// Check f(P) = c f(antipode(P)) on random samples.
    CheckPeriodicity,
    /// List the matchings of the complex for a point.
    Matchings,
    /// Count the matchings of the complex for a point.
    Count,
    /// Check rotation covariance of the triangle map.
    CheckQuarter,
    /// Check the half-strip and half-plane maps agree.
    CheckHalf,
    /// Move a cube slab up or down.
    CubeEvolve {
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        steps: i64,
    },
    /// Check f(x,y,z) = c f(y-n, z-n, x) on random prism samples.
    CubeCheck,
}

impl Cli {
    pub fn point(&self) -> Result<Point, octarec::Error> {
        self.point.as_deref().ok_or_else(|| octarec::Error::Parse("--point is required".into()))?.parse()
    }

    /// Size of triangles, strips and prisms.
    pub fn size(&self) -> i64 {
        self.size.or(self.n).unwrap_or(2)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            report.print(cli.json);
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

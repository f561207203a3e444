//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::dataset::{load_csv_auto, medical_to_dataset, DataSet, MedicalSeries};
use crate::error::{Error, Result};
use crate::oracle::{grid_oracle, GridSpec};
use crate::position::{count_regular, count_superset};
use crate::report::{plot_csv, FitReport};
use crate::search::{run_search, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INCOMPLETE: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

/// Slack allowed when comparing the search against the grid oracle.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "freeknot",
    version,
    about = "Best least-squares broken lines with free knots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a broken line with k free knots to x,f data.
    Fit {
        input: PathBuf,
        #[arg(long = "knots", short = 'k')]
        knots: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-knot fit of a dilution series on steps 0..z; reports MBC and MIC.
    Mbc {
        input: PathBuf,
        /// Initial concentration.
        #[arg(long)]
        kappa0: f64,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Count regular position vectors and all increasing code vectors.
    #[command(visible_alias = "count-vectors")]
    Count {
        /// Number of data points (including both end points).
        points: usize,
        #[arg(long = "knots", short = 'k')]
        knots: usize,
    },
    /// Compare the search with the brute-force grid oracle.
    Verify {
        input: PathBuf,
        #[arg(long = "knots", short = 'k')]
        knots: usize,
        /// Grid refinement per data interval.
        #[arg(long, default_value_t = 2)]
        grid: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Stop after this many seconds and report the best fit found.
    #[arg(long = "time-limit")]
    pub time_limit: Option<f64>,
    #[arg(long = "no-prune")]
    pub no_prune: bool,
    #[arg(long = "no-prioritize")]
    pub no_prioritize: bool,
}

impl SearchArgs {
    fn options(&self) -> Result<SearchOptions> {
        let mut opts = SearchOptions::default();
        if let Some(t) = self.threads {
            opts.threads = t;
        }
        if let Some(secs) = self.time_limit {
            opts.time_limit = Some(
                Duration::try_from_secs_f64(secs)
                    .map_err(|_| Error::precondition(format!("invalid time limit {secs}")))?,
            );
        }
        opts.prune = !self.no_prune;
        opts.prioritize = !self.no_prioritize;
        Ok(opts)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write polyline samples as x,s(x) CSV.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn fit_and_report(
    data: &DataSet,
    k: usize,
    search: &SearchArgs,
    output: &OutputArgs,
    kappa0: Option<f64>,
    out: &mut dyn Write,
) -> Result<i32> {
    let result = run_search(data, k, &search.options()?)?;
    let mut report = FitReport::from_result(&result);
    if let Some(k0) = kappa0 {
        report = report.with_concentrations(k0);
    }
    if let Some(path) = &output.plot {
        write_file(path, &plot_csv(&result.best))?;
    }
    let json = report.to_json();
    match &output.json {
        Some(path) => write_file(path, &json)?,
        None => out.write_all(json.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?,
    }
    Ok(if result.complete {
        EXIT_OK
    } else {
        EXIT_INCOMPLETE
    })
}

fn dilution_series(path: &Path, kappa0: f64) -> Result<DataSet> {
    let raw = load_csv_auto(path)?;
    if raw.xs().iter().enumerate().any(|(j, &x)| x != j as f64) {
        return Err(Error::precondition(
            "dilution data must have abscissae 0, 1, ..., z",
        ));
    }
    medical_to_dataset(&MedicalSeries::new(kappa0, raw.fs().to_vec())?)
}

/// Runs a parsed command, writing normal output to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let print = |out: &mut dyn Write, s: String| {
        out.write_all(s.as_bytes()).map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    };
    match cli.command {
        Command::Fit {
            input,
            knots,
            search,
            output,
        } => {
            let data = load_csv_auto(&input)?;
            fit_and_report(&data, knots, &search, &output, None, out)
        }
        Command::Mbc {
            input,
            kappa0,
            search,
            output,
        } => {
            let data = dilution_series(&input, kappa0)?;
            fit_and_report(&data, 2, &search, &output, Some(kappa0), out)
        }
        Command::Count { points, knots } => {
            if knots == 0 || points < knots + 3 {
                return Err(Error::precondition(format!(
                    "need k >= 1 and at least k + 3 data points, got {points} points and k = {knots}"
                )));
            }
            let mu = points - 2;
            let regular = count_regular(mu, knots)?;
            let superset = count_superset(mu, knots)?;
            print(out, format!("regular: {regular}\nsuperset: {superset}\n"))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            input,
            knots,
            grid,
            search,
        } => {
            let data = load_csv_auto(&input)?;
            let spec = GridSpec::new(grid)?;
            let found = run_search(&data, knots, &search.options()?)?;
            let oracle = grid_oracle(&data, knots, spec)?;
            let pass = found.best.residual <= oracle + VERIFY_TOL;
            print(
                out,
                format!(
                    "search residual: {}\noracle residual: {}\n{}\n",
                    found.best.residual,
                    oracle,
                    if pass { "PASS" } else { "FAIL" }
                ),
            )?;
            Ok(match (pass, found.complete) {
                (false, _) => EXIT_VERIFY_FAILED,
                (true, false) => EXIT_INCOMPLETE,
                (true, true) => EXIT_OK,
            })
        }
    }
}

/// Exit code for an error raised while running a command.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_io() {
        EXIT_IO
    } else {
        EXIT_VALIDATION
    }
}

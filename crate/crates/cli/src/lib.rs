//! Manifest-driven batch runs of the radial imaginary-time solver.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use radial_itp::solve_spectrum;
use radial_itp::sweep::map_jobs;

pub mod compare;
pub mod manifest;
pub mod report;

use manifest::{RunManifest, RunPlan};
use report::{write_densities, Report, RunReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Solve(radial_itp::Error),
}

impl CliError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "radial-itp", version, about = "Bound states of central potentials by imaginary-time propagation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every solve described by a manifest.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Concurrent sweep workers (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Overrides `solver.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Diff the energies and moments of two reports.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
    },
}

/// Loads and validates a manifest. Nothing is written.
pub fn plan(config: &Path, seed: Option<u64>) -> Result<RunPlan, CliError> {
    let manifest = RunManifest::load(config)?;
    let base = config.parent().unwrap_or(Path::new("."));
    manifest.plan(base, seed)
}

/// Runs every point of the plan, writes the report (and densities), and
/// returns it. Solver failures end up in the report, not in `Err`.
pub fn execute(plan: &RunPlan, jobs: usize) -> Result<Report, CliError> {
    let outcomes = map_jobs(&plan.points, jobs, |p| solve_spectrum(&p.spec, &p.grid, &p.config))
        .map_err(CliError::Solve)?;
    let runs: Vec<RunReport> = plan
        .points
        .iter()
        .zip(&outcomes)
        .map(|(p, o)| RunReport::new(p, o))
        .collect();
    let report = Report::new(runs);
    report.write(&plan.report)?;
    if let Some(dir) = &plan.density {
        let sweep = plan.points.len() > 1 || plan.points[0].parameter.is_some();
        for (k, (point, outcome)) in plan.points.iter().zip(&outcomes).enumerate() {
            if let Ok(sp) = outcome {
                write_densities(dir, sweep.then_some(k), point, &sp.results)?;
            }
        }
    }
    Ok(report)
}

pub fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Solve { config, jobs, seed } => {
            let plan = match plan(&config, seed) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match execute(&plan, jobs) {
                Ok(report) => {
                    print!("{}", report.table());
                    println!("report written to {}", plan.report.display());
                    if report.all_converged {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("error: not every requested state converged");
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Compare { a, b, tol } => {
            let (ra, rb) = match (Report::read(&a), Report::read(&b)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let cmp = compare::compare(&ra, &rb);
            print!("{}", cmp.text);
            if cmp.passes(tol) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

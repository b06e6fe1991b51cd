//! JSON report and density CSV export.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use radial_itp::{
    count_nodes, effective_potential, radial_distribution, EigenstateResult, Potential, Spectrum,
    SpectrumStatus,
};

use crate::manifest::RunPoint;
use crate::CliError;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub all_converged: bool,
    pub runs: Vec<RunReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub parameter: Option<SweptValue>,
    pub potential: PotentialReport,
    pub grid: GridReport,
    pub solver: SolverReport,
    /// `complete`, `not_converged` or `failed`.
    pub status: String,
    pub error: Option<String>,
    pub states: Vec<StateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweptValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialReport {
    pub family: String,
    pub coupling: Option<f64>,
    pub exponent: Option<f64>,
    pub ell: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub n_points: usize,
    pub r_max: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub dt: f64,
    pub tolerance: f64,
    pub mix: f64,
    pub max_steps: u64,
    pub energy_check_interval: u64,
    pub n_states: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    #[serde(rename = "r^-2")]
    pub r_m2: f64,
    #[serde(rename = "r^-1")]
    pub r_m1: f64,
    #[serde(rename = "r^0")]
    pub r_0: f64,
    #[serde(rename = "r^1")]
    pub r_1: f64,
    #[serde(rename = "r^2")]
    pub r_2: f64,
}

impl Moments {
    pub fn as_array(&self) -> [(&'static str, f64); 5] {
        [
            ("r^-2", self.r_m2),
            ("r^-1", self.r_m1),
            ("r^0", self.r_0),
            ("r^1", self.r_1),
            ("r^2", self.r_2),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub index: usize,
    pub energy: f64,
    pub kinetic: f64,
    pub radial_kinetic: f64,
    pub potential: f64,
    pub confining_potential: f64,
    pub effective_potential: f64,
    pub moments: Moments,
    pub virial_ratio: f64,
    pub nodes: usize,
    pub steps: u64,
    pub converged: bool,
    pub final_delta: f64,
    pub restarts: u32,
}

impl StateReport {
    pub fn from_result(r: &EigenstateResult) -> Self {
        let x = &r.expectations;
        let m = |k| x.moments.get(k).unwrap_or(f64::NAN);
        Self {
            index: r.index,
            energy: r.energy,
            kinetic: x.kinetic,
            radial_kinetic: x.radial_kinetic,
            potential: x.potential_exp,
            confining_potential: x.confining_potential_exp,
            effective_potential: x.effective_potential_exp,
            moments: Moments {
                r_m2: m(-2),
                r_m1: m(-1),
                r_0: m(0),
                r_1: m(1),
                r_2: m(2),
            },
            virial_ratio: x.virial_ratio,
            nodes: count_nodes(&r.state.values),
            steps: r.steps_taken,
            converged: r.converged,
            final_delta: r.final_delta,
            restarts: r.restarts,
        }
    }
}

impl RunReport {
    pub fn new(point: &RunPoint, outcome: &Result<Spectrum, radial_itp::Error>) -> Self {
        let (family, coupling, exponent) = match &point.spec.potential {
            Potential::Harmonic => ("harmonic", None, None),
            Potential::Morse => ("morse", None, None),
            Potential::Spiked { coupling, exponent } => ("spiked", Some(*coupling), Some(*exponent)),
            Potential::Tabulated(_) => ("tabulated", None, None),
        };
        let c = &point.config;
        let (status, error, states) = match outcome {
            Ok(sp) => {
                let (status, error) = match &sp.status {
                    SpectrumStatus::Complete => ("complete", None),
                    SpectrumStatus::NotConverged { index } => (
                        "not_converged",
                        Some(format!("state {index} did not converge in {} steps", c.max_steps)),
                    ),
                    SpectrumStatus::Failed { index, error } => {
                        ("failed", Some(format!("state {index}: {error}")))
                    }
                };
                (status, error, sp.results.iter().map(StateReport::from_result).collect())
            }
            Err(e) => ("failed", Some(e.to_string()), Vec::new()),
        };
        Self {
            parameter: point.parameter.map(|(p, v)| SweptValue {
                name: p.name().to_string(),
                value: v,
            }),
            potential: PotentialReport {
                family: family.to_string(),
                coupling,
                exponent,
                ell: point.spec.ell,
            },
            grid: GridReport {
                n_points: point.n_points,
                r_max: point.r_max,
                offset: point.offset,
            },
            solver: SolverReport {
                dt: c.dt,
                tolerance: c.energy_tolerance,
                mix: c.mix,
                max_steps: c.max_steps,
                energy_check_interval: c.energy_check_interval,
                n_states: c.n_states,
                seed: c.seed,
            },
            status: status.to_string(),
            error,
            states,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == "complete"
            && self.states.len() == self.solver.n_states
            && self.states.iter().all(|s| s.converged)
    }
}

impl Report {
    pub fn new(runs: Vec<RunReport>) -> Self {
        Self {
            schema_version: REPORT_SCHEMA,
            all_converged: runs.iter().all(RunReport::converged),
            runs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let report: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if report.schema_version != REPORT_SCHEMA {
            return Err(CliError::Config(format!(
                "{}: unsupported report schema_version {}",
                path.display(),
                report.schema_version
            )));
        }
        Ok(report)
    }

    /// Fixed-width tables, one per run.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (k, run) in self.runs.iter().enumerate() {
            let _ = write!(out, "run {k}: {}", run.potential.family);
            if let (Some(c), Some(a)) = (run.potential.coupling, run.potential.exponent) {
                let _ = write!(out, " lambda={c} alpha={a}");
            }
            let _ = writeln!(
                out,
                " l={} N={} r_max={} [{}]",
                run.potential.ell, run.grid.n_points, run.grid.r_max, run.status
            );
            let _ = writeln!(
                out,
                "{:>3} {:>16} {:>12} {:>12} {:>12} {:>12} {:>10} {:>9} conv",
                "n", "E", "<r^-2>", "<r^-1>", "<r>", "<r^2>", "<V>/<T>", "steps"
            );
            for s in &run.states {
                let _ = writeln!(
                    out,
                    "{:>3} {:>16.10} {:>12.7} {:>12.7} {:>12.7} {:>12.7} {:>10.6} {:>9} {}",
                    s.index,
                    s.energy,
                    s.moments.r_m2,
                    s.moments.r_m1,
                    s.moments.r_1,
                    s.moments.r_2,
                    s.virial_ratio,
                    s.steps,
                    if s.converged { "yes" } else { "no" }
                );
            }
            if let Some(e) = &run.error {
                let _ = writeln!(out, "    error: {e}");
            }
        }
        out
    }
}

/// Writes `state_<n>.csv` (or `run_<k>_state_<n>.csv` for sweeps) with
/// columns `r,psi,rdf,v_eff`.
pub fn write_densities(
    dir: &Path,
    run: Option<usize>,
    point: &RunPoint,
    results: &[EigenstateResult],
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let v_eff = effective_potential(&point.spec, &point.grid).map_err(CliError::Solve)?;
    for res in results {
        let name = match run {
            Some(k) => format!("run_{k}_state_{}.csv", res.index),
            None => format!("state_{}.csv", res.index),
        };
        let path = dir.join(name);
        let rdf = radial_distribution(&res.state, &point.grid).map_err(CliError::Solve)?;
        let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        let mut w = std::io::BufWriter::new(file);
        let mut body = String::with_capacity(rdf.len() * 80);
        body.push_str("r,psi,rdf,v_eff\n");
        for (((r, p), v), (_, d)) in point
            .grid
            .r()
            .iter()
            .zip(&res.state.values)
            .zip(&v_eff)
            .zip(&rdf)
        {
            let _ = writeln!(body, "{r:e},{p:e},{d:e},{v:e}");
        }
        w.write_all(body.as_bytes())
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

//! Run manifest: a versioned TOML document.
//!
//! ```toml
//! schema_version = 1
//!
//! [potential]
//! family = "spiked"        # harmonic | morse | spiked | tabulated
//! coupling = 10.0          # spiked: λ
//! exponent = 1.0           # spiked: α
//! ell = 0
//!
//! [grid]
//! n_points = 10001
//! r_max = 10.0             # optional, family default otherwise
//!
//! [solver]
//! dt = 0.5
//! n_states = 6
//!
//! [sweep]                  # optional
//! parameter = "coupling"
//! values = [0.001, 0.1, 10.0]
//!
//! [output]
//! report = "report.json"
//! density = "densities"    # optional directory for per-state CSV files
//! ```
//!
//! Relative paths are resolved against the manifest's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use radial_itp::{
    build_grid, GuessKind, Potential, PotentialSpec, RadialGrid, SolverConfig, TabulatedPotential,
};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema_version: u32,
    pub potential: PotentialBlock,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    pub sweep: Option<SweepBlock>,
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Harmonic,
    Morse,
    Spiked,
    Tabulated,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialBlock {
    pub family: Family,
    pub coupling: Option<f64>,
    pub exponent: Option<f64>,
    /// Two-column `(r, V)` file for the tabulated family.
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub ell: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    #[serde(default = "default_points")]
    pub n_points: usize,
    pub r_max: Option<f64>,
    #[serde(default = "default_offset")]
    pub offset: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        Self {
            n_points: default_points(),
            r_max: None,
            offset: default_offset(),
        }
    }
}

fn default_points() -> usize {
    10001
}

fn default_offset() -> f64 {
    radial_itp::grid::DEFAULT_OFFSET
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GuessName {
    Gaussian,
    GaussianTimesPower,
    Random,
    UserSupplied,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    pub dt: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_steps: Option<u64>,
    pub mix: Option<f64>,
    pub energy_check_interval: Option<u64>,
    #[serde(default = "default_states")]
    pub n_states: usize,
    pub guess: Option<GuessName>,
    /// One value per grid point, for `guess = "user_supplied"`.
    pub guess_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self {
            dt: None,
            tolerance: None,
            max_steps: None,
            mix: None,
            energy_check_interval: None,
            n_states: default_states(),
            guess: None,
            guess_path: None,
            seed: None,
        }
    }
}

fn default_states() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Coupling,
    Exponent,
    Ell,
    NPoints,
    RMax,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::Coupling => "coupling",
            Self::Exponent => "exponent",
            Self::Ell => "ell",
            Self::NPoints => "n_points",
            Self::RMax => "r_max",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub report: PathBuf,
    pub density: Option<PathBuf>,
    #[serde(default)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Json,
}

/// One fully specified solve.
#[derive(Debug, Clone)]
pub struct RunPoint {
    /// Swept parameter and its value, if any.
    pub parameter: Option<(SweepParameter, f64)>,
    pub spec: PotentialSpec,
    pub grid: RadialGrid,
    pub n_points: usize,
    pub r_max: f64,
    pub offset: f64,
    pub config: SolverConfig,
}

/// A validated manifest, ready to execute.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub points: Vec<RunPoint>,
    pub report: PathBuf,
    pub density: Option<PathBuf>,
}

impl RunManifest {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let m: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version: unsupported version {} (expected {SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks every run point and output path without touching the disk
    /// beyond reading inputs. `base` anchors relative paths.
    pub fn plan(&self, base: &Path, seed: Option<u64>) -> Result<RunPlan, CliError> {
        let field = |name: &str, msg: String| CliError::Config(format!("{name}: {msg}"));
        let tabulated = match (self.potential.family, &self.potential.path) {
            (Family::Tabulated, Some(p)) => Some(
                TabulatedPotential::from_path(base.join(p))
                    .map_err(|e| field("potential.path", e.to_string()))?,
            ),
            (Family::Tabulated, None) => {
                return Err(field("potential.path", "required for the tabulated family".into()))
            }
            (_, Some(_)) => {
                return Err(field("potential.path", "only valid for the tabulated family".into()))
            }
            _ => None,
        };
        let spiked = self.potential.family == Family::Spiked;
        if !spiked && (self.potential.coupling.is_some() || self.potential.exponent.is_some()) {
            return Err(field(
                "potential.coupling",
                "coupling and exponent only apply to the spiked family".into(),
            ));
        }

        let s = &self.solver;
        if s.n_states == 0 {
            return Err(field("solver.n_states", "must be at least 1".into()));
        }
        let defaults = SolverConfig::default();
        let guess = match s.guess.unwrap_or(GuessName::GaussianTimesPower) {
            GuessName::Gaussian => GuessKind::Gaussian,
            GuessName::GaussianTimesPower => GuessKind::GaussianTimesPower,
            GuessName::Random => GuessKind::Random,
            GuessName::UserSupplied => {
                let p = s.guess_path.as_ref().ok_or_else(|| {
                    field("solver.guess_path", "required for a user_supplied guess".into())
                })?;
                GuessKind::UserSupplied(read_column(&base.join(p))?)
            }
        };
        if s.guess_path.is_some() && s.guess != Some(GuessName::UserSupplied) {
            return Err(field(
                "solver.guess_path",
                "only valid with guess = \"user_supplied\"".into(),
            ));
        }
        let config = SolverConfig {
            dt: s.dt.unwrap_or(defaults.dt),
            energy_tolerance: s.tolerance.unwrap_or(defaults.energy_tolerance),
            max_steps: s.max_steps.unwrap_or(defaults.max_steps),
            mix: s.mix.unwrap_or(defaults.mix),
            energy_check_interval: s
                .energy_check_interval
                .unwrap_or(defaults.energy_check_interval),
            n_states: s.n_states,
            guess,
            seed: seed.or(s.seed).unwrap_or(defaults.seed),
            ..defaults
        };
        config.validate().map_err(|e| field("solver", e.to_string()))?;

        let values: Vec<Option<(SweepParameter, f64)>> = match &self.sweep {
            None => vec![None],
            Some(sw) if sw.values.is_empty() => {
                return Err(field("sweep.values", "must list at least one value".into()))
            }
            Some(sw) => sw.values.iter().map(|&v| Some((sw.parameter, v))).collect(),
        };

        let mut points = Vec::with_capacity(values.len());
        for (k, parameter) in values.into_iter().enumerate() {
            let at = |name: &str| match parameter {
                Some(_) => format!("sweep.values[{k}] ({name})"),
                None => name.to_string(),
            };
            let mut coupling = self.potential.coupling;
            let mut exponent = self.potential.exponent;
            let mut ell = self.potential.ell;
            let mut n_points = self.grid.n_points;
            let mut r_max = self.grid.r_max;
            if let Some((p, v)) = parameter {
                match p {
                    SweepParameter::Coupling | SweepParameter::Exponent if !spiked => {
                        return Err(field(
                            "sweep.parameter",
                            format!("{} only applies to the spiked family", p.name()),
                        ))
                    }
                    SweepParameter::Coupling => coupling = Some(v),
                    SweepParameter::Exponent => exponent = Some(v),
                    SweepParameter::Ell => ell = whole(v).ok_or_else(|| {
                        field(&at("ell"), format!("{v} is not a non-negative integer"))
                    })? as u32,
                    SweepParameter::NPoints => {
                        n_points = whole(v).ok_or_else(|| {
                            field(&at("n_points"), format!("{v} is not a positive integer"))
                        })? as usize
                    }
                    SweepParameter::RMax => r_max = Some(v),
                }
            }
            let potential = match self.potential.family {
                Family::Harmonic => Potential::Harmonic,
                Family::Morse => Potential::Morse,
                Family::Spiked => Potential::Spiked {
                    coupling: coupling.ok_or_else(|| {
                        field("potential.coupling", "required for the spiked family".into())
                    })?,
                    exponent: exponent.ok_or_else(|| {
                        field("potential.exponent", "required for the spiked family".into())
                    })?,
                },
                Family::Tabulated => Potential::Tabulated(tabulated.clone().expect("checked above")),
            };
            let spec = PotentialSpec::new(potential, ell);
            spec.validate()
                .map_err(|e| field(&at("potential"), e.to_string()))?;
            let r_max = r_max.unwrap_or_else(|| spec.default_r_max(config.n_states));
            let grid = build_grid(n_points, r_max, self.grid.offset)
                .map_err(|e| field(&at("grid"), e.to_string()))?;
            if let GuessKind::UserSupplied(v) = &config.guess {
                if v.len() != n_points {
                    return Err(field(
                        "solver.guess_path",
                        format!("has {} values but the grid has {n_points} points", v.len()),
                    ));
                }
            }
            points.push(RunPoint {
                parameter,
                spec,
                grid,
                n_points,
                r_max,
                offset: self.grid.offset,
                config: config.clone(),
            });
        }

        let report = base.join(&self.output.report);
        check_parent(&report, "output.report")?;
        let density = self.output.density.as_ref().map(|d| base.join(d));
        if let Some(d) = &density {
            if d.exists() && !d.is_dir() {
                return Err(field(
                    "output.density",
                    format!("{} exists and is not a directory", d.display()),
                ));
            }
            check_parent(d, "output.density")?;
        }
        Ok(RunPlan {
            points,
            report,
            density,
        })
    }
}

fn whole(v: f64) -> Option<u64> {
    (v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64).then_some(v as u64)
}

fn check_parent(path: &Path, name: &str) -> Result<(), CliError> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => return Ok(()),
    };
    if parent.is_dir() {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "{name}: directory {} does not exist",
            parent.display()
        )))
    }
}

fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            CliError::Config(format!(
                "{}: line {}: cannot parse {line:?} as a number",
                path.display(),
                i + 1
            ))
        })?;
        out.push(v);
    }
    Ok(out)
}

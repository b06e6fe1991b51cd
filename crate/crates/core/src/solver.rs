//! Sequential extraction of the lowest eigenstates by imaginary-time
//! propagation with Gram–Schmidt projection against converged states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::observables::{expectation_set_with, ExpectationSet};
use crate::orthogonality::{project_out, StateBasis};
use crate::potential::{effective_potential, PotentialSpec};
use crate::propagator::{CrankNicolson, DiffusionState};

#[derive(Debug, Clone, PartialEq)]
pub enum GuessKind {
    /// `e^{−r²/2}` for every state.
    Gaussian,
    /// `r^n e^{−r²/2}` for state `n`.
    GaussianTimesPower,
    /// Uniform noise in `[−1, 1]`, seeded.
    Random,
    UserSupplied(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub energy_tolerance: f64,
    pub max_steps: u64,
    pub mix: f64,
    /// Steps between energy evaluations.
    pub energy_check_interval: u64,
    pub n_states: usize,
    pub guess: GuessKind,
    pub seed: u64,
    /// Keep every `history_stride`-th energy check.
    pub history_stride: usize,
    /// Fresh random guesses tried after a collapse.
    pub collapse_retries: u32,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-4,
            energy_tolerance: 1e-12,
            max_steps: 2_000_000,
            mix: 0.5,
            energy_check_interval: 10,
            n_states: 1,
            guess: GuessKind::GaussianTimesPower,
            seed: 0,
            history_stride: 100,
            collapse_retries: 3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.energy_tolerance > 0.0) {
            return bad(format!(
                "energy tolerance must be positive, got {}",
                self.energy_tolerance
            ));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        if !(self.mix > 0.0 && self.mix <= 1.0) {
            return bad(format!("mix must lie in (0, 1], got {}", self.mix));
        }
        if self.energy_check_interval == 0 {
            return bad("energy_check_interval must be positive".into());
        }
        if self.n_states == 0 {
            return bad("n_states must be at least 1".into());
        }
        if self.history_stride == 0 {
            return bad("history_stride must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateResult {
    pub index: usize,
    pub energy: f64,
    pub state: DiffusionState,
    pub expectations: ExpectationSet,
    pub steps_taken: u64,
    pub converged: bool,
    /// `(step, ⟨H⟩)`, decimated.
    pub energy_history: Vec<(u64, f64)>,
    /// Energy change between the last two checks.
    pub final_delta: f64,
    /// Random restarts used after collapse.
    pub restarts: u32,
}

/// Normalized starting function for state `index`.
pub fn initial_guess(
    kind: &GuessKind,
    grid: &RadialGrid,
    index: usize,
    seed: u64,
) -> Result<DiffusionState> {
    let r = grid.r();
    let values: Vec<f64> = match kind {
        GuessKind::Gaussian => r.iter().map(|r| (-0.5 * r * r).exp()).collect(),
        GuessKind::GaussianTimesPower => r
            .iter()
            .map(|r| r.powi(index as i32) * (-0.5 * r * r).exp())
            .collect(),
        GuessKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9e37_79b9));
            r.iter().map(|_| rng.random_range(-1.0..=1.0)).collect()
        }
        GuessKind::UserSupplied(v) => {
            if v.len() != grid.len() {
                return Err(Error::InvalidArgument(format!(
                    "user guess has {} samples but the grid has {}",
                    v.len(),
                    grid.len()
                )));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NumericDomain("user guess contains non-finite values".into()));
            }
            v.clone()
        }
    };
    DiffusionState::normalized(values, grid)
}

/// Converges the next state above `basis`. Non-convergence within
/// `max_steps` is reported through `converged = false`, not as an error.
pub fn solve_state(
    spec: &PotentialSpec,
    grid: &RadialGrid,
    config: &SolverConfig,
    basis: &StateBasis,
) -> Result<EigenstateResult> {
    config.validate()?;
    spec.validate()?;
    let v_eff = effective_potential(spec, grid)?;
    let stepper = CrankNicolson::new(grid, &v_eff, config.dt)?;
    solve_with(spec, grid, config, basis, &stepper)
}

fn solve_with(
    spec: &PotentialSpec,
    grid: &RadialGrid,
    config: &SolverConfig,
    basis: &StateBasis,
    stepper: &CrankNicolson,
) -> Result<EigenstateResult> {
    let index = basis.len();
    let mut guess = config.guess.clone();
    let mut attempt = 0;
    loop {
        let seed = config.seed.wrapping_add(attempt as u64);
        match propagate(spec, grid, config, basis, stepper, &guess, seed) {
            Err(Error::Collapse { .. }) if attempt < config.collapse_retries => {
                attempt += 1;
                guess = GuessKind::Random;
            }
            Ok(mut res) => {
                debug_assert_eq!(res.index, index);
                res.restarts = attempt;
                return Ok(res);
            }
            Err(e) => return Err(e),
        }
    }
}

fn propagate(
    spec: &PotentialSpec,
    grid: &RadialGrid,
    config: &SolverConfig,
    basis: &StateBasis,
    stepper: &CrankNicolson,
    guess: &GuessKind,
    seed: u64,
) -> Result<EigenstateResult> {
    let ham = stepper.hamiltonian();
    let index = basis.len();
    let start = initial_guess(guess, grid, index, seed)?;
    let mut state = project_out(&start, basis, grid)?;
    state.normalize(grid)?;

    let mut energy = checked_energy(ham.expectation(&state.values, grid))?;
    let mut history = vec![(0, energy)];
    let mut checks = 0usize;
    let mut delta = f64::INFINITY;
    let mut converged = false;
    let mut steps = 0;

    while steps < config.max_steps {
        state = stepper.step(&state, config.mix)?;
        state = project_out(&state, basis, grid)?;
        state.normalize(grid)?;
        steps += 1;
        if steps % config.energy_check_interval != 0 {
            continue;
        }
        let e = checked_energy(ham.expectation(&state.values, grid))?;
        delta = e - energy;
        energy = e;
        checks += 1;
        if checks.is_multiple_of(config.history_stride) {
            history.push((steps, energy));
        }
        if delta.abs() <= config.energy_tolerance {
            converged = true;
            break;
        }
    }
    if history.last().map(|h| h.0) != Some(steps) {
        history.push((steps, energy));
    }
    state.energy = Some(energy);
    let expectations = expectation_set_with(&state, spec, grid, ham)?;
    Ok(EigenstateResult {
        index,
        energy,
        state,
        expectations,
        steps_taken: steps,
        converged,
        energy_history: history,
        final_delta: delta,
        restarts: 0,
    })
}

fn checked_energy(e: f64) -> Result<f64> {
    if e.is_finite() {
        Ok(e)
    } else {
        Err(Error::NumericDomain(format!("energy became {e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumStatus {
    Complete,
    /// State `index` did not converge; it is the last entry of `results`.
    NotConverged { index: usize },
    /// State `index` failed outright; `results` holds the states below it.
    Failed { index: usize, error: Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub results: Vec<EigenstateResult>,
    pub status: SpectrumStatus,
}

impl Spectrum {
    pub fn is_complete(&self) -> bool {
        self.status == SpectrumStatus::Complete
    }

    pub fn energies(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.energy).collect()
    }
}

/// The `config.n_states` lowest states, in order. Stops at the first state
/// that fails or does not converge, since every higher state is projected
/// against it.
pub fn solve_spectrum(
    spec: &PotentialSpec,
    grid: &RadialGrid,
    config: &SolverConfig,
) -> Result<Spectrum> {
    config.validate()?;
    spec.validate()?;
    let v_eff = effective_potential(spec, grid)?;
    let stepper = CrankNicolson::new(grid, &v_eff, config.dt)?;
    let mut basis = StateBasis::new();
    let mut results = Vec::with_capacity(config.n_states);
    for index in 0..config.n_states {
        let res = match solve_with(spec, grid, config, &basis, &stepper) {
            Ok(r) => r,
            Err(error) => {
                return Ok(Spectrum {
                    results,
                    status: SpectrumStatus::Failed { index, error },
                })
            }
        };
        let converged = res.converged;
        basis.push(&res.state, grid)?;
        results.push(res);
        if !converged {
            return Ok(Spectrum {
                results,
                status: SpectrumStatus::NotConverged { index },
            });
        }
    }
    Ok(Spectrum {
        results,
        status: SpectrumStatus::Complete,
    })
}

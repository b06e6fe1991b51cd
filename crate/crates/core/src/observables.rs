//! Expectation values of a normalized radial state.
//!
//! `⟨H⟩` uses the same three-point operator as the propagator so that a
//! converged state reproduces the discrete eigenvalue exactly. Kinetic
//! energies are obtained by subtraction rather than by a separate
//! derivative quadrature.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::potential::{effective_potential, PotentialSpec};
use crate::propagator::{DiffusionState, Hamiltonian};

/// Relative threshold below which samples are ignored when counting nodes.
pub const NODE_THRESHOLD: f64 = 1e-8;

/// `⟨r^k⟩` for `k = −2..=2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments([f64; 5]);

impl Moments {
    pub const POWERS: [i32; 5] = [-2, -1, 0, 1, 2];

    pub fn get(&self, k: i32) -> Option<f64> {
        (-2..=2).contains(&k).then(|| self.0[(k + 2) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        Self::POWERS.iter().copied().zip(self.0.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationSet {
    pub energy: f64,
    /// `⟨H⟩ − ⟨V⟩`, centrifugal energy included.
    pub kinetic: f64,
    /// `⟨H⟩ − ⟨v_eff⟩`.
    pub radial_kinetic: f64,
    /// `⟨V⟩` with the full potential (singular term included).
    pub potential_exp: f64,
    /// `⟨V⟩` of the confining part only (`½r²` for the oscillator families).
    pub confining_potential_exp: f64,
    pub effective_potential_exp: f64,
    pub moments: Moments,
    /// `⟨V⟩ / ⟨T⟩`.
    pub virial_ratio: f64,
}

/// `⟨ψ|H|ψ⟩` for a normalized state.
pub fn energy_expectation(state: &DiffusionState, v_eff: &[f64], grid: &RadialGrid) -> Result<f64> {
    state.require_normalized()?;
    check_len(state, grid)?;
    let ham = Hamiltonian::new(grid, v_eff)?;
    Ok(ham.expectation(&state.values, grid))
}

/// `∫ |ψ|² r^{k+2} dr`, Simpson quadrature.
pub fn moment(state: &DiffusionState, grid: &RadialGrid, k: i32) -> Result<f64> {
    state.require_normalized()?;
    check_len(state, grid)?;
    if !(-2..=2).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "moment power must lie in [-2, 2], got {k}"
        )));
    }
    let g: Vec<f64> = state
        .values
        .iter()
        .zip(grid.r())
        .map(|(p, &r)| p * p * r.powi(k + 2))
        .collect();
    grid.integrate_dr(&g)
}

/// `∫ |ψ|² f(r) r² dr` in the state metric.
fn weighted_expectation(state: &DiffusionState, grid: &RadialGrid, f: &[f64]) -> f64 {
    grid.measure()
        .iter()
        .zip(&state.values)
        .zip(f)
        .map(|((w, p), v)| w * p * p * v)
        .sum::<f64>()
        / grid.norm_sq(&state.values)
}

fn sampled(grid: &RadialGrid, f: impl Fn(f64) -> Result<f64>) -> Result<Vec<f64>> {
    grid.r().iter().map(|&r| f(r)).collect()
}

pub fn potential_expectation(
    state: &DiffusionState,
    spec: &PotentialSpec,
    grid: &RadialGrid,
) -> Result<f64> {
    state.require_normalized()?;
    check_len(state, grid)?;
    let v = sampled(grid, |r| spec.evaluate(r))?;
    Ok(weighted_expectation(state, grid, &v))
}

/// `⟨V⟩ / ⟨T⟩` with `⟨T⟩ = ⟨H⟩ − ⟨V⟩`.
pub fn virial_ratio(state: &DiffusionState, spec: &PotentialSpec, grid: &RadialGrid) -> Result<f64> {
    let v_eff = effective_potential(spec, grid)?;
    let energy = energy_expectation(state, &v_eff, grid)?;
    let potential = potential_expectation(state, spec, grid)?;
    ratio(potential, energy - potential)
}

fn ratio(potential: f64, kinetic: f64) -> Result<f64> {
    if kinetic.abs() < 1e-12 {
        return Err(Error::NumericDomain(format!(
            "kinetic energy {kinetic:e} too small for a virial ratio"
        )));
    }
    Ok(potential / kinetic)
}

/// Full set of observables for a normalized state.
pub fn expectation_set(
    state: &DiffusionState,
    spec: &PotentialSpec,
    grid: &RadialGrid,
) -> Result<ExpectationSet> {
    let v_eff = effective_potential(spec, grid)?;
    let ham = Hamiltonian::new(grid, &v_eff)?;
    expectation_set_with(state, spec, grid, &ham)
}

pub(crate) fn expectation_set_with(
    state: &DiffusionState,
    spec: &PotentialSpec,
    grid: &RadialGrid,
    ham: &Hamiltonian,
) -> Result<ExpectationSet> {
    state.require_normalized()?;
    check_len(state, grid)?;
    let energy = ham.expectation(&state.values, grid);
    let potential_exp = weighted_expectation(state, grid, &sampled(grid, |r| spec.evaluate(r))?);
    let confining_potential_exp =
        weighted_expectation(state, grid, &sampled(grid, |r| spec.confining(r))?);
    let effective_potential_exp = weighted_expectation(state, grid, ham.v_eff());
    let kinetic = energy - potential_exp;
    let mut m = [0.0; 5];
    for (slot, k) in m.iter_mut().zip(Moments::POWERS) {
        *slot = moment(state, grid, k)?;
    }
    Ok(ExpectationSet {
        energy,
        kinetic,
        radial_kinetic: energy - effective_potential_exp,
        potential_exp,
        confining_potential_exp,
        effective_potential_exp,
        moments: Moments(m),
        virial_ratio: ratio(potential_exp, kinetic)?,
    })
}

/// `(r_j, r_j² ψ_j²)` for every grid point.
pub fn radial_distribution(state: &DiffusionState, grid: &RadialGrid) -> Result<Vec<(f64, f64)>> {
    state.require_normalized()?;
    check_len(state, grid)?;
    if !(state.norm_sq(grid) > 0.0) {
        return Err(Error::NotNormalized);
    }
    Ok(grid
        .r()
        .iter()
        .zip(&state.values)
        .map(|(&r, &p)| (r, r * r * p * p))
        .collect())
}

/// Sign changes of `values`, skipping samples below
/// `NODE_THRESHOLD · max|ψ|`.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = NODE_THRESHOLD * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

fn check_len(state: &DiffusionState, grid: &RadialGrid) -> Result<()> {
    if state.len() == grid.len() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "state has {} samples but the grid has {}",
            state.len(),
            grid.len()
        )))
    }
}

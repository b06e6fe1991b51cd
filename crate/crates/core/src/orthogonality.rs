//! Gram–Schmidt projection against converged lower states.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::propagator::DiffusionState;

/// Residual norms below this fraction of the input norm count as collapse.
pub const COLLAPSE_RATIO: f64 = 1e-12;

/// Converged, normalized states, lowest first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StateBasis {
    states: Vec<Vec<f64>>,
}

impl StateBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    /// Appends a converged state. It must be normalized; orthogonality to
    /// the existing members is the caller's responsibility (the solver
    /// guarantees it by projecting at every step).
    pub fn push(&mut self, state: &DiffusionState, grid: &RadialGrid) -> Result<()> {
        state.require_normalized()?;
        if state.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "state has {} samples but the grid has {}",
                state.len(),
                grid.len()
            )));
        }
        self.states.push(state.values.clone());
        Ok(())
    }

    /// `⟨ψ_i|ψ_j⟩` for all members.
    pub fn gram_matrix(&self, grid: &RadialGrid) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|a| self.states.iter().map(|b| grid.inner(a, b)).collect())
            .collect()
    }
}

/// Removes the components of `candidate` along every basis state using two
/// passes of classical Gram–Schmidt. The result is unnormalized.
pub fn project_out(
    candidate: &DiffusionState,
    basis: &StateBasis,
    grid: &RadialGrid,
) -> Result<DiffusionState> {
    if candidate.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "candidate has {} samples but the grid has {}",
            candidate.len(),
            grid.len()
        )));
    }
    if basis.is_empty() {
        return Ok(candidate.clone());
    }
    let input_norm = grid.norm_sq(&candidate.values).sqrt();
    let mut values = candidate.values.clone();
    for _pass in 0..2 {
        let overlaps: Vec<f64> = basis
            .states
            .iter()
            .map(|phi| grid.inner(phi, &values))
            .collect();
        for (phi, c) in basis.states.iter().zip(overlaps) {
            for (v, p) in values.iter_mut().zip(phi) {
                *v -= c * p;
            }
        }
    }
    let out_norm = grid.norm_sq(&values).sqrt();
    let ratio = if input_norm > 0.0 {
        out_norm / input_norm
    } else {
        0.0
    };
    if !(ratio >= COLLAPSE_RATIO) {
        return Err(Error::Collapse { ratio });
    }
    Ok(DiffusionState {
        values,
        time_step: candidate.time_step,
        normalized: false,
        energy: None,
    })
}

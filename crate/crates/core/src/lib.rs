//! Bound states of spherically symmetric potentials by imaginary-time
//! propagation.
//!
//! The radial equation is written on a quadratic grid `r = x²`, stepped
//! with a Crank–Nicolson scheme solved by the Thomas algorithm, and
//! excited states are obtained one at a time by projecting out every
//! converged lower state after each step.
//!
//! ```
//! use radial_itp::{build_grid, solve_spectrum, PotentialSpec, SolverConfig};
//!
//! let grid = build_grid(1001, 10.0, 1e-6).unwrap();
//! let config = SolverConfig { dt: 1.0, n_states: 2, ..SolverConfig::default() };
//! let spectrum = solve_spectrum(&PotentialSpec::harmonic(), &grid, &config).unwrap();
//! assert!((spectrum.results[1].energy - 3.5).abs() < 1e-2);
//! ```

// `!(x > 0.0)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod grid;
pub mod observables;
pub mod oracle;
pub mod orthogonality;
pub mod potential;
pub mod propagator;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use grid::{build_grid, radial_integral, QuadratureKind, QuadratureRule, RadialGrid};
pub use observables::{
    count_nodes, energy_expectation, expectation_set, moment, radial_distribution, virial_ratio,
    ExpectationSet, Moments,
};
pub use oracle::{dense_eigensolve, dense_eigenvalues, DenseSpectrum};
pub use orthogonality::{project_out, StateBasis};
pub use potential::{
    effective_potential, evaluate_potential, Potential, PotentialSpec, TabulatedPotential,
};
pub use propagator::{
    assemble_step, propagate_step, thomas_solve, CrankNicolson, DiffusionState, Hamiltonian,
    TridiagonalSystem,
};
pub use solver::{
    initial_guess, solve_spectrum, solve_state, EigenstateResult, GuessKind, Spectrum,
    SpectrumStatus, SolverConfig,
};

//! One imaginary-time step of the diffusion equation `−∂ψ/∂t = Hψ`.
//!
//! In the `x` coordinate (`r = x²`) the radial Hamiltonian reads
//! `H = −1/(8x²) d²/dx² − 3/(8x³) d/dx + v_eff`. Central differences turn
//! the symmetric split `e^{(Δt/2)H} ψ' = e^{−(Δt/2)H} ψ`, truncated after
//! the linear term, into the tridiagonal Crank–Nicolson system
//!
//! ```text
//! α_j ψ'_{j−1} + β_j ψ'_j + γ_j ψ'_{j+1} = ξ_j
//! α_j = −Δt/(16 x_j² h²) + 3Δt/(32 x_j³ h)
//! β_j = 1 + Δt/(8 x_j² h²) + (Δt/2) v_eff,j
//! γ_j = −Δt/(16 x_j² h²) − 3Δt/(32 x_j³ h)
//! ξ_j = −α_j ψ_{j−1} + (2 − β_j) ψ_j − γ_j ψ_{j+1}
//! ```
//!
//! with `ψ_0 = ψ_{N+1} = 0`.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Wavefunction samples at one imaginary-time step.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionState {
    pub values: Vec<f64>,
    pub time_step: u64,
    pub normalized: bool,
    /// Last computed `⟨H⟩`.
    pub energy: Option<f64>,
}

impl DiffusionState {
    /// Unnormalized state at step 0.
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            time_step: 0,
            normalized: false,
            energy: None,
        }
    }

    /// Normalized copy of `values`.
    pub fn normalized(values: Vec<f64>, grid: &RadialGrid) -> Result<Self> {
        let mut s = Self::new(values);
        s.normalize(grid)?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm_sq(&self, grid: &RadialGrid) -> f64 {
        grid.norm_sq(&self.values)
    }

    /// Rescales to unit norm in the state metric.
    pub fn normalize(&mut self, grid: &RadialGrid) -> Result<()> {
        if self.values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "state has {} samples but the grid has {}",
                self.values.len(),
                grid.len()
            )));
        }
        let n2 = grid.norm_sq(&self.values);
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::NumericDomain(format!(
                "cannot normalize a state with squared norm {n2}"
            )));
        }
        let scale = n2.sqrt().recip();
        self.values.iter_mut().for_each(|v| *v *= scale);
        self.normalized = true;
        self.energy = None;
        Ok(())
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized)
        }
    }
}

/// Three-point discretization of the radial Hamiltonian on a grid.
///
/// `(Hψ)_j = c2_j (ψ_{j+1} − 2ψ_j + ψ_{j−1}) + c1_j (ψ_{j+1} − ψ_{j−1}) + v_j ψ_j`
/// with `c2 = −1/(8x²h²)` and `c1 = −3/(16x³h)`.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    c2: Vec<f64>,
    c1: Vec<f64>,
    v: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(grid: &RadialGrid, v_eff: &[f64]) -> Result<Self> {
        check_potential(grid, v_eff)?;
        let h = grid.spacing();
        let c2 = grid.x().iter().map(|&x| -1.0 / (8.0 * x * x * h * h)).collect();
        let c1 = grid.x().iter().map(|&x| -3.0 / (16.0 * x * x * x * h)).collect();
        Ok(Self {
            c2,
            c1,
            v: v_eff.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn v_eff(&self) -> &[f64] {
        &self.v
    }

    /// Matrix elements of row `j`: `(lower, diagonal, upper)`.
    pub fn row(&self, j: usize) -> (f64, f64, f64) {
        (
            self.c2[j] - self.c1[j],
            -2.0 * self.c2[j] + self.v[j],
            self.c2[j] + self.c1[j],
        )
    }

    /// `out = Hψ` with Dirichlet ghosts. Differences are formed before
    /// scaling so that smooth `ψ` loses no digits to the large
    /// near-origin coefficients.
    pub fn apply_into(&self, psi: &[f64], out: &mut [f64]) {
        let n = self.v.len();
        debug_assert_eq!(psi.len(), n);
        debug_assert_eq!(out.len(), n);
        for j in 0..n {
            let prev = if j > 0 { psi[j - 1] } else { 0.0 };
            let next = if j + 1 < n { psi[j + 1] } else { 0.0 };
            let fwd = next - psi[j];
            let bwd = psi[j] - prev;
            out[j] = self.c2[j] * (fwd - bwd) + self.c1[j] * (fwd + bwd) + self.v[j] * psi[j];
        }
    }

    pub fn apply(&self, psi: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; psi.len()];
        self.apply_into(psi, &mut out);
        out
    }

    /// Rayleigh quotient `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩` in the state metric.
    pub fn expectation(&self, psi: &[f64], grid: &RadialGrid) -> f64 {
        let hpsi = self.apply(psi);
        grid.inner(psi, &hpsi) / grid.norm_sq(psi)
    }
}

fn check_potential(grid: &RadialGrid, v_eff: &[f64]) -> Result<()> {
    if v_eff.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "v_eff has {} samples but the grid has {}",
            v_eff.len(),
            grid.len()
        )));
    }
    if let Some(index) = v_eff.iter().position(|v| !v.is_finite()) {
        return Err(Error::PotentialOverflow {
            index,
            r: grid.r()[index],
        });
    }
    Ok(())
}

/// Tridiagonal system `α_j y_{j−1} + β_j y_j + γ_j y_{j+1} = ξ_j`.
///
/// `sub[0]` and `sup[N−1]` multiply the Dirichlet ghosts; they are kept
/// for completeness but are not part of the matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Strict row diagonal dominance over the in-matrix entries.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|j| {
            let off = if j > 0 { self.sub[j].abs() } else { 0.0 }
                + if j + 1 < n { self.sup[j].abs() } else { 0.0 };
            self.diag[j].abs() > off
        })
    }

    /// `A y`.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|j| {
                let mut s = self.diag[j] * y[j];
                if j > 0 {
                    s += self.sub[j] * y[j - 1];
                }
                if j + 1 < n {
                    s += self.sup[j] * y[j + 1];
                }
                s
            })
            .collect()
    }

    /// `‖A y − ξ‖∞ / ‖ξ‖∞`.
    pub fn relative_residual(&self, y: &[f64]) -> f64 {
        let ay = self.apply(y);
        let num = ay
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let den = self.rhs.iter().map(|b| b.abs()).fold(0.0, f64::max);
        if den == 0.0 {
            num
        } else {
            num / den
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 || self.sub.len() != n || self.sup.len() != n || self.rhs.len() != n {
            return Err(Error::InvalidArgument(format!(
                "tridiagonal system has inconsistent lengths (sub {}, diag {}, sup {}, rhs {})",
                self.sub.len(),
                n,
                self.sup.len(),
                self.rhs.len()
            )));
        }
        Ok(())
    }
}

/// Crank–Nicolson left-hand coefficients `(α, β, γ)` for a time step `dt`.
pub fn crank_nicolson_coefficients(
    grid: &RadialGrid,
    v_eff: &[f64],
    dt: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    check_potential(grid, v_eff)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "time step must be positive and finite, got {dt}"
        )));
    }
    let h = grid.spacing();
    let n = grid.len();
    let mut sub = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n);
    for (&x, &v) in grid.x().iter().zip(v_eff) {
        let second = dt / (16.0 * x * x * h * h);
        let first = 3.0 * dt / (32.0 * x * x * x * h);
        sub.push(-second + first);
        diag.push(1.0 + 2.0 * second + 0.5 * dt * v);
        sup.push(-second - first);
    }
    Ok((sub, diag, sup))
}

/// Elimination pivots of the tridiagonal matrix; `Err(row)` at the first
/// pivot that is not strictly positive.
fn positive_pivots(sub: &[f64], diag: &[f64], sup: &[f64]) -> std::result::Result<Vec<f64>, usize> {
    let n = diag.len();
    let mut pivots = Vec::with_capacity(n);
    let mut prev_ratio = 0.0;
    for j in 0..n {
        let m = if j == 0 {
            diag[0]
        } else {
            diag[j] - sub[j] * prev_ratio
        };
        if !(m > 0.0 && m.is_finite()) {
            return Err(j);
        }
        prev_ratio = sup[j] / m;
        pivots.push(m);
    }
    Ok(pivots)
}

/// Builds the Crank–Nicolson system for one step from `state`.
///
/// The left matrix is diagonally similar to a symmetric tridiagonal one,
/// so the Thomas recursion is stable exactly when all its pivots are
/// positive; a step that breaks this is rejected with
/// [`Error::StepTooLarge`].
pub fn assemble_step(
    state: &DiffusionState,
    v_eff: &[f64],
    grid: &RadialGrid,
    dt: f64,
) -> Result<TridiagonalSystem> {
    state.require_normalized()?;
    if state.len() != grid.len() {
        return Err(Error::InvalidArgument(format!(
            "state has {} samples but the grid has {}",
            state.len(),
            grid.len()
        )));
    }
    let (sub, diag, sup) = crank_nicolson_coefficients(grid, v_eff, dt)?;
    if let Err(row) = positive_pivots(&sub, &diag, &sup) {
        return Err(Error::StepTooLarge { dt, row });
    }
    let ham = Hamiltonian::new(grid, v_eff)?;
    let rhs = explicit_half_step(&ham, &state.values, dt);
    Ok(TridiagonalSystem {
        sub,
        diag,
        sup,
        rhs,
    })
}

/// `ξ = ψ − (dt/2) Hψ`.
fn explicit_half_step(ham: &Hamiltonian, psi: &[f64], dt: f64) -> Vec<f64> {
    let mut rhs = ham.apply(psi);
    for (r, &p) in rhs.iter_mut().zip(psi) {
        *r = p - 0.5 * dt * *r;
    }
    rhs
}

/// Thomas algorithm (forward elimination, back substitution), no pivoting.
pub fn thomas_solve(system: &TridiagonalSystem) -> Result<Vec<f64>> {
    system.validate()?;
    let TridiagonalSystem {
        sub,
        diag,
        sup,
        rhs,
    } = system;
    let n = diag.len();
    let mut ratio = vec![0.0; n];
    let mut y = vec![0.0; n];
    for j in 0..n {
        let (m, b) = if j == 0 {
            (diag[0], rhs[0])
        } else {
            (diag[j] - sub[j] * ratio[j - 1], rhs[j] - sub[j] * y[j - 1])
        };
        if m == 0.0 || !m.is_finite() {
            return Err(Error::ZeroPivot { row: j });
        }
        ratio[j] = sup[j] / m;
        y[j] = b / m;
    }
    for j in (0..n - 1).rev() {
        y[j] -= ratio[j] * y[j + 1];
    }
    Ok(y)
}

/// One step: `ψ_out = mix·ψ' + (1 − mix)·ψ`, returned unnormalized.
pub fn propagate_step(
    state: &DiffusionState,
    v_eff: &[f64],
    grid: &RadialGrid,
    dt: f64,
    mix: f64,
) -> Result<DiffusionState> {
    check_mix(mix)?;
    let system = assemble_step(state, v_eff, grid, dt)?;
    let propagated = thomas_solve(&system)?;
    Ok(mixed(state, propagated, mix))
}

fn check_mix(mix: f64) -> Result<()> {
    if (0.0..=1.0).contains(&mix) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "mixing fraction must lie in [0, 1], got {mix}"
        )))
    }
}

fn mixed(state: &DiffusionState, mut propagated: Vec<f64>, mix: f64) -> DiffusionState {
    if mix != 1.0 {
        for (p, &old) in propagated.iter_mut().zip(&state.values) {
            *p = mix * *p + (1.0 - mix) * old;
        }
    }
    DiffusionState {
        values: propagated,
        time_step: state.time_step + 1,
        normalized: false,
        energy: None,
    }
}

/// Crank–Nicolson stepper with the left matrix factored once.
///
/// Produces the same result as [`propagate_step`] but reuses the Thomas
/// elimination ratios across steps, which is what the solver loop runs.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    ham: Hamiltonian,
    dt: f64,
    sub: Vec<f64>,
    pivot: Vec<f64>,
    ratio: Vec<f64>,
}

impl CrankNicolson {
    pub fn new(grid: &RadialGrid, v_eff: &[f64], dt: f64) -> Result<Self> {
        let (sub, diag, sup) = crank_nicolson_coefficients(grid, v_eff, dt)?;
        let pivot =
            positive_pivots(&sub, &diag, &sup).map_err(|row| Error::StepTooLarge { dt, row })?;
        let ratio = sup.iter().zip(&pivot).map(|(s, m)| s / m).collect();
        Ok(Self {
            ham: Hamiltonian::new(grid, v_eff)?,
            dt,
            sub,
            pivot,
            ratio,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.ham
    }

    /// Solves `(1 + dt/2 H) y = ψ − (dt/2) Hψ`, writing `y` into `out`.
    pub fn propagate_into(&self, psi: &[f64], out: &mut [f64]) {
        let n = psi.len();
        self.ham.apply_into(psi, out);
        let half = 0.5 * self.dt;
        for j in 0..n {
            let xi = psi[j] - half * out[j];
            out[j] = if j == 0 {
                xi / self.pivot[0]
            } else {
                (xi - self.sub[j] * out[j - 1]) / self.pivot[j]
            };
        }
        for j in (0..n - 1).rev() {
            out[j] -= self.ratio[j] * out[j + 1];
        }
    }

    pub fn step(&self, state: &DiffusionState, mix: f64) -> Result<DiffusionState> {
        state.require_normalized()?;
        check_mix(mix)?;
        if state.len() != self.ham.len() {
            return Err(Error::InvalidArgument(format!(
                "state has {} samples but the propagator has {}",
                state.len(),
                self.ham.len()
            )));
        }
        let mut out = vec![0.0; state.len()];
        self.propagate_into(&state.values, &mut out);
        Ok(mixed(state, out, mix))
    }
}

//! Dense reference eigensolver for the discrete radial Hamiltonian.
//!
//! Builds the three-point operator from the grid directly (no shared code
//! with the propagator), finds eigenvalues by Sturm-sequence bisection on
//! its diagonally similar symmetric form, and eigenvectors by inverse
//! iteration with a dense LU factorization of the original matrix. Meant
//! for tests and small grids only.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Largest grid accepted by the dense path.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// One column per eigenvalue, normalized in the grid's state metric,
    /// positive at the first grid point.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖Hv − εv‖∞ / ‖v‖∞` per pair.
    pub residuals: Vec<f64>,
}

/// Tridiagonal `(lower, diag, upper)`; `lower[0]` and `upper[N−1]` are 0.
struct Stencil {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl Stencil {
    fn new(v_eff: &[f64], grid: &RadialGrid) -> Result<Self> {
        let n = grid.len();
        if v_eff.len() != n {
            return Err(Error::InvalidArgument(format!(
                "v_eff has {} samples but the grid has {}",
                v_eff.len(),
                n
            )));
        }
        if v_eff.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericDomain("v_eff is not finite".into()));
        }
        let h = grid.spacing();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for (j, &x) in grid.x().iter().enumerate() {
            // −1/(8x²) ψ'' − 3/(8x³) ψ' with central differences.
            let second = 1.0 / (8.0 * x * x * h * h);
            let first = 3.0 / (16.0 * x * x * x * h);
            if j > 0 {
                lower[j] = -second + first;
            }
            if j + 1 < n {
                upper[j] = -second - first;
            }
            diag[j] = 2.0 * second + v_eff[j];
        }
        Ok(Self { lower, diag, upper })
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Off-diagonal of the symmetric form `S H S⁻¹`.
    fn symmetric_offdiag(&self) -> Result<Vec<f64>> {
        (0..self.len() - 1)
            .map(|j| {
                let p = self.upper[j] * self.lower[j + 1];
                if p > 0.0 {
                    Ok(-p.sqrt())
                } else {
                    Err(Error::NumericDomain(format!(
                        "operator is not symmetrizable at row {j}; grid too coarse near the origin"
                    )))
                }
            })
            .collect()
    }

    fn dense(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diag[i]
            } else if j + 1 == i {
                self.lower[i]
            } else if i + 1 == j {
                self.upper[i]
            } else {
                0.0
            }
        })
    }

    fn residual(&self, eig: f64, v: &[f64]) -> f64 {
        let n = v.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut hv = self.diag[i] * v[i];
            if i > 0 {
                hv += self.lower[i] * v[i - 1];
            }
            if i + 1 < n {
                hv += self.upper[i] * v[i + 1];
            }
            worst = worst.max((hv - eig * v[i]).abs());
        }
        worst / v.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Number of eigenvalues of the symmetric tridiagonal `(a, b)` below `sigma`.
fn count_below(a: &[f64], b2: &[f64], sigma: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for i in 0..a.len() {
        d = a[i] - sigma - if i > 0 { b2[i - 1] / d } else { 0.0 };
        if d == 0.0 {
            d = -f64::MIN_POSITIVE;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect(a: &[f64], b2: &[f64], k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(a, b2, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_size(grid: &RadialGrid, m: usize) -> Result<()> {
    if grid.len() > DENSE_LIMIT {
        return Err(Error::TooLarge {
            n: grid.len(),
            limit: DENSE_LIMIT,
        });
    }
    if m == 0 || m > grid.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {m} eigenpairs from a grid of {} points",
            grid.len()
        )));
    }
    Ok(())
}

fn lowest(stencil: &Stencil, m: usize) -> Result<Vec<f64>> {
    let b = stencil.symmetric_offdiag()?;
    let b2: Vec<f64> = b.iter().map(|x| x * x).collect();
    let a = &stencil.diag;
    // Gershgorin bounds.
    let n = a.len();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let rad = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - rad);
        hi = hi.max(a[i] + rad);
    }
    Ok((0..m).map(|k| bisect(a, &b2, k, lo, hi)).collect())
}

/// Lowest `m` eigenvalues of the discrete Hamiltonian.
pub fn dense_eigenvalues(v_eff: &[f64], grid: &RadialGrid, m: usize) -> Result<Vec<f64>> {
    check_size(grid, m)?;
    lowest(&Stencil::new(v_eff, grid)?, m)
}

/// Lowest `m` eigenpairs of the discrete Hamiltonian.
pub fn dense_eigensolve(v_eff: &[f64], grid: &RadialGrid, m: usize) -> Result<DenseSpectrum> {
    check_size(grid, m)?;
    let stencil = Stencil::new(v_eff, grid)?;
    let eigenvalues = lowest(&stencil, m)?;
    let n = stencil.len();
    let h = stencil.dense();
    let mut eigenvectors = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    for &eig in &eigenvalues {
        // Shift just off the eigenvalue so the factorization stays regular.
        let shift = eig + 1e-12 * eig.abs().max(1.0);
        let lu = (&h - DMatrix::identity(n, n) * shift).lu();
        let mut v = DVector::from_element(n, 1.0);
        for _ in 0..4 {
            v = lu.solve(&v).ok_or(Error::ZeroPivot { row: 0 })?;
            let scale = v.amax();
            v /= scale;
        }
        let mut values: Vec<f64> = v.iter().copied().collect();
        let first = values
            .iter()
            .copied()
            .find(|x| x.abs() > 1e-8)
            .unwrap_or(1.0);
        let scale = first.signum() / grid.norm_sq(&values).sqrt();
        values.iter_mut().for_each(|x| *x *= scale);
        residuals.push(stencil.residual(eig, &values));
        eigenvectors.push(values);
    }
    Ok(DenseSpectrum {
        eigenvalues,
        eigenvectors,
        residuals,
    })
}

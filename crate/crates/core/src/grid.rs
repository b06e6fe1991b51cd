//! Quadratic radial mesh and quadrature.
//!
//! The mesh is uniform in an auxiliary coordinate `x` and maps to the
//! radius through `r = x²`, so points cluster near the origin where
//! singular potentials live. Point `j` (1-based in the math, 0-based here)
//! sits at `x_j = offset + j·h`; the inner ghost `x_0 = offset` and the
//! outer ghost `x_{N+1}` carry the Dirichlet condition and are never stored.
//!
//! Two quadratures are exposed:
//!
//! * [`QuadratureKind::Simpson`], the general-purpose composite rule used
//!   for moments and user integrals;
//! * [`QuadratureKind::Trapezoid`], which defines the state metric
//!   ([`RadialGrid::inner`]). Its weights agree smoothly with the
//!   symmetrizer of the discrete Hamiltonian, so Rayleigh quotients
//!   evaluated with it do not pick up the odd/even noise of Simpson weights.

use crate::error::{Error, Result};

/// Default inner offset `δ` (a.u.).
pub const DEFAULT_OFFSET: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Composite Simpson; an odd interval count is closed with a 3/8 panel.
    Simpson,
    /// Composite trapezoid.
    Trapezoid,
}

/// Weights of a composite Newton–Cotes rule on a uniform mesh in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: QuadratureKind,
    spacing: f64,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Rule for `n` equally spaced samples with spacing `h`.
    pub fn uniform(n: usize, h: f64, kind: QuadratureKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "quadrature needs at least 2 points, got {n}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "quadrature spacing must be positive and finite, got {h}"
            )));
        }
        let weights = match kind {
            QuadratureKind::Trapezoid => trapezoid_weights(n, h),
            QuadratureKind::Simpson => simpson_weights(n, h),
        };
        Ok(Self {
            kind,
            spacing: h,
            weights,
        })
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `∫ f dx` over the sampled interval.
    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        radial_integral(self, f)
    }
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    let intervals = n - 1;
    if intervals == 1 {
        return trapezoid_weights(n, h);
    }
    let mut w = vec![0.0; n];
    // Simpson over an even number of leading intervals, then a 3/8 panel
    // over the last three if the count is odd.
    let simpson_end = if intervals.is_multiple_of(2) {
        intervals
    } else {
        intervals - 3
    };
    if simpson_end > 0 {
        for (j, wj) in w.iter_mut().enumerate().take(simpson_end + 1) {
            *wj = if j == 0 || j == simpson_end {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            } * h
                / 3.0;
        }
    }
    if simpson_end < intervals {
        let s = simpson_end;
        let c = 3.0 * h / 8.0;
        w[s] += c;
        w[s + 1] += 3.0 * c;
        w[s + 2] += 3.0 * c;
        w[s + 3] += c;
    }
    w
}

/// Composite Newton–Cotes approximation of `∫ f(x) dx` over the rule's
/// interval. Radial integrals must pass Jacobian-weighted samples.
pub fn radial_integral(rule: &QuadratureRule, f: &[f64]) -> Result<f64> {
    if f.len() != rule.len() {
        return Err(Error::InvalidArgument(format!(
            "integrand has {} samples but the rule has {}",
            f.len(),
            rule.len()
        )));
    }
    let mut sum = 0.0;
    for (j, (&w, &v)) in rule.weights.iter().zip(f).enumerate() {
        if !v.is_finite() {
            return Err(Error::NumericDomain(format!(
                "integrand sample {j} is not finite ({v})"
            )));
        }
        sum += w * v;
    }
    Ok(sum)
}

/// Radial mesh `r_j = x_j²`, `x_j = δ + j·h`, `j = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    spacing: f64,
    offset: f64,
    x: Vec<f64>,
    r: Vec<f64>,
    simpson: QuadratureRule,
    /// Trapezoid weight × `2x` × `r²`: the discrete `r² dr` measure.
    measure: Vec<f64>,
}

/// Builds a grid whose last point sits at `r_max`: `h = (√r_max − δ)/N`.
pub fn build_grid(n_points: usize, r_max: f64, offset: f64) -> Result<RadialGrid> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "r_max must be positive and finite, got {r_max}"
        )));
    }
    if !(offset > 0.0 && offset.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "offset must be positive and finite, got {offset}"
        )));
    }
    if n_points < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 grid points, got {n_points}"
        )));
    }
    let span = r_max.sqrt() - offset;
    if span <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "offset {offset} must be smaller than sqrt(r_max) = {}",
            r_max.sqrt()
        )));
    }
    RadialGrid::from_spacing(n_points, span / n_points as f64, offset)
}

impl RadialGrid {
    /// Grid with an explicit spacing `h` in `x`.
    pub fn from_spacing(n_points: usize, spacing: f64, offset: f64) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 grid points, got {n_points}"
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "spacing must be positive and finite, got {spacing}"
            )));
        }
        if !(offset > 0.0 && offset.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "offset must be positive and finite, got {offset}"
            )));
        }
        let x: Vec<f64> = (1..=n_points)
            .map(|j| offset + j as f64 * spacing)
            .collect();
        let r: Vec<f64> = x.iter().map(|&xj| xj * xj).collect();
        let simpson = QuadratureRule::uniform(n_points, spacing, QuadratureKind::Simpson)?;
        let measure = trapezoid_weights(n_points, spacing)
            .into_iter()
            .zip(x.iter().zip(&r))
            .map(|(w, (&xj, &rj))| w * 2.0 * xj * rj * rj)
            .collect();
        Ok(Self {
            spacing,
            offset,
            x,
            r,
            simpson,
            measure,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// `dr/dx = 2x` at every point.
    pub fn jacobian(&self) -> impl Iterator<Item = f64> + '_ {
        self.x.iter().map(|&x| 2.0 * x)
    }

    pub fn quadrature(&self, kind: QuadratureKind) -> QuadratureRule {
        match kind {
            QuadratureKind::Simpson => self.simpson.clone(),
            QuadratureKind::Trapezoid => QuadratureRule {
                kind,
                spacing: self.spacing,
                weights: trapezoid_weights(self.len(), self.spacing),
            },
        }
    }

    /// Simpson approximation of `∫ g(r) dr = ∫ g(x²)·2x dx`.
    pub fn integrate_dr(&self, g: &[f64]) -> Result<f64> {
        if g.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "integrand has {} samples but the grid has {}",
                g.len(),
                self.len()
            )));
        }
        let jac: Vec<f64> = g.iter().zip(&self.x).map(|(&v, &x)| v * 2.0 * x).collect();
        radial_integral(&self.simpson, &jac)
    }

    /// Discrete `r² dr` weights of the state metric.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// `∫ a b r² dr` in the state metric.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.len());
        debug_assert_eq!(b.len(), self.len());
        self.measure
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (p, q))| w * p * q)
            .sum()
    }

    pub fn norm_sq(&self, a: &[f64]) -> f64 {
        self.inner(a, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_grid_ends_at_r_max() {
        let g = build_grid(10001, 10.0, 1e-6).unwrap();
        assert_eq!(g.len(), 10001);
        assert!((g.r_max() - 10.0).abs() / 10.0 <= 1e-12);
        assert!(g.r()[0] > 0.0);
    }

    #[test]
    fn first_point_from_spacing() {
        let g = RadialGrid::from_spacing(3, 0.01, 1e-6).unwrap();
        assert!((g.x()[0] - 0.010001).abs() < 1e-15);
        assert!((g.r()[0] - 1.00020001e-4).abs() < 1e-18);
        for (x, r) in g.x().iter().zip(g.r()) {
            assert_eq!(*r, x * x);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_grid(2, 10.0, 1e-6).is_err());
        assert!(build_grid(100, 0.0, 1e-6).is_err());
        assert!(build_grid(100, -1.0, 1e-6).is_err());
        assert!(build_grid(100, 10.0, 0.0).is_err());
        assert!(build_grid(100, 1e-14, 1e-6).is_err());
        assert!(RadialGrid::from_spacing(10, -0.1, 1e-6).is_err());
    }

    #[test]
    fn jacobian_identity_recovers_r_span() {
        let g = build_grid(1001, 10.0, 1e-6).unwrap();
        let ones = vec![1.0; g.len()];
        let span = g.integrate_dr(&ones).unwrap();
        let exact = g.r_max() - g.r()[0];
        assert!((span - exact).abs() / exact <= 1e-10);
    }

    #[test]
    fn constant_over_x_recovers_interval() {
        for n in [3, 4, 5, 6, 101, 200] {
            let g = RadialGrid::from_spacing(n, 0.013, 1e-6).unwrap();
            let rule = g.quadrature(QuadratureKind::Simpson);
            let len = g.x()[n - 1] - g.x()[0];
            let got = rule.integrate(&vec![1.0; n]).unwrap();
            assert!((got - len).abs() / len <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn zero_integrand() {
        let rule = QuadratureRule::uniform(17, 0.1, QuadratureKind::Simpson).unwrap();
        assert_eq!(rule.integrate(&[0.0; 17]).unwrap(), 0.0);
    }

    #[test]
    fn three_x_squared_on_unit_interval() {
        // Exact antiderivative: x³ on [0, 1] gives 1.
        let n = 1001;
        let h = 1.0 / (n - 1) as f64;
        let f: Vec<f64> = (0..n).map(|j| 3.0 * (j as f64 * h).powi(2)).collect();
        let rule = QuadratureRule::uniform(n, h, QuadratureKind::Simpson).unwrap();
        assert!((rule.integrate(&f).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn simpson_exact_for_cubics_any_parity() {
        for n in [4usize, 5, 8, 9, 40, 41] {
            let h = 0.37 / (n - 1) as f64;
            let a = 0.2;
            let f: Vec<f64> = (0..n)
                .map(|j| {
                    let x = a + j as f64 * h;
                    1.0 - 2.0 * x + 0.5 * x * x + 4.0 * x * x * x
                })
                .collect();
            let b = a + (n - 1) as f64 * h;
            let anti = |x: f64| x - x * x + x.powi(3) / 6.0 + x.powi(4);
            let exact = anti(b) - anti(a);
            let rule = QuadratureRule::uniform(n, h, QuadratureKind::Simpson).unwrap();
            let got = rule.integrate(&f).unwrap();
            assert!((got - exact).abs() / exact.abs() <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn non_finite_sample_is_rejected() {
        let rule = QuadratureRule::uniform(5, 0.1, QuadratureKind::Simpson).unwrap();
        let err = rule.integrate(&[0.0, 1.0, f64::NAN, 1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NumericDomain(_)));
    }

    #[test]
    fn refinement_order_at_least_two() {
        // Smooth integrand exp(-x) sin(3x) on a fixed interval, odd point
        // counts so every level uses the pure Simpson rule.
        let a = 0.1;
        let b = 2.1;
        let f = |x: f64| (-x).exp() * (3.0 * x).sin();
        let integral = |n: usize| {
            let h = (b - a) / (n - 1) as f64;
            let s: Vec<f64> = (0..n).map(|j| f(a + j as f64 * h)).collect();
            QuadratureRule::uniform(n, h, QuadratureKind::Simpson)
                .unwrap()
                .integrate(&s)
                .unwrap()
        };
        let i1 = integral(21);
        let i2 = integral(41);
        let i3 = integral(81);
        let order = ((i1 - i2).abs() / (i2 - i3).abs()).log2();
        assert!(order >= 2.0, "observed order {order}");
    }

    #[test]
    fn trapezoid_metric_matches_simpson_for_smooth_density() {
        let g = build_grid(2001, 10.0, 1e-6).unwrap();
        let psi: Vec<f64> = g.r().iter().map(|r| (-0.5 * r * r).exp()).collect();
        let trap = g.norm_sq(&psi);
        let dens: Vec<f64> = psi.iter().zip(g.r()).map(|(p, r)| p * p * r * r).collect();
        let simp = g.integrate_dr(&dens).unwrap();
        // ∫ exp(-r²) r² dr over (0, ∞) = √π/4
        let exact = std::f64::consts::PI.sqrt() / 4.0;
        assert!((trap - exact).abs() < 1e-9);
        assert!((simp - exact).abs() < 1e-9);
    }
}

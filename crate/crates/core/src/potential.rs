//! Central potentials and the effective radial potential
//! `v_eff(r) = ℓ(ℓ+1)/(2r²) + V(r)`.

use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;

/// Radial potential `V(r)` in atomic units.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `½ r²`
    Harmonic,
    /// `25 (e^{−4(r−3)} − 2 e^{−2(r−3)})`, four bound s-states.
    Morse,
    /// Spiked harmonic oscillator `½ (r² + λ / r^α)`; `α = 1` is the
    /// charged harmonic oscillator.
    Spiked { coupling: f64, exponent: f64 },
    /// Sampled `(r, V)` pairs joined by a monotone cubic.
    Tabulated(TabulatedPotential),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub potential: Potential,
    /// Angular momentum quantum number ℓ.
    pub ell: u32,
}

impl PotentialSpec {
    pub fn new(potential: Potential, ell: u32) -> Self {
        Self { potential, ell }
    }

    pub fn harmonic() -> Self {
        Self::new(Potential::Harmonic, 0)
    }

    pub fn morse() -> Self {
        Self::new(Potential::Morse, 0)
    }

    pub fn spiked(coupling: f64, exponent: f64) -> Self {
        Self::new(Potential::Spiked { coupling, exponent }, 0)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.potential {
            Potential::Spiked { coupling, exponent } => {
                if !(*exponent > 0.0 && exponent.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "spiked oscillator exponent must be positive, got {exponent}"
                    )));
                }
                if !coupling.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "spiked oscillator coupling must be finite, got {coupling}"
                    )));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `V(r)`; the centrifugal term is not included.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        evaluate_potential(self, r)
    }

    /// The part of `V` that survives `λ → 0`: `½r²` for the oscillator
    /// families, `V` itself otherwise.
    pub fn confining(&self, r: f64) -> Result<f64> {
        match self.potential {
            Potential::Spiked { .. } => {
                check_radius(r)?;
                Ok(0.5 * r * r)
            }
            _ => evaluate_potential(self, r),
        }
    }

    pub fn centrifugal(&self, r: f64) -> f64 {
        let l = self.ell as f64;
        l * (l + 1.0) / (2.0 * r * r)
    }

    /// Box radius used when a run does not set one.
    pub fn default_r_max(&self, n_states: usize) -> f64 {
        match &self.potential {
            Potential::Harmonic | Potential::Spiked { .. } => 10.0,
            // The shallow n = 3 level needs a very long tail.
            Potential::Morse if n_states > 3 => 200.0,
            Potential::Morse => 20.0,
            Potential::Tabulated(t) => t.r_range().1,
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::NumericDomain(format!(
            "potential evaluated at non-positive or non-finite r = {r}"
        )))
    }
}

pub fn evaluate_potential(spec: &PotentialSpec, r: f64) -> Result<f64> {
    check_radius(r)?;
    spec.validate()?;
    Ok(match &spec.potential {
        Potential::Harmonic => 0.5 * r * r,
        Potential::Morse => {
            let e = (-2.0 * (r - 3.0)).exp();
            25.0 * (e * e - 2.0 * e)
        }
        Potential::Spiked { coupling, exponent } => 0.5 * (r * r + coupling / r.powf(*exponent)),
        Potential::Tabulated(t) => t.eval(r)?,
    })
}

/// `v_eff` sampled on every grid point.
pub fn effective_potential(spec: &PotentialSpec, grid: &RadialGrid) -> Result<Vec<f64>> {
    spec.validate()?;
    grid.r()
        .iter()
        .enumerate()
        .map(|(index, &r)| {
            let v = evaluate_potential(spec, r)? + spec.centrifugal(r);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::PotentialOverflow { index, r })
            }
        })
        .collect()
}

/// Piecewise cubic Hermite interpolant with Fritsch–Carlson slopes, so
/// monotone runs of the data stay monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    r: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() {
            return Err(Error::InvalidArgument(format!(
                "tabulated potential has {} radii but {} values",
                r.len(),
                v.len()
            )));
        }
        if r.len() < 2 {
            return Err(Error::InvalidArgument(
                "tabulated potential needs at least 2 samples".into(),
            ));
        }
        if let Some(k) = r.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(format!(
                "tabulated radii must be strictly increasing (sample {} -> {})",
                k,
                k + 1
            )));
        }
        if r.iter().chain(&v).any(|x| !x.is_finite()) || r[0] <= 0.0 {
            return Err(Error::InvalidArgument(
                "tabulated samples must be finite with r > 0".into(),
            ));
        }
        let slopes = pchip_slopes(&r, &v);
        Ok(Self { r, v, slopes })
    }

    /// Two whitespace- or comma-separated columns `r V`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::read(std::io::BufReader::new(file))
    }

    fn read(reader: impl BufRead) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let cols: Vec<&str> = body
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!(
                    "line {}: expected 2 columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {s:?}: {e}", lineno + 1)))
            };
            r.push(parse(cols[0])?);
            v.push(parse(cols[1])?);
        }
        Self::new(r, v)
    }

    pub fn r_range(&self) -> (f64, f64) {
        (self.r[0], self.r[self.r.len() - 1])
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        let (min, max) = self.r_range();
        if !(r >= min && r <= max) {
            return Err(Error::Extrapolation { r, min, max });
        }
        let k = match self.r.partition_point(|&ri| ri <= r) {
            0 => 0,
            p => (p - 1).min(self.r.len() - 2),
        };
        let h = self.r[k + 1] - self.r[k];
        let t = (r - self.r[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.v[k]
            + h10 * h * self.slopes[k]
            + h01 * self.v[k + 1]
            + h11 * h * self.slopes[k + 1])
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn edge_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

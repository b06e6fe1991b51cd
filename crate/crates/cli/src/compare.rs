//! Entry-by-entry comparison of two reports.

use std::fmt::Write as _;

use crate::report::Report;

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub text: String,
    pub max_energy_delta: f64,
    /// Runs or states present in one report only.
    pub structural: bool,
}

impl Comparison {
    pub fn passes(&self, tol: f64) -> bool {
        !self.structural && self.max_energy_delta <= tol
    }
}

pub fn compare(a: &Report, b: &Report) -> Comparison {
    let mut text = String::new();
    let mut max_de = 0.0f64;
    let mut structural = false;
    if a.runs.len() != b.runs.len() {
        structural = true;
        let _ = writeln!(
            text,
            "structural mismatch: {} runs in a, {} runs in b",
            a.runs.len(),
            b.runs.len()
        );
    }
    for (k, (ra, rb)) in a.runs.iter().zip(&b.runs).enumerate() {
        let _ = writeln!(
            text,
            "run {k}: {}",
            if ra.parameter == rb.parameter {
                match &ra.parameter {
                    Some(p) => format!("{} = {}", p.name, p.value),
                    None => "single".to_string(),
                }
            } else {
                format!("{:?} vs {:?}", ra.parameter, rb.parameter)
            }
        );
        let na = ra.states.len();
        let nb = rb.states.len();
        if na != nb {
            structural = true;
            let (side, extra) = if na > nb { ("a", &ra.states[nb..]) } else { ("b", &rb.states[na..]) };
            let idx: Vec<String> = extra.iter().map(|s| s.index.to_string()).collect();
            let _ = writeln!(
                text,
                "  structural mismatch: {na} states in a, {nb} in b; only in {side}: {}",
                idx.join(", ")
            );
        }
        let _ = writeln!(
            text,
            "  {:>3} {:>18} {:>18} {:>12} {:>12}",
            "n", "E(a)", "E(b)", "dE", "max d<r^k>"
        );
        for (sa, sb) in ra.states.iter().zip(&rb.states) {
            let de = sb.energy - sa.energy;
            max_de = max_de.max(de.abs());
            let dm = sa
                .moments
                .as_array()
                .iter()
                .zip(sb.moments.as_array())
                .map(|(x, y)| (y.1 - x.1).abs())
                .fold(0.0, f64::max);
            let _ = writeln!(
                text,
                "  {:>3} {:>18.12} {:>18.12} {:>12.3e} {:>12.3e}",
                sa.index, sa.energy, sb.energy, de, dm
            );
        }
    }
    if max_de.is_nan() {
        max_de = f64::INFINITY;
    }
    let _ = writeln!(text, "max |dE| = {max_de:e}");
    Comparison {
        text,
        max_energy_delta: max_de,
        structural,
    }
}

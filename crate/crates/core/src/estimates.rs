//! Physical constants and order-of-magnitude estimates for an electron.
//!
//! All frequencies are angular, in rad/s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nc_model::{effective_field, NCParameters};
use crate::fock_spectrum::Lambda;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub electron_mass: f64,
    pub electron_charge: f64,
    pub hbar: f64,
    pub c: f64,
}

impl Default for PhysicalConstants {
    /// Rounded textbook values, not CODATA.
    fn default() -> Self {
        Self {
            electron_mass: 9.11e-31,
            electron_charge: -1.6e-19,
            hbar: 1.05e-34,
            c: 3e8,
        }
    }
}

/// Upper bounds on the noncommutativity parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NCBounds {
    /// m²
    pub mu_max: f64,
    /// kg²m²s⁻²
    pub nu_max: f64,
    /// Weaker coordinate bound from gravitational quantum-well experiments, m².
    pub mu_gravity: f64,
}

impl Default for NCBounds {
    fn default() -> Self {
        Self {
            mu_max: 4e-40,
            nu_max: 1.76e-61,
            mu_gravity: 1e-13,
        }
    }
}

/// `(E²ₙ₊₁,λ − E²ₙ,λ)/(2mc²ħ)`, which equals `ω₀` for every `n` and `λ`.
///
/// The rest energy cancels in the difference, so only the kinetic parts
/// `mc²ħω₀(2n + 1 − λ)` are formed.
pub fn squared_energy_gap(n: u64, lambda: Lambda, params: &NCParameters) -> Result<f64> {
    let omega0 = match effective_field(&params.float()) {
        Ok(f) => f.omega0,
        Err(Error::Degenerate(_)) => 0.0,
        Err(e) => return Err(e),
    };
    let unit = params.mass * params.c * params.c * params.hbar * omega0;
    let l = lambda.value() as i64;
    let kinetic = |k: u64| unit * (2 * k as i64 + 1 - l) as f64;
    Ok((kinetic(n + 1) - kinetic(n)) / (2.0 * params.mass * params.c * params.c * params.hbar))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyBreakdown {
    pub b_tesla: f64,
    /// `qB₀/m`
    pub term_cyclotron: f64,
    /// `ν/(mħ)`
    pub term_nu: f64,
    /// `q²B₀²μ/(4mħ)`
    pub term_mu: f64,
    pub omega_e: f64,
}

pub fn frequency_breakdown(b: f64, bounds: &NCBounds, consts: &PhysicalConstants) -> FrequencyBreakdown {
    let (m, q, h) = (consts.electron_mass, consts.electron_charge, consts.hbar);
    let term_cyclotron = q * b / m;
    let term_nu = bounds.nu_max / (m * h);
    let term_mu = (q * b).powi(2) * bounds.mu_max / (4.0 * m * h);
    FrequencyBreakdown {
        b_tesla: b,
        term_cyclotron,
        term_nu,
        term_mu,
        omega_e: term_cyclotron + term_nu + term_mu,
    }
}

/// Values as typeset in the literature, kept for comparison only.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrintedValues {
    /// coefficient of `b`
    pub term_cyclotron_per_tesla: f64,
    pub term_nu: f64,
    /// coefficient of `b²`
    pub term_mu_per_tesla_sq: f64,
}

impl Default for PrintedValues {
    fn default() -> Self {
        Self {
            term_cyclotron_per_tesla: -1.76e11,
            term_nu: 2e4,
            term_mu_per_tesla_sq: 1.3e-14,
        }
    }
}

/// Relative mismatch above which a printed value is flagged.
pub const DISCREPANCY_THRESHOLD: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectabilityReport {
    pub b_tesla: f64,
    pub term_cyclotron: f64,
    pub term_nu: f64,
    pub term_mu: f64,
    pub omega_e: f64,
    /// `term_nu + term_mu`
    pub nc_shift: f64,
    /// `(term_nu + term_mu)/|term_cyclotron|`; `None` at `b = 0`.
    pub nc_fraction: Option<f64>,
    pub paper_printed: PrintedValues,
    pub discrepancy_flags: Vec<String>,
}

fn mismatch(printed: f64, computed: f64) -> bool {
    ((printed - computed) / computed).abs() > DISCREPANCY_THRESHOLD
}

pub fn detectability_report(b: f64, bounds: &NCBounds, consts: &PhysicalConstants) -> Result<DetectabilityReport> {
    if !b.is_finite() || b < 0.0 {
        return Err(Error::Domain(format!("field strength must be finite and non-negative, got {b}")));
    }
    let f = frequency_breakdown(b, bounds, consts);
    let printed = PrintedValues::default();
    let unit = frequency_breakdown(1.0, bounds, consts);
    let mut flags = Vec::new();
    if mismatch(printed.term_cyclotron_per_tesla, unit.term_cyclotron) {
        flags.push("paper_term_cyclotron_mismatch".to_string());
    }
    if mismatch(printed.term_nu, unit.term_nu) {
        flags.push("paper_term_nu_mismatch".to_string());
    }
    if mismatch(printed.term_mu_per_tesla_sq, unit.term_mu) {
        flags.push("paper_term_mu_mismatch".to_string());
    }
    let nc_shift = f.term_nu + f.term_mu;
    let nc_fraction = (f.term_cyclotron != 0.0).then(|| nc_shift / f.term_cyclotron.abs());
    Ok(DetectabilityReport {
        b_tesla: b,
        term_cyclotron: f.term_cyclotron,
        term_nu: f.term_nu,
        term_mu: f.term_mu,
        omega_e: f.omega_e,
        nc_shift,
        nc_fraction,
        paper_printed: printed,
        discrepancy_flags: flags,
    })
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{NCBounds, PhysicalConstants};
use crate::scalar::Scalar;
use crate::surd::Surd;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Si,
    /// `ħ = m = c = 1`; lengths in Compton wavelengths `ħ/(mc)`, momenta in `mc`.
    Natural,
}

/// Physical inputs of the model, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NCParameters {
    /// Coordinate noncommutativity `[x̂ᵢ, x̂ⱼ] = iμ` (m²).
    pub mu: f64,
    /// `[P̂₁, P̂₂] = iν` (kg²m²s⁻²).
    pub nu: f64,
    /// `[P̂₂, P̂₃] = [P̂₃, P̂₁] = iν₀` (kg²m²s⁻²).
    pub nu0: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    pub mass: f64,
    pub charge: f64,
    pub hbar: f64,
    pub c: f64,
    #[serde(default)]
    pub units: Units,
}

impl NCParameters {
    /// Electron in a field of `b0` Tesla with both NC parameters at their upper bounds.
    pub fn electron(b0: f64) -> Self {
        let k = PhysicalConstants::default();
        let bounds = NCBounds::default();
        Self {
            mu: bounds.mu_max,
            nu: bounds.nu_max,
            nu0: bounds.nu_max,
            b0,
            mass: k.electron_mass,
            charge: k.electron_charge,
            hbar: k.hbar,
            c: k.c,
            units: Units::Si,
        }
    }

    /// Commutative problem in SI units.
    pub fn commutative(mass: f64, charge: f64, b0: f64, hbar: f64, c: f64) -> Self {
        Self {
            mu: 0.0,
            nu: 0.0,
            nu0: 0.0,
            b0,
            mass,
            charge,
            hbar,
            c,
            units: Units::Si,
        }
    }

    /// Natural-unit parameters whose effective field has the requested
    /// `ħω₀/(mc²)` and tilt `θ`, with `μ = 0` and `ν₀ = ν` so they are realizable.
    pub fn natural_from_field(omega0: f64, theta: f64) -> Self {
        let nu = omega0 * theta.sin() * std::f64::consts::FRAC_1_SQRT_2;
        Self {
            mu: 0.0,
            nu,
            nu0: nu,
            b0: omega0 * theta.cos() - nu,
            mass: 1.0,
            charge: 1.0,
            hbar: 1.0,
            c: 1.0,
            units: Units::Natural,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mu", self.mu),
            ("nu", self.nu),
            ("nu0", self.nu0),
            ("B0", self.b0),
            ("mass", self.mass),
            ("charge", self.charge),
            ("hbar", self.hbar),
            ("c", self.c),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("mass", self.mass), ("hbar", self.hbar), ("c", self.c)] {
            if v <= 0.0 {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Rescale to `m = ħ = c = 1`. The charge keeps only its sign; the field
    /// absorbs `|q|ħ/(m²c²)` so that `qB₀/m` becomes `ħqB₀/(m²c²)`.
    pub fn to_natural(&self) -> Self {
        let (m, h, c) = (self.mass, self.hbar, self.c);
        let length_sq = (h / (m * c)).powi(2);
        let momentum_sq = (m * c).powi(2);
        Self {
            mu: self.mu / length_sq,
            nu: self.nu / momentum_sq,
            nu0: self.nu0 / momentum_sq,
            b0: self.charge.abs() * self.b0 * h / (m * m * c * c),
            mass: 1.0,
            charge: self.charge.signum(),
            hbar: 1.0,
            c: 1.0,
            units: Units::Natural,
        }
    }

    /// `4μν/ħ²`, which must not exceed 1 for a real realization.
    pub fn realization_discriminant(&self) -> f64 {
        4.0 * self.mu * self.nu / (self.hbar * self.hbar)
    }

    pub fn float(&self) -> ModelParams<f64> {
        ModelParams {
            mu: self.mu,
            nu: self.nu,
            nu0: self.nu0,
            b0: self.b0,
            mass: self.mass,
            charge: self.charge,
            hbar: self.hbar,
        }
    }

    /// Exact lift: each double is the dyadic rational it denotes.
    pub fn exact(&self) -> Result<ModelParams<Surd>> {
        self.validate()?;
        let lift = |x: f64| Surd::from_f64(x).expect("validated finite");
        Ok(ModelParams {
            mu: lift(self.mu),
            nu: lift(self.nu),
            nu0: lift(self.nu0),
            b0: lift(self.b0),
            mass: lift(self.mass),
            charge: lift(self.charge),
            hbar: lift(self.hbar),
        })
    }
}

/// Parameters over an arbitrary scalar field; the speed of light never enters
/// the commutator algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams<S: Scalar> {
    pub mu: S,
    pub nu: S,
    pub nu0: S,
    pub b0: S,
    pub mass: S,
    pub charge: S,
    pub hbar: S,
}

impl<S: Scalar> ModelParams<S> {
    /// `qB₀`, the combination every formula uses.
    pub fn q_b0(&self) -> S {
        self.charge.clone() * self.b0.clone()
    }
}

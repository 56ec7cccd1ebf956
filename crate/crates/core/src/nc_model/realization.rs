use num_complex::Complex;

use crate::operator_algebra::{commutator, Generator, PhaseSpaceForm};
use crate::error::{Error, Result};
use crate::scalar::{agrees, Scalar};

use super::field::{mechanical_from, nc_bracket_table};
use super::params::ModelParams;

/// Bopp-shift realization of the noncommutative generators in terms of
/// canonical `xⱼ, Pⱼ` with `[xⱼ, Pₖ] = iħδⱼₖ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationCoefficients<S: Scalar> {
    pub rho_r: S,
    pub sigma: S,
    pub x_hat: [PhaseSpaceForm<S>; 3],
    pub p_hat: [PhaseSpaceForm<S>; 3],
}

impl<S: Scalar> RealizationCoefficients<S> {
    /// Forms for `x̂₁, x̂₂, x̂₃, P̂₁, P̂₂, P̂₃` in [`Generator::ALL`] order.
    pub fn forms(&self) -> [&PhaseSpaceForm<S>; 6] {
        [
            &self.x_hat[0],
            &self.x_hat[1],
            &self.x_hat[2],
            &self.p_hat[0],
            &self.p_hat[1],
            &self.p_hat[2],
        ]
    }

    pub fn form(&self, g: Generator) -> &PhaseSpaceForm<S> {
        self.forms()[g.index()]
    }

    /// `ρ² − ρ + μν/ħ²`, zero for a valid realization.
    pub fn quadratic_residual(&self, p: &ModelParams<S>) -> S {
        self.rho_r.clone() * self.rho_r.clone() - self.rho_r.clone()
            + p.mu.clone() * p.nu.clone() / (p.hbar.clone() * p.hbar.clone())
    }
}

pub fn realize<S: Scalar>(p: &ModelParams<S>) -> Result<RealizationCoefficients<S>> {
    let h2 = p.hbar.clone() * p.hbar.clone();
    let disc = S::one() - S::int(4) * p.mu.clone() * p.nu.clone() / h2;
    if disc.is_negative() {
        return Err(Error::Domain(format!(
            "4μν/ħ² = {} exceeds 1; the realization coefficient would be complex",
            (S::one() - disc).to_f64()
        )));
    }
    if p.nu0 != p.nu {
        return Err(Error::Unsupported(
            "the commutative realization requires ν₀ = ν".into(),
        ));
    }
    let root = disc
        .sqrt()
        .ok_or_else(|| Error::Unsupported("√(1 − 4μν/ħ²) is not representable".into()))?;
    let rho = (S::one() + root) / S::int(2);
    let sigma = p.mu.clone() / (p.hbar.clone() * rho.clone() * rho.clone());
    let rs = rho.clone() * sigma.clone();
    let k = p.nu.clone() / p.hbar.clone();

    use Generator::*;
    let x_hat = [(X1, P2), (X2, P3), (X3, P1)]
        .map(|(x, pm)| PhaseSpaceForm::from_terms([(x, rho.clone()), (pm, -rs.clone())]));
    let p_hat = [(P1, X2), (P2, X3), (P3, X1)]
        .map(|(pm, x)| PhaseSpaceForm::from_terms([(pm, S::one()), (x, k.clone())]));

    Ok(RealizationCoefficients {
        rho_r: rho,
        sigma,
        x_hat,
        p_hat,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorEntry<S: Scalar> {
    pub left: Generator,
    pub right: Generator,
    pub computed: Complex<S>,
    pub target: Complex<S>,
    pub matches: bool,
}

impl<S: Scalar> CommutatorEntry<S> {
    pub fn label(&self) -> String {
        format!("[{}^, {}^]", self.left.name(), self.right.name())
    }
}

/// `Σ |a||b|` over the canonical pairs: the natural magnitude of `[A, B]`,
/// used as the tolerance scale when the scalars are floating point.
pub(crate) fn commutator_scale<S: Scalar>(a: &PhaseSpaceForm<S>, b: &PhaseSpaceForm<S>, hbar: &S) -> f64 {
    use crate::scalar::complex_to_f64;
    (0..3)
        .map(|j| {
            let (x, p) = (Generator::x(j), Generator::p(j));
            complex_to_f64(a.coeff(x)).norm() * complex_to_f64(b.coeff(p)).norm()
                + complex_to_f64(a.coeff(p)).norm() * complex_to_f64(b.coeff(x)).norm()
        })
        .sum::<f64>()
        * hbar.to_f64().abs()
}

pub(crate) const FLOAT_REL_TOL: f64 = 1e-12;

/// All 15 commutators among `x̂₁…P̂₃` against the noncommutative brackets.
pub fn nc_commutator_table<S: Scalar>(p: &ModelParams<S>) -> Result<Vec<CommutatorEntry<S>>> {
    let r = realize(p)?;
    let table = nc_bracket_table(p);
    let mut out = Vec::with_capacity(15);
    for (i, &g) in Generator::ALL.iter().enumerate() {
        for &h in &Generator::ALL[i + 1..] {
            let (a, b) = (r.form(g), r.form(h));
            let computed = commutator(a, b, &p.hbar);
            let target = Complex::new(S::zero(), table.get(g, h).clone());
            let matches = agrees(&computed, &target, FLOAT_REL_TOL, commutator_scale(a, b, &p.hbar));
            out.push(CommutatorEntry {
                left: g,
                right: h,
                computed,
                target,
                matches,
            });
        }
    }
    Ok(out)
}

/// `p̂ⱼ` as forms over the canonical generators.
pub fn mechanical_momenta<S: Scalar>(p: &ModelParams<S>) -> Result<[PhaseSpaceForm<S>; 3]> {
    let r = realize(p)?;
    Ok(mechanical_from(&r.x_hat, &r.p_hat, &p.q_b0()))
}

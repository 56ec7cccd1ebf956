//! Operators in the frame `n̄₁θ, n̄₂θ, n̄₃θ` aligned with the effective field.
//!
//! Forms here are written over the noncommutative generators `x̂ⱼ, P̂ⱼ`
//! themselves (carried by the [`Generator`] tags) and their brackets come
//! from [`nc_bracket_table`], so none of it needs the realization and
//! `ν₀ ≠ ν` is allowed.

use num_complex::Complex;

use crate::operator_algebra::{forms_agree, BracketTable, Generator, PhaseSpaceForm};
use crate::error::{Error, Result};
use crate::scalar::{agrees, Scalar};

use super::field::{effective_field, mechanical_from, nc_bracket_table, sqrt2, EffectiveField};
use super::params::ModelParams;

const FLOAT_REL_TOL: f64 = 1e-12;

fn nc_generators<S: Scalar>() -> ([PhaseSpaceForm<S>; 3], [PhaseSpaceForm<S>; 3]) {
    (
        [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::x(j))),
        [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::p(j))),
    )
}

fn project<S: Scalar>(axis: &[S; 3], v: &[PhaseSpaceForm<S>; 3]) -> PhaseSpaceForm<S> {
    (0..3).fold(PhaseSpaceForm::zero(), |acc, k| acc + v[k].scaled(&axis[k]))
}

fn i_times<S: Scalar>(v: S) -> Complex<S> {
    Complex::new(S::zero(), v)
}

/// A computed bracket next to the value it should take.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketCheck<S: Scalar> {
    pub label: &'static str,
    pub computed: Complex<S>,
    pub expected: Complex<S>,
    pub matches: bool,
}

impl<S: Scalar> BracketCheck<S> {
    fn new(
        label: &'static str,
        table: &BracketTable<S>,
        a: &PhaseSpaceForm<S>,
        b: &PhaseSpaceForm<S>,
        expected: Complex<S>,
    ) -> Self {
        let computed = table.commutator(a, b);
        let matches = agrees(&computed, &expected, FLOAT_REL_TOL, table.magnitude(a, b));
        Self {
            label,
            computed,
            expected,
            matches,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotatedMomenta<S: Scalar> {
    /// `p̂₁θ, p̂₂θ, p̂₃θ`
    pub p: [PhaseSpaceForm<S>; 3],
    pub field: EffectiveField<S>,
    /// `[p̂₁θ, p̂₂θ] = imħω₀`, `[p̂₁θ, p̂₃θ] = 0`, `[p̂₂θ, p̂₃θ] = 0`.
    pub checks: Vec<BracketCheck<S>>,
}

pub fn rotated_momenta<S: Scalar>(params: &ModelParams<S>) -> Result<RotatedMomenta<S>> {
    let field = effective_field(params)?;
    let table = nc_bracket_table(params);
    let (x, pc) = nc_generators();
    let mech = mechanical_from(&x, &pc, &params.q_b0());
    let p = [0, 1, 2].map(|i| project(&field.axes[i], &mech));
    let m_h_w0 = params.mass.clone() * params.hbar.clone() * field.omega0.clone();
    let checks = vec![
        BracketCheck::new("[p1θ, p2θ] = imħω0", &table, &p[0], &p[1], i_times(m_h_w0)),
        BracketCheck::new("[p1θ, p3θ] = 0", &table, &p[0], &p[2], Complex::new(S::zero(), S::zero())),
        BracketCheck::new("[p2θ, p3θ] = 0", &table, &p[1], &p[2], Complex::new(S::zero(), S::zero())),
    ];
    Ok(RotatedMomenta { p, field, checks })
}

/// Effective planar brackets `[X̂₁θ, X̂₂θ] = iμ_e`, `[P̂₁θ, P̂₂θ] = iν_e`,
/// `[X̂ⱼθ, P̂ⱼθ] = iħ_e`, read off the computed commutators.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanarCommutators<S: Scalar> {
    pub mu_e: S,
    pub nu_e: S,
    pub hbar_e: S,
}

impl<S: Scalar> PlanarCommutators<S> {
    /// `μ cos θ`, `ν cos θ + √2 ν₀ sin θ`, `ħ cos θ`.
    pub fn closed_form(params: &ModelParams<S>, field: &EffectiveField<S>) -> Self {
        let (c, s) = (field.cos_theta.clone(), field.sin_theta.clone());
        Self {
            mu_e: params.mu.clone() * c.clone(),
            nu_e: params.nu.clone() * c.clone() + sqrt2::<S>() * params.nu0.clone() * s,
            hbar_e: params.hbar.clone() * c,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RotatedCanonical<S: Scalar> {
    /// `X̂₁θ, X̂₂θ`
    pub x: [PhaseSpaceForm<S>; 2],
    /// `P̂₁θ, P̂₂θ`
    pub p: [PhaseSpaceForm<S>; 2],
    pub planar: PlanarCommutators<S>,
    pub momenta: RotatedMomenta<S>,
    /// `p̂₁θ = P̂₁θ + qB₀X̂₂θ/2` and `p̂₂θ = P̂₂θ − qB₀X̂₁θ/2` as form equalities.
    pub mechanical_identity: bool,
    /// All planar brackets against their closed forms, including the vanishing cross terms.
    pub checks: Vec<BracketCheck<S>>,
}

impl<S: Scalar> RotatedCanonical<S> {
    pub fn all_match(&self) -> bool {
        self.mechanical_identity
            && self.checks.iter().all(|c| c.matches)
            && self.momenta.checks.iter().all(|c| c.matches)
    }
}

pub fn rotated_canonical<S: Scalar>(params: &ModelParams<S>) -> Result<RotatedCanonical<S>> {
    let momenta = rotated_momenta(params)?;
    let field = &momenta.field;
    let table = nc_bracket_table(params);
    let (x, pc) = nc_generators();
    let r = S::one() / sqrt2::<S>();
    let (c, s) = (field.cos_theta.clone(), field.sin_theta.clone());

    let x1 = (&x[0] - &x[1]).scaled(&(c.clone() * r.clone()));
    let x2 = (&x[0] + &x[1]).scaled(&r);
    let p1 = (&pc[0] - &pc[1]).scaled(&r);
    let p2 = &(&pc[0] + &pc[1]).scaled(&(c * r)) - &pc[2].scaled(&s);

    let half = params.q_b0() / S::int(2);
    let mechanical_identity = forms_agree(&momenta.p[0], &(&p1 + &x2.scaled(&half)), FLOAT_REL_TOL)
        && forms_agree(&momenta.p[1], &(&p2 - &x1.scaled(&half)), FLOAT_REL_TOL);

    let im = |z: Complex<S>| z.im;
    let planar = PlanarCommutators {
        mu_e: im(table.commutator(&x1, &x2)),
        nu_e: im(table.commutator(&p1, &p2)),
        hbar_e: im(table.commutator(&x1, &p1)),
    };
    let closed = PlanarCommutators::closed_form(params, field);
    let zero = || Complex::new(S::zero(), S::zero());
    let mut checks = vec![
        BracketCheck::new("[X1θ, X2θ] = iμcosθ", &table, &x1, &x2, i_times(closed.mu_e.clone())),
        BracketCheck::new("[P1θ, P2θ] = iν_e", &table, &p1, &p2, i_times(closed.nu_e.clone())),
        BracketCheck::new("[X1θ, P1θ] = iħcosθ", &table, &x1, &p1, i_times(closed.hbar_e.clone())),
        BracketCheck::new("[X2θ, P2θ] = iħcosθ", &table, &x2, &p2, i_times(closed.hbar_e.clone())),
        BracketCheck::new("[X1θ, P2θ] = 0", &table, &x1, &p2, zero()),
        BracketCheck::new("[X2θ, P1θ] = 0", &table, &x2, &p1, zero()),
    ];
    // [p1θ, p2θ] through the planar constants, then through ω0
    let qb = params.q_b0();
    let chained = planar.nu_e.clone()
        + qb.clone() * planar.hbar_e.clone()
        + qb.clone() * qb * planar.mu_e.clone() / S::int(4);
    checks.push(BracketCheck::new(
        "[p1θ, p2θ] = i(ν_e + qB0ħ_e + q²B0²μ_e/4)",
        &table,
        &momenta.p[0],
        &momenta.p[1],
        i_times(chained),
    ));

    Ok(RotatedCanonical {
        x: [x1, x2],
        p: [p1, p2],
        planar,
        momenta,
        mechanical_identity,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GuidingLadder<S: Scalar> {
    /// `q̂₁θ = P̂₁θ − ρ_g X̂₂θ`, `q̂₂θ = P̂₂θ + ρ_g X̂₁θ`
    pub q: [PhaseSpaceForm<S>; 2],
    pub rho_g: S,
    /// `[q̂ᵢθ, p̂ⱼθ]` indexed `[i][j]`.
    pub brackets: [[Complex<S>; 2]; 2],
    pub commutes: bool,
    /// `[q̂₁θ, q̂₂θ]`, reported only.
    pub q_bracket: Complex<S>,
}

pub fn guiding_ladder<S: Scalar>(params: &ModelParams<S>) -> Result<GuidingLadder<S>> {
    let rc = rotated_canonical(params)?;
    let table = nc_bracket_table(params);
    let pl = &rc.planar;
    let half = params.q_b0() / S::int(2);
    let den = pl.hbar_e.clone() + half.clone() * pl.mu_e.clone();
    if den.is_zero() {
        return Err(Error::Degenerate(
            "ħ_e + qB0μ_e/2 = 0: the guiding coefficient is undefined".into(),
        ));
    }
    let rho_g = (pl.nu_e.clone() + half * pl.hbar_e.clone()) / den;
    let [x1, x2] = &rc.x;
    let [p1, p2] = &rc.p;
    let q = [p1 - &x2.scaled(&rho_g), p2 + &x1.scaled(&rho_g)];
    let mut commutes = true;
    let brackets: [[Complex<S>; 2]; 2] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (&q[i], &rc.momenta.p[j]);
            let z = table.commutator(a, b);
            let zero = Complex::new(S::zero(), S::zero());
            commutes &= agrees(&z, &zero, FLOAT_REL_TOL, table.magnitude(a, b));
            z
        })
    });
    let q_bracket = table.commutator(&q[0], &q[1]);
    Ok(GuidingLadder {
        q,
        rho_g,
        brackets,
        commutes,
        q_bracket,
    })
}

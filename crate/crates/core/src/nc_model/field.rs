use crate::operator_algebra::{BracketTable, Frame, Generator, PhaseSpaceForm};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::params::ModelParams;

/// The tilted effective magnetic field generated jointly by `B₀` and the NC parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct EffectiveField<S: Scalar> {
    /// `a₀ = ν₀/(mħ)`
    pub a0: S,
    /// `ω_e = qB₀/m + ν/(mħ) + q²B₀²μ/(4mħ)`
    pub omega_e: S,
    /// `ω₀ = √(ω_e² + 2a₀²)`
    pub omega0: S,
    pub cos_theta: S,
    pub sin_theta: S,
    /// `atan2(√2 a₀, ω_e)`; obtuse when `ω_e < 0`.
    pub theta: f64,
    /// Rows are `n̄₁θ, n̄₂θ, n̄₃θ`.
    pub axes: [[S; 3]; 3],
    /// `mω₀/|q|`, undefined for a neutral particle.
    pub b_theta_mag: Option<S>,
}

impl<S: Scalar> EffectiveField<S> {
    pub fn frame(&self) -> Frame {
        Frame::from_trig(self.cos_theta.to_f64(), self.sin_theta.to_f64())
    }

    pub fn omega0_f64(&self) -> f64 {
        self.omega0.to_f64()
    }
}

pub(crate) fn sqrt2<S: Scalar>() -> S {
    S::int(2).sqrt().expect("√2 is representable in every scalar field")
}

pub fn effective_field<S: Scalar>(p: &ModelParams<S>) -> Result<EffectiveField<S>> {
    if p.mass.is_zero() || p.mass.is_negative() {
        return Err(Error::Domain("mass must be positive".into()));
    }
    let m_hbar = p.mass.clone() * p.hbar.clone();
    let qb = p.q_b0();
    let omega_e = qb.clone() / p.mass.clone()
        + p.nu.clone() / m_hbar.clone()
        + qb.clone() * qb.clone() * p.mu.clone() / (S::int(4) * m_hbar.clone());
    let a0 = p.nu0.clone() / m_hbar;
    let d = omega_e.clone() * omega_e.clone() + S::int(2) * a0.clone() * a0.clone();
    if d.is_zero() {
        return Err(Error::Degenerate(
            "ω₀ = 0: no effective field, the frame is undefined".into(),
        ));
    }
    let omega0 = d
        .sqrt()
        .ok_or_else(|| Error::Unsupported("ω₀ is not representable in this scalar field".into()))?;
    let s2 = sqrt2::<S>();
    let cos_theta = omega_e.clone() / omega0.clone();
    let sin_theta = s2.clone() * a0.clone() / omega0.clone();
    // `+ 0.0` folds a negative zero so the untilted electron gets θ = π
    let theta = (s2.to_f64() * a0.to_f64() + 0.0).atan2(omega_e.to_f64());

    let r = S::one() / s2;
    let axes = [
        [r.clone(), -r.clone(), S::zero()],
        [
            cos_theta.clone() * r.clone(),
            cos_theta.clone() * r.clone(),
            -sin_theta.clone(),
        ],
        [
            sin_theta.clone() * r.clone(),
            sin_theta.clone() * r,
            cos_theta.clone(),
        ],
    ];
    let b_theta_mag = if p.charge.is_zero() {
        None
    } else {
        let q_abs = if p.charge.is_negative() {
            -p.charge.clone()
        } else {
            p.charge.clone()
        };
        Some(p.mass.clone() * omega0.clone() / q_abs)
    };

    Ok(EffectiveField {
        a0,
        omega_e,
        omega0,
        cos_theta,
        sin_theta,
        theta,
        axes,
        b_theta_mag,
    })
}

/// Brackets of the noncommutative generators themselves: `x̂ᵢ` and `P̂ᵢ`
/// are labelled by the same [`Generator`] tags as their commutative
/// counterparts.
pub fn nc_bracket_table<S: Scalar>(p: &ModelParams<S>) -> BracketTable<S> {
    use Generator::*;
    let mut t = BracketTable::zero();
    t.set(X1, X2, p.mu.clone());
    t.set(X2, X3, p.mu.clone());
    t.set(X3, X1, p.mu.clone());
    t.set(P1, P2, p.nu.clone());
    t.set(P2, P3, p.nu0.clone());
    t.set(P3, P1, p.nu0.clone());
    for j in 0..3 {
        t.set(Generator::x(j), Generator::p(j), p.hbar.clone());
    }
    t
}

/// Mechanical momenta `p̂₁ = P̂₁ + qB₀x̂₂/2`, `p̂₂ = P̂₂ − qB₀x̂₁/2`, `p̂₃ = P̂₃`
/// expressed in whatever generators `x` and `pc` denote.
pub(crate) fn mechanical_from<S: Scalar>(
    x: &[PhaseSpaceForm<S>; 3],
    pc: &[PhaseSpaceForm<S>; 3],
    q_b0: &S,
) -> [PhaseSpaceForm<S>; 3] {
    let half = q_b0.clone() / S::int(2);
    [
        &pc[0] + &x[1].scaled(&half),
        &pc[1] - &x[0].scaled(&half),
        pc[2].clone(),
    ]
}

/// `Mᵢⱼ = [p̂ᵢ, p̂ⱼ]/(iħ)` and the effective field read back from it.
///
/// With `v̂ = cᾱ` the Heisenberg equations read `dp̂ᵢ/dt = Σⱼ Mᵢⱼ v̂ⱼ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeisenbergTensor<S: Scalar> {
    pub m: [[S; 3]; 3],
    /// `B̄θ` from `Mᵢⱼ = q εᵢⱼₖ Bₖ`; `None` for a neutral particle.
    pub field: Option<[S; 3]>,
    /// `|B̄θ|² = (mω₀/q)²`
    pub magnitude_matches: bool,
    /// `q B̄θ/(mω₀) = n̄₃θ` componentwise.
    pub direction_matches: bool,
}

impl<S: Scalar> HeisenbergTensor<S> {
    /// Coefficients of `(v̂₁, v̂₂, v̂₃)` in `dp̂ᵢ/dt`, `i` in `1..=3`.
    pub fn rate_coefficients(&self, i: usize) -> [S; 3] {
        self.m[i - 1].clone()
    }
}

/// Built from the noncommutative brackets directly, so it does not need the
/// realization and accepts `ν₀ ≠ ν`.
pub fn heisenberg_tensor<S: Scalar>(p: &ModelParams<S>) -> Result<HeisenbergTensor<S>> {
    let field = effective_field(p)?;
    let table = nc_bracket_table(p);
    let x = [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::x(j)));
    let pc = [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::p(j)));
    let mech = mechanical_from(&x, &pc, &p.q_b0());
    let m: [[S; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let z = table.commutator(&mech[i], &mech[j]);
            debug_assert!(z.re.is_zero());
            z.im / p.hbar.clone()
        })
    });
    tensor_with_field(p, &field, m)
}

pub(crate) fn tensor_with_field<S: Scalar>(
    p: &ModelParams<S>,
    field: &EffectiveField<S>,
    m: [[S; 3]; 3],
) -> Result<HeisenbergTensor<S>> {
    if p.charge.is_zero() {
        return Ok(HeisenbergTensor {
            m,
            field: None,
            magnitude_matches: false,
            direction_matches: false,
        });
    }
    let q = p.charge.clone();
    let b = [
        m[1][2].clone() / q.clone(),
        m[2][0].clone() / q.clone(),
        m[0][1].clone() / q.clone(),
    ];
    let mag_sq = b.iter().fold(S::zero(), |acc, c| acc + c.clone() * c.clone());
    let expect = p.mass.clone() * field.omega0.clone() / q.clone();
    let magnitude_matches = if S::EXACT {
        mag_sq == expect.clone() * expect.clone()
    } else {
        let e2 = (expect.clone() * expect.clone()).to_f64();
        (mag_sq.to_f64() - e2).abs() <= 1e-12 * e2
    };
    let scale = q / (p.mass.clone() * field.omega0.clone());
    let direction_matches = (0..3).all(|k| {
        let got = b[k].clone() * scale.clone();
        if S::EXACT {
            got == field.axes[2][k]
        } else {
            (got.to_f64() - field.axes[2][k].to_f64()).abs() <= 1e-14
        }
    });
    Ok(HeisenbergTensor {
        m,
        field: Some(b),
        magnitude_matches,
        direction_matches,
    })
}

//! Large-`n` correspondence: closed-form orbit series, quantum matrix-element
//! sums, the coordinate-derivative velocity operator, and a classical
//! relativistic orbit integrator.
//!
//! Scaled units as in [`crate::fock_spectrum`]: velocities in `c`, momenta in
//! `mc`, energies in `mc²`, times in `ħ/(mc²)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_spectrum::{
    diagonalize, energy_closed_form, fock_mean, hamiltonian_matrix, Branch, Lambda, SpectralSetup,
    SPECTRUM_REL_TOL,
};
use crate::nc_model::{effective_field, nc_bracket_table, ModelParams, NCParameters};
use crate::operator_algebra::{alpha_theta, spin_projection, Generator, PhaseSpaceForm};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceParams {
    pub n: u64,
    pub lambda: Lambda,
    /// `E_c = √(2nω₀ + 1)`
    pub e_c: f64,
    /// `Ω = ω₀/E_c`
    pub omega: f64,
}

impl CorrespondenceParams {
    /// Classical momentum radius `√(2nω₀)`.
    pub fn momentum_radius(&self, setup: &SpectralSetup) -> f64 {
        (2.0 * self.n as f64 * setup.omega0).sqrt()
    }

    /// `2E_c/(E_c + 1)`, the ratio of the literal series amplitude to the normalized one.
    pub fn amplitude_ratio(&self) -> f64 {
        2.0 * self.e_c / (self.e_c + 1.0)
    }
}

pub fn correspondence_params(n: u64, lambda: Lambda, setup: &SpectralSetup) -> Result<CorrespondenceParams> {
    if n < 1 {
        return Err(Error::Domain("the correspondence limit needs n ≥ 1".into()));
    }
    let e_c = (2.0 * n as f64 * setup.omega0 + 1.0).sqrt();
    Ok(CorrespondenceParams {
        n,
        lambda,
        e_c,
        omega: setup.omega0 / e_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    PaperSeries,
    NormalizedSeries,
    MatrixSum,
    Ode,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::PaperSeries => "paper_series",
            Source::NormalizedSeries => "normalized_series",
            Source::MatrixSum => "matrix_sum",
            Source::Ode => "ode",
        }
    }
}

/// One point of an in-plane orbit, components along `n̄₁θ` and `n̄₂θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub v1: f64,
    pub v2: f64,
    pub p1: f64,
    pub p2: f64,
    pub source: Source,
}

/// `periods·samples_per_period` uniform times starting at 0, spaced `T/samples_per_period`.
pub fn time_grid(omega: f64, periods: f64, samples_per_period: usize) -> Result<Vec<f64>> {
    if !(omega.is_finite() && omega > 0.0) || !(periods.is_finite() && periods > 0.0) || samples_per_period == 0 {
        return Err(Error::Domain(format!(
            "time grid needs Ω > 0, periods > 0 and samples > 0, got {omega}, {periods}, {samples_per_period}"
        )));
    }
    let dt = 2.0 * PI / (omega * samples_per_period as f64);
    let count = (periods * samples_per_period as f64).round() as usize;
    Ok((0..count).map(|k| k as f64 * dt).collect())
}

fn circle(amplitude: f64, omega: f64, t_grid: &[f64]) -> Vec<[f64; 2]> {
    t_grid
        .iter()
        .map(|&t| {
            let (s, c) = (omega * t).sin_cos();
            [amplitude * c, amplitude * s]
        })
        .collect()
}

/// `v = V(cos Ωt, sin Ωt)` with the literal amplitude `V = 2√(2nω₀)/(E_c + 1)`.
pub fn paper_velocity_series(n: u64, t_grid: &[f64], setup: &SpectralSetup) -> Result<Vec<[f64; 2]>> {
    let cp = correspondence_params(n, Lambda::Plus, setup)?;
    let v = 2.0 * cp.momentum_radius(setup) / (cp.e_c + 1.0);
    Ok(circle(v, cp.omega, t_grid))
}

/// `p = P(cos Ωt, sin Ωt)` with `P = 2E_c√(2nω₀)/(E_c + 1)`.
pub fn paper_momentum_series(n: u64, t_grid: &[f64], setup: &SpectralSetup) -> Result<Vec<[f64; 2]>> {
    let cp = correspondence_params(n, Lambda::Plus, setup)?;
    let p = 2.0 * cp.e_c * cp.momentum_radius(setup) / (cp.e_c + 1.0);
    Ok(circle(p, cp.omega, t_grid))
}

/// Both literal series as samples; fails unless `p = E_c v` at every sample.
pub fn paper_series(n: u64, t_grid: &[f64], setup: &SpectralSetup) -> Result<Vec<OrbitSample>> {
    let cp = correspondence_params(n, Lambda::Plus, setup)?;
    let v = paper_velocity_series(n, t_grid, setup)?;
    let p = paper_momentum_series(n, t_grid, setup)?;
    let amplitude = 2.0 * cp.e_c * cp.momentum_radius(setup) / (cp.e_c + 1.0);
    let tolerance = 1e-14 * amplitude;
    let mut out = Vec::with_capacity(t_grid.len());
    for ((&t, v), p) in t_grid.iter().zip(v).zip(p) {
        for k in 0..2 {
            let residual = (p[k] - cp.e_c * v[k]).abs();
            if residual > tolerance {
                return Err(Error::Residual { residual, tolerance });
            }
        }
        out.push(OrbitSample {
            t,
            v1: v[0],
            v2: v[1],
            p1: p[0],
            p2: p[1],
            source: Source::PaperSeries,
        });
    }
    Ok(out)
}

/// Amplitude `V' = √(2nω₀)/E_c`, the velocity of a classical particle with
/// momentum `√(2nω₀)`; momenta `E_c v`.
pub fn normalized_velocity_series(n: u64, t_grid: &[f64], setup: &SpectralSetup) -> Result<Vec<OrbitSample>> {
    let cp = correspondence_params(n, Lambda::Plus, setup)?;
    let v = cp.momentum_radius(setup) / cp.e_c;
    Ok(circle(v, cp.omega, t_grid)
        .into_iter()
        .zip(t_grid)
        .map(|(v, &t)| OrbitSample {
            t,
            v1: v[0],
            v2: v[1],
            p1: cp.e_c * v[0],
            p2: cp.e_c * v[1],
            source: Source::NormalizedSeries,
        })
        .collect())
}

/// Positive-energy eigenstates of one spin sector `Γ = βΣ₃θ = λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorStates {
    pub lambda: Lambda,
    pub trunc: usize,
    /// Indexed by Fock label `n`, up to the last level inside the window.
    pub energies: Vec<f64>,
    /// Unit `4N` spinors. The overlap with `|n⟩⊗v_λ` in the upper components is real and positive.
    pub states: Vec<DVector<Complex64>>,
}

/// `Γ` commutes with `H` at `η = 0`, so diagonalizing `H` inside a sector
/// separates the degenerate pairs `(k, +1)`, `(k − 1, −1)`.
pub fn sector_states(lambda: Lambda, trunc: usize, setup: &SpectralSetup) -> Result<SectorStates> {
    let h = hamiltonian_matrix(trunc, 0.0, setup)?;
    let spins = spin_projection(&setup.frame);
    let up = spins[lambda.index()].vector;
    let down = spins[1 - lambda.index()].vector;
    let n = trunc;
    let mut basis = DMatrix::<Complex64>::zeros(4 * n, 2 * n);
    for i in 0..n {
        for s in 0..2 {
            basis[(s * n + i, i)] = up[s];
            basis[((2 + s) * n + i, n + i)] = down[s];
        }
    }
    let block = basis.adjoint() * &h.entries * &basis;
    let (values, vectors) = diagonalize(&block)?;

    let cutoff = n as f64 / 4.0;
    let candidates: Vec<(f64, DVector<Complex64>)> = values
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0.0)
        .map(|(c, &e)| (e, &basis * vectors.column(c)))
        .filter(|(_, v)| fock_mean(v.as_slice(), n) < cutoff)
        .collect();

    let mut energies = Vec::new();
    let mut states = Vec::new();
    let l_max = (n - 1) / 4;
    for l in 0..=l_max as u64 {
        let target = energy_closed_form(l, lambda, Branch::Positive, 0.0, setup)?;
        let (e, v) = candidates
            .iter()
            .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()))
            .ok_or(Error::Convergence { dim: 2 * n })?;
        if (e - target).abs() > SPECTRUM_REL_TOL * target {
            return Err(Error::Residual {
                residual: (e - target).abs(),
                tolerance: SPECTRUM_REL_TOL * target,
            });
        }
        let lead = v[l as usize] * up[0].conj() + v[n + l as usize] * up[1].conj();
        let phase = if lead.norm() > 0.0 { lead.conj() / lead.norm() } else { Complex64::new(1.0, 0.0) };
        energies.push(*e);
        states.push(v.map(|z| z * phase));
    }
    Ok(SectorStates {
        lambda,
        trunc,
        energies,
        states,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixElementSeries {
    pub samples: Vec<OrbitSample>,
    /// Largest `|⟨ψ_l|cα_jθ|ψ_n⟩|` or `|⟨ψ_l|p_jθ|ψ_n⟩|` with `l ∉ {n − 1, n + 1}`.
    pub selection_max: f64,
    /// `E_{n+1} − E_n`
    pub gap_up: f64,
    /// `E_n − E_{n−1}`, `None` at `n = 0`.
    pub gap_down: Option<f64>,
}

/// Operators whose matrix-element sums are evaluated: one `4N × 4N` matrix per in-plane axis.
fn series_from_operators(
    n: u64,
    sector: &SectorStates,
    t_grid: &[f64],
    ops: [&DMatrix<Complex64>; 4],
) -> (Vec<[f64; 4]>, f64) {
    let nu = n as usize;
    let psi_n = &sector.states[nu];
    let images: Vec<DVector<Complex64>> = ops.iter().map(|op| *op * psi_n).collect();
    let mut selection_max = 0.0f64;
    let mut terms: Vec<(f64, [Complex64; 4])> = Vec::new();
    for (l, psi_l) in sector.states.iter().enumerate() {
        let elems: [Complex64; 4] = std::array::from_fn(|k| psi_l.dotc(&images[k]));
        if l + 1 == nu || l == nu + 1 {
            terms.push((sector.energies[l] - sector.energies[nu], elems));
        } else {
            selection_max = elems.iter().map(|z| z.norm()).fold(selection_max, f64::max);
        }
    }
    let values = t_grid
        .iter()
        .map(|&t| {
            let mut acc = [0.0; 4];
            for (gap, elems) in &terms {
                let phase = Complex64::from_polar(1.0, gap * t);
                for k in 0..4 {
                    acc[k] += (elems[k] * phase).re;
                }
            }
            acc
        })
        .collect();
    (values, selection_max)
}

fn check_window(n: u64, trunc: usize) -> Result<()> {
    if (n + 1) as f64 >= trunc as f64 / 4.0 {
        return Err(Error::Size(format!(
            "level n + 1 = {} must lie below N/4; raise N above {}",
            n + 1,
            4 * (n + 1)
        )));
    }
    Ok(())
}

/// `Σ_l ⟨ψ_l(t)|cα_jθ|ψ_n(t)⟩` and `Σ_l ⟨ψ_l(t)|p_jθ|ψ_n(t)⟩` over positive
/// states of one spin sector; the real part is reported.
pub fn matrix_element_series(
    n: u64,
    lambda: Lambda,
    trunc: usize,
    t_grid: &[f64],
    setup: &SpectralSetup,
) -> Result<MatrixElementSeries> {
    check_window(n, trunc)?;
    let sector = sector_states(lambda, trunc, setup)?;
    let id = DMatrix::<Complex64>::identity(trunc, trunc);
    let a1 = alpha_theta(1, &setup.frame).entries.kronecker(&id);
    let a2 = alpha_theta(2, &setup.frame).entries.kronecker(&id);
    let (p1, p2) = crate::fock_spectrum::planar_momentum_matrices(trunc, setup)?;
    let id4 = DMatrix::<Complex64>::identity(4, 4);
    let p1 = id4.kronecker(&p1.entries);
    let p2 = id4.kronecker(&p2.entries);
    let (values, selection_max) = series_from_operators(n, &sector, t_grid, [&a1, &a2, &p1, &p2]);
    let nu = n as usize;
    Ok(MatrixElementSeries {
        samples: t_grid
            .iter()
            .zip(values)
            .map(|(&t, [v1, v2, p1, p2])| OrbitSample {
                t,
                v1,
                v2,
                p1,
                p2,
                source: Source::MatrixSum,
            })
            .collect(),
        selection_max,
        gap_up: sector.energies[nu + 1] - sector.energies[nu],
        gap_down: (nu > 0).then(|| sector.energies[nu] - sector.energies[nu - 1]),
    })
}

/// Least-squares slope of the unwrapped polar angle of `(v1, v2)`;
/// negative for clockwise motion about `n̄₃θ`.
pub fn fit_frequency(samples: &[OrbitSample]) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::Size("frequency fit needs at least three samples".into()));
    }
    let mut angles = Vec::with_capacity(samples.len());
    let mut prev = samples[0].v2.atan2(samples[0].v1);
    let mut offset = 0.0;
    for s in samples {
        let a = s.v2.atan2(s.v1);
        let d = a - prev;
        if d > PI {
            offset -= 2.0 * PI;
        } else if d < -PI {
            offset += 2.0 * PI;
        }
        prev = a;
        angles.push(a + offset);
    }
    let k = samples.len() as f64;
    let tm = samples.iter().map(|s| s.t).sum::<f64>() / k;
    let am = angles.iter().sum::<f64>() / k;
    let (mut num, mut den) = (0.0, 0.0);
    for (s, a) in samples.iter().zip(&angles) {
        num += (s.t - tm) * (a - am);
        den += (s.t - tm) * (s.t - tm);
    }
    Ok(num / den)
}

/// `max/min` of `v1² + v2²` over the samples.
pub fn radius_spread(samples: &[OrbitSample]) -> f64 {
    let r: Vec<f64> = samples.iter().map(|s| s.v1 * s.v1 + s.v2 * s.v2).collect();
    let max = r.iter().copied().fold(f64::MIN, f64::max);
    let min = r.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeOrbit {
    pub samples: Vec<OrbitSample>,
    /// `max |p₃θ(t) − p₃θ(0)| / |p(0)|`
    pub p3_drift: f64,
    /// `max |E(t) − E(0)| / E(0)`
    pub energy_drift: f64,
    /// `max |v − p/E|` over the samples.
    pub velocity_relation_error: f64,
    /// `ω₀/E(p₀)`
    pub omega_predicted: f64,
}

/// Integrates `dp/dt = v × ω₀n̄₃θ` with `v = p/E(p)`, `E(p) = √(p² + 1)`.
///
/// Each step rotates `p` about `n̄₃θ` by the exact angle `Ω dt` through the
/// Boris form with `t = n̄₃θ tan(Ω dt/2)`, so `|p|` and `p₃θ` are conserved
/// to rounding. `p0` is in lab components; one sample is kept every `stride` steps.
pub fn integrate_orbit(p0: [f64; 3], setup: &SpectralSetup, dt: f64, steps: usize, stride: usize) -> Result<OdeOrbit> {
    if !(dt.is_finite() && dt > 0.0) || dt * setup.omega0 >= 0.1 {
        return Err(Error::Step(format!(
            "step {dt} gives dt·ω₀ = {}, needs 0 < dt·ω₀ < 0.1",
            dt * setup.omega0
        )));
    }
    if stride == 0 {
        return Err(Error::Step("sampling stride must be positive".into()));
    }
    let axes = setup.frame.axes;
    let n3 = axes[2];
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let energy = |p: [f64; 3]| (dot(p, p) + 1.0).sqrt();

    let e0 = energy(p0);
    let p_norm0 = dot(p0, p0).sqrt();
    let p30 = dot(p0, n3);
    let mut p = p0;
    let mut samples = Vec::with_capacity(steps / stride + 1);
    let (mut p3_drift, mut energy_drift, mut vel_err) = (0.0f64, 0.0f64, 0.0f64);
    for step in 0..=steps {
        if step % stride == 0 {
            let e = energy(p);
            let v = p.map(|x| x / e);
            let vp = v.map(|x| x * e);
            vel_err = vel_err.max((0..3).map(|k| (vp[k] - p[k]).abs() / e).fold(0.0, f64::max));
            samples.push(OrbitSample {
                t: step as f64 * dt,
                v1: dot(v, axes[0]),
                v2: dot(v, axes[1]),
                p1: dot(p, axes[0]),
                p2: dot(p, axes[1]),
                source: Source::Ode,
            });
            p3_drift = p3_drift.max((dot(p, n3) - p30).abs() / p_norm0.max(f64::MIN_POSITIVE));
            energy_drift = energy_drift.max((e - e0).abs() / e0);
        }
        if step == steps {
            break;
        }
        let omega = setup.omega0 / energy(p);
        let k = (0.5 * omega * dt).tan();
        let t = n3.map(|x| x * k);
        let s = t.map(|x| 2.0 * x / (1.0 + k * k));
        let pc = cross(p, t);
        let p_prime = [p[0] + pc[0], p[1] + pc[1], p[2] + pc[2]];
        let ps = cross(p_prime, s);
        p = [p[0] + ps[0], p[1] + ps[1], p[2] + ps[2]];
    }
    Ok(OdeOrbit {
        samples,
        p3_drift,
        energy_drift,
        velocity_relation_error: vel_err,
        omega_predicted: setup.omega0 / e0,
    })
}

/// `ûᵢ = c Σⱼ Uᵢⱼ αⱼ` for the coordinate-derivative velocity `dx̂ᵢ/dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateVelocity<S: Scalar> {
    /// `Uᵢⱼ = [x̂ᵢ, p̂ⱼ]/(iħ)` from the noncommutative brackets.
    pub coefficients: [[S; 3]; 3],
    /// `U` written out with `κ = qB₀μ/(2ħ)`.
    pub closed_form: [[S; 3]; 3],
    pub matches: bool,
    /// `Uθ = N U Nᵀ` with `N` the frame rows, so `ûᵢθ = c Σⱼ Uθᵢⱼ αⱼθ`; `None` without a field.
    pub rotated: Option<[[f64; 3]; 3]>,
}

pub fn coordinate_velocity_operator<S: Scalar>(params: &ModelParams<S>) -> Result<CoordinateVelocity<S>> {
    if params.hbar.is_zero() {
        return Err(Error::Domain("ħ must be nonzero".into()));
    }
    let table = nc_bracket_table(params);
    let half = params.q_b0() / S::int(2);
    let x = [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::x(j)));
    let pc = [0, 1, 2].map(|j| PhaseSpaceForm::generator(Generator::p(j)));
    let mech = [
        &pc[0] + &x[1].scaled(&half),
        &pc[1] - &x[0].scaled(&half),
        pc[2].clone(),
    ];
    let coefficients: [[S; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| table.commutator(&x[i], &mech[j]).im / params.hbar.clone())
    });
    let kappa = half * params.mu.clone() / params.hbar.clone();
    let one_k = S::one() + kappa.clone();
    let closed_form = [
        [one_k.clone(), S::zero(), S::zero()],
        [S::zero(), one_k, S::zero()],
        [-kappa.clone(), -kappa, S::one()],
    ];
    let matches = coefficients == closed_form
        || (!S::EXACT
            && (0..3).all(|i| {
                (0..3).all(|j| (coefficients[i][j].to_f64() - closed_form[i][j].to_f64()).abs() <= 1e-14)
            }));
    let rotated = effective_field(params).ok().map(|f| {
        let n = f.frame().axes;
        let u = coefficients.clone().map(|row| row.map(|c| c.to_f64()));
        std::array::from_fn(|i| {
            std::array::from_fn(|m| {
                let mut acc = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        acc += n[i][a] * u[a][b] * n[m][b];
                    }
                }
                acc
            })
        })
    });
    Ok(CoordinateVelocity {
        coefficients,
        closed_form,
        matches,
        rotated,
    })
}

/// Matrix-element sums of `û₁θ, û₂θ` (in units of `c`) for natural-unit
/// parameters, and the spread `max/min` of `u₁θ² + u₂θ²` over the samples.
pub fn coordinate_velocity_series(
    n: u64,
    lambda: Lambda,
    trunc: usize,
    t_grid: &[f64],
    params: &NCParameters,
) -> Result<(Vec<OrbitSample>, f64)> {
    check_window(n, trunc)?;
    let nat = params.to_natural();
    let u = coordinate_velocity_operator(&nat.float())?;
    let rot = u
        .rotated
        .ok_or_else(|| Error::Degenerate("no effective field".into()))?;
    let setup = SpectralSetup::from_params(&nat)?;
    let sector = sector_states(lambda, trunc, &setup)?;
    let id = DMatrix::<Complex64>::identity(trunc, trunc);
    let alphas: [DMatrix<Complex64>; 3] = std::array::from_fn(|m| alpha_theta(m + 1, &setup.frame).entries);
    let combo = |i: usize| {
        (0..3)
            .fold(DMatrix::<Complex64>::zeros(4, 4), |acc, m| acc + alphas[m].map(|z| z * rot[i][m]))
            .kronecker(&id)
    };
    let (u1, u2) = (combo(0), combo(1));
    let zero = DMatrix::<Complex64>::zeros(4 * trunc, 4 * trunc);
    let (values, _) = series_from_operators(n, &sector, t_grid, [&u1, &u2, &zero, &zero]);
    let samples: Vec<OrbitSample> = t_grid
        .iter()
        .zip(values)
        .map(|(&t, [v1, v2, _, _])| OrbitSample {
            t,
            v1,
            v2,
            p1: 0.0,
            p2: 0.0,
            source: Source::MatrixSum,
        })
        .collect();
    let spread = radius_spread(&samples);
    Ok((samples, spread))
}

pub const ORBIT_CSV_HEADER: &str = "t,v1,v2,p1,p2,source";

/// Scaled samples converted with the setup's time, velocity and momentum units.
pub fn orbit_csv(samples: &[OrbitSample], setup: &SpectralSetup) -> String {
    let mut out = String::from(ORBIT_CSV_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{:?},{:?},{:?},{:?},{:?},{}",
            s.t * setup.time_unit,
            s.v1 * setup.velocity_unit,
            s.v2 * setup.velocity_unit,
            s.p1 * setup.momentum_unit,
            s.p2 * setup.momentum_unit,
            s.source.as_str()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::Surd;

    fn setup(omega0: f64, theta: f64) -> SpectralSetup {
        SpectralSetup::natural(omega0, theta).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn correspondence_values() {
        let s = setup(0.1, 0.0);
        let cp = correspondence_params(50, Lambda::Plus, &s).unwrap();
        assert!(rel(cp.e_c, 11f64.sqrt()) < 1e-15);
        assert!(rel(cp.omega / 0.1, 0.3015) < 1e-3);
        assert!(rel(cp.omega * cp.e_c, 0.1) < 1e-15);
        assert!(cp.e_c >= 1.0 && cp.omega <= 0.1);
        let weak = correspondence_params(3, Lambda::Plus, &setup(1e-9, 0.0)).unwrap();
        assert!(rel(weak.omega, 1e-9) < 1e-8);
        assert!(correspondence_params(0, Lambda::Plus, &s).is_err());
    }

    #[test]
    fn level_gap_tends_to_omega() {
        let s = setup(0.1, 0.0);
        for n in [10u64, 50, 200] {
            let cp = correspondence_params(n, Lambda::Plus, &s).unwrap();
            let e = |k| energy_closed_form(k, Lambda::Plus, Branch::Positive, 0.0, &s).unwrap();
            assert!(rel(e(n + 1) - e(n), cp.omega) < 1.0 / n as f64);
        }
    }

    #[test]
    fn literal_and_normalized_amplitudes() {
        let s = setup(0.1, 0.0);
        let grid = time_grid(0.03, 1.0, 8).unwrap();
        let v = paper_velocity_series(50, &grid, &s).unwrap();
        assert!(rel(v[0][0], 1.465) < 1e-3);
        let norm = normalized_velocity_series(50, &grid, &s).unwrap();
        assert!(rel(norm[0].v1, 0.9535) < 1e-4);
        let cp = correspondence_params(50, Lambda::Plus, &s).unwrap();
        assert!(rel(v[0][0] / norm[0].v1, cp.amplitude_ratio()) < 1e-12);
        let weak = setup(1e-8, 0.0);
        let vw = paper_velocity_series(4, &grid, &weak).unwrap();
        assert!(rel(vw[0][0], (8e-8f64).sqrt()) < 1e-7);
        let pw = paper_momentum_series(4, &grid, &weak).unwrap();
        assert!(rel(pw[0][0], (8e-8f64).sqrt()) < 1e-7);
    }

    #[test]
    fn normalized_series_subluminal() {
        for (w, n) in [(0.5, 1000u64), (0.01, 1), (2.0, 50)] {
            let s = setup(w, 0.2);
            let v = normalized_velocity_series(n, &[0.0], &s).unwrap();
            assert!(v[0].v1 < 1.0);
        }
    }

    #[test]
    fn circles_and_relativistic_momentum() {
        let s = setup(0.1, 0.0);
        let cp = correspondence_params(50, Lambda::Plus, &s).unwrap();
        let grid = time_grid(cp.omega, 10.0, 100).unwrap();
        assert_eq!(grid.len(), 1000);
        for series in [paper_series(50, &grid, &s).unwrap(), normalized_velocity_series(50, &grid, &s).unwrap()] {
            let r0 = series[0].v1.powi(2) + series[0].v2.powi(2);
            for x in &series {
                assert!(rel(x.v1 * x.v1 + x.v2 * x.v2, r0) < 1e-13);
                for (p, v) in [(x.p1, x.v1), (x.p2, x.v2)] {
                    assert!((p - cp.e_c * v).abs() <= 1e-14 * cp.e_c * r0.sqrt());
                }
            }
        }
    }

    #[test]
    fn sector_states_are_eigenvectors() {
        let s = setup(0.1, 0.6);
        let h = hamiltonian_matrix(32, 0.0, &s).unwrap();
        for lambda in Lambda::BOTH {
            let sec = sector_states(lambda, 32, &s).unwrap();
            assert_eq!(sec.states.len(), 8);
            for (e, v) in sec.energies.iter().zip(&sec.states) {
                let r = (&h.entries * v - v.map(|z| z * e)).norm();
                assert!(r < 1e-10, "residual {r}");
            }
        }
    }

    #[test]
    fn sector_states_agree_with_constructed_spinors() {
        let s = setup(0.2, 0.9);
        let sec = sector_states(Lambda::Minus, 40, &s).unwrap();
        let built = crate::fock_spectrum::spinor_eigenstate(4, Lambda::Minus, 40, &s).unwrap();
        let overlap = sec.states[4].dotc(&built.vector);
        assert!((overlap.re - 1.0).abs() < 1e-10 && overlap.im.abs() < 1e-10);
    }

    #[test]
    fn matrix_sum_small_n() {
        let s = setup(0.1, 0.4);
        let cp = correspondence_params(10, Lambda::Plus, &s).unwrap();
        let grid = time_grid(cp.omega, 3.0, 64).unwrap();
        let m = matrix_element_series(10, Lambda::Plus, 64, &grid, &s).unwrap();
        assert!(m.selection_max < 1e-12);
        let w = fit_frequency(&m.samples).unwrap();
        // clockwise about n̄₃θ
        assert!(w < 0.0);
        let lo = m.gap_up.min(m.gap_down.unwrap());
        let hi = m.gap_up.max(m.gap_down.unwrap());
        assert!(w.abs() >= lo * (1.0 - 1e-9) && w.abs() <= hi * (1.0 + 1e-9));
        assert!(rel(w.abs(), cp.omega) < 2.0 / 10.0);
        assert!(matrix_element_series(15, Lambda::Plus, 64, &grid, &s).is_err());
    }

    #[test]
    fn ode_conserves_and_rotates() {
        let s = setup(0.1, 0.7);
        let a = s.frame.axes;
        let p0: [f64; 3] = std::array::from_fn(|k| 3.0 * a[0][k] + 0.5 * a[2][k]);
        let e0 = (9.0f64 + 0.25 + 1.0).sqrt();
        let period = 2.0 * PI * e0 / 0.1;
        let dt = period / 2000.0;
        let orbit = integrate_orbit(p0, &s, dt, 20_000, 10).unwrap();
        assert!(orbit.p3_drift < 1e-12);
        assert!(orbit.energy_drift < 1e-12);
        assert!(orbit.velocity_relation_error < 1e-15);
        let w = fit_frequency(&orbit.samples).unwrap();
        assert!(rel(-w, orbit.omega_predicted) < 1e-6);
        assert!(rel(orbit.omega_predicted, 0.1 / e0) < 1e-15);
        assert!(matches!(integrate_orbit(p0, &s, 1.0, 10, 1), Err(Error::Step(_))));
    }

    #[test]
    fn coordinate_velocity_reduces_without_mu() {
        let p = NCParameters::commutative(1.0, 1.0, 2.0, 1.0, 1.0).exact().unwrap();
        let u = coordinate_velocity_operator(&p).unwrap();
        assert!(u.matches);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(u.coefficients[i][j], if i == j { Surd::from_ints(1, 1) } else { Surd::from_ints(0, 1) });
            }
        }
    }

    #[test]
    fn coordinate_velocity_generic() {
        let p = ModelParams {
            mu: Surd::from_ints(1, 5),
            nu: Surd::from_ints(1, 7),
            nu0: Surd::from_ints(1, 3),
            b0: Surd::from_ints(3, 1),
            mass: Surd::from_ints(1, 1),
            charge: Surd::from_ints(1, 1),
            hbar: Surd::from_ints(1, 2),
        };
        let u = coordinate_velocity_operator(&p).unwrap();
        assert!(u.matches);
        // κ = qB₀μ/(2ħ) = 3/5
        assert_eq!(u.coefficients[0][0], Surd::from_ints(8, 5));
        assert_eq!(u.coefficients[2][0], Surd::from_ints(-3, 5));
        assert_eq!(u.coefficients[2][1], Surd::from_ints(-3, 5));
        assert!(u.rotated.is_some());
    }

    #[test]
    fn coordinate_velocity_orbit_not_circular() {
        let mut p = NCParameters::natural_from_field(0.1, 0.6);
        p.mu = 2.0;
        let setup = SpectralSetup::from_params(&p).unwrap();
        let cp = correspondence_params(8, Lambda::Plus, &setup).unwrap();
        let grid = time_grid(cp.omega, 1.0, 64).unwrap();
        let (_, spread) = coordinate_velocity_series(8, Lambda::Plus, 48, &grid, &p).unwrap();
        assert!(spread > 1.01, "spread {spread}");
        p.mu = 0.0;
        let (_, flat) = coordinate_velocity_series(8, Lambda::Plus, 48, &grid, &p).unwrap();
        let flat_setup = SpectralSetup::from_params(&p).unwrap();
        let m = matrix_element_series(8, Lambda::Plus, 48, &grid, &flat_setup).unwrap();
        assert!(rel(flat, radius_spread(&m.samples)) < 1e-9);
    }

    #[test]
    fn csv_layout() {
        let s = setup(0.1, 0.0);
        let rows = normalized_velocity_series(2, &[0.0, 1.0], &s).unwrap();
        let csv = orbit_csv(&rows, &s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], ORBIT_CSV_HEADER);
        assert!(lines[1].starts_with("0.0,"));
        assert!(lines[2].ends_with(",normalized_series"));
    }
}

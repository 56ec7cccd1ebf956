//! Truncated Fock-space representation of the planar Dirac–Landau problem.
//!
//! Everything here is in scaled units: energies in `mc²`, momenta in `mc`,
//! frequencies in `mc²/ħ`. The Hamiltonian acts on `C⁴ ⊗ C^N` with
//! spinor-major ordering: component `s` of Fock level `n` sits at index
//! `s·N + n`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nc_model::{effective_field, NCParameters};
use crate::operator_algebra::{alpha_theta, dirac_matrices, sigma_theta, spin_projection, Frame};

/// Default truncation.
pub const DEFAULT_TRUNC: usize = 64;
/// Relative tolerance for eigenvalues inside the assertion window.
pub const SPECTRUM_REL_TOL: f64 = 1e-8;

/// The effective-field data the spectrum depends on, in scaled units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSetup {
    /// `ħω₀/(mc²)`
    pub omega0: f64,
    pub theta: f64,
    pub frame: Frame,
    /// `mc²` in the caller's unit system, used to convert energies back.
    pub rest_energy: f64,
    /// `mc` in the caller's unit system.
    pub momentum_unit: f64,
    /// `c` in the caller's unit system.
    pub velocity_unit: f64,
    /// `ħ/(mc²)` in the caller's unit system.
    pub time_unit: f64,
}

impl SpectralSetup {
    pub fn natural(omega0: f64, theta: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::Degenerate(format!("ω₀ must be positive, got {omega0}")));
        }
        Ok(Self {
            omega0,
            theta,
            frame: Frame::from_angle(theta),
            rest_energy: 1.0,
            momentum_unit: 1.0,
            velocity_unit: 1.0,
            time_unit: 1.0,
        })
    }

    pub fn from_params(params: &NCParameters) -> Result<Self> {
        params.validate()?;
        let nat = params.to_natural();
        let field = effective_field(&nat.float())?;
        let mut s = Self::natural(field.omega0, field.theta)?;
        s.frame = Frame::from_trig(field.cos_theta, field.sin_theta);
        s.rest_energy = params.mass * params.c * params.c;
        s.momentum_unit = params.mass * params.c;
        s.velocity_unit = params.c;
        s.time_unit = params.hbar / s.rest_energy;
        Ok(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Ladder,
    Momentum,
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockOperatorMatrix {
    pub kind: OperatorKind,
    /// Fock levels `0..trunc`.
    pub trunc: usize,
    pub entries: DMatrix<Complex64>,
}

impl FockOperatorMatrix {
    /// `‖M − M†‖_max / ‖M‖_max`.
    pub fn hermiticity_defect(&self) -> f64 {
        let scale = max_abs(&self.entries);
        if scale == 0.0 {
            return 0.0;
        }
        max_abs(&(&self.entries - self.entries.adjoint())) / scale
    }

    pub fn commutator(&self, other: &FockOperatorMatrix) -> DMatrix<Complex64> {
        &self.entries * &other.entries - &other.entries * &self.entries
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn lowering(n: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// `A` and `A†` on Fock levels `0..n`. The truncated commutator is the
/// identity except its last diagonal entry, which is `1 − n`.
pub fn ladder_matrices(n: usize) -> Result<(FockOperatorMatrix, FockOperatorMatrix)> {
    if n < 2 {
        return Err(Error::Size(format!("ladder truncation needs N ≥ 2, got {n}")));
    }
    let a = lowering(n);
    let ad = a.adjoint();
    let wrap = |entries| FockOperatorMatrix {
        kind: OperatorKind::Ladder,
        trunc: n,
        entries,
    };
    Ok((wrap(a), wrap(ad)))
}

fn planar_momenta(n: usize, omega0: f64) -> [DMatrix<Complex64>; 2] {
    let a = lowering(n);
    let ad = a.adjoint();
    let k = (omega0 / 2.0).sqrt();
    let p1 = (&a + &ad).map(|z| z * k);
    let p2 = (&a - &ad).map(|z| z * Complex64::new(0.0, -k));
    [p1, p2]
}

/// `p₁θ = √(ω₀/2)(A + A†)`, `p₂θ = −i√(ω₀/2)(A − A†)`.
pub fn planar_momentum_matrices(n: usize, setup: &SpectralSetup) -> Result<(FockOperatorMatrix, FockOperatorMatrix)> {
    if n < 2 {
        return Err(Error::Size(format!("momentum truncation needs N ≥ 2, got {n}")));
    }
    let [p1, p2] = planar_momenta(n, setup.omega0);
    let wrap = |entries| FockOperatorMatrix {
        kind: OperatorKind::Momentum,
        trunc: n,
        entries,
    };
    Ok((wrap(p1), wrap(p2)))
}

/// `H = α₁θ⊗p₁θ + α₂θ⊗p₂θ + η α₃θ⊗I + β⊗I`, with `η` in units of `mc`.
pub fn hamiltonian_matrix(n: usize, eta: f64, setup: &SpectralSetup) -> Result<FockOperatorMatrix> {
    if n < 1 {
        return Err(Error::Size("Hamiltonian truncation needs N ≥ 1".into()));
    }
    if !eta.is_finite() {
        return Err(Error::Domain(format!("η must be finite, got {eta}")));
    }
    let [p1, p2] = planar_momenta(n, setup.omega0);
    let id = DMatrix::<Complex64>::identity(n, n);
    let a1 = alpha_theta(1, &setup.frame).entries;
    let a2 = alpha_theta(2, &setup.frame).entries;
    let a3 = alpha_theta(3, &setup.frame).entries;
    let beta = dirac_matrices().beta.entries;
    let entries = a1.kronecker(&p1) + a2.kronecker(&p2) + a3.map(|z| z * eta).kronecker(&id) + beta.kronecker(&id);
    Ok(FockOperatorMatrix {
        kind: OperatorKind::Hamiltonian,
        trunc: n,
        entries,
    })
}

/// Spin projection along the effective field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lambda {
    Plus,
    Minus,
}

impl Lambda {
    pub const BOTH: [Lambda; 2] = [Lambda::Plus, Lambda::Minus];

    pub fn value(self) -> i8 {
        match self {
            Lambda::Plus => 1,
            Lambda::Minus => -1,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Lambda::Plus => 0,
            Lambda::Minus => 1,
        }
    }
}

/// Particle (`Positive`) or antiparticle (`Negative`) branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    pub fn value(self) -> i8 {
        match self {
            Branch::Positive => 1,
            Branch::Negative => -1,
        }
    }
}

/// `sign·√(1 + η² + ω₀(2n + 1 − λ))` in units of `mc²`.
pub fn energy_closed_form(n: u64, lambda: Lambda, branch: Branch, eta: f64, setup: &SpectralSetup) -> Result<f64> {
    let kinetic = setup.omega0 * (2 * n as i64 + 1 - i64::from(lambda.value())) as f64;
    let radicand = 1.0 + eta * eta + kinetic;
    if !(radicand >= 0.0) {
        return Err(Error::Domain(format!("negative squared energy {radicand} at n = {n}")));
    }
    Ok(f64::from(branch.value()) * radicand.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumLine {
    pub n: u64,
    pub lambda: Lambda,
    pub sign: Branch,
    /// In units of `mc`.
    pub eta: f64,
    /// Closed-form energy in units of `mc²`.
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledEigenvalue {
    pub numeric: f64,
    pub line: SpectrumLine,
    /// `Σₙ n·|⟨n|ψ⟩|²` summed over spinor components.
    pub fock_mean: f64,
    /// `fock_mean < N/4`; only these are held to [`SPECTRUM_REL_TOL`].
    pub in_window: bool,
}

impl LabeledEigenvalue {
    pub fn abs_err(&self) -> f64 {
        (self.numeric - self.line.energy).abs()
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err() / self.line.energy.abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericalSpectrum {
    pub trunc: usize,
    pub eta: f64,
    /// Ascending by numeric value.
    pub levels: Vec<LabeledEigenvalue>,
}

impl NumericalSpectrum {
    pub fn window(&self) -> impl Iterator<Item = &LabeledEigenvalue> {
        self.levels.iter().filter(|l| l.in_window)
    }

    /// The level carrying label `(n, λ, sign)`, if one was assigned.
    pub fn find(&self, n: u64, lambda: Lambda, sign: Branch) -> Option<&LabeledEigenvalue> {
        self.levels
            .iter()
            .find(|l| l.line.n == n && l.line.lambda == lambda && l.line.sign == sign)
    }

    pub fn worst_window_rel_err(&self) -> f64 {
        self.window().map(|l| l.rel_err()).fold(0.0, f64::max)
    }
}

/// Eigenvalues ascending with eigenvectors as matching columns.
pub fn diagonalize(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    let dim = m.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * dim.max(1))
        .ok_or(Error::Convergence { dim })?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Mean Fock index of a `4N` spinor.
pub fn fock_mean(v: &[Complex64], trunc: usize) -> f64 {
    v.iter().enumerate().map(|(i, z)| (i % trunc) as f64 * z.norm_sqr()).sum::<f64>()
        / v.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

pub fn numerical_spectrum(n: usize, eta: f64, setup: &SpectralSetup) -> Result<NumericalSpectrum> {
    if n < 8 {
        return Err(Error::Size(format!("spectrum truncation needs N ≥ 8, got {n}")));
    }
    let h = hamiltonian_matrix(n, eta, setup)?;
    let (values, vectors) = diagonalize(&h.entries)?;

    let mut candidates = Vec::with_capacity(4 * n);
    for k in 0..n as u64 {
        for lambda in Lambda::BOTH {
            for sign in [Branch::Positive, Branch::Negative] {
                let energy = energy_closed_form(k, lambda, sign, eta, setup)?;
                candidates.push(SpectrumLine {
                    n: k,
                    lambda,
                    sign,
                    eta,
                    energy,
                });
            }
        }
    }
    // Lower n first so ties among degenerate labels resolve deterministically.
    candidates.sort_by(|a, b| a.n.cmp(&b.n).then(a.lambda.cmp(&b.lambda)).then(a.sign.cmp(&b.sign)));

    let means: Vec<f64> = (0..values.len())
        .map(|c| fock_mean(vectors.column(c).as_slice(), n))
        .collect();
    let cutoff = n as f64 / 4.0;
    // Window states claim labels before the truncation-edge states do;
    // `values` is ascending, so each group is taken in energy order.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by_key(|&i| means[i] >= cutoff);

    let mut used = vec![false; candidates.len()];
    let mut labels = vec![None; values.len()];
    for &i in &order {
        let e = values[i];
        let tie = 64.0 * f64::EPSILON * e.abs().max(1.0);
        let mut best: Option<(usize, f64)> = None;
        for (j, cand) in candidates.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (cand.energy - e).abs();
            if best.is_none_or(|(_, bd)| d < bd - tie) {
                best = Some((j, d));
            }
        }
        let (j, _) = best.expect("as many candidates as eigenvalues");
        used[j] = true;
        labels[i] = Some(candidates[j]);
    }

    let levels = values
        .iter()
        .zip(labels)
        .zip(&means)
        .map(|((&numeric, line), &fock_mean)| LabeledEigenvalue {
            numeric,
            line: line.expect("every eigenvalue labeled"),
            fock_mean,
            in_window: fock_mean < cutoff,
        })
        .collect();
    Ok(NumericalSpectrum { trunc: n, eta, levels })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinorEigenstate {
    /// Unit-norm `4N` vector, spinor-major.
    pub vector: DVector<Complex64>,
    pub energy: f64,
    /// `‖Hψ − Eψ‖`
    pub residual: f64,
    /// `⟨ψ₂|ψ₂⟩/⟨ψ₁|ψ₁⟩`
    pub lower_to_upper: f64,
}

/// Positive-energy eigenstate at `η = 0` built from `|ψ₁⟩ = |n⟩⊗v_λ` and
/// `|ψ₂⟩ = σ·p|ψ₁⟩/(E + 1)`.
pub fn spinor_eigenstate(n: u64, lambda: Lambda, trunc: usize, setup: &SpectralSetup) -> Result<SpinorEigenstate> {
    if trunc < 2 || n as usize + 1 >= trunc {
        return Err(Error::Size(format!("level {n} needs N ≥ {}, got {trunc}", n + 2)));
    }
    let energy = energy_closed_form(n, lambda, Branch::Positive, 0.0, setup)?;
    let spin = spin_projection(&setup.frame)[lambda.index()].vector;
    let mut fock = DVector::<Complex64>::zeros(trunc);
    fock[n as usize] = Complex64::new(1.0, 0.0);
    let psi1 = DVector::from_fn(2 * trunc, |i, _| spin[i / trunc] * fock[i % trunc]);

    let [p1, p2] = planar_momenta(trunc, setup.omega0);
    let s1 = sigma_theta(1, &setup.frame).entries;
    let s2 = sigma_theta(2, &setup.frame).entries;
    let sigma_p = s1.kronecker(&p1) + s2.kronecker(&p2);
    let psi2 = (&sigma_p * &psi1).map(|z| z / (energy + 1.0));

    let lower_to_upper = psi2.norm_squared() / psi1.norm_squared();
    let mut vector = DVector::from_fn(4 * trunc, |i, _| if i < 2 * trunc { psi1[i] } else { psi2[i - 2 * trunc] });
    let norm = vector.norm();
    vector /= Complex64::new(norm, 0.0);

    let h = hamiltonian_matrix(trunc, 0.0, setup)?;
    let residual = (&h.entries * &vector - vector.map(|z| z * energy)).norm();
    if (n as f64) < trunc as f64 / 4.0 && residual > SPECTRUM_REL_TOL * energy.abs() {
        return Err(Error::Residual {
            residual,
            tolerance: SPECTRUM_REL_TOL * energy.abs(),
        });
    }
    Ok(SpinorEigenstate {
        vector,
        energy,
        residual,
        lower_to_upper,
    })
}

/// One CSV row per positive level `n ≤ n_max`, `λ = ±1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRow {
    pub line: SpectrumLine,
    pub numeric: f64,
}

impl SpectrumRow {
    pub fn abs_err(&self) -> f64 {
        (self.numeric - self.line.energy).abs()
    }

    pub fn rel_err(&self) -> f64 {
        self.abs_err() / self.line.energy.abs()
    }
}

/// The rows a spectrum report contains, in `(n, λ)` order. Each row's
/// numeric value is the eigenvalue assigned that label.
pub fn spectrum_rows(spectrum: &NumericalSpectrum, n_max: u64) -> Result<Vec<SpectrumRow>> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for lambda in Lambda::BOTH {
            let level = spectrum
                .find(n, lambda, Branch::Positive)
                .filter(|l| l.in_window)
                .ok_or_else(|| Error::Size(format!("level (n = {n}, λ = {}) lies outside the N/4 window", lambda.value())))?;
            rows.push(SpectrumRow {
                line: level.line,
                numeric: level.numeric,
            });
        }
    }
    Ok(rows)
}

pub const SPECTRUM_CSV_HEADER: &str = "n,lambda,sign,eta,E_closed,E_numeric,abs_err,rel_err";

/// Energies are multiplied by `unit` (`mc²` in the caller's units) and `η` by `momentum_unit`.
pub fn spectrum_csv(rows: &[SpectrumRow], unit: f64, momentum_unit: f64) -> String {
    let mut out = String::from(SPECTRUM_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:?},{:?},{:?},{:?},{:?}",
            r.line.n,
            r.line.lambda.value(),
            r.line.sign.value(),
            r.line.eta * momentum_unit,
            r.line.energy * unit,
            r.numeric * unit,
            r.abs_err() * unit,
            r.rel_err(),
        );
    }
    out
}

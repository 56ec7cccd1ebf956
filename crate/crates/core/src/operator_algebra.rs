//! First-order phase-space operators and the finite spin/Dirac matrix algebra.
//!
//! A [`PhaseSpaceForm`] is a linear combination of the six generators
//! `x₁, x₂, x₃, P₁, P₂, P₃` plus a constant. The commutator of two such forms
//! is a c-number fixed by the bracket table of the generators, so every
//! identity the model needs reduces to scalar arithmetic, which is exact when
//! the scalar type is [`Surd`](crate::surd::Surd).

use std::ops::{Add, Neg, Sub};

use nalgebra::{DMatrix, Vector2};
use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::scalar::{complex_to_f64, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X1,
    X2,
    X3,
    P1,
    P2,
    P3,
}

impl Generator {
    pub const ALL: [Generator; 6] = [
        Generator::X1,
        Generator::X2,
        Generator::X3,
        Generator::P1,
        Generator::P2,
        Generator::P3,
    ];

    /// Coordinate generator for axis `j` in `0..3`.
    pub fn x(j: usize) -> Self {
        Self::ALL[j]
    }

    /// Momentum generator for axis `j` in `0..3`.
    pub fn p(j: usize) -> Self {
        Self::ALL[3 + j]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x1", "x2", "x3", "P1", "P2", "P3"][self.index()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceForm<S: Scalar> {
    coeffs: [Complex<S>; 6],
    scalar: Complex<S>,
}

impl<S: Scalar> PhaseSpaceForm<S> {
    pub fn zero() -> Self {
        Self {
            coeffs: std::array::from_fn(|_| Complex::zero()),
            scalar: Complex::zero(),
        }
    }

    pub fn generator(g: Generator) -> Self {
        let mut f = Self::zero();
        f.coeffs[g.index()] = Complex::one();
        f
    }

    pub fn constant(c: Complex<S>) -> Self {
        let mut f = Self::zero();
        f.scalar = c;
        f
    }

    /// Build from real coefficients, e.g. `[(X1, ρ), (P2, -ρσ)]`.
    pub fn from_terms(terms: impl IntoIterator<Item = (Generator, S)>) -> Self {
        let mut f = Self::zero();
        for (g, c) in terms {
            f.coeffs[g.index()] = f.coeffs[g.index()].clone() + Complex::new(c, S::zero());
        }
        f
    }

    pub fn coeff(&self, g: Generator) -> &Complex<S> {
        &self.coeffs[g.index()]
    }

    pub fn scalar(&self) -> &Complex<S> {
        &self.scalar
    }

    pub fn scaled(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    pub fn scaled_complex(&self, k: &Complex<S>) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    /// Hermitian conjugate: the generators are Hermitian, so coefficients conjugate.
    pub fn adjoint(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// `true` when every generator coefficient vanishes (the form is a c-number).
    pub fn is_central(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_f64(&self) -> PhaseSpaceForm<f64> {
        PhaseSpaceForm {
            coeffs: std::array::from_fn(|i| {
                Complex::new(self.coeffs[i].re.to_f64(), self.coeffs[i].im.to_f64())
            }),
            scalar: Complex::new(self.scalar.re.to_f64(), self.scalar.im.to_f64()),
        }
    }

    fn map(&self, f: impl Fn(&Complex<S>) -> Complex<S>) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| f(&self.coeffs[i])),
            scalar: f(&self.scalar),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Complex<S>, &Complex<S>) -> Complex<S>) -> Self {
        Self {
            coeffs: std::array::from_fn(|i| f(&self.coeffs[i], &other.coeffs[i])),
            scalar: f(&self.scalar, &other.scalar),
        }
    }
}

impl<S: Scalar> Add for PhaseSpaceForm<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a.clone() + b.clone())
    }
}

impl<'a, S: Scalar> Add<&'a PhaseSpaceForm<S>> for &'a PhaseSpaceForm<S> {
    type Output = PhaseSpaceForm<S>;
    fn add(self, rhs: Self) -> PhaseSpaceForm<S> {
        self.zip(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Sub for PhaseSpaceForm<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(&rhs, |a, b| a.clone() - b.clone())
    }
}

impl<'a, S: Scalar> Sub<&'a PhaseSpaceForm<S>> for &'a PhaseSpaceForm<S> {
    type Output = PhaseSpaceForm<S>;
    fn sub(self, rhs: Self) -> PhaseSpaceForm<S> {
        self.zip(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Neg for PhaseSpaceForm<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|c| -c.clone())
    }
}

/// Canonical commutator `[A, B] = iħ Σⱼ (A_{xⱼ} B_{Pⱼ} − A_{Pⱼ} B_{xⱼ})`.
pub fn commutator<S: Scalar>(a: &PhaseSpaceForm<S>, b: &PhaseSpaceForm<S>, hbar: &S) -> Complex<S> {
    let mut sum = Complex::<S>::zero();
    for j in 0..3 {
        let (x, p) = (Generator::x(j), Generator::p(j));
        sum = sum + a.coeff(x).clone() * b.coeff(p).clone() - a.coeff(p).clone() * b.coeff(x).clone();
    }
    sum * Complex::new(S::zero(), hbar.clone())
}

/// Antisymmetric table `T` with `[g, h] = i·T[g][h]` for the six generators.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTable<S: Scalar> {
    entries: [[S; 6]; 6],
}

impl<S: Scalar> BracketTable<S> {
    pub fn zero() -> Self {
        Self {
            entries: std::array::from_fn(|_| std::array::from_fn(|_| S::zero())),
        }
    }

    /// `[xⱼ, Pₖ] = iħδⱼₖ`, all others zero.
    pub fn canonical(hbar: &S) -> Self {
        let mut t = Self::zero();
        for j in 0..3 {
            t.set(Generator::x(j), Generator::p(j), hbar.clone());
        }
        t
    }

    /// Set `[g, h] = i·value` (and `[h, g] = −i·value`).
    pub fn set(&mut self, g: Generator, h: Generator, value: S) {
        self.entries[h.index()][g.index()] = -value.clone();
        self.entries[g.index()][h.index()] = value;
    }

    pub fn get(&self, g: Generator, h: Generator) -> &S {
        &self.entries[g.index()][h.index()]
    }

    pub fn commutator(&self, a: &PhaseSpaceForm<S>, b: &PhaseSpaceForm<S>) -> Complex<S> {
        let mut sum = Complex::<S>::zero();
        for g in Generator::ALL {
            let ag = a.coeff(g);
            if ag.is_zero() {
                continue;
            }
            for h in Generator::ALL {
                let t = self.get(g, h);
                if t.is_zero() {
                    continue;
                }
                sum = sum + ag.clone() * b.coeff(h).clone() * t.clone();
            }
        }
        sum * Complex::new(S::zero(), S::one())
    }

    /// `Σ |a_g||b_h||T_gh|`, the magnitude a floating-point bracket is compared against.
    pub fn magnitude(&self, a: &PhaseSpaceForm<S>, b: &PhaseSpaceForm<S>) -> f64 {
        let mut sum = 0.0;
        for g in Generator::ALL {
            for h in Generator::ALL {
                sum += complex_to_f64(a.coeff(g)).norm()
                    * complex_to_f64(b.coeff(h)).norm()
                    * self.get(g, h).to_f64().abs();
            }
        }
        sum
    }
}

/// Coefficientwise equality; exact for exact scalars, otherwise to `rel`
/// relative to the largest coefficient of either form.
pub fn forms_agree<S: Scalar>(a: &PhaseSpaceForm<S>, b: &PhaseSpaceForm<S>, rel: f64) -> bool {
    if S::EXACT {
        return a == b;
    }
    let (a, b) = (a.to_f64(), b.to_f64());
    let all = |f: &PhaseSpaceForm<f64>| {
        Generator::ALL
            .iter()
            .map(|&g| f.coeff(g).norm())
            .chain(std::iter::once(f.scalar().norm()))
            .collect::<Vec<_>>()
    };
    let (ca, cb) = (all(&a), all(&b));
    let scale = ca.iter().chain(&cb).fold(0.0f64, |m, &x| m.max(x));
    all(&(&a - &b)).iter().all(|&d| d <= rel * scale)
}

/// Orthonormal triad `n̄₁θ, n̄₂θ, n̄₃θ`; `n̄₃θ` points along the effective field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub axes: [[f64; 3]; 3],
}

impl Frame {
    /// Frame for a tilt with the given cosine and sine.
    pub fn from_trig(cos: f64, sin: f64) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s2 = std::f64::consts::SQRT_2;
        Self {
            axes: [
                [r, -r, 0.0],
                [cos * r, cos * r, -s2 * sin * r],
                [sin * r, sin * r, s2 * cos * r],
            ],
        }
    }

    pub fn from_angle(theta: f64) -> Self {
        Self::from_trig(theta.cos(), theta.sin())
    }

    pub fn axis(&self, j: usize) -> [f64; 3] {
        assert!((1..=3).contains(&j), "frame axis index must be 1, 2 or 3");
        self.axes[j - 1]
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| self.axes[i][k] * self.axes[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinDim {
    Pauli,
    Dirac,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrix {
    pub dim: SpinDim,
    pub entries: DMatrix<Complex64>,
}

impl SpinMatrix {
    fn new(dim: SpinDim, entries: DMatrix<Complex64>) -> Self {
        Self { dim, entries }
    }

    pub fn identity(dim: SpinDim) -> Self {
        let n = match dim {
            SpinDim::Pauli => 2,
            SpinDim::Dirac => 4,
        };
        Self::new(dim, DMatrix::identity(n, n))
    }

    pub fn mul(&self, other: &SpinMatrix) -> SpinMatrix {
        assert_eq!(self.dim, other.dim);
        Self::new(self.dim, &self.entries * &other.entries)
    }

    pub fn anticommutator(&self, other: &SpinMatrix) -> SpinMatrix {
        Self::new(
            self.dim,
            &self.entries * &other.entries + &other.entries * &self.entries,
        )
    }

    /// Largest entry modulus of `self − other`.
    pub fn distance(&self, other: &SpinMatrix) -> f64 {
        (&self.entries - &other.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.entries - self.entries.adjoint())
            .iter()
            .all(|z| z.norm() <= tol)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli() -> [SpinMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        SpinMatrix::new(SpinDim::Pauli, DMatrix::from_row_slice(2, 2, &[z, one, one, z])),
        SpinMatrix::new(SpinDim::Pauli, DMatrix::from_row_slice(2, 2, &[z, -i, i, z])),
        SpinMatrix::new(SpinDim::Pauli, DMatrix::from_row_slice(2, 2, &[one, z, z, -one])),
    ]
}

#[derive(Clone, Debug)]
pub struct DiracMatrices {
    pub alpha: [SpinMatrix; 3],
    pub beta: SpinMatrix,
}

/// Standard Dirac representation: `αⱼ = [[0, σⱼ], [σⱼ, 0]]`, `β = diag(I, −I)`.
pub fn dirac_matrices() -> DiracMatrices {
    let sigma = pauli();
    let alpha = std::array::from_fn(|j| {
        let mut m = DMatrix::zeros(4, 4);
        m.view_mut((0, 2), (2, 2)).copy_from(&sigma[j].entries);
        m.view_mut((2, 0), (2, 2)).copy_from(&sigma[j].entries);
        SpinMatrix::new(SpinDim::Dirac, m)
    });
    let mut beta = DMatrix::identity(4, 4);
    beta[(2, 2)] = c(-1.0, 0.0);
    beta[(3, 3)] = c(-1.0, 0.0);
    DiracMatrices {
        alpha,
        beta: SpinMatrix::new(SpinDim::Dirac, beta),
    }
}

fn project(mats: &[SpinMatrix; 3], n: [f64; 3]) -> SpinMatrix {
    let dim = mats[0].dim;
    let entries = (0..3).fold(DMatrix::zeros(mats[0].entries.nrows(), mats[0].entries.ncols()), |acc, k| {
        acc + mats[k].entries.map(|z| z * n[k])
    });
    SpinMatrix::new(dim, entries)
}

/// `αⱼθ = ᾱ·n̄ⱼθ` for `axis` in `1..=3`.
pub fn alpha_theta(axis: usize, frame: &Frame) -> SpinMatrix {
    project(&dirac_matrices().alpha, frame.axis(axis))
}

/// `σⱼθ = σ̄·n̄ⱼθ` for `axis` in `1..=3`.
pub fn sigma_theta(axis: usize, frame: &Frame) -> SpinMatrix {
    project(&pauli(), frame.axis(axis))
}

/// `Σ₃θ = diag(σ₃θ, σ₃θ)`, the spin along the effective field on Dirac spinors.
pub fn big_sigma_theta(frame: &Frame) -> SpinMatrix {
    let s = sigma_theta(3, frame);
    let mut m = DMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(&s.entries);
    m.view_mut((2, 2), (2, 2)).copy_from(&s.entries);
    SpinMatrix::new(SpinDim::Dirac, m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    pub lambda: i8,
    pub vector: Vector2<Complex64>,
}

/// Eigenvectors of `σ̄·n̄₃θ` for `λ = +1` then `λ = −1`.
///
/// Each vector is unit-norm with its first nonzero component real and positive.
pub fn spin_projection(frame: &Frame) -> [SpinState; 2] {
    let [a, b, cz] = frame.axis(3);
    [1i8, -1].map(|lambda| {
        let l = f64::from(lambda);
        // Two null-vector candidates of σ·n − λ; take the better conditioned one.
        let u1 = Vector2::new(c(a, -b), c(l - cz, 0.0));
        let u2 = Vector2::new(c(l + cz, 0.0), c(a, b));
        let mut v = if u1.norm() >= u2.norm() { u1 } else { u2 };
        v /= c(v.norm(), 0.0);
        let lead = if v[0].norm() > 1e-15 { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        v *= phase;
        SpinState { lambda, vector: v }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surd::Surd;
    use proptest::prelude::*;

    type F = PhaseSpaceForm<Surd>;

    fn gen(g: Generator) -> F {
        F::generator(g)
    }

    fn hbar() -> Surd {
        Surd::from_ints(21, 20)
    }

    #[test]
    fn canonical_pair() {
        let z = commutator(&gen(Generator::X1), &gen(Generator::P1), &hbar());
        assert_eq!(z, Complex::new(Surd::zero(), hbar()));
        let z = commutator(&gen(Generator::P1), &gen(Generator::X1), &hbar());
        assert_eq!(z, Complex::new(Surd::zero(), -hbar()));
    }

    #[test]
    fn coordinates_commute() {
        let z = commutator(&gen(Generator::X1), &gen(Generator::X2), &hbar());
        assert!(z.is_zero());
        let a = gen(Generator::X3).scaled(&Surd::from_ints(3, 1)) + gen(Generator::P2);
        assert!(commutator(&a, &a, &hbar()).is_zero());
    }

    #[test]
    fn central_forms_commute_with_everything() {
        let k = F::constant(Complex::new(Surd::from_ints(7, 3), Surd::from_ints(-1, 2)));
        assert!(k.is_central());
        for g in Generator::ALL {
            assert!(commutator(&k, &gen(g), &hbar()).is_zero());
        }
    }

    #[test]
    fn table_route_matches_direct_formula() {
        let t = BracketTable::canonical(&hbar());
        let a = F::from_terms([(Generator::X1, Surd::from_ints(2, 3)), (Generator::P3, Surd::from_ints(-5, 7))]);
        let b = F::from_terms([(Generator::P1, Surd::from_ints(1, 9)), (Generator::X3, Surd::from_ints(4, 1))]);
        assert_eq!(t.commutator(&a, &b), commutator(&a, &b, &hbar()));
    }

    #[test]
    fn adjoint_conjugates_coefficients() {
        let i = Complex::new(Surd::zero(), Surd::one());
        let a = gen(Generator::P1) + gen(Generator::P2).scaled_complex(&i);
        let ad = a.adjoint();
        assert_eq!(ad.coeff(Generator::P2), &Complex::new(Surd::zero(), -Surd::one()));
    }

    fn form_strategy() -> impl Strategy<Value = F> {
        prop::collection::vec((-20i64..=20, 1i64..=9), 6).prop_map(|c| {
            F::from_terms(
                Generator::ALL
                    .iter()
                    .zip(c)
                    .map(|(&g, (n, d))| (g, Surd::from_ints(n, d))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn commutator_is_antisymmetric(a in form_strategy(), b in form_strategy()) {
            let h = hbar();
            prop_assert_eq!(commutator(&a, &b, &h), -commutator(&b, &a, &h));
        }

        #[test]
        fn commutator_is_bilinear(a in form_strategy(), b in form_strategy(), c in form_strategy(), k in -9i64..=9) {
            let h = hbar();
            let k = Surd::from_ints(k, 4);
            let lhs = commutator(&(&a + &b.scaled(&k)), &c, &h);
            let rhs = commutator(&a, &c, &h) + commutator(&b, &c, &h) * k;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn jacobi_identity(a in form_strategy(), b in form_strategy(), c in form_strategy()) {
            let h = hbar();
            let inner = |x: &F, y: &F| F::constant(commutator(x, y, &h));
            let total = commutator(&a, &inner(&b, &c), &h)
                + commutator(&b, &inner(&c, &a), &h)
                + commutator(&c, &inner(&a, &b), &h);
            prop_assert!(total.is_zero());
        }

        #[test]
        fn tilted_spin_squares_to_identity(theta in -3.2f64..3.2) {
            let frame = Frame::from_angle(theta);
            let s = sigma_theta(3, &frame);
            prop_assert!(s.mul(&s).distance(&SpinMatrix::identity(SpinDim::Pauli)) < 1e-14);
            prop_assert!(frame.orthonormality_defect() < 1e-14);
        }
    }

    #[test]
    fn pauli_properties() {
        let id = SpinMatrix::identity(SpinDim::Pauli);
        for s in pauli() {
            assert!(s.is_hermitian(0.0));
            assert_eq!(s.trace(), c(0.0, 0.0));
            assert_eq!(s.mul(&s).distance(&id), 0.0);
        }
    }

    #[test]
    fn clifford_relations() {
        let d = dirac_matrices();
        let id = SpinMatrix::identity(SpinDim::Dirac);
        let zero = SpinMatrix::new(SpinDim::Dirac, DMatrix::zeros(4, 4));
        for i in 0..3 {
            assert!(d.alpha[i].is_hermitian(0.0));
            assert_eq!(d.alpha[i].anticommutator(&d.beta).distance(&zero), 0.0);
            for j in 0..3 {
                let target = if i == j { id.entries.map(|z| z * 2.0) } else { zero.entries.clone() };
                assert_eq!(d.alpha[i].anticommutator(&d.alpha[j]).entries, target);
            }
        }
        assert!(d.beta.is_hermitian(0.0));
        assert_eq!(d.beta.mul(&d.beta).distance(&id), 0.0);
        assert_eq!(d.alpha[0].mul(&d.alpha[0]).distance(&id), 0.0);
    }

    #[test]
    fn untilted_frame_reduces_to_cartesian_alpha3() {
        let frame = Frame::from_angle(0.0);
        let d = dirac_matrices();
        assert!(alpha_theta(3, &frame).distance(&d.alpha[2]) < 1e-15);
    }

    #[test]
    fn rotated_alphas_anticommute() {
        let id = SpinMatrix::identity(SpinDim::Dirac);
        for theta in [0.0, 0.3, 1.0, 2.2, -0.7] {
            let frame = Frame::from_angle(theta);
            let a: Vec<_> = (1..=3).map(|j| alpha_theta(j, &frame)).collect();
            for i in 0..3 {
                for j in 0..3 {
                    let target = if i == j { 2.0 } else { 0.0 };
                    let want = SpinMatrix::new(SpinDim::Dirac, id.entries.map(|z| z * target));
                    assert!(a[i].anticommutator(&a[j]).distance(&want) < 1e-14, "θ={theta} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn spin_projection_untilted() {
        let [up, down] = spin_projection(&Frame::from_angle(0.0));
        assert_eq!((up.lambda, down.lambda), (1, -1));
        assert!((up.vector - Vector2::new(c(1.0, 0.0), c(0.0, 0.0))).norm() < 1e-15);
        assert!((down.vector - Vector2::new(c(0.0, 0.0), c(1.0, 0.0))).norm() < 1e-15);
    }

    #[test]
    fn spin_projection_residuals_and_phase() {
        for theta in [0.0, 0.3, 1.0, std::f64::consts::FRAC_PI_2, 2.5, -1.2, std::f64::consts::PI] {
            let frame = Frame::from_angle(theta);
            let s = sigma_theta(3, &frame).entries;
            for st in spin_projection(&frame) {
                let v = nalgebra::DVector::from_column_slice(st.vector.as_slice());
                let resid = (&s * &v - &v * c(f64::from(st.lambda), 0.0)).norm();
                assert!(resid < 1e-14, "θ={theta} λ={} residual {resid}", st.lambda);
                assert!((st.vector.norm() - 1.0).abs() < 1e-15);
                let lead = if st.vector[0].norm() > 1e-15 { st.vector[0] } else { st.vector[1] };
                assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
            }
        }
    }

    #[test]
    fn spin_projection_in_plane_field() {
        // sin θ = 1: the field lies along (1, 1, 0)/√2.
        let frame = Frame::from_trig(0.0, 1.0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let sig = pauli();
        let m = (&sig[0].entries + &sig[1].entries).map(|z| z * r);
        // Direct 2×2 diagonalization: eigenvalues ±1 with vectors (1, ±e^{iπ/4})/√2.
        let expect_up = Vector2::new(c(r, 0.0), c(0.5, 0.5));
        let [up, down] = spin_projection(&frame);
        assert!((up.vector - expect_up).norm() < 1e-15);
        let v = nalgebra::DVector::from_column_slice(down.vector.as_slice());
        assert!((&m * &v + &v).norm() < 1e-15);
    }
}

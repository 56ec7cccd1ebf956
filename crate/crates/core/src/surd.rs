//! Exact arithmetic in multiquadratic fields `Q(√r₁, …, √rₖ)`.
//!
//! A [`Surd`] is a finite sum `Σ cᵢ √rᵢ` with rational coefficients and
//! positive rational radicands. The representation keeps radicands pairwise
//! inequivalent modulo rational squares, and the rational part always carries
//! radicand `1`. Square roots of pairwise inequivalent rationals are linearly
//! independent over `Q`, so with zero coefficients dropped the representation
//! is unique and equality is structural.
//!
//! Radicands are introduced on demand by [`Scalar::sqrt`] of a rational value;
//! no global registry is needed because equivalence is tested whenever terms
//! meet.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Debug, Default)]
pub struct Surd {
    /// `(radicand, coefficient)` pairs; coefficients nonzero.
    terms: Vec<(BigRational, BigRational)>,
}

/// Rational square root of a rational, when one exists.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let sn = n.sqrt();
    if &(&sn * &sn) != n {
        return None;
    }
    let sd = d.sqrt();
    if &(&sd * &sd) != d {
        return None;
    }
    Some(BigRational::new(sn, sd))
}

impl Surd {
    pub fn rational(q: BigRational) -> Self {
        let mut s = Surd::default();
        s.accumulate(BigRational::one(), q);
        s
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `√r` for a positive rational `r`.
    fn root_of(r: BigRational) -> Self {
        let mut s = Surd::default();
        s.accumulate(r, BigRational::one());
        s
    }

    /// The rational value, if the element has no irrational part.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(r, c)] if r.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Number of basis terms (1 for a nonzero rational).
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Add `c·√r` to `self`, merging into an equivalent radicand if present.
    fn accumulate(&mut self, r: BigRational, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let (r, c) = match rational_sqrt(&r) {
            Some(k) => (BigRational::one(), c * k),
            None => (r, c),
        };
        for i in 0..self.terms.len() {
            let ri = &self.terms[i].0;
            let merged = if *ri == r {
                Some(c.clone())
            } else {
                rational_sqrt(&(&r * ri)).map(|k| &c * k / ri)
            };
            if let Some(delta) = merged {
                let sum = &self.terms[i].1 + delta;
                if sum.is_zero() {
                    self.terms.remove(i);
                } else {
                    self.terms[i].1 = sum;
                }
                return;
            }
        }
        self.terms.push((r, c));
    }

    fn mul_ref(&self, other: &Surd) -> Surd {
        let mut out = Surd::default();
        for (ra, ca) in &self.terms {
            for (rb, cb) in &other.terms {
                if ra == rb {
                    out.accumulate(BigRational::one(), ca * cb * ra);
                } else {
                    out.accumulate(ra * rb, ca * cb);
                }
            }
        }
        out
    }

    fn add_ref(&self, other: &Surd) -> Surd {
        let mut out = self.clone();
        for (r, c) in &other.terms {
            out.accumulate(r.clone(), c.clone());
        }
        out
    }

    fn neg_ref(&self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(r, c)| (r.clone(), -c)).collect(),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    ///
    /// Solves `x·y = 1` in the finite-dimensional rational vector space spanned
    /// by the multiplicative closure of `x`'s radicands.
    pub fn inverse(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Surd::rational(q.recip()));
        }

        let mut basis = vec![BigRational::one()];
        let class_of = |basis: &[BigRational], r: &BigRational| -> Option<(usize, BigRational)> {
            basis.iter().enumerate().find_map(|(i, b)| {
                if b == r {
                    Some((i, BigRational::one()))
                } else {
                    rational_sqrt(&(r * b)).map(|k| (i, k / b))
                }
            })
        };
        for (r, _) in &self.terms {
            if class_of(&basis, r).is_none() {
                basis.push(r.clone());
            }
        }
        loop {
            let mut grew = false;
            let len = basis.len();
            for i in 0..len {
                for j in i + 1..len {
                    let prod = &basis[i] * &basis[j];
                    if class_of(&basis, &prod).is_none() {
                        basis.push(prod);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }

        // Column j holds the coordinates of x·√b_j.
        let dim = basis.len();
        let mut mat = vec![vec![BigRational::zero(); dim + 1]; dim];
        for j in 0..dim {
            let col = self.mul_ref(&Surd::root_of(basis[j].clone()));
            for (r, c) in &col.terms {
                let (i, factor) = class_of(&basis, r).expect("closure covers all products");
                mat[i][j] += c * factor;
            }
        }
        mat[0][dim] = BigRational::one();

        // Gauss-Jordan elimination.
        for col in 0..dim {
            let pivot = (col..dim).find(|&r| !mat[r][col].is_zero())?;
            mat.swap(col, pivot);
            let inv = mat[col][col].recip();
            for k in col..=dim {
                mat[col][k] = &mat[col][k] * &inv;
            }
            for row in 0..dim {
                if row != col && !mat[row][col].is_zero() {
                    let f = mat[row][col].clone();
                    for k in col..=dim {
                        let delta = &f * &mat[col][k];
                        mat[row][k] -= delta;
                    }
                }
            }
        }

        let mut out = Surd::default();
        for (i, b) in basis.into_iter().enumerate() {
            out.accumulate(b, mat[i][dim].clone());
        }
        Some(out)
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        self.add_ref(&other.neg_ref()).terms.is_empty()
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if r.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})·√({r})")?;
            }
        }
        Ok(())
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from_ints(1, 1)
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(self, rhs: Surd) -> Surd {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        self.add_ref(rhs)
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self.add_ref(&rhs.neg_ref())
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        self.mul_ref(rhs)
    }
}

impl Div for Surd {
    type Output = Surd;
    fn div(self, rhs: Surd) -> Surd {
        let inv = rhs.inverse().expect("division of a Surd by zero");
        self.mul_ref(&inv)
    }
}

/// Euclidean remainder in a field: always zero for a nonzero divisor.
impl Rem for Surd {
    type Output = Surd;
    fn rem(self, rhs: Surd) -> Surd {
        assert!(!rhs.is_zero(), "remainder by zero");
        Surd::zero()
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        self.neg_ref()
    }
}

impl Num for Surd {
    type FromStrRadixErr = num_rational::ParseRatioError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigRational::from_str_radix(s, radix).map(Surd::rational)
    }
}

impl Scalar for Surd {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_f64(x).map(Surd::rational)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Surd::from_ints(num, den)
    }

    fn sqrt(&self) -> Option<Self> {
        let q = self.as_rational()?;
        if q.is_negative() {
            return None;
        }
        if q.is_zero() {
            return Some(Surd::zero());
        }
        Some(Surd::root_of(q))
    }

    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                if r.is_one() {
                    c
                } else {
                    c * r.to_f64().unwrap_or(f64::NAN).sqrt()
                }
            })
            .sum()
    }

    fn is_negative(&self) -> bool {
        match self.as_rational() {
            Some(q) => q.is_negative(),
            None => self.to_f64() < 0.0,
        }
    }
}

//! Scalar fields used by the operator algebra.
//!
//! Two implementations exist: [`Surd`](crate::surd::Surd), an exact element
//! of a multiquadratic extension of the rationals, and plain `f64`. Every
//! finite `f64` is a dyadic rational, so physical inputs given as doubles can
//! always be lifted into the exact field without loss.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::Complex;
use num_traits::Num;

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync {
    /// `true` when equality of two values is exact equality of the numbers they denote.
    const EXACT: bool;

    /// Lift a double. Returns `None` for NaN and infinities.
    fn from_f64(x: f64) -> Option<Self>;

    fn ratio(num: i64, den: i64) -> Self;

    /// Non-negative square root, or `None` when the argument is negative or the
    /// root cannot be represented in the field.
    fn sqrt(&self) -> Option<Self>;

    fn to_f64(&self) -> f64;

    fn is_negative(&self) -> bool {
        self.to_f64() < 0.0
    }

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// `true` when `a` and `b` agree: exactly for exact scalars, otherwise to
/// `rel` relative to `max(|a|, |b|, scale)`.
pub fn agrees<S: Scalar>(a: &Complex<S>, b: &Complex<S>, rel: f64, scale: f64) -> bool {
    if S::EXACT {
        return a == b;
    }
    let (ar, ai, br, bi) = (a.re.to_f64(), a.im.to_f64(), b.re.to_f64(), b.im.to_f64());
    let mag = ar.hypot(ai).max(br.hypot(bi)).max(scale.abs());
    (ar - br).hypot(ai - bi) <= rel * mag
}

pub fn complex_to_f64<S: Scalar>(z: &Complex<S>) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.re.to_f64(), z.im.to_f64())
}

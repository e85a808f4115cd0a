//! Coefficient flavors for forms: exact rationals and floats.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used by the algebraic code paths.
pub type Rat = BigRational;

/// Coefficient ring for [`crate::form::KForm`].
///
/// Implemented by [`Rat`] (exact) and `f64` (float). Conversions between the
/// two flavors are explicit: rationals lower to floats via
/// [`Scalar::from_rational`] on the float side, and nothing lifts floats back.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Converts an exact rational into this flavor.
    fn from_rational(r: &Rat) -> Self;

    /// Converts a small signed integer into this flavor.
    fn from_int(n: i64) -> Self;

    /// True when the scalar prints with a leading minus sign.
    fn is_negative_scalar(&self) -> bool;

    /// Absolute value, used only for display and norms.
    fn abs_scalar(&self) -> Self;
}

impl Scalar for Rat {
    fn from_rational(r: &Rat) -> Self {
        r.clone()
    }

    fn from_int(n: i64) -> Self {
        Rat::from_integer(n.into())
    }

    fn is_negative_scalar(&self) -> bool {
        self.is_negative()
    }

    fn abs_scalar(&self) -> Self {
        self.abs()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rat) -> Self {
        r.to_f64().unwrap_or_else(|| {
            let n = r.numer().to_f64().unwrap_or(f64::NAN);
            let d = r.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn is_negative_scalar(&self) -> bool {
        self.is_sign_negative() && *self != 0.0
    }

    fn abs_scalar(&self) -> Self {
        self.abs()
    }
}

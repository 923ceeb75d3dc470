//! Scalar abstraction shared by every game computation.
//!
//! All closed forms and the verifier only need field operations and an
//! ordering, so the game can be evaluated in `f64`, `f32`, or exactly in
//! [`BigRational`]. Sampling and file I/O stay in `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// A number type the game can be evaluated in.
pub trait Scalar: Clone + Debug + PartialOrd + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Comparison tolerance used when the caller does not supply one.
    fn default_tolerance() -> Self;

    /// Converts an `f64` literal. Panics on non-finite input.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| panic!("non-representable literal {v}"))
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer literal") / Self::from_i64(den).expect("integer literal")
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn indicator(flag: bool) -> Self {
        if flag {
            Self::one()
        } else {
            Self::zero()
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn is_probability(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }

    /// Projects onto `[0, 1]`.
    fn clamp_unit(self) -> Self {
        Self::min_of(Self::max_of(self, Self::zero()), Self::one())
    }

    /// `|a - b| <= tol`
    fn approx_eq(&self, other: &Self, tol: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= *tol
    }
}

impl Scalar for f64 {
    fn default_tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn default_tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn default_tolerance() -> Self {
        BigRational::from_integer(BigInt::from(0))
    }
}

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Formats with 12 significant digits, shortest representation of the rounded value.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x, 12);
    if r == 0.0 {
        // avoid "-0"
        return "0".to_string();
    }
    if r.abs() < 1e-6 {
        return format!("{r:e}");
    }
    format!("{r}")
}

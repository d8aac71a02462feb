//! Numeric abstraction shared by the LP solver and the scalar bound formulas.
//!
//! Everything that must be decided exactly (certificates, invariant checks) is
//! instantiated at [`crate::Rational`]. The float instantiations exist for
//! quick exploratory solves and are compared with a small tolerance.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// An ordered field element usable by the simplex solver.
pub trait Scalar:
    Num + Signed + Clone + PartialOrd + FromPrimitive + Debug + Display + Send + Sync
{
    /// Values with magnitude at or below this are treated as zero.
    fn tolerance() -> Self;

    /// True for types where `tolerance()` is exactly zero.
    const EXACT: bool;

    fn is_positive_tol(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_negative_tol(&self) -> bool {
        *self < -Self::tolerance()
    }

    fn is_zero_tol(&self) -> bool {
        !self.is_positive_tol() && !self.is_negative_tol()
    }

    fn from_usize_exact(value: usize) -> Self {
        Self::from_usize(value).expect("usize fits every scalar type")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Ratio::from_integer(BigInt::from(0))
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}

/// `numer / denom` as an exact rational.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as an exact rational.
pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(value: u128) -> u128 {
    if value < 2 {
        return value;
    }
    // Newton iteration from an overestimate converges monotonically downward.
    let mut x = 1u128 << ((128 - value.leading_zeros()).div_ceil(2));
    loop {
        let y = (x + value / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Exact square root when `value` is a perfect square.
pub fn exact_sqrt(value: u128) -> Option<u128> {
    let root = isqrt(value);
    (root * root == value).then_some(root)
}

/// Smallest integer whose square is at least `value`.
pub fn ceil_sqrt(value: u128) -> u128 {
    let root = isqrt(value);
    if root * root == value {
        root
    } else {
        root + 1
    }
}

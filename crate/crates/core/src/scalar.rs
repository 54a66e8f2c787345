//! Coefficient field abstraction.
//!
//! Every algebraic object in the crate is generic over [`Scalar`]. Exact
//! rationals give literal equality; floats compare with a relative tolerance.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and equality is literal.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs_f64(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Exact mode ignores `tol`. Float mode: `|a-b| <= tol * max(1, |a|, |b|)`.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        // Small-denominator values; the quotient of the f64 parts is enough.
        match (ToPrimitive::to_f64(self.numer()), ToPrimitive::to_f64(self.denom())) {
            (Some(n), Some(d)) => n / d,
            _ => f64::NAN,
        }
    }

    fn abs_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                let (a, b) = (*self as f64, *other as f64);
                (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Ok(r) = text.parse::<BigRational>() {
        return Some(r);
    }
    let (int_part, frac_part) = text.split_once('.')?;
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Canonical `"p/q"` (or `"p"`) text for an exact rational.
pub fn format_rational(value: &BigRational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

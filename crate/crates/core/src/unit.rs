//! Exact scalars of the unit interval.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::decimal;
use crate::error::{Error, Result};

/// An exact rational number in `[0, 1]`.
///
/// Every scalar of a system lives here. Comparisons are exact, and the
/// operations the solvers need (positive-part subtraction, halving,
/// complement, clamped addition) never leave the interval.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitValue(BigRational);

impl UnitValue {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::OutOfRange {
                token: decimal::display_rational(&value),
            });
        }
        Ok(Self(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Malformed {
                token: format!("{numer}/{denom}"),
                reason: "zero denominator".into(),
            });
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self(BigRational::one() - &self.0)
    }

    /// The positive part `(self - other)⁺`.
    pub fn saturating_sub(&self, other: &Self) -> Self {
        if self.0 > other.0 {
            Self(&self.0 - &other.0)
        } else {
            Self::zero()
        }
    }

    /// `min(self + other, 1)`.
    pub fn saturating_add(&self, other: &Self) -> Self {
        let sum = &self.0 + &other.0;
        if sum > BigRational::one() {
            Self::one()
        } else {
            Self(sum)
        }
    }

    pub fn half(&self) -> Self {
        Self(&self.0 / BigRational::from_integer(2.into()))
    }

    pub fn abs_diff(&self, other: &Self) -> Self {
        Self((&self.0 - &other.0).abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses a decimal (`0.73`) or fraction (`73/100`) and checks the range.
pub fn parse_unit(text: &str) -> Result<UnitValue> {
    let value = decimal::parse_rational(text)?;
    UnitValue::new(value).map_err(|_| Error::OutOfRange {
        token: text.trim().to_string(),
    })
}

impl FromStr for UnitValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_unit(s)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&decimal::display_rational(&self.0))
    }
}

impl fmt::Debug for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl TryFrom<BigRational> for UnitValue {
    type Error = Error;

    fn try_from(value: BigRational) -> Result<Self> {
        Self::new(value)
    }
}

/// Shorthand for literals in tests and examples; panics on bad input.
#[macro_export]
macro_rules! unit {
    ($text:expr) => {
        $crate::unit::parse_unit($text).expect("valid unit literal")
    };
}

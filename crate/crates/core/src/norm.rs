//! Entrywise matrix distances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::decimal;
use crate::error::{Error, Result};
use crate::matrix::UnitMatrix;

/// Significant digits used when rendering an L2 distance.
pub const L2_DIGITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::L2 => "l2",
            Norm::Linf => "linf",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(Norm::L1),
            "l2" | "2" => Ok(Norm::L2),
            "linf" | "inf" | "l-inf" => Ok(Norm::Linf),
            _ => Err(Error::Malformed {
                token: s.to_string(),
                reason: "expected one of l1, l2, linf".into(),
            }),
        }
    }
}

/// A distance under one of the entrywise norms.
///
/// For L1 and L∞ the stored key is the distance itself. For L2 it is the
/// exact sum of squares; the square root is only materialized as text, so
/// every comparison stays exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distance {
    norm: Norm,
    key: BigRational,
}

impl Distance {
    pub fn zero(norm: Norm) -> Self {
        Self {
            norm,
            key: BigRational::zero(),
        }
    }

    pub(crate) fn from_key(norm: Norm, key: BigRational) -> Self {
        Self { norm, key }
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    /// Exact value for L1/L∞; `None` for L2, whose root is usually irrational.
    pub fn exact(&self) -> Option<&BigRational> {
        match self.norm {
            Norm::L2 => None,
            _ => Some(&self.key),
        }
    }

    /// The exact comparison key: the value itself, or the squared sum for L2.
    pub fn key(&self) -> &BigRational {
        &self.key
    }

    pub fn is_zero(&self) -> bool {
        self.key.is_zero()
    }

    /// Decimal text; exact for L1/L∞ when terminating, 12 significant
    /// digits for L2.
    pub fn to_decimal(&self) -> String {
        match self.norm {
            Norm::L2 => decimal::sqrt_decimal(&self.key, L2_DIGITS),
            _ => decimal::exact_decimal(&self.key)
                .unwrap_or_else(|| decimal::approx_decimal(&self.key, L2_DIGITS)),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.norm == other.norm).then(|| self.key.cmp(&other.key))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

/// Accumulates entrywise absolute differences under a norm.
#[derive(Debug, Clone)]
pub(crate) struct Accumulator {
    norm: Norm,
    key: BigRational,
}

impl Accumulator {
    pub(crate) fn new(norm: Norm) -> Self {
        Self {
            norm,
            key: BigRational::zero(),
        }
    }

    pub(crate) fn push(&mut self, diff: &BigRational) {
        match self.norm {
            Norm::L1 => self.key += diff,
            Norm::L2 => self.key += diff * diff,
            Norm::Linf => {
                if *diff > self.key {
                    self.key = diff.clone();
                }
            }
        }
    }

    pub(crate) fn finish(self) -> Distance {
        Distance::from_key(self.norm, self.key)
    }
}

/// `‖x - y‖_p` over all entries.
pub fn distance(x: &UnitMatrix, y: &UnitMatrix, norm: Norm) -> Result<Distance> {
    if x.shape() != y.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    let mut acc = Accumulator::new(norm);
    for (a, b) in x.entries().zip(y.entries()) {
        acc.push(a.abs_diff(b).as_ratio());
    }
    Ok(acc.finish())
}

/// All three distances at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distances {
    pub l1: Distance,
    pub l2: Distance,
    pub linf: Distance,
}

impl Distances {
    pub fn between(x: &UnitMatrix, y: &UnitMatrix) -> Result<Self> {
        Ok(Self {
            l1: distance(x, y, Norm::L1)?,
            l2: distance(x, y, Norm::L2)?,
            linf: distance(x, y, Norm::Linf)?,
        })
    }

    pub fn zero() -> Self {
        Self {
            l1: Distance::zero(Norm::L1),
            l2: Distance::zero(Norm::L2),
            linf: Distance::zero(Norm::Linf),
        }
    }

    pub fn get(&self, norm: Norm) -> &Distance {
        match norm {
            Norm::L1 => &self.l1,
            Norm::L2 => &self.l2,
            Norm::Linf => &self.linf,
        }
    }
}

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{Complement, UnitMatrix, UnitVector};

/// Which lattice product governs a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Composition {
    /// `A □ x = b` with `(A □ x)_i = max_j min(a_ij, x_j)`.
    MaxMin,
    /// `G ⊡ x = d` with `(G ⊡ x)_i = min_j max(g_ij, x_j)`.
    MinMax,
}

impl Composition {
    pub fn name(self) -> &'static str {
        match self {
            Composition::MaxMin => "max-min",
            Composition::MinMax => "min-max",
        }
    }

    pub fn dual(self) -> Self {
        match self {
            Composition::MaxMin => Composition::MinMax,
            Composition::MinMax => Composition::MaxMin,
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "max-min" | "maxmin" => Ok(Composition::MaxMin),
            "min-max" | "minmax" => Ok(Composition::MinMax),
            _ => Err(Error::Malformed {
                token: s.to_string(),
                reason: "composition must be `max-min` or `min-max`".into(),
            }),
        }
    }
}

/// A fuzzy relational equation system: matrix, right-hand side and product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    matrix: UnitMatrix,
    rhs: UnitVector,
    composition: Composition,
}

impl System {
    pub fn new(matrix: UnitMatrix, rhs: UnitVector, composition: Composition) -> Result<Self> {
        if matrix.rows() != rhs.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows but the right-hand side has {} entries",
                matrix.rows(),
                rhs.len()
            )));
        }
        Ok(Self {
            matrix,
            rhs,
            composition,
        })
    }

    pub fn max_min(matrix: UnitMatrix, rhs: UnitVector) -> Result<Self> {
        Self::new(matrix, rhs, Composition::MaxMin)
    }

    pub fn min_max(matrix: UnitMatrix, rhs: UnitVector) -> Result<Self> {
        Self::new(matrix, rhs, Composition::MinMax)
    }

    pub fn matrix(&self) -> &UnitMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &UnitVector {
        &self.rhs
    }

    pub fn composition(&self) -> Composition {
        self.composition
    }

    pub fn into_parts(self) -> (UnitMatrix, UnitVector, Composition) {
        (self.matrix, self.rhs, self.composition)
    }

    pub(crate) fn expect(&self, composition: Composition) -> Result<()> {
        if self.composition == composition {
            Ok(())
        } else {
            Err(Error::WrongComposition {
                expected: composition,
                found: self.composition,
            })
        }
    }

    /// The equivalent system of the other composition: `(A°, b°)`.
    pub fn complemented(&self) -> Self {
        Self {
            matrix: self.matrix.complement(),
            rhs: self.rhs.complement(),
            composition: self.composition.dual(),
        }
    }
}

/// Panics unless `rhs` has one entry per matrix row.
pub(crate) fn assert_shape(matrix: &UnitMatrix, rhs: &UnitVector) {
    assert_eq!(
        matrix.rows(),
        rhs.len(),
        "right-hand side length must equal the matrix row count"
    );
}

//! Scalar residuation operators and the four lattice matrix products.
//!
//! | product        | "multiplication" | "addition" |
//! |----------------|------------------|------------|
//! | max-min        | `min`            | `max`      |
//! | min-Gödel      | `→_G`            | `min`      |
//! | min-max        | `max`            | `min`      |
//! | max-ε          | `ε`              | `max`      |

use crate::error::{Error, Result};
use crate::matrix::{UnitMatrix, UnitVector};
use crate::unit::UnitValue;

/// Gödel implication: `1` if `x <= y`, otherwise `y`.
pub fn godel_imp(x: &UnitValue, y: &UnitValue) -> UnitValue {
    if x <= y {
        UnitValue::one()
    } else {
        y.clone()
    }
}

/// ε-product: `y` if `x < y`, otherwise `0`.
pub fn eps_product(x: &UnitValue, y: &UnitValue) -> UnitValue {
    if x < y {
        y.clone()
    } else {
        UnitValue::zero()
    }
}

fn check_len(matrix: &UnitMatrix, vector: &UnitVector) -> Result<()> {
    if matrix.cols() == vector.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{}x{} matrix applied to a vector of length {}",
            matrix.rows(),
            matrix.cols(),
            vector.len()
        )))
    }
}

fn apply(
    matrix: &UnitMatrix,
    vector: &UnitVector,
    product: impl Fn(&UnitValue, &UnitValue) -> UnitValue,
    reduce_max: bool,
) -> Result<UnitVector> {
    check_len(matrix, vector)?;
    let out = matrix
        .row_iter()
        .map(|row| {
            let terms = row.iter().zip(vector.iter()).map(|(a, x)| product(a, x));
            if reduce_max { terms.max() } else { terms.min() }
                .expect("matrix has at least one column")
        })
        .collect();
    UnitVector::new(out)
}

/// `(A □ x)_i = max_j min(a_ij, x_j)`.
pub fn maxmin_apply(a: &UnitMatrix, x: &UnitVector) -> Result<UnitVector> {
    apply(a, x, |a, x| a.min(x).clone(), true)
}

/// `(M □_{→G} v)_j = min_i (M_ji →_G v_i)`; with `M = Aᵗ` this is the
/// potential greatest solution of `A □ x = v`.
pub fn godel_apply(m: &UnitMatrix, v: &UnitVector) -> Result<UnitVector> {
    apply(m, v, godel_imp, false)
}

/// `(G ⊡ x)_i = min_j max(g_ij, x_j)`.
pub fn minmax_apply(g: &UnitMatrix, x: &UnitVector) -> Result<UnitVector> {
    apply(g, x, |g, x| g.max(x).clone(), false)
}

/// `(M □_ε v)_j = max_i (M_ji ε v_i)`; with `M = Gᵗ` this is the potential
/// lowest solution of the min-max system `G ⊡ x = v`.
pub fn eps_apply(m: &UnitMatrix, v: &UnitVector) -> Result<UnitVector> {
    apply(m, v, eps_product, true)
}

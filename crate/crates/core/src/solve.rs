//! Consistency tests and extremal solutions (Sanchez's criterion).
//!
//! A max-min system `A □ x = b` is consistent iff `A □ e = b` for the
//! potential greatest solution `e = Aᵗ □_{→G} b`. Dually, a min-max system
//! `G ⊡ x = d` is consistent iff `G ⊡ r = d` for the potential lowest
//! solution `r = Gᵗ □_ε d`.

use crate::error::Result;
use crate::lattice::{eps_apply, godel_apply, maxmin_apply, minmax_apply};
use crate::matrix::UnitVector;
use crate::system::{Composition, System};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Greatest solution candidate `e` (max-min) or lowest `r` (min-max).
    /// Present even when the system is inconsistent.
    pub extremal: UnitVector,
    /// The system's matrix applied to `extremal`.
    pub residual: UnitVector,
}

pub fn greatest_solution_candidate(system: &System) -> Result<UnitVector> {
    system.expect(Composition::MaxMin)?;
    godel_apply(&system.matrix().transpose(), system.rhs())
}

pub fn lowest_solution_candidate(system: &System) -> Result<UnitVector> {
    system.expect(Composition::MinMax)?;
    eps_apply(&system.matrix().transpose(), system.rhs())
}

pub fn check_consistency(system: &System) -> ConsistencyReport {
    let (extremal, residual) = match system.composition() {
        Composition::MaxMin => {
            let e = greatest_solution_candidate(system).expect("shape checked by System");
            let residual = maxmin_apply(system.matrix(), &e).expect("shape checked by System");
            (e, residual)
        }
        Composition::MinMax => {
            let r = lowest_solution_candidate(system).expect("shape checked by System");
            let residual = minmax_apply(system.matrix(), &r).expect("shape checked by System");
            (r, residual)
        }
    };
    ConsistencyReport {
        consistent: &residual == system.rhs(),
        extremal,
        residual,
    }
}

pub fn is_consistent(system: &System) -> bool {
    check_consistency(system).consistent
}

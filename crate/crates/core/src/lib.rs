//! Exact solving, diagnosis and minimal repair of fuzzy relational
//! equation systems over `[0, 1]`, in max-min and min-max form.
//!
//! Every scalar is an exact rational, so set memberships that hinge on
//! strict comparisons never drift.

pub mod cheb;
pub mod cli;
pub mod decimal;
pub mod dual;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod norm;
pub mod oracle;
pub mod repair;
pub mod solve;
pub mod system;
pub mod unit;

pub use error::{Error, Result};
pub use matrix::{Complement, UnitMatrix, UnitVector};
pub use norm::{Distance, Distances, Norm};
pub use repair::{PairSequence, RepairCandidate, RepairOptions, RepairOutcome};
pub use system::{Composition, System};
pub use unit::{parse_unit, UnitValue};

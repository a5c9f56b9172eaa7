//! Minimal matrix repair for inconsistent min-max systems `G ⊡ x = d`.
//!
//! The constructions are native: entries are raised rather than lowered,
//! and spill-over rows come from the ε-side σ function. Complementing a
//! max-min system maps every object here onto its max-min counterpart,
//! which the tests exercise.

use crate::error::Result;
use crate::matrix::{UnitMatrix, UnitVector};
use crate::repair::engine::{Engine, MinMaxRules};
use crate::repair::{
    ModificationSet, OptimalPairs, PairSequence, RepairCandidate, RepairOptions, RepairOutcome,
    RowPartition,
};
use crate::unit::UnitValue;

pub type DualRepairCandidate = RepairCandidate;

fn engine<'a>(g: &'a UnitMatrix, d: &'a UnitVector) -> Engine<'a, MinMaxRules> {
    Engine::new(g, d)
}

/// Whether `d_i < d_k`.
pub fn theta_dual(d: &UnitVector, i: usize, k: usize) -> bool {
    d[i] < d[k]
}

/// Rows whose entry in column `j` must rise to their own target once
/// entry `(i, j)` is pinned to `d_i`.
///
/// # Panics
/// On shape mismatch or out-of-range indices.
pub fn v_set(g: &UnitMatrix, d: &UnitVector, i: usize, j: usize) -> Vec<usize> {
    engine(g, d).spill_set(i, j)
}

pub fn m_partition(g: &UnitMatrix, d: &UnitVector) -> RowPartition {
    engine(g, d).partition()
}

pub fn g_aux_matrix(g: &UnitMatrix, d: &UnitVector, i: usize, j: usize) -> UnitMatrix {
    engine(g, d).aux_matrix(i, j)
}

pub fn g_aux_norm_inf(g: &UnitMatrix, d: &UnitVector, i: usize, j: usize) -> UnitValue {
    engine(g, d).aux_norm_inf(i, j)
}

pub fn f_modification_set(
    g: &UnitMatrix,
    d: &UnitVector,
    pairs: &PairSequence,
) -> Result<ModificationSet> {
    engine(g, d).modification_set(pairs)
}

pub fn g_seq_matrix_iterative(
    g: &UnitMatrix,
    d: &UnitVector,
    pairs: &PairSequence,
) -> Result<UnitMatrix> {
    engine(g, d).seq_iterative(pairs)
}

pub fn g_seq_matrix_direct(
    g: &UnitMatrix,
    d: &UnitVector,
    pairs: &PairSequence,
) -> Result<UnitMatrix> {
    engine(g, d).seq_direct(pairs)
}

pub fn g_seq_matrix(g: &UnitMatrix, d: &UnitVector, pairs: &PairSequence) -> Result<UnitMatrix> {
    engine(g, d).seq_matrix(pairs)
}

pub fn dual_best_columns(g: &UnitMatrix, d: &UnitVector, i: usize) -> Vec<usize> {
    engine(g, d).best_columns(i)
}

pub fn dual_optimal_pairs(g: &UnitMatrix, d: &UnitVector) -> OptimalPairs {
    engine(g, d).optimal_pairs()
}

/// Smallest L∞ repair distance of a min-max system, from the closed formula.
pub fn nabla_inf(g: &UnitMatrix, d: &UnitVector) -> UnitValue {
    engine(g, d).linf_formula()
}

pub fn dual_repair(
    g: &UnitMatrix,
    d: &UnitVector,
    options: &RepairOptions,
) -> Result<RepairOutcome> {
    engine(g, d).repair(options)
}

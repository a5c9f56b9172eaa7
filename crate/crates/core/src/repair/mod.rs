//! Minimal matrix repair for inconsistent max-min systems.
//!
//! The right-hand side `b` stays fixed. A repair rewrites a few entries of
//! `A` to the corresponding values of `b` so that `A' □ x = b` becomes
//! solvable, while keeping `‖A' - A‖_p` as small as possible.
//!
//! Row and column indices are 0-based throughout the library.

pub(crate) mod engine;

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::matrix::{UnitMatrix, UnitVector};
use crate::norm::{Distance, Distances, Norm};
use crate::unit::UnitValue;
use engine::{Engine, MaxMinRules};

/// Default ceiling on the number of column tuples scanned for L1/L2.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Rows split by whether their Chebyshev row value vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowPartition {
    pub consistent_rows: Vec<usize>,
    pub inconsistent_rows: Vec<usize>,
    pub row_deltas: UnitVector,
}

/// Row tuple and column tuple driving a repair. Row indices are
/// pairwise distinct; columns may repeat.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairSequence {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl PairSequence {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() {
            return Err(Error::InvalidPairs(format!(
                "{} row indices but {} column indices",
                rows.len(),
                cols.len()
            )));
        }
        if let Some(dup) = rows.iter().duplicates().next() {
            return Err(Error::InvalidPairs(format!(
                "row {dup} appears more than once"
            )));
        }
        Ok(Self { rows, cols })
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
        )
    }

    pub fn empty() -> Self {
        Self {
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows.iter().copied().zip(self.cols.iter().copied())
    }

    /// Checks every index against an `(n, m)` matrix.
    pub fn validate_for(&self, rows: usize, cols: usize) -> Result<()> {
        for (i, j) in self.iter() {
            if i >= rows || j >= cols {
                return Err(Error::InvalidPairs(format!(
                    "pair ({i}, {j}) out of bounds for a {rows}x{cols} matrix"
                )));
            }
        }
        Ok(())
    }

    /// Reorders both tuples simultaneously: position `λ` of the result is
    /// position `order[λ]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..self.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidPairs(format!(
                "{order:?} is not a permutation"
            )));
        }
        Ok(Self {
            rows: order.iter().map(|&p| self.rows[p]).collect(),
            cols: order.iter().map(|&p| self.cols[p]).collect(),
        })
    }

    /// Drops position `lambda`.
    pub fn without(&self, lambda: usize) -> Self {
        let mut out = self.clone();
        out.rows.remove(lambda);
        out.cols.remove(lambda);
        out
    }
}

impl fmt::Display for PairSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows {:?}, cols {:?}", self.rows, self.cols)
    }
}

/// Positions rewritten by a repair, split by cause.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModificationSet {
    direct: BTreeSet<(usize, usize)>,
    spill: BTreeSet<(usize, usize)>,
    all: BTreeSet<(usize, usize)>,
}

impl ModificationSet {
    pub(crate) fn new(direct: BTreeSet<(usize, usize)>, spill: BTreeSet<(usize, usize)>) -> Self {
        let all = direct.union(&spill).copied().collect();
        Self { direct, spill, all }
    }

    /// Targeted entries `(i_λ, j_λ)` that fell short of `b_{i_λ}`.
    pub fn direct(&self) -> &BTreeSet<(usize, usize)> {
        &self.direct
    }

    /// Entries of other rows that had to be lowered to their own target.
    pub fn spill(&self) -> &BTreeSet<(usize, usize)> {
        &self.spill
    }

    pub fn all(&self) -> &BTreeSet<(usize, usize)> {
        &self.all
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairCandidate {
    pub matrix: UnitMatrix,
    pub pairs: PairSequence,
    pub modifications: ModificationSet,
    pub distances: Distances,
}

/// Column choices minimizing the single-pair L∞ cost, per inconsistent row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalPairs {
    rows: Vec<usize>,
    best_columns: Vec<Vec<usize>>,
}

impl OptimalPairs {
    pub(crate) fn new(rows: Vec<usize>, best_columns: Vec<Vec<usize>>) -> Self {
        Self { rows, best_columns }
    }

    /// True when there are no inconsistent rows, so the set is empty.
    pub fn consistent(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn best_columns(&self) -> &[Vec<usize>] {
        &self.best_columns
    }

    pub fn len(&self) -> u128 {
        if self.consistent() {
            return 0;
        }
        let orderings: u128 = (1..=self.rows.len() as u128).product();
        self.best_columns
            .iter()
            .map(|c| c.len() as u128)
            .fold(orderings, |acc, c| acc.saturating_mul(c))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ascending rows with the smallest best column of each.
    pub fn canonical(&self) -> Option<PairSequence> {
        if self.consistent() {
            return None;
        }
        let cols = self.best_columns.iter().map(|c| c[0]).collect();
        Some(PairSequence {
            rows: self.rows.clone(),
            cols,
        })
    }

    /// Every member: each ordering of the rows times each column choice.
    pub fn iter(&self) -> impl Iterator<Item = PairSequence> + '_ {
        let h = self.rows.len();
        let positions = if h == 0 {
            Vec::new()
        } else {
            (0..h).permutations(h).collect()
        };
        positions.into_iter().flat_map(move |order: Vec<usize>| {
            let rows: Vec<usize> = order.iter().map(|&p| self.rows[p]).collect();
            order
                .iter()
                .map(|&p| self.best_columns[p].iter().copied())
                .multi_cartesian_product()
                .map(move |cols| PairSequence {
                    rows: rows.clone(),
                    cols,
                })
        })
    }

    pub fn contains(&self, pairs: &PairSequence) -> bool {
        if self.consistent() || pairs.len() != self.rows.len() {
            return false;
        }
        pairs.iter().all(|(i, j)| {
            self.rows
                .iter()
                .position(|&r| r == i)
                .is_some_and(|p| self.best_columns[p].contains(&j))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOptions {
    pub norm: Norm,
    /// Maximum number of column tuples an exhaustive scan may visit.
    pub cap: u64,
    /// Also collect every column tuple attaining the optimum.
    pub collect_all: bool,
}

impl RepairOptions {
    pub fn new(norm: Norm) -> Self {
        Self {
            norm,
            cap: DEFAULT_CAP,
            collect_all: false,
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_all(mut self, collect_all: bool) -> Self {
        self.collect_all = collect_all;
        self
    }
}

impl Default for RepairOptions {
    fn default() -> Self {
        Self::new(Norm::Linf)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairOutcome {
    pub norm: Norm,
    pub distance: Distance,
    pub best: RepairCandidate,
    /// Every optimal candidate over ascending rows, in lexicographic column
    /// order. Filled only when requested.
    pub ties: Vec<RepairCandidate>,
}

fn engine<'a>(a: &'a UnitMatrix, b: &'a UnitVector) -> Engine<'a, MaxMinRules> {
    Engine::new(a, b)
}

/// Whether `b_i > b_k`.
pub fn theta(b: &UnitVector, i: usize, k: usize) -> bool {
    b[i] > b[k]
}

/// Rows whose entry in column `j` must drop to their own target once
/// entry `(i, j)` is pinned to `b_i`.
///
/// # Panics
/// On shape mismatch or out-of-range indices.
pub fn u_set(a: &UnitMatrix, b: &UnitVector, i: usize, j: usize) -> Vec<usize> {
    engine(a, b).spill_set(i, j)
}

pub fn row_partition(a: &UnitMatrix, b: &UnitVector) -> RowPartition {
    engine(a, b).partition()
}

/// Minimal rewrite of column `j` that zeroes the `(i, j)` Chebyshev entry.
///
/// # Panics
/// On shape mismatch or out-of-range indices.
pub fn aux_matrix(a: &UnitMatrix, b: &UnitVector, i: usize, j: usize) -> UnitMatrix {
    engine(a, b).aux_matrix(i, j)
}

/// `‖aux_matrix(a, b, i, j) - a‖∞` from its closed form.
pub fn aux_norm_inf(a: &UnitMatrix, b: &UnitVector, i: usize, j: usize) -> UnitValue {
    engine(a, b).aux_norm_inf(i, j)
}

pub fn modification_set(
    a: &UnitMatrix,
    b: &UnitVector,
    pairs: &PairSequence,
) -> Result<ModificationSet> {
    engine(a, b).modification_set(pairs)
}

/// Folds [`aux_matrix`] over the pairs, each step acting on the previous result.
pub fn seq_matrix_iterative(
    a: &UnitMatrix,
    b: &UnitVector,
    pairs: &PairSequence,
) -> Result<UnitMatrix> {
    engine(a, b).seq_iterative(pairs)
}

/// Rewrites exactly the entries of [`modification_set`].
pub fn seq_matrix_direct(
    a: &UnitMatrix,
    b: &UnitVector,
    pairs: &PairSequence,
) -> Result<UnitMatrix> {
    engine(a, b).seq_direct(pairs)
}

/// The repaired matrix for `pairs`. Both constructions run and must agree;
/// a disagreement surfaces as [`Error::Internal`].
pub fn seq_matrix(a: &UnitMatrix, b: &UnitVector, pairs: &PairSequence) -> Result<UnitMatrix> {
    engine(a, b).seq_matrix(pairs)
}

/// Columns minimizing [`aux_norm_inf`] for row `i`, ascending.
pub fn best_columns(a: &UnitMatrix, b: &UnitVector, i: usize) -> Vec<usize> {
    engine(a, b).best_columns(i)
}

pub fn optimal_pairs(a: &UnitMatrix, b: &UnitVector) -> OptimalPairs {
    engine(a, b).optimal_pairs()
}

/// Smallest L∞ repair distance, from the closed formula alone.
pub fn mdelta_inf(a: &UnitMatrix, b: &UnitVector) -> UnitValue {
    engine(a, b).linf_formula()
}

/// Minimal repair under `options.norm`.
///
/// L∞ uses the canonical optimal pair directly. L1 and L2 scan every column
/// tuple for the ascending inconsistent rows and fail with
/// [`Error::BudgetExceeded`] when there are more than `options.cap`.
pub fn repair(a: &UnitMatrix, b: &UnitVector, options: &RepairOptions) -> Result<RepairOutcome> {
    engine(a, b).repair(options)
}

//! Matrix-repair constructions shared by both compositions.
//!
//! The max-min and min-max theories differ only in a handful of scalar
//! predicates (which entries violate the target, which rows spill over,
//! how large each forced change is). Those live behind [`Orientation`];
//! everything else (auxiliary matrices, sequential composition, the
//! modification sets, the per-row argmin columns and the `J^h` search) is
//! written once here.

use std::collections::BTreeSet;
use std::marker::PhantomData;

use itertools::Itertools;

use super::{
    ModificationSet, OptimalPairs, PairSequence, RepairCandidate, RepairOptions, RepairOutcome,
    RowPartition,
};
use crate::cheb::{nabla_row_deltas, row_deltas, sigma_eps, sigma_g};
use crate::error::{Error, Result};
use crate::matrix::{UnitMatrix, UnitVector};
use crate::norm::{Accumulator, Distance, Distances, Norm};
use crate::system::assert_shape;
use crate::unit::UnitValue;

pub(crate) trait Orientation {
    /// Whether entry `(i, j)` itself has to be rewritten to `target_i`.
    fn entry_violates(target_i: &UnitValue, entry_ij: &UnitValue) -> bool;

    /// Membership of row `k` in the spill-over set of `(i, j)`, evaluated
    /// through the σ function of the composition.
    fn spills(target_i: &UnitValue, entry_kj: &UnitValue, target_k: &UnitValue) -> bool;

    /// `(b_i - a_ij)⁺` or `(g_ij - d_i)⁺`.
    fn direct_gap(target_i: &UnitValue, entry_ij: &UnitValue) -> UnitValue;

    /// `θ(i,k)·(a_kj - b_k)⁺` or `θ'(i,k)·(d_k - g_kj)⁺`.
    fn spill_gap(target_i: &UnitValue, entry_kj: &UnitValue, target_k: &UnitValue) -> UnitValue;

    /// Per-row Chebyshev values `δ_i` or `∇_i`.
    fn row_values(matrix: &UnitMatrix, target: &UnitVector) -> UnitVector;
}

pub(crate) struct MaxMinRules;

impl Orientation for MaxMinRules {
    fn entry_violates(b_i: &UnitValue, a_ij: &UnitValue) -> bool {
        b_i > a_ij
    }

    fn spills(b_i: &UnitValue, a_kj: &UnitValue, b_k: &UnitValue) -> bool {
        !sigma_g(b_i, a_kj, b_k).is_zero()
    }

    fn direct_gap(b_i: &UnitValue, a_ij: &UnitValue) -> UnitValue {
        b_i.saturating_sub(a_ij)
    }

    fn spill_gap(b_i: &UnitValue, a_kj: &UnitValue, b_k: &UnitValue) -> UnitValue {
        if b_i > b_k {
            a_kj.saturating_sub(b_k)
        } else {
            UnitValue::zero()
        }
    }

    fn row_values(a: &UnitMatrix, b: &UnitVector) -> UnitVector {
        row_deltas(a, b)
    }
}

pub(crate) struct MinMaxRules;

impl Orientation for MinMaxRules {
    fn entry_violates(d_i: &UnitValue, g_ij: &UnitValue) -> bool {
        d_i < g_ij
    }

    fn spills(d_i: &UnitValue, g_kj: &UnitValue, d_k: &UnitValue) -> bool {
        !sigma_eps(d_i, g_kj, d_k).is_zero()
    }

    fn direct_gap(d_i: &UnitValue, g_ij: &UnitValue) -> UnitValue {
        g_ij.saturating_sub(d_i)
    }

    fn spill_gap(d_i: &UnitValue, g_kj: &UnitValue, d_k: &UnitValue) -> UnitValue {
        if d_i < d_k {
            d_k.saturating_sub(g_kj)
        } else {
            UnitValue::zero()
        }
    }

    fn row_values(g: &UnitMatrix, d: &UnitVector) -> UnitVector {
        nabla_row_deltas(g, d)
    }
}

/// All constructions for one orientation, bound to a fixed `(matrix, target)`.
pub(crate) struct Engine<'a, O> {
    matrix: &'a UnitMatrix,
    target: &'a UnitVector,
    _rules: PhantomData<O>,
}

impl<'a, O: Orientation> Engine<'a, O> {
    pub(crate) fn new(matrix: &'a UnitMatrix, target: &'a UnitVector) -> Self {
        assert_shape(matrix, target);
        Self {
            matrix,
            target,
            _rules: PhantomData,
        }
    }

    fn check_pair(&self, i: usize, j: usize) {
        assert!(
            i < self.matrix.rows() && j < self.matrix.cols(),
            "pair ({i}, {j}) out of bounds for a {}x{} matrix",
            self.matrix.rows(),
            self.matrix.cols()
        );
    }

    pub(crate) fn spill_set(&self, i: usize, j: usize) -> Vec<usize> {
        self.check_pair(i, j);
        spill_set::<O>(self.matrix, self.target, i, j)
    }

    pub(crate) fn partition(&self) -> RowPartition {
        let row_deltas = O::row_values(self.matrix, self.target);
        let (inconsistent_rows, consistent_rows): (Vec<usize>, Vec<usize>) =
            (0..self.matrix.rows()).partition(|&i| !row_deltas[i].is_zero());
        RowPartition {
            consistent_rows,
            inconsistent_rows,
            row_deltas,
        }
    }

    pub(crate) fn aux_matrix(&self, i: usize, j: usize) -> UnitMatrix {
        self.check_pair(i, j);
        aux_step::<O>(self.matrix, self.target, i, j)
    }

    /// Closed form of `‖M^(i,j) - M‖∞`.
    pub(crate) fn aux_norm_inf(&self, i: usize, j: usize) -> UnitValue {
        self.check_pair(i, j);
        let t = self.target;
        let direct = O::direct_gap(&t[i], self.matrix.get(i, j));
        (0..self.matrix.rows())
            .filter(|&k| k != i)
            .map(|k| O::spill_gap(&t[i], self.matrix.get(k, j), &t[k]))
            .fold(direct, UnitValue::max)
    }

    pub(crate) fn check_pairs(&self, pairs: &PairSequence) -> Result<()> {
        pairs.validate_for(self.matrix.rows(), self.matrix.cols())
    }

    pub(crate) fn modification_set(&self, pairs: &PairSequence) -> Result<ModificationSet> {
        self.check_pairs(pairs)?;
        let mut direct = BTreeSet::new();
        let mut spill = BTreeSet::new();
        for (i, j) in pairs.iter() {
            if O::entry_violates(&self.target[i], self.matrix.get(i, j)) {
                direct.insert((i, j));
            }
            for k in spill_set::<O>(self.matrix, self.target, i, j) {
                spill.insert((k, j));
            }
        }
        Ok(ModificationSet::new(direct, spill))
    }

    /// Folds the auxiliary construction over the pairs in order.
    pub(crate) fn seq_iterative(&self, pairs: &PairSequence) -> Result<UnitMatrix> {
        self.check_pairs(pairs)?;
        let mut current = self.matrix.clone();
        for (i, j) in pairs.iter() {
            current = aux_step::<O>(&current, self.target, i, j);
        }
        Ok(current)
    }

    /// Rewrites exactly the positions of the modification set.
    pub(crate) fn seq_direct(&self, pairs: &PairSequence) -> Result<UnitMatrix> {
        let set = self.modification_set(pairs)?;
        Ok(self.apply_set(&set))
    }

    fn apply_set(&self, set: &ModificationSet) -> UnitMatrix {
        let mut out = self.matrix.clone();
        for &(k, l) in set.all() {
            out.set(k, l, self.target[k].clone());
        }
        out
    }

    pub(crate) fn seq_matrix(&self, pairs: &PairSequence) -> Result<UnitMatrix> {
        let direct = self.seq_direct(pairs)?;
        let iterative = self.seq_iterative(pairs)?;
        if direct != iterative {
            return Err(Error::Internal(format!(
                "direct and iterative constructions disagree for {pairs:?}"
            )));
        }
        Ok(direct)
    }

    pub(crate) fn best_columns(&self, i: usize) -> Vec<usize> {
        let norms: Vec<UnitValue> = (0..self.matrix.cols())
            .map(|j| self.aux_norm_inf(i, j))
            .collect();
        let best = norms.iter().min().expect("at least one column");
        (0..norms.len()).filter(|&j| &norms[j] == best).collect()
    }

    pub(crate) fn optimal_pairs(&self) -> OptimalPairs {
        let rows = self.partition().inconsistent_rows;
        let best_columns = rows.iter().map(|&i| self.best_columns(i)).collect();
        OptimalPairs::new(rows, best_columns)
    }

    /// `max_{i ∈ inc} min_j ‖M^(i,j) - M‖∞`, zero for consistent systems.
    pub(crate) fn linf_formula(&self) -> UnitValue {
        self.partition()
            .inconsistent_rows
            .iter()
            .map(|&i| {
                (0..self.matrix.cols())
                    .map(|j| self.aux_norm_inf(i, j))
                    .min()
                    .expect("at least one column")
            })
            .max()
            .unwrap_or_else(UnitValue::zero)
    }

    fn candidate(&self, pairs: PairSequence) -> Result<RepairCandidate> {
        let matrix = self.seq_matrix(&pairs)?;
        let modifications = self.modification_set(&pairs)?;
        let distances = Distances::between(&matrix, self.matrix)?;
        Ok(RepairCandidate {
            matrix,
            pairs,
            modifications,
            distances,
        })
    }

    fn unchanged(&self) -> RepairCandidate {
        RepairCandidate {
            matrix: self.matrix.clone(),
            pairs: PairSequence::empty(),
            modifications: ModificationSet::default(),
            distances: Distances::zero(),
        }
    }

    pub(crate) fn repair(&self, options: &RepairOptions) -> Result<RepairOutcome> {
        let rows = self.partition().inconsistent_rows;
        if rows.is_empty() {
            let best = self.unchanged();
            let ties = if options.collect_all {
                vec![best.clone()]
            } else {
                Vec::new()
            };
            return Ok(RepairOutcome {
                norm: options.norm,
                distance: Distance::zero(options.norm),
                best,
                ties,
            });
        }

        let needs_search = options.norm != Norm::Linf || options.collect_all;
        let search = if needs_search {
            Some(self.search(&rows, options)?)
        } else {
            None
        };

        let best = match options.norm {
            Norm::Linf => {
                let canonical = self
                    .optimal_pairs()
                    .canonical()
                    .expect("inconsistent system has optimal pairs");
                let best = self.candidate(canonical)?;
                let formula = self.linf_formula();
                if best.distances.linf.exact() != Some(formula.as_ratio()) {
                    return Err(Error::Internal(format!(
                        "canonical repair at L∞ distance {} but the closed formula gives {formula}",
                        best.distances.linf
                    )));
                }
                best
            }
            _ => {
                let search = search.as_ref().expect("search ran");
                let pairs = PairSequence::new(rows.clone(), search.best.clone())?;
                self.candidate(pairs)?
            }
        };
        let distance = best.distances.get(options.norm).clone();
        if let Some(search) = &search {
            if search.key != distance {
                return Err(Error::Internal(format!(
                    "search optimum {} differs from the repaired matrix distance {distance}",
                    search.key
                )));
            }
        }

        let ties = match (&search, options.collect_all) {
            (Some(search), true) => search
                .ties
                .iter()
                .map(|cols| self.candidate(PairSequence::new(rows.clone(), cols.clone())?))
                .collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        Ok(RepairOutcome {
            norm: options.norm,
            distance,
            best,
            ties,
        })
    }

    /// Scans `J^h` in lexicographic order of the column tuple. The first
    /// strict improvement wins, so ties resolve to the smallest tuple.
    fn search(&self, rows: &[usize], options: &RepairOptions) -> Result<SearchResult> {
        let (n, m) = self.matrix.shape();
        let h = rows.len();
        let total = (m as u64).checked_pow(h as u32);
        if total.is_none_or(|t| t > options.cap) {
            return Err(Error::BudgetExceeded {
                m,
                h,
                cap: options.cap,
            });
        }

        // effects[λ][j]: rows rewritten in column j by the pair (i_λ, j).
        let effects: Vec<Vec<Vec<usize>>> = rows
            .iter()
            .map(|&i| {
                (0..m)
                    .map(|j| {
                        let mut rows = spill_set::<O>(self.matrix, self.target, i, j);
                        if O::entry_violates(&self.target[i], self.matrix.get(i, j)) {
                            rows.push(i);
                        }
                        rows
                    })
                    .collect()
            })
            .collect();
        let gaps: Vec<_> = (0..n * m)
            .map(|idx| {
                let (k, l) = (idx / m, idx % m);
                self.target[k].abs_diff(self.matrix.get(k, l)).into_ratio()
            })
            .collect();

        let mut marked = vec![false; n * m];
        let mut touched = Vec::with_capacity(n * m);
        let mut best: Option<(Distance, Vec<usize>)> = None;
        let mut ties: Vec<Vec<usize>> = Vec::new();
        for cols in (0..h).map(|_| 0..m).multi_cartesian_product() {
            let mut acc = Accumulator::new(options.norm);
            for (lambda, &j) in cols.iter().enumerate() {
                for &k in &effects[lambda][j] {
                    let idx = k * m + j;
                    if !marked[idx] {
                        marked[idx] = true;
                        touched.push(idx);
                        acc.push(&gaps[idx]);
                    }
                }
            }
            for idx in touched.drain(..) {
                marked[idx] = false;
            }
            let key = acc.finish();
            match &best {
                Some((current, _)) if key.key() > current.key() => {}
                Some((current, _)) if key.key() == current.key() => {
                    if options.collect_all {
                        ties.push(cols);
                    }
                }
                _ => {
                    ties.clear();
                    if options.collect_all {
                        ties.push(cols.clone());
                    }
                    best = Some((key, cols));
                }
            }
        }
        let (key, best) = best.expect("J^h is non-empty");
        Ok(SearchResult { key, best, ties })
    }
}

struct SearchResult {
    key: Distance,
    best: Vec<usize>,
    ties: Vec<Vec<usize>>,
}

fn spill_set<O: Orientation>(
    matrix: &UnitMatrix,
    target: &UnitVector,
    i: usize,
    j: usize,
) -> Vec<usize> {
    (0..matrix.rows())
        .filter(|&k| O::spills(&target[i], matrix.get(k, j), &target[k]))
        .collect()
}

/// One auxiliary step applied to `matrix`, with spill sets taken from `matrix`.
fn aux_step<O: Orientation>(
    matrix: &UnitMatrix,
    target: &UnitVector,
    i: usize,
    j: usize,
) -> UnitMatrix {
    let mut out = matrix.clone();
    if O::entry_violates(&target[i], matrix.get(i, j)) {
        out.set(i, j, target[i].clone());
    }
    for k in spill_set::<O>(matrix, target, i, j) {
        out.set(k, j, target[k].clone());
    }
    out
}

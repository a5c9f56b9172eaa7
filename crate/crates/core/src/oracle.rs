//! Brute-force reference computations and seeded random instances.
//!
//! Nothing here calls into the repair constructions. The exhaustive search
//! relies only on the consistency test, so agreement with the closed forms
//! is meaningful evidence.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::lattice::maxmin_apply;
use crate::matrix::{UnitMatrix, UnitVector};
use crate::norm::{distance, Distance, Norm};
use crate::solve::is_consistent;
use crate::system::{assert_shape, System};
use crate::unit::UnitValue;

/// Largest `n·m` accepted by [`candidate_matrices`].
pub const MAX_CANDIDATE_ENTRIES: usize = 20;

pub fn seeded_rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Every matrix whose entry `(k, l)` is either `a_kl` or `b_k`.
///
/// An optimal repair only ever moves an entry onto its row target, so this
/// finite family contains a minimizer for each norm. Positions where
/// `a_kl = b_k` offer one choice only. Candidates are ordered by a binary
/// counter over the remaining positions in row-major order, lowest bit
/// first, starting from `a` itself.
pub fn candidate_matrices(
    a: &UnitMatrix,
    b: &UnitVector,
) -> Result<impl Iterator<Item = UnitMatrix>> {
    assert_shape(a, b);
    let (n, m) = a.shape();
    if n * m > MAX_CANDIDATE_ENTRIES {
        return Err(Error::TooLarge(format!(
            "{n}x{m} matrix has more than {MAX_CANDIDATE_ENTRIES} entries"
        )));
    }
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|k| (0..m).map(move |l| (k, l)))
        .filter(|&(k, l)| a.get(k, l) != &b[k])
        .collect();
    let base = a.clone();
    let targets = b.clone();
    Ok((0u64..1 << free.len()).map(move |mask| {
        let mut t = base.clone();
        for (bit, &(k, l)) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                t.set(k, l, targets[k].clone());
            }
        }
        t
    }))
}

/// Minimum distance from `a` to a candidate that makes `(T, b)` consistent.
pub fn brute_mdelta(a: &UnitMatrix, b: &UnitVector, norm: Norm) -> Result<Distance> {
    let mut best: Option<Distance> = None;
    for t in candidate_matrices(a, b)? {
        let d = distance(&t, a, norm)?;
        if best.as_ref().is_some_and(|cur| d.key() >= cur.key()) {
            continue;
        }
        if is_consistent(&System::max_min(t, b.clone())?) {
            best = Some(d);
        }
    }
    best.ok_or_else(|| Error::Internal("no candidate matrix is consistent".into()))
}

/// Right-hand sides `A □ x` for pseudo-random `x`. Components of `x` come
/// from the values where the product changes behaviour: 0, 1 and the
/// entries of `a`.
pub fn sample_consistent_rhs(a: &UnitMatrix, count: usize, seed: u64) -> Vec<UnitVector> {
    let mut rng = seeded_rng(seed);
    let mut critical: Vec<UnitValue> = a.entries().cloned().collect();
    critical.push(UnitValue::zero());
    critical.push(UnitValue::one());
    critical.sort();
    critical.dedup();
    (0..count)
        .map(|_| {
            let x: Vec<UnitValue> = (0..a.cols())
                .map(|_| critical.choose(&mut rng).expect("non-empty").clone())
                .collect();
            maxmin_apply(a, &UnitVector::new(x).expect("m >= 1")).expect("shape matches")
        })
        .collect()
}

/// A multiple of `1/steps` drawn uniformly from `[0, 1]`.
pub fn grid_value<R: Rng>(rng: &mut R, steps: u32) -> UnitValue {
    let k = rng.gen_range(0..=steps);
    UnitValue::new(BigRational::new(BigInt::from(k), BigInt::from(steps))).expect("k <= steps")
}

pub fn grid_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, steps: u32) -> UnitMatrix {
    UnitMatrix::from_fn(rows, cols, |_, _| grid_value(rng, steps)).expect("non-empty shape")
}

pub fn grid_vector<R: Rng>(rng: &mut R, len: usize, steps: u32) -> UnitVector {
    UnitVector::new((0..len).map(|_| grid_value(rng, steps)).collect()).expect("non-empty")
}

/// A random max-min system on the `1/steps` grid. Shapes are drawn from
/// `rows` and `cols` (inclusive ranges).
pub fn random_system<R: Rng>(
    rng: &mut R,
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
    steps: u32,
) -> (UnitMatrix, UnitVector) {
    let n = rng.gen_range(rows);
    let m = rng.gen_range(cols);
    (grid_matrix(rng, n, m, steps), grid_vector(rng, n, steps))
}

/// A random `T` with `m` columns such that `T □ x = b` has a solution.
///
/// Draws `x` with at least one component equal to 1. Each row gets a
/// witness column `w` with `x_w ≥ b_i` and `t_iw = b_i`; every other entry
/// is clipped to `b_i` wherever `x_j` exceeds `b_i`.
pub fn random_consistent_matrix<R: Rng>(
    rng: &mut R,
    b: &UnitVector,
    cols: usize,
    steps: u32,
) -> UnitMatrix {
    let mut x: Vec<UnitValue> = (0..cols).map(|_| grid_value(rng, steps)).collect();
    x[rng.gen_range(0..cols)] = UnitValue::one();
    let rows: Vec<Vec<UnitValue>> = b
        .iter()
        .map(|target| {
            let witnesses: Vec<usize> = (0..cols).filter(|&j| &x[j] >= target).collect();
            let w = *witnesses.choose(rng).expect("x has a component equal to 1");
            (0..cols)
                .map(|j| {
                    if j == w {
                        target.clone()
                    } else {
                        let t = grid_value(rng, steps);
                        if &x[j] > target {
                            t.min(target.clone())
                        } else {
                            t
                        }
                    }
                })
                .collect()
        })
        .collect();
    UnitMatrix::from_rows(rows).expect("rectangular")
}

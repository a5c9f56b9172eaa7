//! Checks shared by the property tests and the acceptance run.
//!
//! Each check returns `Err` with a description of the first violation so
//! callers can either assert or tally.

#![allow(dead_code)]

use fuzzyrel::cheb::{chebyshev_distance, delta_entry, nabla_rhs, rhs_cheb_report};
use fuzzyrel::dual;
use fuzzyrel::matrix::Complement;
use fuzzyrel::norm::{distance, Norm};
use fuzzyrel::oracle::{grid_matrix, grid_vector, random_consistent_matrix};
use fuzzyrel::repair::{self, PairSequence, RepairOptions};
use fuzzyrel::solve::{
    check_consistency, greatest_solution_candidate, is_consistent, lowest_solution_candidate,
};
use fuzzyrel::{System, UnitMatrix, UnitValue, UnitVector};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<(), String>;

pub const NORMS: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

pub fn grid_from(rows: &[Vec<u32>], rhs: &[u32], steps: u32) -> (UnitMatrix, UnitVector) {
    let value = |k: u32| UnitValue::from_ratio(k as i64, steps as i64).unwrap();
    let a = UnitMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&k| value(k)).collect())
            .collect(),
    )
    .unwrap();
    let b = UnitVector::new(rhs.iter().map(|&k| value(k)).collect()).unwrap();
    (a, b)
}

/// A random system with `n, m ∈ 1..=4`, on the 0.05 grid or, one time in
/// four, on the 0.01 grid.
pub fn random_instance<R: Rng>(rng: &mut R) -> (UnitMatrix, UnitVector) {
    let n = rng.gen_range(1..=4);
    let m = rng.gen_range(1..=4);
    let steps = if rng.gen_ratio(1, 4) { 100 } else { 20 };
    (grid_matrix(rng, n, m, steps), grid_vector(rng, n, steps))
}

/// Random pairs with distinct rows, `1 ≤ h ≤ n`.
pub fn random_pairs<R: Rng>(rng: &mut R, n: usize, m: usize) -> PairSequence {
    let h = rng.gen_range(1..=n);
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    rows.truncate(h);
    let cols = (0..h).map(|_| rng.gen_range(0..m)).collect();
    PairSequence::new(rows, cols).unwrap()
}

pub fn random_permutation<R: Rng>(rng: &mut R, len: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(rng);
    order
}

fn linf(x: &UnitMatrix, y: &UnitMatrix) -> UnitValue {
    UnitValue::new(distance(x, y, Norm::Linf).unwrap().key().clone()).unwrap()
}

fn system(a: &UnitMatrix, b: &UnitVector) -> System {
    System::max_min(a.clone(), b.clone()).unwrap()
}

/// Auxiliary matrix: zeroes its own Chebyshev entry, leaves other columns'
/// entries alone, keeps zero entries of its column zero, and matches the
/// closed-form norm.
pub fn aux_matrix_effects(a: &UnitMatrix, b: &UnitVector) -> Check {
    let (n, m) = a.shape();
    for i in 0..n {
        for j in 0..m {
            let aux = repair::aux_matrix(a, b, i, j);
            ensure!(
                delta_entry(&aux, b, i, j).unwrap().is_zero(),
                "entry ({i},{j}) not zeroed"
            );
            for s in 0..n {
                for l in 0..m {
                    let before = delta_entry(a, b, s, l).unwrap();
                    let after = delta_entry(&aux, b, s, l).unwrap();
                    if l != j {
                        ensure!(before == after, "aux ({i},{j}) changed entry ({s},{l})");
                    } else if before.is_zero() {
                        ensure!(after.is_zero(), "aux ({i},{j}) broke zero entry ({s},{j})");
                    }
                }
            }
            ensure!(
                repair::aux_norm_inf(a, b, i, j) == linf(&aux, a),
                "closed-form norm differs at ({i},{j})"
            );
        }
    }
    Ok(())
}

pub fn commutativity<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let (n, m) = a.shape();
    if n < 2 {
        return Ok(());
    }
    let mut rows: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    let (i1, i2) = (rows[0], rows[1]);
    let (j1, j2) = (rng.gen_range(0..m), rng.gen_range(0..m));
    let forward = repair::aux_matrix(&repair::aux_matrix(a, b, i1, j1), b, i2, j2);
    let backward = repair::aux_matrix(&repair::aux_matrix(a, b, i2, j2), b, i1, j1);
    ensure!(
        forward == backward,
        "({i1},{j1}) and ({i2},{j2}) do not commute"
    );
    Ok(())
}

pub fn permutation_invariance<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let pairs = random_pairs(rng, a.rows(), a.cols());
    let permuted = pairs
        .permuted(&random_permutation(rng, pairs.len()))
        .unwrap();
    ensure!(
        repair::seq_matrix(a, b, &pairs).unwrap() == repair::seq_matrix(a, b, &permuted).unwrap(),
        "{pairs} and {permuted} disagree"
    );
    Ok(())
}

/// Direct and iterative constructions agree; entries stay in `{b_k, a_kl}`;
/// only the listed columns move.
pub fn direct_equals_iterative<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let pairs = random_pairs(rng, a.rows(), a.cols());
    let direct = repair::seq_matrix_direct(a, b, &pairs).unwrap();
    let iterative = repair::seq_matrix_iterative(a, b, &pairs).unwrap();
    ensure!(direct == iterative, "constructions differ for {pairs}");
    for k in 0..a.rows() {
        for l in 0..a.cols() {
            let v = direct.get(k, l);
            ensure!(
                v == a.get(k, l) || v == &b[k],
                "entry ({k},{l}) left {{b_k, a_kl}}"
            );
            if !pairs.cols().contains(&l) {
                ensure!(v == a.get(k, l), "untouched column {l} changed");
            }
        }
    }
    Ok(())
}

pub fn norm_decomposition<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let pairs = random_pairs(rng, a.rows(), a.cols());
    let repaired = repair::seq_matrix(a, b, &pairs).unwrap();
    let expected = pairs
        .iter()
        .map(|(i, j)| repair::aux_norm_inf(a, b, i, j))
        .max()
        .unwrap();
    ensure!(
        linf(&repaired, a) == expected,
        "L∞ of {pairs} is not the max of its parts"
    );
    Ok(())
}

/// Removing one pair shrinks the modification sets as expected.
pub fn removal_subsets<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let pairs = random_pairs(rng, a.rows(), a.cols());
    let lambda = rng.gen_range(0..pairs.len());
    let (i, j) = pairs.iter().nth(lambda).unwrap();
    let full = repair::modification_set(a, b, &pairs).unwrap();
    let reduced = repair::modification_set(a, b, &pairs.without(lambda)).unwrap();
    let mut expected_direct = full.direct().clone();
    expected_direct.remove(&(i, j));
    ensure!(
        reduced.direct() == &expected_direct,
        "direct set after removing ({i},{j})"
    );
    ensure!(reduced.spill().is_subset(full.spill()), "spill set grew");
    ensure!(reduced.all().is_subset(full.all()), "modification set grew");
    Ok(())
}

/// Every column tuple over the inconsistent rows, in any row order,
/// yields a consistent system.
pub fn repaired_systems_are_consistent<R: Rng>(
    rng: &mut R,
    a: &UnitMatrix,
    b: &UnitVector,
) -> Check {
    let mut rows = repair::row_partition(a, b).inconsistent_rows;
    if rows.is_empty() {
        return Ok(());
    }
    rows.shuffle(rng);
    let cols = rows.iter().map(|_| rng.gen_range(0..a.cols())).collect();
    let pairs = PairSequence::new(rows, cols).unwrap();
    let repaired = repair::seq_matrix(a, b, &pairs).unwrap();
    ensure!(
        is_consistent(&system(&repaired, b)),
        "{pairs} leaves the system inconsistent"
    );
    Ok(())
}

/// A random consistent matrix for `b`, sometimes pulled towards `a`.
pub fn sample_consistent_t<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> UnitMatrix {
    let far = random_consistent_matrix(rng, b, a.cols(), 20);
    for _ in 0..8 {
        let near = UnitMatrix::from_fn(a.rows(), a.cols(), |k, l| {
            if rng.gen_bool(0.5) {
                far.get(k, l).clone()
            } else {
                a.get(k, l).clone()
            }
        })
        .unwrap();
        if is_consistent(&system(&near, b)) {
            return near;
        }
    }
    far
}

/// The repair built from zero Chebyshev entries of any consistent `T`
/// changes every entry of `a` by no more than `T` does.
pub fn domination<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let rows = repair::row_partition(a, b).inconsistent_rows;
    if rows.is_empty() {
        return Ok(());
    }
    let t = sample_consistent_t(rng, a, b);
    ensure!(
        is_consistent(&system(&t, b)),
        "sampler produced an inconsistent T"
    );
    let mut cols = Vec::new();
    for &i in &rows {
        let zeros: Vec<usize> = (0..a.cols())
            .filter(|&j| delta_entry(&t, b, i, j).unwrap().is_zero())
            .collect();
        ensure!(
            !zeros.is_empty(),
            "consistent T has no zero entry in row {i}"
        );
        cols.push(*zeros.choose(rng).unwrap());
    }
    let pairs = PairSequence::new(rows, cols).unwrap();
    let repaired = repair::seq_matrix(a, b, &pairs).unwrap();
    for k in 0..a.rows() {
        for l in 0..a.cols() {
            let ours = repaired.get(k, l).abs_diff(a.get(k, l));
            let theirs = t.get(k, l).abs_diff(a.get(k, l));
            ensure!(ours <= theirs, "entry ({k},{l}) moved {ours} > {theirs}");
        }
    }
    Ok(())
}

/// Cost of the best column tuple for a fixed row order, by exhaustive scan.
fn min_over_columns(
    a: &UnitMatrix,
    b: &UnitVector,
    rows: &[usize],
    norm: Norm,
) -> fuzzyrel::Distance {
    use itertools::Itertools;
    (0..rows.len())
        .map(|_| 0..a.cols())
        .multi_cartesian_product()
        .map(|cols| {
            let pairs = PairSequence::new(rows.to_vec(), cols).unwrap();
            distance(&repair::seq_matrix(a, b, &pairs).unwrap(), a, norm).unwrap()
        })
        .min_by(|x, y| x.key().cmp(y.key()))
        .unwrap()
}

pub fn ordering_independence<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let rows = repair::row_partition(a, b).inconsistent_rows;
    if rows.is_empty() || a.cols().pow(rows.len() as u32) > 256 {
        return Ok(());
    }
    let norm = *NORMS.choose(rng).unwrap();
    let order = random_permutation(rng, rows.len());
    let shuffled: Vec<usize> = order.iter().map(|&p| rows[p]).collect();
    let reference = repair::repair(a, b, &RepairOptions::new(norm))
        .unwrap()
        .distance;
    ensure!(
        min_over_columns(a, b, &shuffled, norm) == reference,
        "row order {shuffled:?} changes the {norm} optimum"
    );
    Ok(())
}

/// `Δ = 0` and `Δ̊_p = 0` both characterize consistency, and `Δ ≤ Δ̊∞`.
pub fn zero_distances_and_bound(a: &UnitMatrix, b: &UnitVector) -> Check {
    let consistent = is_consistent(&system(a, b));
    let delta = chebyshev_distance(a, b);
    ensure!(
        delta.is_zero() == consistent,
        "Δ = {delta} but consistent = {consistent}"
    );
    for norm in NORMS {
        let out = repair::repair(a, b, &RepairOptions::new(norm)).unwrap();
        ensure!(
            out.distance.is_zero() == consistent,
            "{norm} repair distance {}",
            out.distance
        );
        ensure!(
            is_consistent(&system(&out.best.matrix, b)),
            "{norm} repair is inconsistent"
        );
    }
    let mdelta = repair::mdelta_inf(a, b);
    ensure!(delta <= mdelta, "Δ = {delta} exceeds Δ̊∞ = {mdelta}");
    Ok(())
}

/// The closed formula agrees with the canonical optimal pair and with a
/// row-unrestricted variant.
pub fn closed_formula(a: &UnitMatrix, b: &UnitVector) -> Check {
    let mdelta = repair::mdelta_inf(a, b);
    let all_rows = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| repair::aux_norm_inf(a, b, i, j))
                .min()
                .unwrap()
        })
        .max()
        .unwrap();
    ensure!(
        mdelta == all_rows,
        "restricting to inconsistent rows matters: {mdelta} vs {all_rows}"
    );
    let pairs = repair::optimal_pairs(a, b);
    for member in pairs.iter().take(24) {
        let repaired = repair::seq_matrix(a, b, &member).unwrap();
        ensure!(linf(&repaired, a) == mdelta, "{member} misses the optimum");
    }
    Ok(())
}

pub fn cheb_report_invariants(a: &UnitMatrix, b: &UnitVector) -> Check {
    let report = rhs_cheb_report(&system(a, b)).unwrap();
    ensure!(
        Some(&report.delta) == report.row_deltas.iter().max(),
        "Δ is not the largest row value"
    );
    ensure!(
        b.linf_distance(&report.b_hat).unwrap() == report.delta,
        "‖b - b̂‖∞ ≠ Δ"
    );
    let check = check_consistency(&system(a, &report.b_hat));
    ensure!(check.consistent, "approximation is not consistent");
    ensure!(
        check.extremal == report.eta,
        "η is not the greatest solution for b̂"
    );
    Ok(())
}

/// Solutions found by random search lie below the greatest solution.
pub fn solutions_below_greatest<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let s = system(a, b);
    let e = greatest_solution_candidate(&s).unwrap();
    let mut critical: Vec<UnitValue> = a.entries().chain(b.iter()).cloned().collect();
    critical.push(UnitValue::zero());
    critical.push(UnitValue::one());
    for _ in 0..16 {
        let x = UnitVector::new(
            (0..a.cols())
                .map(|_| critical.choose(rng).unwrap().clone())
                .collect(),
        )
        .unwrap();
        if &fuzzyrel::lattice::maxmin_apply(a, &x).unwrap() == b {
            ensure!(x.le(&e), "solution {x} is not below {e}");
        }
    }
    Ok(())
}

/// Every correspondence between a max-min system and its complement.
pub fn complement_correspondence<R: Rng>(rng: &mut R, a: &UnitMatrix, b: &UnitVector) -> Check {
    let (g, d) = (a.complement(), b.complement());
    let primal = system(a, b);
    let dual_sys = System::min_max(g.clone(), d.clone()).unwrap();

    let e = greatest_solution_candidate(&primal).unwrap();
    ensure!(
        lowest_solution_candidate(&dual_sys).unwrap() == e.complement(),
        "r ≠ e°"
    );
    ensure!(
        is_consistent(&primal) == is_consistent(&dual_sys),
        "consistency differs"
    );

    let cheb = rhs_cheb_report(&primal).unwrap();
    let nabla = nabla_rhs(&dual_sys).unwrap();
    ensure!(nabla.delta == cheb.delta, "∇ ≠ Δ");
    ensure!(nabla.row_deltas == cheb.row_deltas, "row values differ");

    ensure!(
        dual::m_partition(&g, &d) == repair::row_partition(a, b),
        "row partitions differ"
    );

    let (n, m) = a.shape();
    for i in 0..n {
        for j in 0..m {
            ensure!(
                dual::v_set(&g, &d, i, j) == repair::u_set(a, b, i, j),
                "spill sets differ at ({i},{j})"
            );
            ensure!(
                dual::g_aux_matrix(&g, &d, i, j) == repair::aux_matrix(a, b, i, j).complement(),
                "auxiliary matrices differ at ({i},{j})"
            );
            ensure!(
                dual::g_aux_norm_inf(&g, &d, i, j) == repair::aux_norm_inf(a, b, i, j),
                "auxiliary norms differ at ({i},{j})"
            );
        }
    }

    let pairs = random_pairs(rng, n, m);
    ensure!(
        dual::g_seq_matrix(&g, &d, &pairs).unwrap()
            == repair::seq_matrix(a, b, &pairs).unwrap().complement(),
        "sequential matrices differ for {pairs}"
    );
    ensure!(
        dual::f_modification_set(&g, &d, &pairs).unwrap()
            == repair::modification_set(a, b, &pairs).unwrap(),
        "modification sets differ for {pairs}"
    );

    ensure!(
        dual::dual_optimal_pairs(&g, &d) == repair::optimal_pairs(a, b),
        "optimal pair sets differ"
    );
    let nabla_inf = dual::nabla_inf(&g, &d);
    ensure!(
        nabla_inf == repair::mdelta_inf(a, b),
        "closed-form L∞ distances differ"
    );
    ensure!(nabla.delta <= nabla_inf, "∇ exceeds its repair distance");

    for norm in NORMS {
        let ours = dual::dual_repair(&g, &d, &RepairOptions::new(norm)).unwrap();
        let theirs = repair::repair(a, b, &RepairOptions::new(norm)).unwrap();
        ensure!(
            ours.distance == theirs.distance,
            "{norm} repair distances differ"
        );
        ensure!(
            ours.best.matrix == theirs.best.matrix.complement(),
            "{norm} repairs differ"
        );
        ensure!(
            is_consistent(&System::min_max(ours.best.matrix, d.clone()).unwrap()),
            "{norm} dual repair is inconsistent"
        );
    }

    // Consistent matrices for b map to consistent matrices for d and back.
    let t = sample_consistent_t(rng, a, b);
    ensure!(
        is_consistent(&System::min_max(t.complement(), d.clone()).unwrap()),
        "complement of a consistent T is not consistent for d"
    );
    let other = grid_matrix(rng, n, m, 20);
    ensure!(
        is_consistent(&system(&other, b))
            == is_consistent(&System::min_max(other.complement(), d).unwrap()),
        "membership differs for an arbitrary matrix"
    );
    Ok(())
}

/// Every max-min property for one instance.
pub fn max_min_suite<R: Rng>(
    rng: &mut R,
    a: &UnitMatrix,
    b: &UnitVector,
) -> Vec<(&'static str, Check)> {
    vec![
        ("auxiliary matrix effects", aux_matrix_effects(a, b)),
        ("commutativity", commutativity(rng, a, b)),
        ("permutation invariance", permutation_invariance(rng, a, b)),
        (
            "direct equals iterative",
            direct_equals_iterative(rng, a, b),
        ),
        ("norm decomposition", norm_decomposition(rng, a, b)),
        ("removal subsets", removal_subsets(rng, a, b)),
        (
            "repaired systems consistent",
            repaired_systems_are_consistent(rng, a, b),
        ),
        ("domination", domination(rng, a, b)),
        ("ordering independence", ordering_independence(rng, a, b)),
        ("zero distances and bound", zero_distances_and_bound(a, b)),
        ("closed formula", closed_formula(a, b)),
    ]
}

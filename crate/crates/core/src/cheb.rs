//! Chebyshev distance of the right-hand side and the greatest Chebyshev
//! approximation.
//!
//! For a max-min system the distance from `b` to the nearest consistent
//! right-hand side is `Δ = max_i δ_i`, with
//! `δ_i = min_j δ(i, j)` and
//! `δ(i, j) = max[(b_i - t_ij)⁺, max_k σ_G(b_i, t_kj, b_k)]`.
//! The min-max analogue `∇` uses `σ_ε` and the mirrored positive parts.

use crate::error::Result;
use crate::lattice::{godel_apply, maxmin_apply};
use crate::matrix::{Complement, UnitMatrix, UnitVector};
use crate::system::{assert_shape, Composition, System};
use crate::unit::UnitValue;

/// `σ_G(x, y, z) = min((x - z)⁺ / 2, (y - z)⁺)`.
pub fn sigma_g(x: &UnitValue, y: &UnitValue, z: &UnitValue) -> UnitValue {
    let half_gap = x.saturating_sub(z).half();
    let excess = y.saturating_sub(z);
    half_gap.min(excess)
}

/// `σ_ε(u, v, w) = min((w - u)⁺ / 2, (w - v)⁺)`, which equals `σ_G(u°, v°, w°)`.
pub fn sigma_eps(u: &UnitValue, v: &UnitValue, w: &UnitValue) -> UnitValue {
    let half_gap = w.saturating_sub(u).half();
    let deficit = w.saturating_sub(v);
    half_gap.min(deficit)
}

fn check_row(t: &UnitMatrix, b: &UnitVector, i: usize) -> Result<()> {
    assert_shape(t, b);
    t.check_index(i, 0)
}

fn max_of(values: impl Iterator<Item = UnitValue>) -> UnitValue {
    values.max().unwrap_or_else(UnitValue::zero)
}

/// `δ(i, j)` for the max-min system `T □ x = b`.
pub fn delta_entry(t: &UnitMatrix, b: &UnitVector, i: usize, j: usize) -> Result<UnitValue> {
    assert_shape(t, b);
    t.check_index(i, j)?;
    Ok(delta_entry_unchecked(t, b, i, j))
}

pub(crate) fn delta_entry_unchecked(
    t: &UnitMatrix,
    b: &UnitVector,
    i: usize,
    j: usize,
) -> UnitValue {
    let direct = b[i].saturating_sub(t.get(i, j));
    let spill = max_of((0..t.rows()).map(|k| sigma_g(&b[i], t.get(k, j), &b[k])));
    direct.max(spill)
}

/// `δ_i = min_j δ(i, j)`.
pub fn delta_row(t: &UnitMatrix, b: &UnitVector, i: usize) -> Result<UnitValue> {
    check_row(t, b, i)?;
    Ok(delta_row_unchecked(t, b, i))
}

fn delta_row_unchecked(t: &UnitMatrix, b: &UnitVector, i: usize) -> UnitValue {
    (0..t.cols())
        .map(|j| delta_entry_unchecked(t, b, i, j))
        .min()
        .expect("at least one column")
}

/// `[δ_1, ..., δ_n]`.
pub fn row_deltas(t: &UnitMatrix, b: &UnitVector) -> UnitVector {
    assert_shape(t, b);
    UnitVector::new(
        (0..t.rows())
            .map(|i| delta_row_unchecked(t, b, i))
            .collect(),
    )
    .expect("at least one row")
}

/// `∇(i, j) = max[(g_ij - d_i)⁺, max_k σ_ε(d_i, g_kj, d_k)]` for `G ⊡ x = d`.
pub fn nabla_entry(g: &UnitMatrix, d: &UnitVector, i: usize, j: usize) -> Result<UnitValue> {
    assert_shape(g, d);
    g.check_index(i, j)?;
    Ok(nabla_entry_unchecked(g, d, i, j))
}

fn nabla_entry_unchecked(g: &UnitMatrix, d: &UnitVector, i: usize, j: usize) -> UnitValue {
    let direct = g.get(i, j).saturating_sub(&d[i]);
    let spill = max_of((0..g.rows()).map(|k| sigma_eps(&d[i], g.get(k, j), &d[k])));
    direct.max(spill)
}

/// `∇_i = min_j ∇(i, j)`.
pub fn nabla_row(g: &UnitMatrix, d: &UnitVector, i: usize) -> Result<UnitValue> {
    check_row(g, d, i)?;
    Ok(nabla_row_unchecked(g, d, i))
}

fn nabla_row_unchecked(g: &UnitMatrix, d: &UnitVector, i: usize) -> UnitValue {
    (0..g.cols())
        .map(|j| nabla_entry_unchecked(g, d, i, j))
        .min()
        .expect("at least one column")
}

/// `[∇_1, ..., ∇_n]`.
pub fn nabla_row_deltas(g: &UnitMatrix, d: &UnitVector) -> UnitVector {
    assert_shape(g, d);
    UnitVector::new(
        (0..g.rows())
            .map(|i| nabla_row_unchecked(g, d, i))
            .collect(),
    )
    .expect("at least one row")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsChebReport {
    /// `Δ` for max-min systems, `∇` for min-max systems.
    pub delta: UnitValue,
    pub row_deltas: UnitVector,
    /// The right-hand side shifted by the distance: `min(b + Δ, 1)` for
    /// max-min, `(d - ∇)⁺` for min-max.
    pub shifted_rhs: UnitVector,
    /// The extremal Chebyshev approximation of the right-hand side.
    pub b_hat: UnitVector,
    /// The extremal approximate solution; it solves `matrix · x = b_hat`.
    pub eta: UnitVector,
}

fn max_min_report(a: &UnitMatrix, b: &UnitVector) -> RhsChebReport {
    let row_deltas = row_deltas(a, b);
    let delta = row_deltas.iter().max().cloned().expect("at least one row");
    let shifted_rhs = b.map(|bi| bi.saturating_add(&delta));
    let eta = godel_apply(&a.transpose(), &shifted_rhs).expect("shape checked");
    let b_hat = maxmin_apply(a, &eta).expect("shape checked");
    RhsChebReport {
        delta,
        row_deltas,
        shifted_rhs,
        b_hat,
        eta,
    }
}

/// Chebyshev report for a max-min system: `Δ`, `b̄(Δ)`, `η = Aᵗ □_{→G} b̄(Δ)`
/// and `b̂ = A □ η`.
pub fn rhs_cheb_report(system: &System) -> Result<RhsChebReport> {
    system.expect(Composition::MaxMin)?;
    Ok(max_min_report(system.matrix(), system.rhs()))
}

/// Chebyshev report for a min-max system.
///
/// `∇` and the row values come from the native `σ_ε` formula. The lowest
/// approximation and approximate solution are obtained by complementing the
/// greatest ones of the equivalent max-min system `(G°, d°)`.
pub fn nabla_rhs(system: &System) -> Result<RhsChebReport> {
    system.expect(Composition::MinMax)?;
    let (g, d) = (system.matrix(), system.rhs());
    let row_deltas = nabla_row_deltas(g, d);
    let delta = row_deltas.iter().max().cloned().expect("at least one row");
    let mirrored = max_min_report(&g.complement(), &d.complement());
    Ok(RhsChebReport {
        delta,
        row_deltas,
        shifted_rhs: mirrored.shifted_rhs.complement(),
        b_hat: mirrored.b_hat.complement(),
        eta: mirrored.eta.complement(),
    })
}

/// `Δ(A, b)` alone.
pub fn chebyshev_distance(a: &UnitMatrix, b: &UnitVector) -> UnitValue {
    row_deltas(a, b)
        .iter()
        .max()
        .cloned()
        .expect("at least one row")
}

//! Run diagnostics: moments, error norms, total variation, and the
//! numeric-vs-exact comparison harness.
//!
//! Every reduction here runs sequentially in binary64, whatever the
//! working precision of the fields and whatever features are enabled —
//! summation order changes the last bits of a reduction, and diagnostics
//! feed reports that must be reproducible across thread counts.

use crate::analytic::analytic_field;
use crate::error::Error;
use crate::grid::{Field, Grid, RunStatus};
use crate::scalar::Scalar;
use crate::solver::{run, RunConfig};

/// Trapezoid-rule moment `∫ l^k · f(l) dl` over the whole grid, `k <= 3`.
///
/// # Panics
///
/// On contract violations: `k > 3` or a field/grid length mismatch.
pub fn moment<T: Scalar>(field: &Field<T>, grid: &Grid, k: u32) -> f64 {
    assert!(k <= 3, "moment order {k} out of range (0..=3)");
    assert_eq!(
        field.values.len(),
        grid.node_count(),
        "field has {} nodes but the grid has {}",
        field.values.len(),
        grid.node_count()
    );
    let n = grid.lmax;
    let mut acc = 0.0;
    for (i, v) in field.values.iter().enumerate() {
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += weight * grid.node_length(i).powi(k as i32) * v.widen();
    }
    acc * grid.dl
}

/// L1, L2, and L∞ distances between two same-shape fields.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    /// Trapezoid `∫|a−b| dl` over the whole grid.
    pub l1: f64,
    /// Trapezoid `(∫(a−b)² dl)^1/2` over the whole grid.
    pub l2: f64,
    /// `max|a−b|` over all nodes (no quadrature weight).
    pub linf: f64,
}

/// Computes [`ErrorNorms`] between two fields on `grid`.
///
/// A uniform gap `|a−b| ≡ h` gives `l1 = h·L` with `L` the domain length —
/// the trapezoid end-weights make the discrete integral exact for
/// constants.
///
/// # Panics
///
/// On a field/field or field/grid shape mismatch (contract violation).
pub fn norm_error<T: Scalar>(a: &Field<T>, b: &Field<T>, grid: &Grid) -> ErrorNorms {
    assert_eq!(
        a.values.len(),
        b.values.len(),
        "fields have mismatched shapes: {} vs {} nodes",
        a.values.len(),
        b.values.len()
    );
    assert_eq!(
        a.values.len(),
        grid.node_count(),
        "fields have {} nodes but the grid has {}",
        a.values.len(),
        grid.node_count()
    );
    let n = grid.lmax;
    let mut sum_abs = 0.0;
    let mut sum_sq = 0.0;
    let mut max_abs = 0.0f64;
    for i in 0..=n {
        let d = a.values[i].widen() - b.values[i].widen();
        let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
        sum_abs += weight * d.abs();
        sum_sq += weight * d * d;
        max_abs = max_abs.max(d.abs());
    }
    ErrorNorms {
        l1: sum_abs * grid.dl,
        l2: (sum_sq * grid.dl).sqrt(),
        linf: max_abs,
    }
}

/// Total variation `Σ|f[i+1] − f[i]|` over the whole grid, in binary64.
///
/// A clean shock keeps this constant under a monotone scheme; grid-scale
/// ringing inflates it — the growth ratio is the instability witness used
/// by the comparison reports.
pub fn total_variation<T: Scalar>(field: &Field<T>) -> f64 {
    let mut acc = 0.0;
    for w in field.values.windows(2) {
        acc += (w[1].widen() - w[0].widen()).abs();
    }
    acc
}

/// Interior-node error norms used by the comparison and precision
/// experiments: nodes `1..lmax−1` (both boundaries excluded — node 0 pins
/// untransported data and node `lmax` is frozen by the stencil), *uniform*
/// `dl` cell weight rather than trapezoid end-weights.
///
/// Returns `(Σ|d|·dl, (Σd²·dl)^1/2, max|d|)`.
pub(crate) fn interior_norms(a: &[f64], b: &[f64], dl: f64) -> (f64, f64, f64) {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut sum_abs = 0.0;
    let mut sum_sq = 0.0;
    let mut max_abs = 0.0f64;
    for i in 1..n - 1 {
        let d = a[i] - b[i];
        sum_abs += d.abs();
        sum_sq += d * d;
        max_abs = max_abs.max(d.abs());
    }
    (sum_abs * dl, (sum_sq * dl).sqrt(), max_abs)
}

/// One recorded level of a numeric-vs-exact comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComparisonRecord {
    /// Time level of the snapshot.
    pub time_index: usize,
    /// Interior L1 distance to the exact solution.
    pub l1_error: f64,
    /// Interior L2 distance to the exact solution.
    pub l2_error: f64,
    /// Interior L∞ distance to the exact solution.
    pub linf_error: f64,
    /// Second moment of the numeric snapshot (trapezoid, whole grid).
    pub second_moment_numeric: f64,
    /// Second moment of the exact solution at the same level.
    pub second_moment_analytic: f64,
    /// Total variation of the numeric snapshot.
    pub total_variation: f64,
}

/// A full comparison: one record per recorded level, plus how the numeric
/// run ended.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    /// One record per recorded snapshot, in level order.
    pub records: Vec<ComparisonRecord>,
    /// Status of the numeric run the records describe.
    pub status: RunStatus,
}

/// Marches `config` at working precision `T` and scores every recorded
/// snapshot against the exact solution at the same level.
///
/// Binary32 snapshots are widened to binary64 before scoring; the exact
/// solution is always evaluated in binary64.
///
/// # Errors
///
/// [`Error::InvalidConfig`] for a bad configuration and
/// [`Error::DegenerateLoading`] when `v_sigma = 0` (the exact solution
/// does not exist there).
pub fn compare_run<T: Scalar>(config: &RunConfig) -> Result<ComparisonReport, Error> {
    let traj = run::<T>(config)?;
    let grid = &config.grid;
    let mut records = Vec::with_capacity(traj.snapshots.len());
    for snap in &traj.snapshots {
        let exact = analytic_field(snap.time_index, grid, &config.params, &config.ic)?;
        let (l1_error, l2_error, linf_error) =
            interior_norms(&snap.widened(), &exact.values, grid.dl);
        records.push(ComparisonRecord {
            time_index: snap.time_index,
            l1_error,
            l2_error,
            linf_error,
            second_moment_numeric: moment(snap, grid, 2),
            second_moment_analytic: moment(&exact, grid, 2),
            total_variation: total_variation(snap),
        });
    }
    Ok(ComparisonReport {
        records,
        status: traj.status,
    })
}

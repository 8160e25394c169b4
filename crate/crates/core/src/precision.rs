//! Binary32-vs-binary64 divergence experiment.
//!
//! The same configuration is marched once in `f32` and once in `f64`; at
//! every commonly recorded level the experiment scores how far the two
//! trajectories have drifted apart. Before the growth gate opens the two
//! runs differ only by rounding of the sampled initial condition; once the
//! unstable stencil starts amplifying, the binary32 rounding floor is
//! amplified with everything else.

use crate::error::Error;
use crate::grid::{RunStatus, Trajectory};
use crate::solver::{run, RunConfig};

/// Relative-divergence thresholds reported by every precision experiment,
/// in ascending order.
pub const DIVERGENCE_THRESHOLDS: [f64; 3] = [1e-6, 1e-3, 1e-1];

/// Outcome of one binary32-vs-binary64 experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionReport {
    /// How the binary32 run ended.
    pub status_f32: RunStatus,
    /// How the binary64 run ended.
    pub status_f64: RunStatus,
    /// `(level, divergence)` for every level recorded by *both* runs, in
    /// level order — including a blown final level if the runs blew up.
    /// Divergence is the interior relative L2 distance
    /// `‖f32 − f64‖₂ / ‖f64‖₂` over nodes `1..lmax−1` (defined as 0 when
    /// the reference norm is 0).
    pub divergences: Vec<(usize, f64)>,
    /// For each threshold in [`DIVERGENCE_THRESHOLDS`]: the first recorded
    /// level *before any blow-up* whose divergence strictly exceeds it,
    /// or `None`. Blown levels are excluded — a divergence measured on
    /// out-of-range data says nothing about precision.
    pub first_exceed: [(f64, Option<usize>); 3],
}

impl PrecisionReport {
    /// The earliest blow-up level across the two runs, if either blew up.
    pub fn earliest_blowup(&self) -> Option<usize> {
        match (
            self.status_f32.blowup_level(),
            self.status_f64.blowup_level(),
        ) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }
}

/// Runs `config` at both working precisions and reports the divergence
/// history.
///
/// Both runs march the *same* configuration object, so they share grid,
/// scheme, and — deliberately — the snapshot stride: divergence is only
/// meaningful between snapshots of the same level. The config's
/// `precision` field is ignored here (this experiment always runs both).
///
/// With the `parallel` feature the two runs execute on separate threads;
/// the report is bit-identical either way (nothing arithmetic crosses the
/// two runs).
///
/// # Errors
///
/// [`Error::InvalidConfig`] listing every configuration violation.
pub fn precision_experiment(config: &RunConfig) -> Result<PrecisionReport, Error> {
    let (t32, t64) = both_runs(config)?;
    let mut divergences = Vec::new();
    for snap64 in &t64.snapshots {
        let Some(snap32) = t32.at_level(snap64.time_index) else {
            continue;
        };
        let wide32 = snap32.widened();
        let mut num_sq = 0.0;
        let mut den_sq = 0.0;
        let interior = 1..snap64.values.len() - 1;
        for (w, v) in wide32[interior.clone()]
            .iter()
            .zip(&snap64.values[interior])
        {
            let d = w - v;
            num_sq += d * d;
            den_sq += v * v;
        }
        let divergence = if den_sq > 0.0 {
            num_sq.sqrt() / den_sq.sqrt()
        } else {
            0.0
        };
        divergences.push((snap64.time_index, divergence));
    }
    let status_f32 = t32.status;
    let status_f64 = t64.status;
    let earliest_blowup = match (status_f32.blowup_level(), status_f64.blowup_level()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) => None,
    };
    let first_exceed = DIVERGENCE_THRESHOLDS.map(|thr| {
        let hit = divergences
            .iter()
            .filter(|(n, _)| earliest_blowup.is_none_or(|blow| *n < blow))
            .find(|(_, d)| *d > thr)
            .map(|(n, _)| *n);
        (thr, hit)
    });
    Ok(PrecisionReport {
        status_f32,
        status_f64,
        divergences,
        first_exceed,
    })
}

#[cfg(feature = "parallel")]
fn both_runs(config: &RunConfig) -> Result<(Trajectory<f32>, Trajectory<f64>), Error> {
    let (r32, r64) = rayon::join(|| run::<f32>(config), || run::<f64>(config));
    Ok((r32?, r64?))
}

#[cfg(not(feature = "parallel"))]
fn both_runs(config: &RunConfig) -> Result<(Trajectory<f32>, Trajectory<f64>), Error> {
    Ok((run::<f32>(config)?, run::<f64>(config)?))
}

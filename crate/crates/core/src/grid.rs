//! Physical parameters, discretization, and the sampled-field types shared
//! by every other module.

use crate::scalar::Scalar;
use std::fmt;

/// Physical constants of the crack-growth law and the loading ramp.
///
/// Units are documentation-only; values are plain reals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Crack-resistance coefficient α (length/time). Opposes growth; a crack
    /// only extends once `β·l·σ²` exceeds it.
    pub alpha: f64,
    /// Growth coefficient β (1/(stress²·time)).
    pub beta: f64,
    /// Loading speed v_σ (stress/time) of the linear stress ramp
    /// `σ(t) = v_σ·t`.
    pub v_sigma: f64,
}

impl Default for Params {
    /// Artifact defaults (α = β = v_σ = 1), chosen so the growth threshold
    /// `l* = α/(β·σ²)` sweeps through the default grid during a run.
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            v_sigma: 1.0,
        }
    }
}

/// Uniform discretization of crack length and time.
///
/// Length nodes are `i·dl` for `i` in `0..=lmax`; time levels are `n·dt` for
/// `n` in `0..=tmax-1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    /// Crack-length step.
    pub dl: f64,
    /// Time step.
    pub dt: f64,
    /// Highest length-node index (the grid holds `lmax + 1` nodes).
    pub lmax: usize,
    /// Number of time levels (a run takes `tmax - 1` steps).
    pub tmax: usize,
}

impl Default for Grid {
    /// Artifact defaults: dl = 0.05, dt = 0.001, lmax = 200, tmax = 1000
    /// (domain `l ∈ [0, 10]`, horizon `t ∈ [0, 0.999]`).
    fn default() -> Self {
        Self {
            dl: 0.05,
            dt: 0.001,
            lmax: 200,
            tmax: 1000,
        }
    }
}

impl Grid {
    /// Physical length of node `i`, computed as the single product `i·dl`
    /// (never by repeated addition, so there is no accumulated summation
    /// error).
    ///
    /// # Panics
    /// If `i > lmax` — a contract violation in the caller.
    pub fn node_length(&self, i: usize) -> f64 {
        assert!(
            i <= self.lmax,
            "node index {i} out of range (lmax = {})",
            self.lmax
        );
        i as f64 * self.dl
    }

    /// Physical time of level `n`, the single product `n·dt`.
    pub fn time_at(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Length of the discretized domain, `lmax·dl`.
    pub fn domain_length(&self) -> f64 {
        self.lmax as f64 * self.dl
    }

    /// Number of length nodes (`lmax + 1`).
    pub fn node_count(&self) -> usize {
        self.lmax + 1
    }
}

/// Checks every invariant of [`Params`] and [`Grid`], returning the complete
/// list of violations (not only the first).
// NaN fails every stated requirement, so each predicate must be written as
// "does not satisfy" rather than the inverted comparison.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate(params: &Params, grid: &Grid) -> Result<(), Vec<String>> {
    let mut violations = Vec::new();
    if !(params.alpha >= 0.0) {
        violations.push("alpha >= 0".to_string());
    }
    if !(params.beta > 0.0) {
        violations.push("beta > 0".to_string());
    }
    if !(params.v_sigma >= 0.0) {
        violations.push("v_sigma >= 0".to_string());
    }
    for (name, value) in [
        ("alpha", params.alpha),
        ("beta", params.beta),
        ("v_sigma", params.v_sigma),
    ] {
        if !value.is_finite() {
            violations.push(format!("{name} finite"));
        }
    }
    if !(grid.dl > 0.0 && grid.dl.is_finite()) {
        violations.push("dl > 0".to_string());
    }
    if !(grid.dt > 0.0 && grid.dt.is_finite()) {
        violations.push("dt > 0".to_string());
    }
    if grid.lmax < 3 {
        violations.push("lmax >= 3".to_string());
    }
    if grid.tmax < 1 {
        violations.push("tmax >= 1".to_string());
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// One sampled time level of the distribution.
///
/// `values[i]` is `f(i·dl)` at this field's time level. A field is either
/// all-finite or flagged blown-up by the solver's blow-up check; mixed
/// states are detected, not silently propagated.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    /// `lmax + 1` samples of the distribution.
    pub values: Vec<T>,
    /// The time level `n` this field represents (physical time `n·dt`).
    pub time_index: usize,
}

impl<T: Scalar> Field<T> {
    /// Builds a field, checking the node-count contract against `grid`.
    ///
    /// # Panics
    /// If `values.len() != grid.lmax + 1`.
    pub fn new(values: Vec<T>, time_index: usize, grid: &Grid) -> Self {
        assert_eq!(
            values.len(),
            grid.node_count(),
            "field length must be lmax + 1"
        );
        Self { values, time_index }
    }

    /// True when every sample is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// The samples widened to `f64` (exact for both supported widths).
    pub fn widened(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.widen()).collect()
    }
}

/// Terminal state of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// All `tmax - 1` steps were taken.
    Completed,
    /// The blow-up check failed at the given time level; the run stopped
    /// there and the blown field is the last snapshot.
    BlownUpAt(usize),
}

impl RunStatus {
    /// The blow-up level, if any.
    pub fn blowup_level(&self) -> Option<usize> {
        match self {
            RunStatus::Completed => None,
            RunStatus::BlownUpAt(n) => Some(*n),
        }
    }
}

impl fmt::Display for RunStatus {
    /// Renders the exact token used in output-file metadata
    /// (`Completed` or `BlownUpAt:N`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunStatus::Completed => write!(f, "Completed"),
            RunStatus::BlownUpAt(n) => write!(f, "BlownUpAt:{n}"),
        }
    }
}

impl std::str::FromStr for RunStatus {
    type Err = String;

    /// Parses the [`Display`](fmt::Display) tokens back
    /// (`Completed` / `BlownUpAt:N`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Completed" {
            return Ok(RunStatus::Completed);
        }
        if let Some(n) = s.strip_prefix("BlownUpAt:") {
            return n
                .parse()
                .map(RunStatus::BlownUpAt)
                .map_err(|e| format!("bad blow-up level in status {s:?}: {e}"));
        }
        Err(format!("unrecognized run status {s:?}"))
    }
}

/// A time-strided sequence of fields with the run's terminal status.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    /// Snapshots in strictly increasing `time_index` order. Level 0 and the
    /// last computed level are always present; interior snapshots appear at
    /// every stride-th level.
    pub snapshots: Vec<Field<T>>,
    /// Output decimation factor used to record the snapshots.
    pub stride: usize,
    /// Terminal state; if `BlownUpAt(n)`, no snapshot has `time_index > n`
    /// (the blown field itself is kept for inspection).
    pub status: RunStatus,
}

impl<T: Scalar> Trajectory<T> {
    /// The snapshot at an exact time level, if recorded.
    pub fn at_level(&self, time_index: usize) -> Option<&Field<T>> {
        self.snapshots
            .binary_search_by_key(&time_index, |f| f.time_index)
            .ok()
            .map(|k| &self.snapshots[k])
    }

    /// Recorded time levels, in order.
    pub fn levels(&self) -> Vec<usize> {
        self.snapshots.iter().map(|f| f.time_index).collect()
    }
}

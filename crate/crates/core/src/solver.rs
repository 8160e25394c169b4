//! Time-marching driver: repeated stencil application with snapshot
//! recording and blow-up detection.

use crate::error::Error;
use crate::grid::{Field, Grid, Params, RunStatus, Trajectory};
use crate::physics::{initial_field, InitialCondition};
use crate::scalar::Scalar;
use crate::scheme::{step, ExecMode, SchemeKind, TermToggles};

/// Which binary floating-point width a run is meant to use.
///
/// The field is carried as *metadata*: [`run`] itself is generic over the
/// working precision `T` and computes in whatever `T` the caller
/// instantiates. Callers that dispatch from configuration (the CLI, the
/// precision experiment) match on this value to pick `T`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PrecisionKind {
    /// IEEE 754 binary32 (`f32`).
    Binary32,
    /// IEEE 754 binary64 (`f64`).
    #[default]
    Binary64,
}

impl PrecisionKind {
    /// The name used by the command-line interface and report files.
    pub fn name(self) -> &'static str {
        match self {
            PrecisionKind::Binary32 => "f32",
            PrecisionKind::Binary64 => "f64",
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Stencil to march with.
    pub scheme: SchemeKind,
    /// Material and loading parameters.
    pub params: Params,
    /// Space-time discretization.
    pub grid: Grid,
    /// Initial crack-length distribution (no default — every run states
    /// its starting population explicitly).
    pub ic: InitialCondition,
    /// Record every `stride`-th time level (>= 1). Level 0 and the last
    /// computed level are always recorded.
    pub stride: usize,
    /// A run is declared blown up as soon as any node's magnitude exceeds
    /// this (or goes non-finite). Compared in binary64.
    pub blowup_threshold: f64,
    /// Intended working precision (metadata; see [`PrecisionKind`]).
    pub precision: PrecisionKind,
    /// Term switches, both on by default.
    pub term_toggles: TermToggles,
    /// Use the legacy `dt/dl` spatial divisor for the FTCS centered
    /// difference instead of `dt/(2·dl)`.
    pub compat_half_coefficient: bool,
}

impl RunConfig {
    /// A config with default grid, parameters, stride 10, threshold 1e12,
    /// binary64, both terms on, standard coefficient.
    pub fn new(scheme: SchemeKind, ic: InitialCondition) -> Self {
        RunConfig {
            scheme,
            params: Params::default(),
            grid: Grid::default(),
            ic,
            stride: 10,
            blowup_threshold: 1e12,
            precision: PrecisionKind::Binary64,
            term_toggles: TermToggles::default(),
            compat_half_coefficient: false,
        }
    }

    /// Checks the whole configuration and reports *every* violation, one
    /// human-readable message each.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut violations = match crate::grid::validate(&self.params, &self.grid) {
            Ok(()) => Vec::new(),
            Err(v) => v,
        };
        violations.extend(self.ic.violations());
        if self.stride < 1 {
            violations.push("stride >= 1".to_string());
        }
        if !(self.blowup_threshold > 0.0 && self.blowup_threshold.is_finite()) {
            violations.push("blowup_threshold > 0 and finite".to_string());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

/// True when the field has left the trustworthy regime: any non-finite
/// value, or any magnitude strictly above `threshold`.
///
/// Magnitudes are widened to binary64 before comparison so the same
/// threshold means the same thing for both working precisions.
pub fn blowup_check<T: Scalar>(field: &Field<T>, threshold: f64) -> bool {
    field
        .values
        .iter()
        .any(|v| !v.is_finite() || v.widen().abs() > threshold)
}

/// Marches the initial condition through `tmax − 1` steps at working
/// precision `T`, recording level 0, every `stride`-th level, and the last
/// level computed.
///
/// On blow-up the offending level is recorded and the run stops with
/// status `BlownUpAt(n)`; otherwise the status is `Completed` and the
/// final snapshot is level `tmax − 1`.
///
/// # Errors
///
/// [`Error::InvalidConfig`] listing every configuration violation.
pub fn run<T: Scalar>(config: &RunConfig) -> Result<Trajectory<T>, Error> {
    run_with_mode(config, ExecMode::Auto)
}

/// [`run`] with an explicit execution mode (sequential / parallel); the
/// trajectory is bit-identical across modes.
pub fn run_with_mode<T: Scalar>(
    config: &RunConfig,
    mode: ExecMode,
) -> Result<Trajectory<T>, Error> {
    config.validate().map_err(Error::InvalidConfig)?;
    let grid = &config.grid;
    let mut f: Field<T> = initial_field(&config.ic, grid);
    let mut snapshots = vec![f.clone()];
    let mut status = RunStatus::Completed;
    if blowup_check(&f, config.blowup_threshold) {
        // The initial data is already outside the trusted range; there is
        // nothing meaningful to march.
        return Ok(Trajectory {
            snapshots,
            stride: config.stride,
            status: RunStatus::BlownUpAt(0),
        });
    }
    for n in 0..grid.tmax - 1 {
        f = step(
            &f,
            n,
            grid,
            &config.params,
            config.scheme,
            config.term_toggles,
            config.compat_half_coefficient,
            mode,
        )?;
        let blown = blowup_check(&f, config.blowup_threshold);
        if (n + 1) % config.stride == 0 || blown || n + 1 == grid.tmax - 1 {
            snapshots.push(f.clone());
        }
        if blown {
            status = RunStatus::BlownUpAt(n + 1);
            break;
        }
    }
    Ok(Trajectory {
        snapshots,
        stride: config.stride,
        status,
    })
}

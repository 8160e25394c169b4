//! A finite-difference laboratory for the time evolution of a microcrack
//! length distribution in brittle material.
//!
//! The unknown is a number density `f(l, t)` of crack lengths `l` evolving
//! under a continuity equation in length space,
//!
//! ```text
//! ∂f/∂t = −(1/l²) ∂(l² v f)/∂l ,
//! ```
//!
//! with a Rice–Griffith-type growth law: cracks extend with velocity
//! `v(l, σ) = −α + β·l·σ²` once the linearly ramping stress `σ(t) = v_σ·t`
//! makes them supercritical, and are frozen below that threshold.
//!
//! The crate provides:
//!
//! * two explicit schemes for the expanded advection/source form of the PDE —
//!   forward-time centered-space ([`scheme::ftcs_step`]) and donor-cell upwind
//!   ([`scheme::upwind_step`]) — generic over binary32/binary64 via [`Scalar`];
//! * the exact characteristic solution of the model ([`analytic`]), built on a
//!   self-contained lower incomplete gamma function ([`gamma`]), used as the
//!   verification oracle;
//! * a time-marching driver with blow-up detection ([`solver::run`]);
//! * quantitative diagnostics — error norms, moments, total variation, and a
//!   numeric-vs-analytic comparison pipeline ([`diagnostics`]);
//! * a dual-precision experiment that runs the identical configuration at
//!   binary32 and binary64 and measures where the two drift apart
//!   ([`precision`]).
//!
//! # Parallelism
//!
//! With the default `parallel` feature, per-node stencil updates and
//! per-node analytic-field evaluation use rayon data parallelism; the two
//! runs of the precision experiment execute concurrently. Every parallel
//! path writes disjoint output slots and every reduction (norms, moments,
//! total variation, blow-up checks) stays sequential, so results are
//! bit-identical to the `--no-default-features` sequential build.

pub mod analytic;
pub mod diagnostics;
pub mod error;
pub mod gamma;
pub mod grid;
pub mod physics;
pub mod precision;
pub mod scalar;
pub mod scheme;
pub mod solver;

pub use error::Error;
pub use grid::{validate, Field, Grid, Params, RunStatus, Trajectory};
pub use physics::InitialCondition;
pub use scalar::Scalar;
pub use scheme::{ExecMode, SchemeKind, TermToggles};
pub use solver::{run, PrecisionKind, RunConfig};

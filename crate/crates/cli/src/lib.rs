//! Command-line front end for the crack-distribution laboratory.
//!
//! The binary exposes four subcommands — `simulate`, `analytic`,
//! `compare`, and `precision` — sharing one flag vocabulary for the
//! initial condition, material parameters, grid, and outputs. Parsing
//! ([`parse_cli`]) is strict and total; execution ([`run_job`]) writes
//! self-describing CSV/surface files (see [`io`] for the formats).

pub mod args;
pub mod io;
pub mod jobs;

pub use args::{parse_cli, AnalyticSpec, Job, RunSpec};
pub use jobs::run_job;

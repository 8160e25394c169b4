//! Command-line grammar and its translation into executable jobs.
//!
//! Parsing is *total*: every input either produces a [`Job`] or a
//! [`clap::Error`] with a usage message — unknown flags, flags from the
//! wrong initial-condition family, missing family parameters, and
//! out-of-range values are all rejected up front, before any file is
//! touched.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ArgAction, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use cracklab_core::{
    Grid, InitialCondition, Params, PrecisionKind, RunConfig, SchemeKind, TermToggles,
};

/// A fully validated unit of work.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    /// March one numeric run and write its trajectory.
    Simulate(RunSpec),
    /// Sample the exact solution on the run output schedule.
    Analytic(AnalyticSpec),
    /// March one numeric run and score it against the exact solution.
    Compare(RunSpec),
    /// March both floating-point widths and report their divergence.
    Precision(RunSpec),
}

/// A numeric run plus its output destinations.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    /// The fully resolved run configuration (already validated).
    pub config: RunConfig,
    /// Main output path (trajectory or report CSV).
    pub out: PathBuf,
    /// Optional surface-file path (`l t l²f` blocks).
    pub surface: Option<PathBuf>,
}

/// An exact-solution sampling job.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticSpec {
    /// Material and loading parameters.
    pub params: Params,
    /// Space-time discretization.
    pub grid: Grid,
    /// Initial crack-length distribution.
    pub ic: InitialCondition,
    /// Output schedule decimation, mirroring the numeric runs.
    pub stride: usize,
    /// Trajectory CSV path.
    pub out: PathBuf,
    /// Optional surface-file path.
    pub surface: Option<PathBuf>,
}

#[derive(Parser)]
#[command(
    name = "cracklab",
    version,
    about = "Finite-difference laboratory for crack-length distribution transport"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandLine,
}

#[derive(Subcommand)]
enum CommandLine {
    /// March an initial distribution and write the trajectory CSV.
    Simulate(RunFlags),
    /// Sample the exact solution on the run output schedule.
    Analytic(AnalyticFlags),
    /// March a run and score every recorded level against the exact
    /// solution.
    Compare(RunFlags),
    /// March binary32 and binary64 side by side and report divergence.
    Precision(RunFlags),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Ftcs,
    Upwind,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Ftcs => SchemeKind::Ftcs,
            SchemeArg::Upwind => SchemeKind::Upwind,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum IcArg {
    /// Box profile: amplitude on [l-lo, l-hi], zero outside.
    Step,
    /// Exponential profile: amplitude · e^(−decay·l).
    Exp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PrecisionArg {
    F32,
    F64,
}

impl From<PrecisionArg> for PrecisionKind {
    fn from(p: PrecisionArg) -> Self {
        match p {
            PrecisionArg::F32 => PrecisionKind::Binary32,
            PrecisionArg::F64 => PrecisionKind::Binary64,
        }
    }
}

#[derive(Args)]
struct IcFlags {
    /// Initial-condition family.
    #[arg(long, value_enum)]
    ic: IcArg,
    /// Amplitude of the initial distribution (both families).
    #[arg(long)]
    amp: Option<f64>,
    /// Lower edge of the step profile (step family only).
    #[arg(long)]
    l_lo: Option<f64>,
    /// Upper edge of the step profile (step family only).
    #[arg(long)]
    l_hi: Option<f64>,
    /// Exponential decay rate (exp family only).
    #[arg(long)]
    decay: Option<f64>,
}

#[derive(Args)]
struct PhysicsFlags {
    /// Healing rate α of the velocity law v = −α + β·l·σ².
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Growth coefficient β of the velocity law.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Stress ramp rate: σ(t) = vsigma·t.
    #[arg(long, default_value_t = 1.0)]
    vsigma: f64,
}

#[derive(Args)]
struct GridFlags {
    /// Crack-length step.
    #[arg(long, default_value_t = 0.05)]
    dl: f64,
    /// Time step.
    #[arg(long, default_value_t = 0.001)]
    dt: f64,
    /// Number of length cells (nodes 0..=lmax).
    #[arg(long, default_value_t = 200)]
    lmax: usize,
    /// Number of time levels (levels 0..tmax).
    #[arg(long, default_value_t = 1000)]
    tmax: usize,
}

#[derive(Args)]
struct RunFlags {
    /// Finite-difference scheme.
    #[arg(long, value_enum, default_value_t = SchemeArg::Ftcs)]
    scheme: SchemeArg,
    #[command(flatten)]
    ic: IcFlags,
    #[command(flatten)]
    physics: PhysicsFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Record every stride-th time level (level 0 and the last level are
    /// always recorded).
    #[arg(long, default_value_t = 10)]
    stride: usize,
    /// Working floating-point width (not accepted by `precision`, which
    /// always runs both).
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-style `l t l²f` surface file here.
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Use the legacy dt/dl divisor for the FTCS centered difference
    /// instead of dt/(2·dl). FTCS only.
    #[arg(long, action = ArgAction::SetTrue)]
    compat_half_coefficient: bool,
}

#[derive(Args)]
struct AnalyticFlags {
    #[command(flatten)]
    ic: IcFlags,
    #[command(flatten)]
    physics: PhysicsFlags,
    #[command(flatten)]
    grid: GridFlags,
    /// Sample every stride-th time level (level 0 and the last level are
    /// always sampled).
    #[arg(long, default_value_t = 10)]
    stride: usize,
    /// Accepted for symmetry but must be f64: the exact solution is
    /// always evaluated in binary64.
    #[arg(long, value_enum)]
    precision: Option<PrecisionArg>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot-style `l t l²f` surface file here.
    #[arg(long)]
    surface: Option<PathBuf>,
}

fn cli_error(kind: ErrorKind, message: String) -> clap::Error {
    Cli::command().error(kind, message)
}

fn build_ic(flags: &IcFlags) -> Result<InitialCondition, clap::Error> {
    let require = |value: Option<f64>, flag: &str, family: &str| {
        value.ok_or_else(|| {
            cli_error(
                ErrorKind::MissingRequiredArgument,
                format!("--ic {family} requires {flag}"),
            )
        })
    };
    match flags.ic {
        IcArg::Step => {
            if flags.decay.is_some() {
                return Err(cli_error(
                    ErrorKind::ArgumentConflict,
                    "--decay applies only to --ic exp".into(),
                ));
            }
            Ok(InitialCondition::StepWise {
                amplitude: require(flags.amp, "--amp", "step")?,
                l_lo: require(flags.l_lo, "--l-lo", "step")?,
                l_hi: require(flags.l_hi, "--l-hi", "step")?,
            })
        }
        IcArg::Exp => {
            if flags.l_lo.is_some() || flags.l_hi.is_some() {
                return Err(cli_error(
                    ErrorKind::ArgumentConflict,
                    "--l-lo/--l-hi apply only to --ic step".into(),
                ));
            }
            Ok(InitialCondition::Exponential {
                amplitude: require(flags.amp, "--amp", "exp")?,
                decay: require(flags.decay, "--decay", "exp")?,
            })
        }
    }
}

fn reject_violations(violations: Vec<String>) -> Result<(), clap::Error> {
    if violations.is_empty() {
        Ok(())
    } else {
        Err(cli_error(
            ErrorKind::ValueValidation,
            format!("invalid configuration: {}", violations.join("; ")),
        ))
    }
}

fn build_run_spec(flags: RunFlags, reject_precision: bool) -> Result<RunSpec, clap::Error> {
    if reject_precision && flags.precision.is_some() {
        return Err(cli_error(
            ErrorKind::ArgumentConflict,
            "the precision experiment always runs both widths; drop --precision".into(),
        ));
    }
    let scheme: SchemeKind = flags.scheme.into();
    if flags.compat_half_coefficient && scheme == SchemeKind::Upwind {
        return Err(cli_error(
            ErrorKind::ArgumentConflict,
            "--compat-half-coefficient applies only to --scheme ftcs".into(),
        ));
    }
    let config = RunConfig {
        scheme,
        params: Params {
            alpha: flags.physics.alpha,
            beta: flags.physics.beta,
            v_sigma: flags.physics.vsigma,
        },
        grid: Grid {
            dl: flags.grid.dl,
            dt: flags.grid.dt,
            lmax: flags.grid.lmax,
            tmax: flags.grid.tmax,
        },
        ic: build_ic(&flags.ic)?,
        stride: flags.stride,
        blowup_threshold: 1e12,
        precision: flags.precision.map(PrecisionKind::from).unwrap_or_default(),
        term_toggles: TermToggles::default(),
        compat_half_coefficient: flags.compat_half_coefficient,
    };
    reject_violations(config.validate().err().unwrap_or_default())?;
    Ok(RunSpec {
        config,
        out: flags.out,
        surface: flags.surface,
    })
}

fn build_analytic_spec(flags: AnalyticFlags) -> Result<AnalyticSpec, clap::Error> {
    if flags.precision == Some(PrecisionArg::F32) {
        return Err(cli_error(
            ErrorKind::ArgumentConflict,
            "the exact solution is always evaluated in binary64; --precision f32 is not available here".into(),
        ));
    }
    let params = Params {
        alpha: flags.physics.alpha,
        beta: flags.physics.beta,
        v_sigma: flags.physics.vsigma,
    };
    let grid = Grid {
        dl: flags.grid.dl,
        dt: flags.grid.dt,
        lmax: flags.grid.lmax,
        tmax: flags.grid.tmax,
    };
    let ic = build_ic(&flags.ic)?;
    let mut violations = cracklab_core::validate(&params, &grid)
        .err()
        .unwrap_or_default();
    violations.extend(ic.violations());
    if flags.stride < 1 {
        violations.push("stride >= 1".to_string());
    }
    if params.v_sigma == 0.0 {
        violations.push("vsigma > 0 (the exact solution needs a live stress ramp)".to_string());
    }
    reject_violations(violations)?;
    Ok(AnalyticSpec {
        params,
        grid,
        ic,
        stride: flags.stride,
        out: flags.out,
        surface: flags.surface,
    })
}

/// Parses a full command line into a validated [`Job`].
///
/// The first item is the program name, as in [`std::env::args_os`].
pub fn parse_cli<I, T>(args: I) -> Result<Job, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        CommandLine::Simulate(flags) => Ok(Job::Simulate(build_run_spec(flags, false)?)),
        CommandLine::Compare(flags) => Ok(Job::Compare(build_run_spec(flags, false)?)),
        CommandLine::Precision(flags) => Ok(Job::Precision(build_run_spec(flags, true)?)),
        CommandLine::Analytic(flags) => Ok(Job::Analytic(build_analytic_spec(flags)?)),
    }
}

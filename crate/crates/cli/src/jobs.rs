//! Executes parsed [`Job`]s: runs the requested computation and writes the
//! output files, embedding the fully resolved configuration as `#`
//! metadata so every artifact is self-describing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cracklab_core::analytic::analytic_field;
use cracklab_core::diagnostics::compare_run;
use cracklab_core::precision::precision_experiment;
use cracklab_core::solver::run;
use cracklab_core::{
    Field, Grid, InitialCondition, Params, PrecisionKind, RunConfig, RunStatus, Scalar, Trajectory,
};

use crate::args::{AnalyticSpec, Job, RunSpec};
use crate::io;

/// Executes a job to completion. A blown-up run is a *successful* job —
/// the status lands in the output file; errors here are configuration or
/// filesystem problems.
pub fn run_job(job: &Job) -> Result<(), String> {
    match job {
        Job::Simulate(spec) => match spec.config.precision {
            PrecisionKind::Binary64 => simulate::<f64>(spec),
            PrecisionKind::Binary32 => simulate::<f32>(spec),
        },
        Job::Compare(spec) => match spec.config.precision {
            PrecisionKind::Binary64 => compare::<f64>(spec),
            PrecisionKind::Binary32 => compare::<f32>(spec),
        },
        Job::Precision(spec) => precision(spec),
        Job::Analytic(spec) => analytic(spec),
    }
}

fn simulate<T: Scalar>(spec: &RunSpec) -> Result<(), String> {
    let traj = run::<T>(&spec.config).map_err(|e| e.to_string())?;
    let meta = run_metadata("simulate", &spec.config, true);
    write_file(&spec.out, |w| {
        io::write_trajectory(w, &traj, &spec.config.grid, &meta)
    })?;
    if let Some(path) = &spec.surface {
        write_file(path, |w| io::write_surface(w, &traj, &spec.config.grid))?;
    }
    Ok(())
}

fn compare<T: Scalar>(spec: &RunSpec) -> Result<(), String> {
    let report = compare_run::<T>(&spec.config).map_err(|e| e.to_string())?;
    let meta = run_metadata("compare", &spec.config, true);
    write_file(&spec.out, |w| {
        io::write_comparison_report(w, &report, &meta)
    })?;
    if let Some(path) = &spec.surface {
        // Runs are deterministic: re-marching the same config reproduces
        // the scored trajectory bit for bit.
        let traj = run::<T>(&spec.config).map_err(|e| e.to_string())?;
        write_file(path, |w| io::write_surface(w, &traj, &spec.config.grid))?;
    }
    Ok(())
}

fn precision(spec: &RunSpec) -> Result<(), String> {
    let report = precision_experiment(&spec.config).map_err(|e| e.to_string())?;
    let meta = run_metadata("precision", &spec.config, false);
    write_file(&spec.out, |w| io::write_precision_report(w, &report, &meta))?;
    if let Some(path) = &spec.surface {
        let traj = run::<f64>(&spec.config).map_err(|e| e.to_string())?;
        write_file(path, |w| io::write_surface(w, &traj, &spec.config.grid))?;
    }
    Ok(())
}

fn analytic(spec: &AnalyticSpec) -> Result<(), String> {
    let mut snapshots: Vec<Field<f64>> = Vec::new();
    for level in schedule(spec.grid.tmax, spec.stride) {
        snapshots.push(
            analytic_field(level, &spec.grid, &spec.params, &spec.ic).map_err(|e| e.to_string())?,
        );
    }
    let traj = Trajectory {
        snapshots,
        stride: spec.stride,
        status: RunStatus::Completed,
    };
    let mut meta = vec!["command=analytic".to_string()];
    push_ic_metadata(&mut meta, &spec.ic);
    push_params_metadata(&mut meta, &spec.params);
    push_grid_metadata(&mut meta, &spec.grid);
    meta.push(format!("stride={}", spec.stride));
    meta.push("precision=f64".to_string());
    write_file(&spec.out, |w| {
        io::write_trajectory(w, &traj, &spec.grid, &meta)
    })?;
    if let Some(path) = &spec.surface {
        write_file(path, |w| io::write_surface(w, &traj, &spec.grid))?;
    }
    Ok(())
}

/// The levels a run with this `tmax` and `stride` records: 0, every
/// stride-th level, and the last level, deduplicated and ascending.
fn schedule(tmax: usize, stride: usize) -> Vec<usize> {
    let mut levels = vec![0];
    for m in 1..tmax {
        if m % stride == 0 || m == tmax - 1 {
            levels.push(m);
        }
    }
    levels
}

/// The fully resolved configuration of a numeric run as metadata lines.
fn run_metadata(command: &str, config: &RunConfig, with_precision: bool) -> Vec<String> {
    let mut meta = vec![
        format!("command={command}"),
        format!("scheme={}", config.scheme.name()),
    ];
    push_ic_metadata(&mut meta, &config.ic);
    push_params_metadata(&mut meta, &config.params);
    push_grid_metadata(&mut meta, &config.grid);
    meta.push(format!("stride={}", config.stride));
    if with_precision {
        meta.push(format!("precision={}", config.precision.name()));
    }
    meta.push(format!(
        "compat_half_coefficient={}",
        config.compat_half_coefficient
    ));
    meta.push(format!("blowup_threshold={}", config.blowup_threshold));
    meta
}

fn push_ic_metadata(meta: &mut Vec<String>, ic: &InitialCondition) {
    match ic {
        InitialCondition::StepWise {
            amplitude,
            l_lo,
            l_hi,
        } => {
            meta.push("ic=step".to_string());
            meta.push(format!("amp={amplitude}"));
            meta.push(format!("l_lo={l_lo}"));
            meta.push(format!("l_hi={l_hi}"));
        }
        InitialCondition::Exponential { amplitude, decay } => {
            meta.push("ic=exp".to_string());
            meta.push(format!("amp={amplitude}"));
            meta.push(format!("decay={decay}"));
        }
    }
}

fn push_params_metadata(meta: &mut Vec<String>, params: &Params) {
    meta.push(format!("alpha={}", params.alpha));
    meta.push(format!("beta={}", params.beta));
    meta.push(format!("vsigma={}", params.v_sigma));
}

fn push_grid_metadata(meta: &mut Vec<String>, grid: &Grid) {
    meta.push(format!("dl={}", grid.dl));
    meta.push(format!("dt={}", grid.dt));
    meta.push(format!("lmax={}", grid.lmax));
    meta.push(format!("tmax={}", grid.tmax));
}

fn write_file<F>(path: &Path, write: F) -> Result<(), String>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    let mut w = BufWriter::new(file);
    write(&mut w).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    w.flush()
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

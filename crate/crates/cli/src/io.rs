//! File formats: trajectory CSV, report CSVs, and the plotting surface.
//!
//! All real numbers are written with Rust's shortest-round-trip `Display`
//! formatting, so a value parsed back at the precision it was written in
//! reproduces the original bits exactly.
//!
//! # Trajectory CSV
//!
//! ```text
//! # status=Completed            <- line 1, always
//! # command=simulate            <- optional metadata block (the CLI puts
//! # ...                            the fully resolved config here)
//! t,l,f,l2f                     <- header, immediately after metadata
//! 0,0,1,0
//! ...
//! ```
//!
//! One row per (recorded level, node), levels ascending, nodes ascending;
//! `t` and `l` are physical coordinates, `f` is at the run's working
//! precision, `l2f = l²·f` is a binary64 convenience column.
//!
//! # Surface file
//!
//! Whitespace-separated `l t l2f` triplets, one block per recorded level
//! (node 0 included), blocks separated by a single blank line — the layout
//! gnuplot's `splot` consumes directly.

use std::io::{self, BufRead, Write};

use cracklab_core::diagnostics::ComparisonReport;
use cracklab_core::precision::PrecisionReport;
use cracklab_core::{Grid, RunStatus, Scalar, Trajectory};

/// Writes the trajectory CSV. `metadata` lines (without the leading `# `)
/// are embedded between the status line and the column header; pass an
/// empty slice for the bare two-line preamble.
pub fn write_trajectory<T: Scalar, W: Write>(
    w: &mut W,
    traj: &Trajectory<T>,
    grid: &Grid,
    metadata: &[String],
) -> io::Result<()> {
    writeln!(w, "# status={}", traj.status)?;
    for line in metadata {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "t,l,f,l2f")?;
    for snap in &traj.snapshots {
        let t = grid.time_at(snap.time_index);
        for (i, value) in snap.values.iter().enumerate() {
            let l = grid.node_length(i);
            writeln!(w, "{t},{l},{value},{}", l * l * value.widen())?;
        }
    }
    Ok(())
}

/// Writes the `l t l2f` surface blocks.
pub fn write_surface<T: Scalar, W: Write>(
    w: &mut W,
    traj: &Trajectory<T>,
    grid: &Grid,
) -> io::Result<()> {
    for (block, snap) in traj.snapshots.iter().enumerate() {
        if block > 0 {
            writeln!(w)?;
        }
        let t = grid.time_at(snap.time_index);
        for (i, value) in snap.values.iter().enumerate() {
            let l = grid.node_length(i);
            writeln!(w, "{l} {t} {}", l * l * value.widen())?;
        }
    }
    Ok(())
}

/// Writes the comparison report CSV: status and metadata as `#` lines,
/// then a header naming every record field, then one row per record.
pub fn write_comparison_report<W: Write>(
    w: &mut W,
    report: &ComparisonReport,
    metadata: &[String],
) -> io::Result<()> {
    writeln!(w, "# status={}", report.status)?;
    for line in metadata {
        writeln!(w, "# {line}")?;
    }
    writeln!(
        w,
        "time_index,l1_error,l2_error,linf_error,second_moment_numeric,second_moment_analytic,total_variation"
    )?;
    for r in &report.records {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.time_index,
            r.l1_error,
            r.l2_error,
            r.linf_error,
            r.second_moment_numeric,
            r.second_moment_analytic,
            r.total_variation
        )?;
    }
    Ok(())
}

/// Writes the precision report CSV: both statuses and the first-exceed
/// levels as `#` metadata, then `time_index,divergence` rows.
pub fn write_precision_report<W: Write>(
    w: &mut W,
    report: &PrecisionReport,
    metadata: &[String],
) -> io::Result<()> {
    writeln!(w, "# status_f32={}", report.status_f32)?;
    writeln!(w, "# status_f64={}", report.status_f64)?;
    for (threshold, level) in report.first_exceed {
        match level {
            Some(n) => writeln!(w, "# first_exceed_{threshold:e}={n}")?,
            None => writeln!(w, "# first_exceed_{threshold:e}=none")?,
        }
    }
    for line in metadata {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "time_index,divergence")?;
    for (n, d) in &report.divergences {
        writeln!(w, "{n},{d}")?;
    }
    Ok(())
}

/// One data row of a trajectory CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    /// Physical time.
    pub t: f64,
    /// Physical crack length.
    pub l: f64,
    /// The density value, kept as written so callers can re-parse it at
    /// the precision the file was produced with.
    pub f: String,
    /// The `l²·f` convenience column.
    pub l2f: f64,
}

/// A parsed trajectory CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ReadTrajectory {
    /// Terminal status from the first line.
    pub status: RunStatus,
    /// Embedded metadata lines, `# ` prefix stripped.
    pub metadata: Vec<String>,
    /// Data rows in file order.
    pub rows: Vec<TrajectoryRow>,
}

/// Parses a trajectory CSV produced by [`write_trajectory`].
pub fn read_trajectory<R: BufRead>(r: R) -> Result<ReadTrajectory, String> {
    let mut lines = r.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or_else(|| "empty trajectory file".to_string())?;
    let first = first.map_err(|e| e.to_string())?;
    let status: RunStatus = first
        .strip_prefix("# status=")
        .ok_or_else(|| format!("line 1 must be `# status=...`, got {first:?}"))?
        .parse()?;
    let mut metadata = Vec::new();
    let mut header_seen = false;
    let mut rows = Vec::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| e.to_string())?;
        if !header_seen {
            if let Some(meta) = line.strip_prefix("# ") {
                metadata.push(meta.to_string());
                continue;
            }
            if line == "t,l,f,l2f" {
                header_seen = true;
                continue;
            }
            return Err(format!(
                "line {}: expected metadata or the `t,l,f,l2f` header, got {line:?}",
                lineno + 1
            ));
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(format!(
                "line {}: expected 4 comma-separated fields, got {}",
                lineno + 1,
                fields.len()
            ));
        }
        let parse = |s: &str, what: &str| {
            s.parse::<f64>()
                .map_err(|e| format!("line {}: bad {what} {s:?}: {e}", lineno + 1))
        };
        rows.push(TrajectoryRow {
            t: parse(fields[0], "t")?,
            l: parse(fields[1], "l")?,
            f: fields[2].to_string(),
            l2f: parse(fields[3], "l2f")?,
        });
    }
    if !header_seen {
        return Err("trajectory file has no `t,l,f,l2f` header".to_string());
    }
    Ok(ReadTrajectory {
        status,
        metadata,
        rows,
    })
}

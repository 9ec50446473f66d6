//! CSV result tables. Floats are written with 17 significant digits so
//! they parse back to the same `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::experiments::{RecoveryRow, SweepRow};
use crate::model::RunTrace;

pub const TRACE_HEADER: [&str; 4] = ["iteration", "rmse", "coding_seconds", "update_seconds"];
pub const RECOVERY_HEADER: [&str; 6] = ["algo", "s", "snr_db", "mean_recovery_pct", "std_pct", "runs"];
pub const SWEEP_HEADER: [&str; 7] = [
    "axis",
    "value",
    "algo",
    "mean_rmse",
    "std_rmse",
    "mean_code_s",
    "mean_update_s",
];

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Whether the timing columns of a trace carry measured wall times or
/// zeros (for byte-comparable outputs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimingColumns {
    #[default]
    Measured,
    Zeroed,
}

pub fn write_run_trace<T, W: Write>(trace: &RunTrace<T>, out: W, timings: TimingColumns) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for (k, (rmse, t)) in trace
        .rmse_per_iteration
        .iter()
        .zip(&trace.stage_times)
        .enumerate()
    {
        let (coding, update) = match timings {
            TimingColumns::Measured => (t.coding, t.update),
            TimingColumns::Zeroed => (0.0, 0.0),
        };
        w.write_record([
            (k + 1).to_string(),
            format_float(*rmse),
            format_float(coding),
            format_float(update),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_run_trace<T>(trace: &RunTrace<T>, path: impl AsRef<Path>, timings: TimingColumns) -> Result<()> {
    write_run_trace(trace, BufWriter::new(File::create(path)?), timings)
}

fn snr_label(snr_db: f64) -> String {
    if snr_db.is_infinite() && snr_db > 0.0 {
        "inf".to_string()
    } else {
        format_float(snr_db)
    }
}

pub fn write_recovery_table<W: Write>(rows: &[RecoveryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECOVERY_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.sparsity.to_string(),
            snr_label(r.snr_db),
            format_float(r.mean_pct),
            format_float(r.std_pct),
            r.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep_table<W: Write>(rows: &[SweepRow], out: W, timings: TimingColumns) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        let (code_s, update_s) = match timings {
            TimingColumns::Measured => (r.mean_code_s, r.mean_update_s),
            TimingColumns::Zeroed => (0.0, 0.0),
        };
        w.write_record([
            r.axis.name().to_string(),
            r.value.to_string(),
            r.method.to_string(),
            format_float(r.mean_rmse),
            format_float(r.std_rmse),
            format_float(code_s),
            format_float(update_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

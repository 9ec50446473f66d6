//! Experiment harnesses: synthetic dictionary recovery, image-patch
//! parameter sweeps and update-stage timing.

pub mod bench;
pub mod recovery;
pub mod sweep;

pub use bench::{run_update_benchmark, BenchRow};
pub use recovery::{
    add_noise, generate_recovery_instance, recovery_score, run_recovery_experiment,
    RecoveryConfig, RecoveryInstance, RecoveryRow, RECOVERY_THRESHOLD,
};
pub use sweep::{run_sweep, SweepAxis, SweepConfig, SweepRow};

/// Mean and sample standard deviation (zero for fewer than two values).
/// Values are sorted first so the result does not depend on input order.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    if sorted.len() < 2 {
        return (mean, 0.0);
    }
    let var = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

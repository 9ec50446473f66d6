//! Update-stage timing of sequential versus Jacobi sweeps.

use crate::error::{Error, Result};
use crate::learner::learn_with;
use crate::model::{Dictionary, LearnerConfig, Method, SignalSet};
use crate::parallel::Workers;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: Method,
    /// Resolved group size.
    pub group_size: usize,
    pub threads: usize,
    pub mean_code_s: f64,
    pub mean_update_s: f64,
    pub final_rmse: f64,
}

/// Learns with every `(method, threads)` combination from the same start
/// and reports mean per-iteration stage times.
pub fn run_update_benchmark<T: Scalar>(
    y: &SignalSet<T>,
    initial: &Dictionary<T>,
    sparsity: usize,
    iterations: usize,
    runs: &[(Method, usize)],
) -> Result<Vec<BenchRow>> {
    if iterations == 0 {
        return Err(Error::config("benchmark needs at least one iteration"));
    }
    runs.iter()
        .map(|&(method, threads)| {
            let workers = Workers::new(threads);
            let cfg = LearnerConfig::new(method, sparsity, iterations).with_threads(threads);
            let trace = learn_with(y, initial, &cfg, &workers)?;
            let times = trace.mean_stage_times();
            Ok(BenchRow {
                method,
                group_size: method.group_size.resolve(initial.len()),
                threads: workers.threads(),
                mean_code_s: times.coding,
                mean_update_s: times.update,
                final_rmse: trace.final_rmse().unwrap_or(f64::NAN),
            })
        })
        .collect()
}

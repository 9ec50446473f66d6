//! Outer dictionary learning loop and dictionary initialization.

use std::time::Instant;

use log::debug;

use crate::atom_update::nsgk_signal_matrix;
use crate::error::{Error, Result};
use crate::matrix::{norm, DenseMatrix};
use crate::model::{
    rmse, Algorithm, Dictionary, LearnerConfig, RunTrace, SignalSet, SparseCode, StageTimes,
    TraceEvents,
};
use crate::omp::encode_set;
use crate::parallel::Workers;
use crate::rng::{distinct_indices, standard_normal, stream, Seed};
use crate::scalar::Scalar;
use crate::scheduler::{mod_update, sweep, UpdateRule};

/// Runs `cfg.iterations` learning iterations starting from `initial`.
///
/// Each iteration codes `y` with OMP and then updates the dictionary. The
/// recorded RMSE is measured after the update stage with the most recent
/// coefficients: the AK-SVD refreshed ones, the fresh OMP code otherwise.
pub fn learn<T: Scalar>(
    y: &SignalSet<T>,
    initial: &Dictionary<T>,
    cfg: &LearnerConfig,
) -> Result<RunTrace<T>> {
    let workers = Workers::new(cfg.threads);
    learn_with(y, initial, cfg, &workers)
}

/// [`learn`] on an existing worker pool (`cfg.threads` is ignored).
pub fn learn_with<T: Scalar>(
    y: &SignalSet<T>,
    initial: &Dictionary<T>,
    cfg: &LearnerConfig,
    workers: &Workers,
) -> Result<RunTrace<T>> {
    if initial.dim() != y.dim() {
        return Err(Error::dimension(format!(
            "dictionary atoms have length {}, signals have length {}",
            initial.dim(),
            y.dim()
        )));
    }
    cfg.validate(y.dim(), initial.len())?;
    if let Some((j, nrm)) = initial.first_non_unit_atom() {
        return Err(Error::config(format!(
            "initial atom {j} has norm {nrm}, expected 1"
        )));
    }

    let n = initial.len();
    let group_size = cfg.group_size.resolve(n);
    let mut d = initial.clone();
    let mut code = SparseCode::zeros(n, y.len());
    let mut previous_code: Option<SparseCode<T>> = None;
    let mut rmse_per_iteration = Vec::with_capacity(cfg.iterations);
    let mut stage_times = Vec::with_capacity(cfg.iterations);
    let mut events = TraceEvents::default();

    for iteration in 0..cfg.iterations {
        let started = Instant::now();
        let fresh = encode_set(&d, y, cfg.sparsity, workers)?;
        let coding = started.elapsed().as_secs_f64();

        let started = Instant::now();
        let (next, latest_code) = match cfg.algorithm {
            Algorithm::Mod => {
                let out = mod_update(y, &fresh, &d)?;
                events.ridge_regularized += usize::from(out.regularized);
                events.dead_atoms += out.kept_atoms;
                events.dead_atoms_kept += out.kept_atoms;
                (out.dictionary, fresh)
            }
            Algorithm::Nsgk => {
                // On the first iteration the previous code is the coding of
                // the initial dictionary, which is exactly `fresh`.
                let prev = previous_code.take().unwrap_or_else(|| fresh.clone());
                let z = nsgk_signal_matrix(y, &d, &prev, &fresh)?;
                let out = sweep(&d, &z, &prev, UpdateRule::Nsgk, group_size, workers)?;
                events.dead_atoms += out.dead_atoms;
                events.dead_atoms_kept += out.dead_atoms_kept;
                previous_code = Some(fresh.clone());
                (out.dictionary, fresh)
            }
            Algorithm::Sgk | Algorithm::AkSvd => {
                let rule = if cfg.algorithm == Algorithm::Sgk {
                    UpdateRule::Sgk
                } else {
                    UpdateRule::AkSvd
                };
                let out = sweep(&d, y.matrix(), &fresh, rule, group_size, workers)?;
                events.dead_atoms += out.dead_atoms;
                events.dead_atoms_kept += out.dead_atoms_kept;
                let code = out.code.unwrap_or(fresh);
                (out.dictionary, code)
            }
        };
        let update = started.elapsed().as_secs_f64();

        d = next;
        code = latest_code;
        let err = rmse(y, &d, &code)?.as_f64();
        debug!(
            "{} iteration {}: rmse {err:.6e} (coding {coding:.3}s, update {update:.3}s)",
            cfg.method(),
            iteration + 1
        );
        rmse_per_iteration.push(err);
        stage_times.push(StageTimes { coding, update });
    }

    Ok(RunTrace {
        rmse_per_iteration,
        stage_times,
        final_dictionary: d,
        final_code: code,
        events,
    })
}

/// Columns norms below this are not usable as initial atoms.
const MIN_INIT_NORM: f64 = 1e-12;

/// `n` distinct signals chosen uniformly at random, normalized. Signals
/// with negligible norm are skipped and another one is drawn.
pub fn init_dictionary_from_data<T: Scalar>(
    y: &SignalSet<T>,
    n: usize,
    seed: Seed,
) -> Result<Dictionary<T>> {
    if n == 0 {
        return Err(Error::config("dictionary must have at least one atom"));
    }
    if y.len() < n {
        return Err(Error::config(format!(
            "cannot pick {n} atoms from {} signals",
            y.len()
        )));
    }
    let mut rng = seed.derive(stream::INIT).rng();
    let order = distinct_indices(&mut rng, y.len(), y.len());
    let floor = T::of(MIN_INIT_NORM);
    let picked: Vec<usize> = order
        .into_iter()
        .filter(|&c| norm(y.signal(c)) >= floor)
        .take(n)
        .collect();
    if picked.len() < n {
        return Err(Error::config(format!(
            "only {} of the signals are nonzero, {n} atoms requested",
            picked.len()
        )));
    }
    let columns: Vec<Vec<T>> = picked.iter().map(|&c| y.signal(c).to_vec()).collect();
    Dictionary::from_unnormalized(DenseMatrix::from_columns(y.dim(), &columns)?)
}

/// Dictionary with i.i.d. standard normal entries and normalized columns.
pub fn init_dictionary_random<T: Scalar>(p: usize, n: usize, seed: Seed) -> Result<Dictionary<T>> {
    if p == 0 || n == 0 {
        return Err(Error::config(format!(
            "dictionary dimensions must be positive, got {p}x{n}"
        )));
    }
    let mut rng = seed.derive(stream::DICTIONARY).rng();
    let m = DenseMatrix::from_fn(p, n, |_, _| standard_normal::<T, _>(&mut rng));
    Dictionary::from_unnormalized(m)
}

//! Recovery of a planted dictionary from noisy synthetic sparse signals.

use crate::error::{Error, Result};
use crate::learner::{init_dictionary_from_data, init_dictionary_random, learn};
use crate::matrix::{axpy, dot, sum_of_squares, DenseMatrix};
use crate::model::{Dictionary, LearnerConfig, Method, SignalSet, SparseCode, SparseColumn};
use crate::parallel::Workers;
use crate::rng::{distinct_indices, standard_normal, stream, Seed};
use crate::scalar::Scalar;

use super::mean_and_std;

/// An original atom is recovered when a learned atom has
/// `|<d, d_learned>|` above this value.
pub const RECOVERY_THRESHOLD: f64 = 0.99;

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryConfig {
    pub dim: usize,
    pub atoms: usize,
    pub signals: usize,
    pub sparsity: usize,
    /// Signal-to-noise ratio in dB; `f64::INFINITY` means no noise.
    pub snr_db: f64,
    pub runs: usize,
    /// Learning iterations; `9 s²` when unset.
    pub iterations: Option<usize>,
    pub seed: u64,
    /// Runs executed concurrently.
    pub threads: usize,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        Self {
            dim: 20,
            atoms: 50,
            signals: 1500,
            sparsity: 3,
            snr_db: f64::INFINITY,
            runs: 50,
            iterations: None,
            seed: 0,
            threads: 1,
        }
    }
}

impl RecoveryConfig {
    pub fn iterations(&self) -> usize {
        self.iterations.unwrap_or(9 * self.sparsity * self.sparsity)
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.atoms == 0 || self.signals < self.atoms {
            return Err(Error::config(format!(
                "need p >= 1, n >= 1 and m >= n, got p={} n={} m={}",
                self.dim, self.atoms, self.signals
            )));
        }
        if self.sparsity == 0 || self.sparsity > self.dim || self.sparsity > self.atoms {
            return Err(Error::config(format!(
                "sparsity {} must lie in 1..=min(p, n)",
                self.sparsity
            )));
        }
        if self.snr_db.is_nan() || self.snr_db == f64::NEG_INFINITY {
            return Err(Error::config(format!("invalid SNR {}", self.snr_db)));
        }
        if self.runs == 0 {
            return Err(Error::config("at least one run is required"));
        }
        Ok(())
    }
}

/// A planted dictionary, the code used to synthesize the signals, and the
/// signals before and after noise.
#[derive(Clone, Debug)]
pub struct RecoveryInstance<T> {
    pub dictionary: Dictionary<T>,
    pub code: SparseCode<T>,
    pub clean: SignalSet<T>,
    pub signals: SignalSet<T>,
}

/// Random unit-norm dictionary and `m` signals, each a combination of `s`
/// distinct atoms with standard normal coefficients, plus white noise at
/// the configured SNR.
pub fn generate_recovery_instance<T: Scalar>(
    cfg: &RecoveryConfig,
    seed: Seed,
) -> Result<RecoveryInstance<T>> {
    cfg.validate()?;
    let dictionary = init_dictionary_random::<T>(cfg.dim, cfg.atoms, seed)?;
    let mut supports = seed.derive(stream::SUPPORTS).rng();
    let mut coefficients = seed.derive(stream::COEFFICIENTS).rng();

    let mut columns = Vec::with_capacity(cfg.signals);
    let mut clean = DenseMatrix::zeros(cfg.dim, cfg.signals);
    for c in 0..cfg.signals {
        let support = distinct_indices(&mut supports, cfg.atoms, cfg.sparsity);
        let entries: Vec<(usize, T)> = support
            .into_iter()
            .map(|i| {
                let mut v = standard_normal::<T, _>(&mut coefficients);
                while v == T::zero() {
                    v = standard_normal(&mut coefficients);
                }
                (i, v)
            })
            .collect();
        let column = SparseColumn::new(entries)?;
        for &(i, v) in column.entries() {
            axpy(v, dictionary.atom(i), clean.col_mut(c));
        }
        columns.push(column);
    }
    let code = SparseCode::new(cfg.atoms, columns)?;
    let clean = SignalSet::new(clean)?;
    let signals = add_noise(&clean, cfg.snr_db, seed.derive(stream::NOISE))?;
    Ok(RecoveryInstance {
        dictionary,
        code,
        clean,
        signals,
    })
}

/// Adds white Gaussian noise scaled so that `10 log10(||Y||² / ||N||²)`
/// equals `snr_db` for the realized noise. Infinite SNR returns `y` as is.
pub fn add_noise<T: Scalar>(y: &SignalSet<T>, snr_db: f64, seed: Seed) -> Result<SignalSet<T>> {
    if snr_db == f64::INFINITY {
        return Ok(y.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::config(format!("invalid SNR {snr_db}")));
    }
    let signal_energy = sum_of_squares(y.matrix().as_slice()).as_f64();
    if !(signal_energy > 0.0) {
        return Err(Error::config("cannot set an SNR on a zero-energy signal set"));
    }
    let mut rng = seed.rng();
    let noise: Vec<f64> = (0..y.matrix().as_slice().len())
        .map(|_| standard_normal::<f64, _>(&mut rng))
        .collect();
    let noise_energy = dot(&noise, &noise);
    let scale = (signal_energy / noise_energy / 10f64.powf(snr_db / 10.0)).sqrt();
    let data = y
        .matrix()
        .as_slice()
        .iter()
        .zip(&noise)
        .map(|(&v, &e)| v + T::of(scale * e))
        .collect();
    SignalSet::new(DenseMatrix::from_column_major(y.dim(), y.len(), data)?)
}

/// Percentage of `original` atoms matched by a distinct `learned` atom
/// with absolute correlation above [`RECOVERY_THRESHOLD`]. Pairs are
/// matched greedily, most correlated first.
pub fn recovery_score<T: Scalar>(original: &Dictionary<T>, learned: &Dictionary<T>) -> Result<f64> {
    if original.dim() != learned.dim() {
        return Err(Error::dimension(format!(
            "atoms have lengths {} and {}",
            original.dim(),
            learned.dim()
        )));
    }
    let mut pairs = Vec::new();
    for i in 0..original.len() {
        for j in 0..learned.len() {
            let corr = dot(original.atom(i), learned.atom(j)).abs().as_f64();
            if corr > RECOVERY_THRESHOLD {
                pairs.push((corr, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut original_taken = vec![false; original.len()];
    let mut learned_taken = vec![false; learned.len()];
    let mut recovered = 0usize;
    for (_, i, j) in pairs {
        if !original_taken[i] && !learned_taken[j] {
            original_taken[i] = true;
            learned_taken[j] = true;
            recovered += 1;
        }
    }
    Ok(100.0 * recovered as f64 / original.len() as f64)
}

/// Mean recovery over runs for one method.
#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryRow {
    pub method: Method,
    pub sparsity: usize,
    pub snr_db: f64,
    pub mean_pct: f64,
    pub std_pct: f64,
    pub runs: usize,
}

/// Runs the recovery protocol: for every run a fresh instance and an
/// initial dictionary drawn from the signals, shared by all methods.
pub fn run_recovery_experiment<T: Scalar>(
    cfg: &RecoveryConfig,
    methods: &[Method],
) -> Result<Vec<RecoveryRow>> {
    cfg.validate()?;
    if methods.is_empty() {
        return Err(Error::config("no methods to run"));
    }
    let iterations = cfg.iterations();
    let master = Seed(cfg.seed).derive(stream::RUN);
    let workers = Workers::new(cfg.threads);
    let per_run = workers.map_indexed(cfg.runs, |run| -> Result<Vec<f64>> {
        let seed = master.derive(run as u64);
        let instance = generate_recovery_instance::<T>(cfg, seed)?;
        let initial = init_dictionary_from_data(&instance.signals, cfg.atoms, seed)?;
        methods
            .iter()
            .map(|&method| {
                let lc = LearnerConfig::new(method, cfg.sparsity, iterations).with_seed(seed.0);
                let trace = learn(&instance.signals, &initial, &lc)?;
                recovery_score(&instance.dictionary, &trace.final_dictionary)
            })
            .collect()
    });
    let per_run = per_run.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let scores: Vec<f64> = per_run.iter().map(|r| r[k]).collect();
            let (mean_pct, std_pct) = mean_and_std(&scores);
            RecoveryRow {
                method,
                sparsity: cfg.sparsity,
                snr_db: cfg.snr_db,
                mean_pct,
                std_pct,
                runs: cfg.runs,
            }
        })
        .collect())
}

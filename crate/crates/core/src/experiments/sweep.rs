//! Image-patch learning sweeps along one parameter axis.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::patches::{extract_patches, PatchOptions};
use crate::io::pgm::Raster;
use crate::learner::{init_dictionary_random, learn_with};
use crate::model::{LearnerConfig, Method, SignalSet};
use crate::parallel::Workers;
use crate::rng::{stream, Seed};
use crate::scalar::Scalar;

use super::mean_and_std;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    /// Sparsity `s`.
    Sparsity,
    /// Atom count `n`.
    DictSize,
    /// Training set size `m`.
    Signals,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Sparsity => "s",
            SweepAxis::DictSize => "n",
            SweepAxis::Signals => "m",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "s" => Ok(SweepAxis::Sparsity),
            "n" => Ok(SweepAxis::DictSize),
            "m" => Ok(SweepAxis::Signals),
            other => Err(Error::config(format!("unknown sweep axis '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Strictly increasing axis values.
    pub values: Vec<usize>,
    pub sparsity: usize,
    pub dict_size: usize,
    pub signals: usize,
    pub iterations: usize,
    pub methods: Vec<Method>,
    pub runs_per_point: usize,
    pub seed: u64,
    pub threads: usize,
    pub patches: PatchOptions,
}

impl SweepConfig {
    fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep has no axis values"));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("sweep values must be strictly increasing"));
        }
        if self.values[0] == 0 {
            return Err(Error::config("sweep values must be positive"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("no methods to run"));
        }
        if self.runs_per_point == 0 {
            return Err(Error::config("at least one run per point is required"));
        }
        Ok(())
    }

    /// `(s, n, m)` at one axis value.
    pub fn point(&self, value: usize) -> (usize, usize, usize) {
        match self.axis {
            SweepAxis::Sparsity => (value, self.dict_size, self.signals),
            SweepAxis::DictSize => (self.sparsity, value, self.signals),
            SweepAxis::Signals => (self.sparsity, self.dict_size, value),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: usize,
    pub method: Method,
    pub mean_rmse: f64,
    pub std_rmse: f64,
    pub mean_code_s: f64,
    pub mean_update_s: f64,
}

/// Learns a dictionary for every axis value, method and run, and reports
/// the final RMSE and mean per-iteration stage times averaged over runs.
/// Within one (value, run) all methods share the training set and the
/// initial random dictionary.
pub fn run_sweep<T: Scalar>(cfg: &SweepConfig, images: &[Raster]) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let workers = Workers::new(cfg.threads);
    let master = Seed(cfg.seed);
    let mut rows = Vec::new();
    for &value in &cfg.values {
        let (s, n, m) = cfg.point(value);
        let mut finals = vec![Vec::with_capacity(cfg.runs_per_point); cfg.methods.len()];
        let mut code_s = vec![Vec::with_capacity(cfg.runs_per_point); cfg.methods.len()];
        let mut update_s = vec![Vec::with_capacity(cfg.runs_per_point); cfg.methods.len()];
        for run in 0..cfg.runs_per_point {
            let seed = master
                .derive(stream::POINT)
                .derive(value as u64)
                .derive(stream::RUN)
                .derive(run as u64);
            let y: SignalSet<T> = extract_patches(images, m, cfg.patches, seed)?;
            let initial = init_dictionary_random::<T>(y.dim(), n, seed)?;
            for (k, &method) in cfg.methods.iter().enumerate() {
                let lc = LearnerConfig::new(method, s, cfg.iterations)
                    .with_seed(seed.0)
                    .with_threads(cfg.threads);
                let trace = learn_with(&y, &initial, &lc, &workers)?;
                let times = trace.mean_stage_times();
                finals[k].push(trace.final_rmse().unwrap_or(f64::NAN));
                code_s[k].push(times.coding);
                update_s[k].push(times.update);
            }
        }
        for (k, &method) in cfg.methods.iter().enumerate() {
            let (mean_rmse, std_rmse) = mean_and_std(&finals[k]);
            rows.push(SweepRow {
                axis: cfg.axis,
                value,
                method,
                mean_rmse,
                std_rmse,
                mean_code_s: mean_and_std(&code_s[k]).0,
                mean_update_s: mean_and_std(&update_s[k]).0,
            });
        }
    }
    Ok(rows)
}

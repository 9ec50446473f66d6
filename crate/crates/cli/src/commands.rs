use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use jau_core::experiments::{
    run_recovery_experiment, run_sweep, run_update_benchmark, RecoveryConfig, SweepAxis,
    SweepConfig,
};
use jau_core::io::synthetic::texture_set;
use jau_core::io::tables::{format_float, write_recovery_table, write_sweep_table};
use jau_core::io::{
    extract_patches, load_pgm, load_signals, save_dictionary, save_run_trace, PatchOptions, Raster,
    TimingColumns,
};
use jau_core::rng::stream;
use jau_core::{
    init_dictionary_random, learn, Algorithm, GroupSize, LearnerConfig, Method, Seed, SignalSetF64,
};
use log::info;

use crate::args::{parse_values, BenchArgs, RecoverArgs, SignalSource, SweepArgs, TrainArgs};

/// Failure classes, each mapped to its own exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(String),
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Io(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<jau_core::Error> for Failure {
    fn from(e: jau_core::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else if e.is_config() {
            Failure::Config(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(format!("I/O error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn threads(t: u64) -> usize {
    usize::try_from(t).unwrap_or(usize::MAX)
}

fn patch_options(source: &SignalSource) -> PatchOptions {
    PatchOptions {
        remove_mean: source.remove_mean,
        ..PatchOptions::default()
    }
}

/// Images named on the command line, or the synthetic set.
fn images(source: &SignalSource, seed: Seed) -> Result<Vec<Raster>, Failure> {
    if source.images.is_empty() {
        if source.textures == 0 || source.texture_size == 0 {
            return Err(Failure::Config("synthetic image count and size must be positive".into()));
        }
        return Ok(texture_set(
            source.textures,
            source.texture_size,
            seed.derive(stream::TEXTURE),
        ));
    }
    source
        .images
        .iter()
        .map(|p| {
            load_pgm(p).map_err(|e| match Failure::from(e) {
                Failure::Io(m) => Failure::Io(format!("{}: {m}", p.display())),
                other => other,
            })
        })
        .collect()
}

fn signals(source: &SignalSource, m: usize, seed: Seed) -> Result<SignalSetF64, Failure> {
    if let Some(path) = &source.patches {
        let y: SignalSetF64 = load_signals(path)?;
        return if m <= y.len() {
            Ok(y.truncated(m)?)
        } else {
            Err(Failure::Config(format!(
                "{} holds {} signals, {m} requested",
                path.display(),
                y.len()
            )))
        };
    }
    let imgs = images(source, seed)?;
    Ok(extract_patches(&imgs, m, patch_options(source), seed.derive(stream::PATCHES))?)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            Failure::Io(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn train(a: &TrainArgs) -> Outcome {
    if a.algo == Algorithm::Mod && a.group_size.is_some() {
        return Err(Failure::Config("--group-size does not apply to mod".into()));
    }
    let method = Method {
        algorithm: a.algo,
        group_size: a.group_size.unwrap_or(GroupSize::SEQUENTIAL),
    };
    let seed = Seed(a.seed);
    let y = match (a.signals, &a.source.patches) {
        (Some(m), _) => signals(&a.source, m, seed)?,
        (None, Some(path)) => load_signals(path)?,
        (None, None) => signals(&a.source, 16384, seed)?,
    };
    let d0 = init_dictionary_random(y.dim(), a.dict_size, seed)?;
    let cfg = LearnerConfig::new(method, a.sparsity, a.iters)
        .with_seed(a.seed)
        .with_threads(threads(a.threads.threads));
    info!(
        "training {method} on {} signals of length {}, n={}, s={}, {} iterations",
        y.len(),
        y.dim(),
        a.dict_size,
        a.sparsity,
        a.iters
    );
    let trace = learn(&y, &d0, &cfg)?;

    if let Some(path) = &a.out_trace {
        let timings = if a.no_timings {
            TimingColumns::Zeroed
        } else {
            TimingColumns::Measured
        };
        save_run_trace(&trace, path, timings)?;
    }
    if let Some(path) = &a.out_dict {
        save_dictionary(&trace.final_dictionary, path)?;
    }
    let final_rmse = trace.final_rmse().map_or_else(
        || jau_core::rmse(&y, &d0, &jau_core::SparseCode::zeros(d0.len(), y.len())),
        |v| Ok(v),
    )?;
    println!("rmse={}", format_float(final_rmse));
    Ok(())
}

pub fn recover(a: &RecoverArgs) -> Outcome {
    let cfg = RecoveryConfig {
        dim: a.dim,
        atoms: a.atoms,
        signals: a.signals,
        sparsity: a.sparsity,
        snr_db: a.snr,
        runs: a.runs,
        iterations: a.iters,
        seed: a.seed,
        threads: threads(a.threads.threads),
    };
    let rows = run_recovery_experiment::<f64>(&cfg, &a.algos)?;
    write_recovery_table(&rows, open_output(a.out_csv.as_deref())?)?;
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    let axis: SweepAxis = a.axis.parse()?;
    let values = parse_values(&a.values).map_err(Failure::Config)?;
    let seed = Seed(a.seed);
    let imgs = match &a.source.patches {
        Some(_) => {
            return Err(Failure::Config(
                "sweep draws fresh patches per point; use --images".into(),
            ))
        }
        None => images(&a.source, seed)?,
    };
    let cfg = SweepConfig {
        axis,
        values,
        sparsity: a.sparsity,
        dict_size: a.dict_size,
        signals: a.signals,
        iterations: a.iters,
        methods: a.algos.clone(),
        runs_per_point: a.runs,
        seed: a.seed,
        threads: threads(a.threads.threads),
        patches: patch_options(&a.source),
    };
    let rows = run_sweep::<f64>(&cfg, &imgs)?;
    let timings = if a.no_timings {
        TimingColumns::Zeroed
    } else {
        TimingColumns::Measured
    };
    write_sweep_table(&rows, open_output(a.out_csv.as_deref())?, timings)?;
    Ok(())
}

pub fn bench(a: &BenchArgs) -> Outcome {
    if a.algo == Algorithm::Mod {
        return Err(Failure::Config("bench compares atom-update sweeps; mod has none".into()));
    }
    let seed = Seed(a.seed);
    let y = signals(&a.source, a.signals, seed)?;
    let d0 = init_dictionary_random(y.dim(), a.dict_size, seed)?;
    let runs = [
        (Method::sequential(a.algo), 1),
        (Method::parallel(a.algo), 1),
        (Method::parallel(a.algo), threads(a.threads.threads)),
    ];
    let rows = run_update_benchmark(&y, &d0, a.sparsity, a.iters, &runs)?;
    let mut out = open_output(a.out_csv.as_deref())?;
    writeln!(out, "algo,group_size,threads,mean_code_s,mean_update_s,final_rmse")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.method,
            r.group_size,
            r.threads,
            format_float(r.mean_code_s),
            format_float(r.mean_update_s),
            format_float(r.final_rmse)
        )?;
    }
    out.flush()?;
    Ok(())
}

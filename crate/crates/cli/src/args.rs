use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use jau_core::{Algorithm, GroupSize, Method};

#[derive(Debug, Parser)]
#[command(name = "jau", version, about = "Dictionary learning with Jacobi atom updates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a dictionary from image patches.
    Train(TrainArgs),
    /// Planted-dictionary recovery experiment.
    Recover(RecoverArgs),
    /// Final error and stage times along one parameter axis.
    Sweep(SweepArgs),
    /// Update-stage timing of sequential versus parallel sweeps.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Threads {
    /// Worker threads for all parallel stages.
    #[arg(long, env = "JAU_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

#[derive(Debug, Args)]
pub struct SignalSource {
    /// PGM images to draw patches from (P2 or P5).
    #[arg(long, num_args = 1.., conflicts_with = "patches")]
    pub images: Vec<PathBuf>,
    /// Precomputed signal matrix in the JAUD container format.
    #[arg(long)]
    pub patches: Option<PathBuf>,
    /// Subtract the mean of every patch.
    #[arg(long)]
    pub remove_mean: bool,
    /// Number of built-in synthetic images used when no input is given.
    #[arg(long, default_value_t = 8)]
    pub textures: usize,
    /// Side length of each synthetic image.
    #[arg(long, default_value_t = 256)]
    pub texture_size: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: Algorithm,
    /// Atoms per Jacobi group: a positive integer or `full`.
    #[arg(long, value_parser = parse_group_size)]
    pub group_size: Option<GroupSize>,
    #[arg(long, default_value_t = 8)]
    pub sparsity: usize,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, default_value_t = 256)]
    pub dict_size: usize,
    /// Number of training signals (a prefix of `--patches` when given).
    #[arg(long)]
    pub signals: Option<usize>,
    #[command(flatten)]
    pub source: SignalSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: Threads,
    #[arg(long)]
    pub out_trace: Option<PathBuf>,
    #[arg(long)]
    pub out_dict: Option<PathBuf>,
    /// Write zeros in the trace timing columns.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[arg(long, default_value_t = 3)]
    pub sparsity: usize,
    /// Signal-to-noise ratio in dB, or `inf`.
    #[arg(long, default_value = "inf", allow_hyphen_values = true, value_parser = parse_snr)]
    pub snr: f64,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Comma separated methods, e.g. `sgk,p-sgk,aksvd`.
    #[arg(long, value_delimiter = ',', default_value = "nsgk,p-nsgk,sgk,p-sgk,aksvd", value_parser = parse_method)]
    pub algos: Vec<Method>,
    /// Learning iterations (defaults to 9 s²).
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub dim: usize,
    #[arg(long, default_value_t = 50)]
    pub atoms: usize,
    #[arg(long, default_value_t = 1500)]
    pub signals: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: Threads,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `s` (sparsity), `n` (dictionary size) or `m` (signal count).
    #[arg(long)]
    pub axis: String,
    /// Inclusive range `start:end:step`, or a single value.
    #[arg(long)]
    pub values: String,
    #[arg(long, default_value_t = 8)]
    pub sparsity: usize,
    #[arg(long, default_value_t = 256)]
    pub dict_size: usize,
    #[arg(long, default_value_t = 16384)]
    pub signals: usize,
    #[arg(long, default_value_t = 50)]
    pub iters: usize,
    #[arg(long, value_delimiter = ',', default_value = "sgk,p-sgk,nsgk,p-nsgk,aksvd,p-aksvd,mod", value_parser = parse_method)]
    pub algos: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[command(flatten)]
    pub source: SignalSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: Threads,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    /// Write zeros in the timing columns.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_algorithm, default_value = "sgk")]
    pub algo: Algorithm,
    #[arg(long, default_value_t = 8)]
    pub sparsity: usize,
    #[arg(long, default_value_t = 5)]
    pub iters: usize,
    #[arg(long, default_value_t = 512)]
    pub dict_size: usize,
    #[arg(long, default_value_t = 16384)]
    pub signals: usize,
    #[command(flatten)]
    pub source: SignalSource,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Threads for the parallel configuration.
    #[command(flatten)]
    pub threads: Threads,
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: jau_core::Error| e.to_string())
}

fn parse_group_size(s: &str) -> Result<GroupSize, String> {
    s.parse().map_err(|e: jau_core::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: jau_core::Error| e.to_string())
}

fn parse_snr(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        other => match other.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("expected a number of dB or 'inf', got '{s}'")),
        },
    }
}

/// Expands `start:end:step` (inclusive) or a single number.
pub fn parse_values(spec: &str) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid value '{t}' in '{spec}'"))
    };
    let (start, end, step) = match parts.as_slice() {
        [v] => {
            let v = num(v)?;
            (v, v, 1)
        }
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, c] => (num(a)?, num(b)?, num(c)?),
        _ => return Err(format!("expected start:end:step, got '{spec}'")),
    };
    if step == 0 {
        return Err("step must be positive".into());
    }
    let values: Vec<usize> = (start..=end).step_by(step).collect();
    if values.is_empty() || values[0] == 0 {
        return Err(format!("'{spec}' contains no positive values"));
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_values("128:512:64").unwrap(), vec![128, 192, 256, 320, 384, 448, 512]);
        assert_eq!(parse_values("4:6").unwrap(), vec![4, 5, 6]);
        assert_eq!(parse_values("7").unwrap(), vec![7]);
        assert!(parse_values("9:3:1").is_err());
        assert!(parse_values("1:5:0").is_err());
        assert!(parse_values("0").is_err());
        assert!(parse_values("a:b").is_err());
    }

    #[test]
    fn snr_values() {
        assert_eq!(parse_snr("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_snr("-5").unwrap(), -5.0);
        assert!(parse_snr("loud").is_err());
    }
}

//! File formats: PGM images in, patch matrices, the `JAUD` binary matrix
//! container, and CSV result tables.

pub mod container;
pub mod patches;
pub mod pgm;
pub mod synthetic;
pub mod tables;

pub use container::{
    load_dictionary, load_signals, read_matrix, save_dictionary, save_signals, write_matrix,
};
pub use patches::{extract_patches, PatchOptions};
pub use pgm::{load_pgm, parse_pgm, save_pgm, Raster};
pub use tables::{format_float, save_run_trace, write_run_trace, TimingColumns};

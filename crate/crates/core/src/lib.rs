//! Dictionary learning for sparse representations with sequential
//! (Gauss-Seidel) and Jacobi (group-parallel) atom updates.
//!
//! The learning loop alternates OMP sparse coding with an atom update sweep.
//! Atoms are updated in consecutive groups: every atom in a group is computed
//! independently from the same snapshot of the dictionary, and the group is
//! committed as a whole before the next group starts. A group size of one
//! gives the classic sequential algorithms (AK-SVD, SGK, NSGK); a group
//! covering the whole dictionary gives their fully parallel variants.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! `*F64` / `*F32` aliases below name the concrete instantiations.

pub mod atom_update;
pub mod error;
pub mod experiments;
pub mod io;
pub mod learner;
pub mod matrix;
pub mod model;
pub mod omp;
pub mod parallel;
pub mod rng;
pub mod scalar;
pub mod scheduler;

pub use error::{Error, Result};
pub use learner::{init_dictionary_from_data, init_dictionary_random, learn};
pub use matrix::DenseMatrix;
pub use model::{
    residual, rmse, Algorithm, Dictionary, GroupSize, LearnerConfig, Method, RunTrace,
    SignalSet, SparseCode, SparseColumn, StageTimes,
};
pub use parallel::Workers;
pub use rng::Seed;
pub use scalar::Scalar;
pub use scheduler::{mod_update, sweep, GroupSchedule, UpdateRule};

pub type DenseMatrixF64 = DenseMatrix<f64>;
pub type SignalSetF64 = SignalSet<f64>;
pub type DictionaryF64 = Dictionary<f64>;
pub type SparseCodeF64 = SparseCode<f64>;
pub type RunTraceF64 = RunTrace<f64>;

pub type DenseMatrixF32 = DenseMatrix<f32>;
pub type SignalSetF32 = SignalSet<f32>;
pub type DictionaryF32 = Dictionary<f32>;
pub type SparseCodeF32 = SparseCode<f32>;
pub type RunTraceF32 = RunTrace<f32>;

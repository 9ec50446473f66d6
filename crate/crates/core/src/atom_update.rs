//! Single-atom update rules.
//!
//! Every rule works on an [`AtomContext`]: the error restricted to the
//! signals that use atom `j`, with the contribution of `d_j` added back,
//! `F = E[:, I_j] + d_j x_{j, I_j}`. The rules are pure functions of the
//! context, so any number of them can run concurrently.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, norm, sum_of_squares, DenseMatrix};
use crate::model::{Dictionary, SignalSet, SparseCode};
use crate::scalar::Scalar;

/// Below this coefficient energy (or update norm) an update is degenerate.
pub const DEGENERATE_THRESHOLD: f64 = 1e-30;
/// Residual columns shorter than this cannot seed a replacement atom.
pub const DEAD_ATOM_RESIDUAL_FLOOR: f64 = 1e-12;

/// Column access to an error matrix `E`.
pub trait ErrorColumns<T> {
    fn error_column(&self, signal: usize) -> &[T];
}

impl<T: Scalar> ErrorColumns<T> for DenseMatrix<T> {
    fn error_column(&self, signal: usize) -> &[T] {
        self.col(signal)
    }
}

/// Restricted error for atom `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomContext<T> {
    pub atom: usize,
    /// `I_j`, increasing.
    pub used_columns: Vec<usize>,
    /// `F`, `p x |I_j|`.
    pub restricted_error: DenseMatrix<T>,
    /// `x_{j, I_j}`, aligned with `used_columns`.
    pub row_coefficients: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContextOutcome<T> {
    Ready(AtomContext<T>),
    /// No signal uses the atom.
    Dead,
}

/// The coefficient row (or the update direction) is numerically zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegenerateUpdate;

impl fmt::Display for DegenerateUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("degenerate atom update")
    }
}

impl std::error::Error for DegenerateUpdate {}

/// Builds `F = E[:, I_j] + d_j x_{j, I_j}` where `E` is the current error
/// for `d` and `x`.
pub fn build_context<T: Scalar, E: ErrorColumns<T> + ?Sized>(
    e: &E,
    d: &Dictionary<T>,
    x: &SparseCode<T>,
    j: usize,
) -> ContextOutcome<T> {
    let used = x.row_index(j);
    if used.is_empty() {
        return ContextOutcome::Dead;
    }
    let coefficients = x.row_coefficients(j);
    let atom = d.atom(j);
    let p = d.dim();
    let mut f = DenseMatrix::zeros(p, used.len());
    for (t, (&c, &v)) in used.iter().zip(&coefficients).enumerate() {
        let dst = f.col_mut(t);
        dst.copy_from_slice(e.error_column(c));
        axpy(v, atom, dst);
    }
    ContextOutcome::Ready(AtomContext {
        atom: j,
        used_columns: used.to_vec(),
        restricted_error: f,
        row_coefficients: coefficients,
    })
}

/// `F xᵀ`, checked against the degenerate thresholds.
fn weighted_sum<T: Scalar>(ctx: &AtomContext<T>) -> std::result::Result<Vec<T>, DegenerateUpdate> {
    let tiny = T::of(DEGENERATE_THRESHOLD);
    if !(sum_of_squares(&ctx.row_coefficients) >= tiny) {
        return Err(DegenerateUpdate);
    }
    let f = &ctx.restricted_error;
    let mut g = vec![T::zero(); f.nrows()];
    for (t, &v) in ctx.row_coefficients.iter().enumerate() {
        axpy(v, f.col(t), &mut g);
    }
    let g_norm = norm(&g);
    if !(g_norm >= tiny) || !g_norm.is_finite() {
        return Err(DegenerateUpdate);
    }
    Ok(g)
}

fn unit_direction<T: Scalar>(mut g: Vec<T>) -> Vec<T> {
    let g_norm = norm(&g);
    for v in &mut g {
        *v = *v / g_norm;
    }
    g
}

/// Least-squares atom `F xᵀ / (x xᵀ)` before normalization.
pub fn sgk_solution<T: Scalar>(ctx: &AtomContext<T>) -> std::result::Result<Vec<T>, DegenerateUpdate> {
    let mut g = weighted_sum(ctx)?;
    let energy = sum_of_squares(&ctx.row_coefficients);
    for v in &mut g {
        *v = *v / energy;
    }
    Ok(g)
}

/// SGK update: the normalized least-squares atom. Normalizing
/// `F xᵀ / (x xᵀ)` is the same as normalizing `F xᵀ`, which is done
/// directly so SGK and AK-SVD produce bit-identical directions.
pub fn sgk_update<T: Scalar>(ctx: &AtomContext<T>) -> std::result::Result<Vec<T>, DegenerateUpdate> {
    weighted_sum(ctx).map(unit_direction)
}

/// AK-SVD update: one power-method step on `F`, returning the unit atom
/// `F xᵀ / ||F xᵀ||` and the refreshed coefficients `Fᵀ d`.
pub fn aksvd_update<T: Scalar>(
    ctx: &AtomContext<T>,
) -> std::result::Result<(Vec<T>, Vec<T>), DegenerateUpdate> {
    let d = unit_direction(weighted_sum(ctx)?);
    let coefficients = ctx.restricted_error.columns().map(|f| dot(f, &d)).collect();
    Ok((d, coefficients))
}

/// NSGK signal matrix `Z = Y + D X_prev - D X_cur`.
pub fn nsgk_signal_matrix<T: Scalar>(
    y: &SignalSet<T>,
    d: &Dictionary<T>,
    x_prev: &SparseCode<T>,
    x_cur: &SparseCode<T>,
) -> Result<DenseMatrix<T>> {
    for (name, x) in [("previous", x_prev), ("current", x_cur)] {
        if x.n_atoms() != d.len() || x.n_signals() != y.len() {
            return Err(Error::dimension(format!(
                "{name} code is {}x{}, expected {}x{}",
                x.n_atoms(),
                x.n_signals(),
                d.len(),
                y.len()
            )));
        }
    }
    if d.dim() != y.dim() {
        return Err(Error::dimension(format!(
            "atoms have length {}, signals have length {}",
            d.dim(),
            y.dim()
        )));
    }
    let mut z = y.matrix().clone();
    for c in 0..y.len() {
        let col = z.col_mut(c);
        for &(i, v) in x_prev.column(c).entries() {
            axpy(v, d.atom(i), col);
        }
        for &(i, v) in x_cur.column(c).entries() {
            axpy(-v, d.atom(i), col);
        }
    }
    Ok(z)
}

/// Replacement for an unused atom: the normalized error column of the
/// worst represented signal not already in `used_signals` (lowest index on
/// ties). Returns the atom and the chosen signal, or `None` when every
/// candidate residual is below [`DEAD_ATOM_RESIDUAL_FLOOR`] and the old atom
/// should be kept.
pub fn replace_dead_atom<T: Scalar>(
    e: &DenseMatrix<T>,
    used_signals: &BTreeSet<usize>,
) -> Option<(Vec<T>, usize)> {
    select_replacement(e, &column_energies(e), used_signals)
}

/// Squared norm of every column of `e`.
pub fn column_energies<T: Scalar>(e: &DenseMatrix<T>) -> Vec<T> {
    e.columns().map(sum_of_squares).collect()
}

/// [`replace_dead_atom`] with precomputed [`column_energies`].
pub fn select_replacement<T: Scalar>(
    e: &DenseMatrix<T>,
    energies: &[T],
    used_signals: &BTreeSet<usize>,
) -> Option<(Vec<T>, usize)> {
    let mut best: Option<(usize, T)> = None;
    for (c, &energy) in energies.iter().enumerate() {
        if used_signals.contains(&c) {
            continue;
        }
        if best.is_none_or(|(_, b)| energy > b) {
            best = Some((c, energy));
        }
    }
    let (c, energy) = best?;
    let nrm = energy.sqrt();
    if !(nrm >= T::of(DEAD_ATOM_RESIDUAL_FLOOR)) || !nrm.is_finite() {
        return None;
    }
    Some((e.col(c).iter().map(|&v| v / nrm).collect(), c))
}

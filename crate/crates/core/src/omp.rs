//! Orthogonal Matching Pursuit with a progressively updated Cholesky factor
//! of the support Gram matrix.
//!
//! Batch coding precomputes `G = DᵀD` once per dictionary, so each round
//! updates the correlations from `Dᵀy` and `G` instead of re-projecting the
//! residual onto every atom. Selection ties always go to the lowest atom
//! index.

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, norm, DenseMatrix};
use crate::model::{Dictionary, SignalSet, SparseCode, SparseColumn};
use crate::parallel::Workers;
use crate::scalar::Scalar;

/// Residual norm (relative to the signal norm) at which coding stops early.
pub const RELATIVE_RESIDUAL_TOLERANCE: f64 = 1e-12;
/// A new Cholesky pivot below this value marks the support as singular.
pub const MIN_CHOLESKY_PIVOT: f64 = 1e-13;

/// Scratch space for coding one signal at a time. Reusing a workspace
/// across signals gives the same results as a fresh one.
#[derive(Clone, Debug, Default)]
pub struct OmpWorkspace<T> {
    selected: Vec<usize>,
    in_support: Vec<bool>,
    /// Lower Cholesky factor of the support Gram matrix, row-major `s x s`.
    chol: Vec<T>,
    /// `D_S^T y`
    projections: Vec<T>,
    coefficients: Vec<T>,
    gram_column: Vec<T>,
    residual: Vec<T>,
    residual_norms: Vec<T>,
    initial_correlations: Vec<T>,
    correlations: Vec<T>,
}

impl<T: Scalar> OmpWorkspace<T> {
    pub fn new() -> Self {
        Self {
            selected: Vec::new(),
            in_support: Vec::new(),
            chol: Vec::new(),
            projections: Vec::new(),
            coefficients: Vec::new(),
            gram_column: Vec::new(),
            residual: Vec::new(),
            residual_norms: Vec::new(),
            initial_correlations: Vec::new(),
            correlations: Vec::new(),
        }
    }

    /// Residual norms of the last encoded signal: the signal norm followed
    /// by the norm after each completed round.
    pub fn residual_norms(&self) -> &[T] {
        &self.residual_norms
    }

    /// Atoms chosen for the last signal, in selection order.
    pub fn selection_order(&self) -> &[usize] {
        &self.selected
    }

    fn reset(&mut self, p: usize, n: usize, s: usize) {
        for &i in &self.selected {
            if let Some(flag) = self.in_support.get_mut(i) {
                *flag = false;
            }
        }
        self.in_support.resize(n, false);
        self.selected.clear();
        self.projections.clear();
        self.residual_norms.clear();
        self.chol.clear();
        self.chol.resize(s * s, T::zero());
        self.coefficients.clear();
        self.coefficients.resize(s, T::zero());
        self.gram_column.clear();
        self.gram_column.resize(s, T::zero());
        self.residual.clear();
        self.residual.resize(p, T::zero());
    }

    /// Codes `y` with at most `s` atoms of `d`.
    pub fn encode(&mut self, d: &Dictionary<T>, y: &[T], s: usize) -> SparseColumn<T> {
        self.encode_with(d, None, y, s)
    }

    /// Codes `y` using the precomputed Gram matrix `DᵀD` (see [`gram`]).
    pub fn encode_with_gram(
        &mut self,
        d: &Dictionary<T>,
        gram: &DenseMatrix<T>,
        y: &[T],
        s: usize,
    ) -> SparseColumn<T> {
        self.encode_with(d, Some(gram), y, s)
    }

    fn encode_with(
        &mut self,
        d: &Dictionary<T>,
        gram: Option<&DenseMatrix<T>>,
        y: &[T],
        s: usize,
    ) -> SparseColumn<T> {
        let p = d.dim();
        let n = d.len();
        debug_assert_eq!(y.len(), p);
        let s = s.min(p).min(n);
        self.reset(p, n, s);

        let y_norm = norm(y);
        if !(y_norm > T::zero()) || !y_norm.is_finite() {
            return SparseColumn::empty();
        }
        self.residual.copy_from_slice(y);
        self.residual_norms.push(y_norm);
        let stop = T::of(RELATIVE_RESIDUAL_TOLERANCE) * y_norm;
        let min_pivot = T::of(MIN_CHOLESKY_PIVOT);

        // Dᵀy; with a Gram matrix the correlations Dᵀr are then obtained as
        // Dᵀy - G[:, S] x instead of from the explicit residual
        self.initial_correlations.clear();
        if gram.is_some() {
            self.initial_correlations
                .extend((0..n).map(|i| dot(d.atom(i), y)));
        }

        for _ in 0..s {
            // most correlated atom, lowest index on ties
            let mut best = None;
            let mut best_abs = T::zero();
            if let Some(g) = gram {
                // G is symmetric, so G[:, S] x is a sum of contiguous columns
                self.correlations.clear();
                self.correlations.extend_from_slice(&self.initial_correlations);
                for (t, &j) in self.selected.iter().enumerate() {
                    axpy(-self.coefficients[t], g.col(j), &mut self.correlations);
                }
            }
            for i in 0..n {
                if self.in_support[i] {
                    continue;
                }
                let c = match gram {
                    Some(_) => self.correlations[i],
                    None => dot(d.atom(i), &self.residual),
                }
                .abs();
                if c > best_abs {
                    best_abs = c;
                    best = Some(i);
                }
            }
            let Some(atom_idx) = best else { break };
            let atom = d.atom(atom_idx);
            let k = self.selected.len();

            // new row of L: solve L w = D_S^T a
            for t in 0..k {
                let mut v = match gram {
                    Some(g) => g.get(self.selected[t], atom_idx),
                    None => dot(d.atom(self.selected[t]), atom),
                };
                for u in 0..t {
                    v -= self.chol[t * s + u] * self.gram_column[u];
                }
                self.gram_column[t] = v / self.chol[t * s + t];
            }
            let mut diag = match gram {
                Some(g) => g.get(atom_idx, atom_idx),
                None => dot(atom, atom),
            };
            for t in 0..k {
                diag -= self.gram_column[t] * self.gram_column[t];
            }
            if !(diag > T::zero()) {
                break;
            }
            let pivot = diag.sqrt();
            if pivot < min_pivot {
                break;
            }
            for t in 0..k {
                self.chol[k * s + t] = self.gram_column[t];
            }
            self.chol[k * s + k] = pivot;
            self.selected.push(atom_idx);
            self.in_support[atom_idx] = true;
            self.projections.push(match gram {
                Some(_) => self.initial_correlations[atom_idx],
                None => dot(atom, y),
            });

            self.solve_coefficients(s);
            self.residual.copy_from_slice(y);
            for (t, &i) in self.selected.iter().enumerate() {
                let c = self.coefficients[t];
                for (r, &a) in self.residual.iter_mut().zip(d.atom(i)) {
                    *r -= c * a;
                }
            }
            let r_norm = norm(&self.residual);
            self.residual_norms.push(r_norm);
            if r_norm <= stop {
                break;
            }
        }

        let k = self.selected.len();
        if self.coefficients[..k].iter().any(|c| !c.is_finite()) {
            return SparseColumn::empty();
        }
        let entries = self
            .selected
            .iter()
            .zip(&self.coefficients[..k])
            .filter(|(_, c)| **c != T::zero())
            .map(|(&i, &c)| (i, c))
            .collect();
        SparseColumn::new(entries).unwrap_or_else(|_| SparseColumn::empty())
    }

    /// `L Lᵀ x = D_S^T y` on the current support.
    fn solve_coefficients(&mut self, s: usize) {
        let k = self.selected.len();
        let (l, x) = (&self.chol, &mut self.coefficients);
        for i in 0..k {
            let mut v = self.projections[i];
            for t in 0..i {
                v -= l[i * s + t] * x[t];
            }
            x[i] = v / l[i * s + i];
        }
        for i in (0..k).rev() {
            let mut v = x[i];
            for t in i + 1..k {
                v -= l[t * s + i] * x[t];
            }
            x[i] = v / l[i * s + i];
        }
    }
}

fn check_sparsity<T: Scalar>(d: &Dictionary<T>, s: usize) -> Result<()> {
    if s == 0 || s > d.dim() || s > d.len() {
        return Err(Error::config(format!(
            "sparsity {s} must lie in 1..=min(p={}, n={})",
            d.dim(),
            d.len()
        )));
    }
    Ok(())
}

/// Gram matrix `DᵀD` of the dictionary (symmetric, `n x n`).
pub fn gram<T: Scalar>(d: &Dictionary<T>, workers: &Workers) -> DenseMatrix<T> {
    let n = d.len();
    let columns = workers.map_indexed(n, |j| {
        (0..n).map(|i| dot(d.atom(i), d.atom(j))).collect::<Vec<T>>()
    });
    DenseMatrix::from_columns(n, &columns).expect("square Gram matrix")
}

/// Sparse code of a single signal.
pub fn encode_signal<T: Scalar>(d: &Dictionary<T>, y: &[T], s: usize) -> Result<SparseColumn<T>> {
    check_sparsity(d, s)?;
    if y.len() != d.dim() {
        return Err(Error::dimension(format!(
            "signal has length {}, atoms have length {}",
            y.len(),
            d.dim()
        )));
    }
    Ok(OmpWorkspace::new().encode(d, y, s))
}

/// Codes every column of `y` independently. The result does not depend on
/// the number of worker threads.
pub fn encode_set<T: Scalar>(
    d: &Dictionary<T>,
    y: &SignalSet<T>,
    s: usize,
    workers: &Workers,
) -> Result<SparseCode<T>> {
    check_sparsity(d, s)?;
    if y.dim() != d.dim() {
        return Err(Error::dimension(format!(
            "signals have length {}, atoms have length {}",
            y.dim(),
            d.dim()
        )));
    }
    let g = gram(d, workers);
    let columns = workers.map_indexed_with(y.len(), OmpWorkspace::new, |ws, c| {
        ws.encode_with_gram(d, &g, y.signal(c), s)
    });
    SparseCode::new(d.len(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    #[test]
    fn identity_dictionary_picks_largest_entry() {
        let d = Dictionary::new(DenseMatrix::<f64>::identity(2)).unwrap();
        let col = encode_signal(&d, &[0.8, 0.1], 1).unwrap();
        assert_eq!(col.entries(), &[(0, 0.8)]);
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let d = Dictionary::new(DenseMatrix::<f64>::identity(3)).unwrap();
        let col = encode_signal(&d, &[0.0, 0.5, -0.5], 1).unwrap();
        assert_eq!(col.entries(), &[(1, 0.5)]);
    }

    #[test]
    fn zero_signal_gives_empty_column() {
        let d = Dictionary::new(DenseMatrix::<f64>::identity(3)).unwrap();
        assert!(encode_signal(&d, &[0.0; 3], 2).unwrap().is_empty());
    }

    #[test]
    fn full_support_solves_square_system() {
        let raw = DenseMatrix::from_column_major(3, 3, vec![1.0, 0.2, 0.0, 0.3, 1.0, 0.1, 0.0, 0.4, 1.0])
            .unwrap();
        let d = Dictionary::from_unnormalized(raw).unwrap();
        let y = [0.3, -1.2, 0.7];
        let col = encode_signal(&d, &y, 3).unwrap();
        let mut r = y.to_vec();
        for &(i, v) in col.entries() {
            for (ri, a) in r.iter_mut().zip(d.atom(i)) {
                *ri -= v * a;
            }
        }
        assert!(norm(&r) < 1e-10);
    }

    #[test]
    fn duplicate_atoms_stop_at_singular_support() {
        let raw = DenseMatrix::from_column_major(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let d = Dictionary::new(raw).unwrap();
        let col = encode_signal(&d, &[1.0, 1.0], 2).unwrap();
        assert_eq!(col.entries(), &[(0, 1.0)]);
    }

    #[test]
    fn bad_sparsity_is_rejected() {
        let d = Dictionary::new(DenseMatrix::<f64>::identity(2)).unwrap();
        assert!(encode_signal(&d, &[1.0, 0.0], 3).is_err());
        assert!(encode_signal(&d, &[1.0, 0.0], 0).is_err());
        assert!(encode_signal(&d, &[1.0], 1).is_err());
    }

    #[test]
    fn workspace_reuse_has_no_memory() {
        let d = Dictionary::from_unnormalized(DenseMatrix::from_fn(4, 6, |r, c| {
            ((r * 7 + c * 3) % 5) as f64 - 1.5
        }))
        .unwrap();
        let a = [0.1, 2.0, -0.3, 0.5];
        let b = [1.0, -1.0, 0.25, 0.0];
        let mut ws = OmpWorkspace::new();
        let _ = ws.encode(&d, &a, 3);
        let reused = ws.encode(&d, &b, 3);
        let fresh = OmpWorkspace::new().encode(&d, &b, 3);
        assert_eq!(reused, fresh);
    }
}

//! Group sweep over the atoms (Jacobi atom updates) and the MOD
//! whole-dictionary update.
//!
//! Atoms are split into consecutive groups of `g`. Before each group the
//! error is recomputed from the partially updated dictionary; all atoms of
//! the group are then updated independently from that snapshot and
//! committed together. Atom `j` therefore sees the new value of atom `i`
//! exactly when `i / g < j / g` (0-based indices).

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::ops::Range;

use crate::atom_update::{
    column_energies, select_replacement, ErrorColumns, DEGENERATE_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::matrix::{
    axpy, cholesky_in_place, cholesky_solve_in_place, dot, norm, normalize, sum_of_squares,
    DenseMatrix,
};
use crate::model::{residual_column_into, Dictionary, SignalSet, SparseCode};
use crate::parallel::Workers;
use crate::scalar::Scalar;

/// Per-atom update rule applied inside a sweep. NSGK is the SGK rule run
/// on the modified signal matrix with the previous iteration's code; the
/// caller supplies both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateRule {
    Sgk,
    AkSvd,
    Nsgk,
}

impl UpdateRule {
    fn updates_coefficients(self) -> bool {
        self == UpdateRule::AkSvd
    }
}

/// Consecutive partition of `0..n` into blocks of `group_size` (the last
/// block may be shorter).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroupSchedule {
    atoms: usize,
    group_size: usize,
}

impl GroupSchedule {
    pub fn new(atoms: usize, group_size: usize) -> Result<Self> {
        if group_size == 0 || group_size > atoms {
            return Err(Error::config(format!(
                "group size {group_size} must lie in 1..={atoms}"
            )));
        }
        Ok(Self { atoms, group_size })
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn len(&self) -> usize {
        self.atoms.div_ceil(self.group_size)
    }

    pub fn is_empty(&self) -> bool {
        self.atoms == 0
    }

    pub fn groups(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        (0..self.len()).map(|l| {
            let start = l * self.group_size;
            start..(start + self.group_size).min(self.atoms)
        })
    }

    /// Group containing atom `j`.
    pub fn group_of(&self, j: usize) -> usize {
        j / self.group_size
    }

    /// Whether the update of atom `j` sees the already updated atom `i`.
    pub fn sees_updated(&self, i: usize, j: usize) -> bool {
        self.group_of(i) < self.group_of(j)
    }
}

/// Dictionary and code after one sweep, with the exceptional events seen.
#[derive(Clone, Debug)]
pub struct SweepOutcome<T> {
    pub dictionary: Dictionary<T>,
    /// Code with the refreshed coefficients; `None` when the rule leaves
    /// the code unchanged.
    pub code: Option<SparseCode<T>>,
    pub dead_atoms: usize,
    pub dead_atoms_kept: usize,
}

/// Error columns for a subset of signals, addressed by signal index.
struct SubsetErrors<'a, T> {
    slots: &'a [usize],
    data: &'a [T],
    rows: usize,
}

impl<T> ErrorColumns<T> for SubsetErrors<'_, T> {
    fn error_column(&self, signal: usize) -> &[T] {
        let k = self.slots[signal];
        &self.data[k * self.rows..(k + 1) * self.rows]
    }
}

/// Full error matrix, reusing the columns already computed for the group.
fn complete_errors<T: Scalar>(
    signals: &DenseMatrix<T>,
    d: &Dictionary<T>,
    x: &SparseCode<T>,
    known: &SubsetErrors<'_, T>,
    workers: &Workers,
) -> DenseMatrix<T> {
    let p = signals.nrows();
    let mut e = DenseMatrix::zeros(p, signals.ncols());
    workers.for_each_chunk_mut(e.as_mut_slice(), p, |c, out| {
        if known.slots[c] == usize::MAX {
            residual_column_into(signals.col(c), d, x.column(c), out);
        } else {
            out.copy_from_slice(known.error_column(c));
        }
    });
    e
}

enum AtomResult<T> {
    Updated { atom: Vec<T>, row: Option<Vec<T>> },
    Dead,
}

/// Applies `rule` to atom `j` without materializing `F`: with
/// `F = E_I + d_j x`, `F xᵀ = E_I xᵀ + (x xᵀ) d_j` and `Fᵀ a = E_Iᵀ a + x (d_jᵀ a)`.
fn update_atom<T: Scalar, E: ErrorColumns<T> + ?Sized>(
    e: &E,
    d: &Dictionary<T>,
    x: &SparseCode<T>,
    j: usize,
    rule: UpdateRule,
) -> AtomResult<T> {
    let used = x.row_index(j);
    if used.is_empty() {
        return AtomResult::Dead;
    }
    let coefficients = x.row_coefficients(j);
    let tiny = T::of(DEGENERATE_THRESHOLD);
    let energy = sum_of_squares(&coefficients);
    if !(energy >= tiny) {
        return AtomResult::Dead;
    }
    let old = d.atom(j);
    let mut g = vec![T::zero(); d.dim()];
    for (&c, &v) in used.iter().zip(&coefficients) {
        axpy(v, e.error_column(c), &mut g);
    }
    axpy(energy, old, &mut g);
    let g_norm = norm(&g);
    if !(g_norm >= tiny) || !g_norm.is_finite() {
        return AtomResult::Dead;
    }
    for v in &mut g {
        *v = *v / g_norm;
    }
    let row = rule.updates_coefficients().then(|| {
        let overlap = dot(old, &g);
        used.iter()
            .zip(&coefficients)
            .map(|(&c, &v)| dot(e.error_column(c), &g) + v * overlap)
            .collect()
    });
    AtomResult::Updated { atom: g, row }
}

/// One full sweep of atom updates with groups of `group_size` atoms.
///
/// `signals` is `Y` (or `Z` for NSGK) and `code` the representation the
/// atom updates use (`X`, or the previous iteration's code for NSGK).
pub fn sweep<T: Scalar>(
    dictionary: &Dictionary<T>,
    signals: &DenseMatrix<T>,
    code: &SparseCode<T>,
    rule: UpdateRule,
    group_size: usize,
    workers: &Workers,
) -> Result<SweepOutcome<T>> {
    let schedule = GroupSchedule::new(dictionary.len(), group_size)?;
    if signals.nrows() != dictionary.dim()
        || code.n_atoms() != dictionary.len()
        || code.n_signals() != signals.ncols()
    {
        return Err(Error::dimension(format!(
            "sweep inputs disagree: signals {}x{}, dictionary {}x{}, code {}x{}",
            signals.nrows(),
            signals.ncols(),
            dictionary.dim(),
            dictionary.len(),
            code.n_atoms(),
            code.n_signals()
        )));
    }

    let p = dictionary.dim();
    let mut d = dictionary.clone();
    let mut x = Cow::Borrowed(code);
    let mut slots = vec![usize::MAX; signals.ncols()];
    let mut needed: Vec<usize> = Vec::new();
    let mut errors: Vec<T> = Vec::new();
    let mut replacement_sources = BTreeSet::new();
    let mut dead_atoms = 0;
    let mut dead_atoms_kept = 0;

    for group in schedule.groups() {
        // E = S - D X, on the columns this group touches
        needed.clear();
        for j in group.clone() {
            for &c in x.row_index(j) {
                if slots[c] == usize::MAX {
                    slots[c] = needed.len();
                    needed.push(c);
                }
            }
        }
        errors.clear();
        errors.resize(p * needed.len(), T::zero());
        {
            let (d, x, needed) = (&d, &x, &needed);
            workers.for_each_chunk_mut(&mut errors, p, |k, out| {
                let c = needed[k];
                residual_column_into(signals.col(c), d, x.column(c), out);
            });
        }
        let view = SubsetErrors {
            slots: &slots,
            data: &errors,
            rows: p,
        };

        let results = {
            let (d, x, view) = (&d, &x, &view);
            let start = group.start;
            if group.len() == 1 {
                vec![update_atom(view, d, x, start, rule)]
            } else {
                workers.map_indexed(group.len(), |t| update_atom(view, d, x, start + t, rule))
            }
        };

        let mut full_error = None;
        let mut replacements = Vec::new();
        for (t, result) in results.iter().enumerate() {
            if let AtomResult::Dead = result {
                dead_atoms += 1;
                let (e, energies) = full_error.get_or_insert_with(|| {
                    let e = complete_errors(signals, &d, &x, &view, workers);
                    let energies = column_energies(&e);
                    (e, energies)
                });
                match select_replacement(e, energies, &replacement_sources) {
                    Some((atom, c)) => {
                        replacement_sources.insert(c);
                        replacements.push((group.start + t, atom));
                    }
                    None => dead_atoms_kept += 1,
                }
            }
        }

        for (t, result) in results.into_iter().enumerate() {
            if let AtomResult::Updated { atom, row } = result {
                let j = group.start + t;
                d.set_atom(j, &atom);
                if let Some(row) = row {
                    x.to_mut().write_row(j, &row);
                }
            }
        }
        for (j, atom) in replacements {
            d.set_atom(j, &atom);
        }
        for &c in &needed {
            slots[c] = usize::MAX;
        }
    }

    let code = match x {
        Cow::Owned(mut x) => {
            x.prune_zeros();
            Some(x)
        }
        Cow::Borrowed(_) => None,
    };
    Ok(SweepOutcome {
        dictionary: d,
        code,
        dead_atoms,
        dead_atoms_kept,
    })
}

/// Result of a MOD update.
#[derive(Clone, Debug)]
pub struct ModOutcome<T> {
    pub dictionary: Dictionary<T>,
    /// `X Xᵀ` was singular and a ridge term was added.
    pub regularized: bool,
    /// Atoms whose least-squares column vanished and were carried over.
    pub kept_atoms: usize,
}

/// Relative ridge added to `X Xᵀ` when it cannot be factored.
pub const MOD_RIDGE: f64 = 1e-10;

/// Least-squares solution of `D X = Y`, i.e. `D = Y Xᵀ (X Xᵀ)^{-1}`, before
/// normalization. The flag reports whether a ridge term was needed.
pub fn mod_solution<T: Scalar>(
    y: &SignalSet<T>,
    x: &SparseCode<T>,
) -> Result<(DenseMatrix<T>, bool)> {
    if x.n_signals() != y.len() {
        return Err(Error::dimension(format!(
            "code has {} columns, signal set has {}",
            x.n_signals(),
            y.len()
        )));
    }
    let n = x.n_atoms();
    let p = y.dim();

    // G = X Xᵀ (symmetric, column-major), B = Y Xᵀ
    let mut gram = vec![T::zero(); n * n];
    let mut cross = DenseMatrix::zeros(p, n);
    for (c, col) in x.columns().iter().enumerate() {
        let entries = col.entries();
        for &(a, va) in entries {
            for &(b, vb) in entries {
                gram[b * n + a] += va * vb;
            }
            axpy(va, y.signal(c), cross.col_mut(a));
        }
    }

    let trace: T = (0..n).map(|i| gram[i * n + i]).fold(T::zero(), |a, b| a + b);
    if !(trace > T::zero()) {
        return Ok((DenseMatrix::zeros(p, n), true));
    }
    let max_diag = (0..n).map(|i| gram[i * n + i]).fold(T::zero(), T::max);
    let min_pivot = max_diag * T::of(1e-14);

    let mut factor = gram.clone();
    let mut regularized = false;
    if cholesky_in_place(&mut factor, n, min_pivot).is_err() {
        regularized = true;
        let mut ridge = T::of(MOD_RIDGE) * trace / T::of(n as f64);
        loop {
            factor.copy_from_slice(&gram);
            for i in 0..n {
                factor[i * n + i] += ridge;
            }
            if cholesky_in_place(&mut factor, n, T::zero()).is_ok() {
                break;
            }
            ridge *= T::of(10.0);
        }
    }

    // G Dᵀ = Bᵀ, one dictionary row at a time
    let mut d = DenseMatrix::zeros(p, n);
    let mut row = vec![T::zero(); n];
    for r in 0..p {
        for (i, v) in row.iter_mut().enumerate() {
            *v = cross.get(r, i);
        }
        cholesky_solve_in_place(&factor, n, &mut row);
        for (i, &v) in row.iter().enumerate() {
            d.set(r, i, v);
        }
    }
    Ok((d, regularized))
}

/// MOD dictionary update with unit-norm columns. Columns that come out
/// numerically zero (atoms no signal uses) keep their `previous` value.
pub fn mod_update<T: Scalar>(
    y: &SignalSet<T>,
    x: &SparseCode<T>,
    previous: &Dictionary<T>,
) -> Result<ModOutcome<T>> {
    if previous.len() != x.n_atoms() || previous.dim() != y.dim() {
        return Err(Error::dimension(format!(
            "previous dictionary is {}x{}, expected {}x{}",
            previous.dim(),
            previous.len(),
            y.dim(),
            x.n_atoms()
        )));
    }
    let (mut d, regularized) = mod_solution(y, x)?;
    let floor = T::of(DEGENERATE_THRESHOLD);
    let mut kept_atoms = 0;
    for j in 0..d.ncols() {
        let col = d.col_mut(j);
        let nrm = normalize(col);
        if !(nrm > floor) || !nrm.is_finite() {
            col.copy_from_slice(previous.atom(j));
            kept_atoms += 1;
        }
    }
    Ok(ModOutcome {
        dictionary: Dictionary::new(d)?,
        regularized,
        kept_atoms,
    })
}

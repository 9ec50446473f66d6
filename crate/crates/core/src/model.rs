//! Core value types shared by every algorithm: signals, dictionaries,
//! sparse codes, learner configuration and run traces, plus the
//! representation error `E = Y - D X` and its RMSE.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{axpy, norm, normalize, sum_of_squares, DenseMatrix};
use crate::scalar::Scalar;

/// Relative tolerance for the unit-norm atom invariant.
pub fn unit_norm_tolerance<T: Scalar>() -> T {
    T::of(1e-12).max(T::epsilon() * T::of(64.0))
}

/// Training signals, one per column (`p` rows, `m` columns).
#[derive(Clone, Debug, PartialEq)]
pub struct SignalSet<T> {
    data: DenseMatrix<T>,
}

impl<T: Scalar> SignalSet<T> {
    pub fn new(data: DenseMatrix<T>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::config(format!(
                "signal set must be non-empty, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if !data.is_finite() {
            return Err(Error::config("signal set contains non-finite entries"));
        }
        Ok(Self { data })
    }

    /// Signal dimension `p`.
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Number of signals `m`.
    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.ncols() == 0
    }

    pub fn signal(&self, i: usize) -> &[T] {
        self.data.col(i)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.data
    }

    /// Keeps the first `m` signals.
    pub fn truncated(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return Err(Error::config(format!(
                "cannot take {m} signals from a set of {}",
                self.len()
            )));
        }
        let p = self.dim();
        Self::new(DenseMatrix::from_column_major(
            p,
            m,
            self.data.as_slice()[..p * m].to_vec(),
        )?)
    }
}

/// Dictionary of `n` unit-norm atoms of length `p`, stored as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary<T> {
    atoms: DenseMatrix<T>,
}

impl<T: Scalar> Dictionary<T> {
    /// Wraps a matrix whose columns already have unit norm.
    pub fn new(atoms: DenseMatrix<T>) -> Result<Self> {
        let dict = Self::unchecked(atoms)?;
        if let Some((j, nrm)) = dict.first_non_unit_atom() {
            return Err(Error::config(format!(
                "atom {j} has norm {nrm}, expected 1"
            )));
        }
        Ok(dict)
    }

    /// Normalizes every column of `atoms`; a zero column is an error.
    pub fn from_unnormalized(mut atoms: DenseMatrix<T>) -> Result<Self> {
        for j in 0..atoms.ncols() {
            if normalize(atoms.col_mut(j)) == T::zero() {
                return Err(Error::config(format!("atom {j} is zero")));
            }
        }
        Self::unchecked(atoms)
    }

    fn unchecked(atoms: DenseMatrix<T>) -> Result<Self> {
        if atoms.nrows() == 0 || atoms.ncols() == 0 {
            return Err(Error::config("dictionary must have at least one atom"));
        }
        if !atoms.is_finite() {
            return Err(Error::config("dictionary contains non-finite entries"));
        }
        Ok(Self { atoms })
    }

    /// Atom length `p`.
    pub fn dim(&self) -> usize {
        self.atoms.nrows()
    }

    /// Atom count `n`.
    pub fn len(&self) -> usize {
        self.atoms.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.ncols() == 0
    }

    pub fn atom(&self, j: usize) -> &[T] {
        self.atoms.col(j)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.atoms
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.atoms
    }

    /// Replaces atom `j`; the caller guarantees unit norm.
    pub(crate) fn set_atom(&mut self, j: usize, atom: &[T]) {
        self.atoms.col_mut(j).copy_from_slice(atom);
    }

    /// First atom violating the unit-norm invariant, with its norm.
    pub fn first_non_unit_atom(&self) -> Option<(usize, T)> {
        let tol = unit_norm_tolerance::<T>();
        self.atoms
            .columns()
            .map(norm)
            .enumerate()
            .find(|(_, nrm)| !((*nrm - T::one()).abs() <= tol))
    }

    pub fn is_unit_norm(&self) -> bool {
        self.first_non_unit_atom().is_none()
    }
}

/// One column of a sparse code: `(atom index, coefficient)` pairs sorted by index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseColumn<T> {
    entries: Vec<(usize, T)>,
}

impl<T: Scalar> SparseColumn<T> {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    /// Sorts the entries by index. Duplicate indices, exact zeros and
    /// non-finite coefficients are rejected.
    pub fn new(mut entries: Vec<(usize, T)>) -> Result<Self> {
        entries.sort_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::config(format!("duplicate atom index {}", w[0].0)));
            }
        }
        if let Some(&(i, v)) = entries.iter().find(|(_, v)| *v == T::zero() || !v.is_finite()) {
            return Err(Error::config(format!(
                "invalid stored coefficient {v} at atom {i}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, atom: usize) -> Option<T> {
        self.position(atom).map(|k| self.entries[k].1)
    }

    fn position(&self, atom: usize) -> Option<usize> {
        self.entries.binary_search_by_key(&atom, |&(i, _)| i).ok()
    }
}

/// Column-sparse representation matrix `X` (`n x m`) with its row
/// occupancy index: `row_index(j)` lists, in increasing order, the signals
/// whose representation uses atom `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseCode<T> {
    atoms: usize,
    columns: Vec<SparseColumn<T>>,
    rows: Vec<Vec<usize>>,
}

impl<T: Scalar> SparseCode<T> {
    pub fn new(atoms: usize, columns: Vec<SparseColumn<T>>) -> Result<Self> {
        for (c, col) in columns.iter().enumerate() {
            if let Some(&(i, _)) = col.entries.last() {
                if i >= atoms {
                    return Err(Error::dimension(format!(
                        "column {c} references atom {i} of {atoms}"
                    )));
                }
            }
        }
        let rows = Self::occupancy(atoms, &columns);
        Ok(Self {
            atoms,
            columns,
            rows,
        })
    }

    /// All-zero code with `m` empty columns.
    pub fn zeros(atoms: usize, m: usize) -> Self {
        Self {
            atoms,
            columns: vec![SparseColumn::empty(); m],
            rows: vec![Vec::new(); atoms],
        }
    }

    /// Sparse copy of a dense `n x m` matrix, keeping nonzero entries.
    pub fn from_dense(dense: &DenseMatrix<T>) -> Result<Self> {
        let columns = dense
            .columns()
            .map(|col| {
                SparseColumn::new(
                    col.iter()
                        .enumerate()
                        .filter(|(_, v)| **v != T::zero())
                        .map(|(i, &v)| (i, v))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dense.nrows(), columns)
    }

    fn occupancy(atoms: usize, columns: &[SparseColumn<T>]) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); atoms];
        for (c, col) in columns.iter().enumerate() {
            for &(i, _) in &col.entries {
                rows[i].push(c);
            }
        }
        rows
    }

    /// Number of atoms `n` (rows of `X`).
    pub fn n_atoms(&self) -> usize {
        self.atoms
    }

    /// Number of signals `m` (columns of `X`).
    pub fn n_signals(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &SparseColumn<T> {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseColumn<T>] {
        &self.columns
    }

    /// Signals using atom `j` (the set `I_j`).
    pub fn row_index(&self, j: usize) -> &[usize] {
        &self.rows[j]
    }

    /// Coefficients of row `j` on its support, ordered like [`Self::row_index`].
    pub fn row_coefficients(&self, j: usize) -> Vec<T> {
        self.rows[j]
            .iter()
            .map(|&c| self.columns[c].get(j).unwrap_or_else(T::zero))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(SparseColumn::len).sum()
    }

    pub fn max_column_nnz(&self) -> usize {
        self.columns.iter().map(SparseColumn::len).max().unwrap_or(0)
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut out = DenseMatrix::zeros(self.atoms, self.columns.len());
        for (c, col) in self.columns.iter().enumerate() {
            for &(i, v) in &col.entries {
                out.set(i, c, v);
            }
        }
        out
    }

    /// Recomputes the row index from the columns and compares it with the
    /// stored one.
    pub fn row_index_consistent(&self) -> bool {
        Self::occupancy(self.atoms, &self.columns) == self.rows
    }

    /// Overwrites the stored coefficients of row `j` (ordered like
    /// [`Self::row_index`]). The support is unchanged.
    pub(crate) fn write_row(&mut self, j: usize, values: &[T]) {
        debug_assert_eq!(values.len(), self.rows[j].len());
        for (&c, &v) in self.rows[j].iter().zip(values) {
            let col = &mut self.columns[c];
            if let Some(k) = col.position(j) {
                col.entries[k].1 = v;
            }
        }
    }

    /// Drops coefficients that became exactly zero and rebuilds the row index.
    pub(crate) fn prune_zeros(&mut self) {
        let mut changed = false;
        for col in &mut self.columns {
            let before = col.entries.len();
            col.entries.retain(|&(_, v)| v != T::zero());
            changed |= col.entries.len() != before;
        }
        if changed {
            self.rows = Self::occupancy(self.atoms, &self.columns);
        }
    }
}

fn check_dims<T: Scalar>(y: &DenseMatrix<T>, d: &Dictionary<T>, x: &SparseCode<T>) -> Result<()> {
    if d.dim() != y.nrows() {
        return Err(Error::dimension(format!(
            "dictionary atoms have length {}, signals have length {}",
            d.dim(),
            y.nrows()
        )));
    }
    if x.n_atoms() != d.len() {
        return Err(Error::dimension(format!(
            "code has {} rows, dictionary has {} atoms",
            x.n_atoms(),
            d.len()
        )));
    }
    if x.n_signals() != y.ncols() {
        return Err(Error::dimension(format!(
            "code has {} columns, signal set has {}",
            x.n_signals(),
            y.ncols()
        )));
    }
    Ok(())
}

/// `out = y - D x` for one sparse column, accumulated in increasing atom order.
#[inline]
pub(crate) fn residual_column_into<T: Scalar>(
    y: &[T],
    d: &Dictionary<T>,
    x: &SparseColumn<T>,
    out: &mut [T],
) {
    out.copy_from_slice(y);
    for &(i, v) in x.entries() {
        axpy(-v, d.atom(i), out);
    }
}

/// Error matrix `E = S - D X` against an arbitrary dense signal matrix.
pub(crate) fn residual_matrix<T: Scalar>(
    s: &DenseMatrix<T>,
    d: &Dictionary<T>,
    x: &SparseCode<T>,
) -> Result<DenseMatrix<T>> {
    check_dims(s, d, x)?;
    let mut e = DenseMatrix::zeros(s.nrows(), s.ncols());
    for c in 0..s.ncols() {
        residual_column_into(s.col(c), d, x.column(c), e.col_mut(c));
    }
    Ok(e)
}

/// Representation error `E = Y - D X`; cost proportional to the nonzeros of `X`.
pub fn residual<T: Scalar>(
    y: &SignalSet<T>,
    d: &Dictionary<T>,
    x: &SparseCode<T>,
) -> Result<DenseMatrix<T>> {
    residual_matrix(y.matrix(), d, x)
}

/// `||Y - D X||_F / sqrt(p m)`.
pub fn rmse<T: Scalar>(y: &SignalSet<T>, d: &Dictionary<T>, x: &SparseCode<T>) -> Result<T> {
    check_dims(y.matrix(), d, x)?;
    let mut buf = vec![T::zero(); y.dim()];
    let mut total = T::zero();
    for c in 0..y.len() {
        residual_column_into(y.signal(c), d, x.column(c), &mut buf);
        total += sum_of_squares(&buf);
    }
    let count = T::of((y.dim() * y.len()) as f64);
    Ok((total / count).sqrt())
}

/// Atom update family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    AkSvd,
    Sgk,
    Nsgk,
    Mod,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::AkSvd => "aksvd",
            Algorithm::Sgk => "sgk",
            Algorithm::Nsgk => "nsgk",
            Algorithm::Mod => "mod",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aksvd" | "ak-svd" => Ok(Algorithm::AkSvd),
            "sgk" => Ok(Algorithm::Sgk),
            "nsgk" => Ok(Algorithm::Nsgk),
            "mod" => Ok(Algorithm::Mod),
            other => Err(Error::config(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Number of atoms updated together in one Jacobi group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSize {
    /// One group holding every atom.
    Full,
    Atoms(usize),
}

impl GroupSize {
    pub const SEQUENTIAL: GroupSize = GroupSize::Atoms(1);

    /// Concrete group size for a dictionary of `n` atoms.
    pub fn resolve(self, n: usize) -> usize {
        match self {
            GroupSize::Full => n,
            GroupSize::Atoms(g) => g.min(n),
        }
    }
}

impl fmt::Display for GroupSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSize::Full => f.write_str("full"),
            GroupSize::Atoms(g) => write!(f, "{g}"),
        }
    }
}

impl FromStr for GroupSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(GroupSize::Full);
        }
        match s.parse::<usize>() {
            Ok(g) if g >= 1 => Ok(GroupSize::Atoms(g)),
            _ => Err(Error::config(format!(
                "group size must be a positive integer or 'full', got '{s}'"
            ))),
        }
    }
}

/// An algorithm together with its group size, named like `sgk`
/// (sequential), `p-sgk` (full parallelism), `sgk/16` (groups of 16) or `mod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Method {
    pub algorithm: Algorithm,
    pub group_size: GroupSize,
}

impl Method {
    pub fn sequential(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            group_size: GroupSize::SEQUENTIAL,
        }
    }

    pub fn parallel(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            group_size: GroupSize::Full,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.algorithm, self.group_size) {
            (Algorithm::Mod, _) => f.write_str("mod"),
            (a, GroupSize::Full) => write!(f, "p-{a}"),
            (a, GroupSize::Atoms(1)) => write!(f, "{a}"),
            (a, GroupSize::Atoms(g)) => write!(f, "{a}/{g}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if let Some(rest) = s.strip_prefix("p-") {
            let algorithm: Algorithm = rest.parse()?;
            return Ok(Method::parallel(algorithm));
        }
        if let Some((name, group)) = s.split_once('/') {
            return Ok(Method {
                algorithm: name.parse()?,
                group_size: group.parse()?,
            });
        }
        Ok(Method::sequential(s.parse()?))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnerConfig {
    pub algorithm: Algorithm,
    /// Ignored by MOD.
    pub group_size: GroupSize,
    pub sparsity: usize,
    pub iterations: usize,
    pub seed: u64,
    pub threads: usize,
}

impl LearnerConfig {
    pub fn new(method: Method, sparsity: usize, iterations: usize) -> Self {
        Self {
            algorithm: method.algorithm,
            group_size: method.group_size,
            sparsity,
            iterations,
            seed: 0,
            threads: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn method(&self) -> Method {
        Method {
            algorithm: self.algorithm,
            group_size: self.group_size,
        }
    }

    /// Checks the configuration against signal dimension `p` and atom count `n`.
    pub fn validate(&self, p: usize, n: usize) -> Result<()> {
        if self.sparsity == 0 {
            return Err(Error::config("sparsity must be positive"));
        }
        if self.sparsity > p || self.sparsity > n {
            return Err(Error::config(format!(
                "sparsity {} exceeds signal dimension {p} or atom count {n}",
                self.sparsity
            )));
        }
        if self.threads == 0 {
            return Err(Error::config("thread count must be positive"));
        }
        if let GroupSize::Atoms(g) = self.group_size {
            if g == 0 || (self.algorithm != Algorithm::Mod && g > n) {
                return Err(Error::config(format!(
                    "group size {g} must lie in 1..={n}"
                )));
            }
        }
        Ok(())
    }
}

/// Wall time of the two stages of one learning iteration, in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub coding: f64,
    pub update: f64,
}

/// Counters for the exceptional paths taken during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceEvents {
    /// Atoms without users (or with degenerate coefficients) that were replaced.
    pub dead_atoms: usize,
    /// Dead atoms kept unchanged because every residual was negligible.
    pub dead_atoms_kept: usize,
    /// MOD updates that needed a ridge term to factor `X Xᵀ`.
    pub ridge_regularized: usize,
}

#[derive(Clone, Debug)]
pub struct RunTrace<T> {
    pub rmse_per_iteration: Vec<f64>,
    pub stage_times: Vec<StageTimes>,
    pub final_dictionary: Dictionary<T>,
    pub final_code: SparseCode<T>,
    pub events: TraceEvents,
}

impl<T> RunTrace<T> {
    pub fn final_rmse(&self) -> Option<f64> {
        self.rmse_per_iteration.last().copied()
    }

    pub fn mean_stage_times(&self) -> StageTimes {
        let k = self.stage_times.len();
        if k == 0 {
            return StageTimes::default();
        }
        let (c, u) = self
            .stage_times
            .iter()
            .fold((0.0, 0.0), |(c, u), t| (c + t.coding, u + t.update));
        StageTimes {
            coding: c / k as f64,
            update: u / k as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code_from(n: usize, cols: Vec<Vec<(usize, f64)>>) -> SparseCode<f64> {
        SparseCode::new(
            n,
            cols.into_iter().map(|c| SparseColumn::new(c).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn zero_code_residual_is_signals() {
        let y = SignalSet::new(DenseMatrix::from_fn(3, 4, |r, c| (r + 2 * c) as f64)).unwrap();
        let d = Dictionary::new(DenseMatrix::<f64>::identity(3)).unwrap();
        let x = SparseCode::zeros(3, 4);
        assert_eq!(&residual(&y, &d, &x).unwrap(), y.matrix());
    }

    #[test]
    fn orthonormal_full_code_gives_zero_residual() {
        // rotation in the plane plus identity on the third axis
        let (c, s) = (0.6f64, 0.8f64);
        let d = Dictionary::new(
            DenseMatrix::from_column_major(3, 3, vec![c, s, 0.0, -s, c, 0.0, 0.0, 0.0, 1.0])
                .unwrap(),
        )
        .unwrap();
        let y = SignalSet::new(DenseMatrix::from_fn(3, 2, |r, k| 1.0 + r as f64 - k as f64))
            .unwrap();
        let xt = d.matrix().transpose().matmul(y.matrix()).unwrap();
        let x = SparseCode::from_dense(&xt).unwrap();
        let e = residual(&y, &d, &x).unwrap();
        assert!(e.frobenius_norm() < 1e-12);
        assert_eq!(rmse(&y, &d, &x).unwrap(), e.frobenius_norm() / 6f64.sqrt());
    }

    #[test]
    fn rmse_of_three_four_error() {
        // E = [[3,4],[0,0]] with D = I and X = 0
        let y = SignalSet::new(
            DenseMatrix::from_column_major(2, 2, vec![3.0, 0.0, 4.0, 0.0]).unwrap(),
        )
        .unwrap();
        let d = Dictionary::new(DenseMatrix::<f64>::identity(2)).unwrap();
        let x = SparseCode::zeros(2, 2);
        assert_eq!(rmse(&y, &d, &x).unwrap(), 2.5);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let y = SignalSet::new(DenseMatrix::<f64>::zeros(2, 3)).unwrap();
        let d = Dictionary::new(DenseMatrix::<f64>::identity(2)).unwrap();
        let x = SparseCode::zeros(2, 4);
        assert!(matches!(residual(&y, &d, &x), Err(Error::Dimension(_))));
        let x = SparseCode::zeros(3, 3);
        assert!(matches!(rmse(&y, &d, &x), Err(Error::Dimension(_))));
    }

    #[test]
    fn row_index_is_transpose_occupancy() {
        let x = code_from(3, vec![vec![(2, 1.0), (0, -1.0)], vec![], vec![(2, 0.5)]]);
        assert_eq!(x.row_index(0), &[0]);
        assert_eq!(x.row_index(1), &[] as &[usize]);
        assert_eq!(x.row_index(2), &[0, 2]);
        assert_eq!(x.row_coefficients(2), vec![1.0, 0.5]);
        assert_eq!(x.column(0).entries()[0], (0, -1.0));
        assert!(x.row_index_consistent());
    }

    #[test]
    fn sparse_column_rejects_zero_and_duplicates() {
        assert!(SparseColumn::new(vec![(0, 0.0f64)]).is_err());
        assert!(SparseColumn::new(vec![(1, 1.0f64), (1, 2.0)]).is_err());
        assert!(SparseCode::new(2, vec![SparseColumn::new(vec![(2, 1.0f64)]).unwrap()]).is_err());
    }

    #[test]
    fn write_row_and_prune() {
        let mut x = code_from(2, vec![vec![(0, 1.0), (1, 2.0)], vec![(1, 3.0)]]);
        x.write_row(1, &[0.0, 4.0]);
        x.prune_zeros();
        assert_eq!(x.row_index(1), &[1]);
        assert_eq!(x.column(0).entries(), &[(0, 1.0)]);
        assert!(x.row_index_consistent());
    }

    #[test]
    fn dictionary_rejects_non_unit_atoms() {
        let m = DenseMatrix::from_fn(2, 2, |r, c| if r == c { 2.0f64 } else { 0.0 });
        assert!(Dictionary::new(m.clone()).is_err());
        assert!(Dictionary::from_unnormalized(m).unwrap().is_unit_norm());
        assert!(Dictionary::from_unnormalized(DenseMatrix::<f64>::zeros(2, 1)).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for name in ["sgk", "p-sgk", "aksvd", "p-aksvd", "nsgk", "p-nsgk", "mod", "sgk/16"] {
            let m: Method = name.parse().unwrap();
            assert_eq!(m.to_string(), name);
        }
        assert!("ksvd".parse::<Method>().is_err());
        assert_eq!(GroupSize::Full.resolve(7), 7);
        assert_eq!(GroupSize::Atoms(9).resolve(7), 7);
        assert!("0".parse::<GroupSize>().is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = LearnerConfig::new(Method::parallel(Algorithm::Sgk), 3, 1);
        assert!(cfg.validate(4, 8).is_ok());
        assert!(cfg.validate(2, 8).is_err());
        let mut bad = cfg.clone();
        bad.group_size = GroupSize::Atoms(9);
        assert!(bad.validate(4, 8).is_err());
    }
}

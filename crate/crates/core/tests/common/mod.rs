//! Straight-line dense reference implementations used as test oracles.
//! Matrices are plain `Vec<Vec<f64>>` lists of columns and every routine
//! is written independently of the library kernels.

#![allow(dead_code)]

use jau_core::{DenseMatrix, Dictionary, SignalSet, SparseCode};

pub type Cols = Vec<Vec<f64>>;

pub fn cols_of(m: &DenseMatrix<f64>) -> Cols {
    (0..m.ncols()).map(|c| m.col(c).to_vec()).collect()
}

pub fn dense_code(x: &SparseCode<f64>) -> Cols {
    (0..x.n_signals())
        .map(|c| {
            let mut v = vec![0.0; x.n_atoms()];
            for &(i, a) in x.column(c).entries() {
                v[i] = a;
            }
            v
        })
        .collect()
}

pub fn ip(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l2(a: &[f64]) -> f64 {
    ip(a, a).sqrt()
}

/// `D x` for a dense coefficient vector.
pub fn synth(d: &Cols, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d[0].len()];
    for (atom, &v) in d.iter().zip(x) {
        if v != 0.0 {
            for (o, a) in out.iter_mut().zip(atom) {
                *o += v * a;
            }
        }
    }
    out
}

/// `Y - D X`, column by column.
pub fn residual(y: &Cols, d: &Cols, x: &Cols) -> Cols {
    y.iter()
        .zip(x)
        .map(|(yc, xc)| {
            let r = synth(d, xc);
            yc.iter().zip(&r).map(|(a, b)| a - b).collect()
        })
        .collect()
}

pub fn rmse(y: &Cols, d: &Cols, x: &Cols) -> f64 {
    let e = residual(y, d, x);
    let total: f64 = e.iter().flatten().map(|v| v * v).sum();
    (total / (y.len() * y[0].len()) as f64).sqrt()
}

/// Solves `A z = b` by Gaussian elimination with partial pivoting. `a` is
/// row-major.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .unwrap();
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for c in k..n {
                a[i][c] -= f * a[k][c];
            }
            b[i] -= f * b[k];
        }
    }
    let mut z = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|c| a[k][c] * z[c]).sum();
        z[k] = (b[k] - s) / a[k][k];
    }
    z
}

/// OMP that re-solves the full least-squares problem every round.
/// Returns the dense coefficient vector and the selection order.
pub fn omp(d: &Cols, y: &[f64], s: usize) -> (Vec<f64>, Vec<usize>) {
    let n = d.len();
    let y_norm = l2(y);
    let mut support: Vec<usize> = Vec::new();
    let mut x = vec![0.0; n];
    if y_norm == 0.0 {
        return (x, support);
    }
    let mut r = y.to_vec();
    for _ in 0..s.min(n).min(y.len()) {
        let mut best = None;
        let mut best_c = 0.0;
        for i in 0..n {
            if support.contains(&i) {
                continue;
            }
            let c = ip(&d[i], &r).abs();
            if c > best_c {
                best_c = c;
                best = Some(i);
            }
        }
        let Some(i) = best else { break };
        support.push(i);
        let k = support.len();
        let a: Vec<Vec<f64>> = (0..k)
            .map(|u| (0..k).map(|v| ip(&d[support[u]], &d[support[v]])).collect())
            .collect();
        let b: Vec<f64> = support.iter().map(|&u| ip(&d[u], y)).collect();
        let coef = solve(a, b);
        x = vec![0.0; n];
        for (&u, &c) in support.iter().zip(&coef) {
            x[u] = c;
        }
        let dx = synth(d, &x);
        r = y.iter().zip(&dx).map(|(a, b)| a - b).collect();
        if l2(&r) <= 1e-12 * y_norm {
            break;
        }
    }
    (x, support)
}

pub fn omp_all(d: &Cols, y: &Cols, s: usize) -> Cols {
    y.iter().map(|yc| omp(d, yc, s).0).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefAlgo {
    Sgk,
    AkSvd,
    Nsgk,
    Mod,
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let nrm = l2(&v);
    for a in &mut v {
        *a /= nrm;
    }
    v
}

/// Worst residual column outside `taken`, normalized.
fn replacement(e: &Cols, taken: &mut Vec<usize>) -> Option<Vec<f64>> {
    let mut best: Option<(usize, f64)> = None;
    for (c, col) in e.iter().enumerate() {
        if taken.contains(&c) {
            continue;
        }
        let en = ip(col, col);
        if best.is_none_or(|(_, b)| en > b) {
            best = Some((c, en));
        }
    }
    let (c, en) = best?;
    if en.sqrt() < 1e-12 {
        return None;
    }
    taken.push(c);
    Some(unit(e[c].clone()))
}

/// One atom-by-atom sweep on `s` (the signals) with code `x`.
fn sequential_sweep(d: &mut Cols, s: &Cols, x: &mut Cols, refresh_rows: bool) {
    let n = d.len();
    let mut taken = Vec::new();
    for j in 0..n {
        let e = residual(s, d, x);
        let used: Vec<usize> = (0..x.len()).filter(|&c| x[c][j] != 0.0).collect();
        let mut g = vec![0.0; d[j].len()];
        let mut energy = 0.0;
        for &c in &used {
            let xj = x[c][j];
            energy += xj * xj;
            for r in 0..g.len() {
                g[r] += xj * (e[c][r] + d[j][r] * xj);
            }
        }
        if used.is_empty() || energy < 1e-30 || l2(&g) < 1e-30 {
            if let Some(atom) = replacement(&e, &mut taken) {
                d[j] = atom;
            }
            continue;
        }
        let old = d[j].clone();
        d[j] = unit(g);
        if refresh_rows {
            for &c in &used {
                let f: Vec<f64> = (0..old.len()).map(|r| e[c][r] + old[r] * x[c][j]).collect();
                x[c][j] = ip(&f, &d[j]);
            }
        }
    }
}

fn mod_step(d: &mut Cols, y: &Cols, x: &Cols) {
    let n = d.len();
    let p = y[0].len();
    let g: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|b| x.iter().map(|c| c[a] * c[b]).sum()).collect())
        .collect();
    // each dictionary row r solves G d_r = X y_r
    let mut new = vec![vec![0.0; p]; n];
    for r in 0..p {
        let b: Vec<f64> = (0..n).map(|a| x.iter().zip(y).map(|(c, yc)| c[a] * yc[r]).sum()).collect();
        let row = solve(g.clone(), b);
        for a in 0..n {
            new[a][r] = row[a];
        }
    }
    for a in 0..n {
        if l2(&new[a]) > 1e-30 {
            d[a] = unit(new[a].clone());
        }
    }
}

/// Sequential dictionary learning. Returns the RMSE after every iteration
/// and the final dictionary.
pub fn learn(y: &Cols, d0: &Cols, algo: RefAlgo, s: usize, iterations: usize) -> (Vec<f64>, Cols) {
    let mut d = d0.clone();
    let mut prev: Option<Cols> = None;
    let mut trace = Vec::new();
    for _ in 0..iterations {
        let fresh = omp_all(&d, y, s);
        let latest = match algo {
            RefAlgo::Sgk => {
                let mut x = fresh.clone();
                sequential_sweep(&mut d, y, &mut x, false);
                fresh
            }
            RefAlgo::AkSvd => {
                let mut x = fresh;
                sequential_sweep(&mut d, y, &mut x, true);
                x
            }
            RefAlgo::Nsgk => {
                let xprev = prev.take().unwrap_or_else(|| fresh.clone());
                let dp = residual(&vec![vec![0.0; y[0].len()]; y.len()], &d, &xprev);
                let dc = residual(&vec![vec![0.0; y[0].len()]; y.len()], &d, &fresh);
                // Z = Y + D Xprev - D Xcur = Y - (-D Xprev) + (-D Xcur)
                let z: Cols = (0..y.len())
                    .map(|c| (0..y[0].len()).map(|r| y[c][r] - dp[c][r] + dc[c][r]).collect())
                    .collect();
                let mut x = xprev;
                sequential_sweep(&mut d, &z, &mut x, false);
                prev = Some(fresh.clone());
                fresh
            }
            RefAlgo::Mod => {
                mod_step(&mut d, y, &fresh);
                fresh
            }
        };
        trace.push(rmse(y, &d, &latest));
    }
    (trace, d)
}

pub fn to_dictionary(d: &Cols) -> Dictionary<f64> {
    Dictionary::new(DenseMatrix::from_columns(d[0].len(), d).unwrap()).unwrap()
}

pub fn to_signals(y: &Cols) -> SignalSet<f64> {
    SignalSet::new(DenseMatrix::from_columns(y[0].len(), y).unwrap()).unwrap()
}

/// Deterministic pseudo-random numbers for fixtures (SplitMix64 mapped to
/// a symmetric range; no distributional claims).
pub struct Fixture(u64);

impl Fixture {
    pub fn new(seed: u64) -> Self {
        Fixture(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[-1, 1)`.
    pub fn sym(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Cols {
        (0..cols).map(|_| (0..rows).map(|_| self.sym()).collect()).collect()
    }

    pub fn unit_atoms(&mut self, rows: usize, cols: usize) -> Cols {
        self.matrix(rows, cols).into_iter().map(unit).collect()
    }

    /// Signals that are `s`-sparse in `d` plus a small perturbation.
    pub fn sparse_signals(&mut self, d: &Cols, m: usize, s: usize, noise: f64) -> Cols {
        let n = d.len();
        (0..m)
            .map(|_| {
                let mut x = vec![0.0; n];
                let mut k = 0;
                while k < s {
                    let i = self.below(n);
                    if x[i] == 0.0 {
                        x[i] = self.sym() + if self.sym() > 0.0 { 0.5 } else { -0.5 };
                        k += 1;
                    }
                }
                let mut y = synth(d, &x);
                for v in &mut y {
                    *v += noise * self.sym();
                }
                y
            })
            .collect()
    }
}

//! Small dense complex matrices and a cyclic Jacobi Hermitian eigensolver.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: |A - A*|_F = {defect:e} (|A|_F = {norm:e})")]
    NotHermitian { defect: f64, norm: f64 },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Jacobi iteration stalled after {sweeps} sweeps (off-diagonal {offdiag:e})")]
    NoConvergence { sweeps: usize, offdiag: f64 },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0))).collect();
        Self::from_row_major(r, c, entries)
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::Shape("operand shapes differ".into()));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `(X + X*) / 2`, exactly Hermitian in floating point.
    pub fn hermitian_part(&self) -> Result<Self, LinalgError> {
        self.require_square()?;
        let n = self.rows;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum()).collect()
    }

    fn require_square(&self) -> Result<(), LinalgError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn hermitian_defect(&self) -> f64 {
        let n = self.rows;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Relative Hermitian-ness tolerance accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of `|A|_F`.
pub const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
    pub offdiag_residual: f64,
}

pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenResult, LinalgError> {
    a.require_square()?;
    let norm = a.frobenius_norm();
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL * norm {
        return Err(LinalgError::NotHermitian { defect, norm });
    }
    let n = a.rows;
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let target = JACOBI_TOL * norm;

    let offdiag = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut off = offdiag(&m);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, offdiag: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = offdiag(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(EigenResult { eigenvalues, eigenvectors: vectors, offdiag_residual: off })
}

/// One complex Jacobi rotation annihilating `m[p][q]`, with `m <- J* m J`
/// and `v <- v J`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // Phase e^{-i arg apq} on column q makes the pivot real.
    let phase = apq.conj() / r;
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // J restricted to (p, q): [[c, s], [-s*phase, c*phase]].
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase * (-s);
    let jqq = phase * c;

    let n = m.rows;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

pub fn max_eigenvalue(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(hermitian_eigen(a)?.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Smallest eigenvalue; PSD iff this is >= 0.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(hermitian_eigen(a)?.eigenvalues.last().copied().unwrap_or(0.0))
}

/// Largest singular value, `sqrt(lambda_max(A* A))`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.adjoint().matmul(a).expect("A* A is always conformable");
    let gram = gram.hermitian_part().expect("A* A is square");
    match max_eigenvalue(&gram) {
        Ok(l) => l.max(0.0).sqrt(),
        // A Gram matrix is Hermitian by construction; Jacobi on it does not stall
        // at these sizes, but fall back to the Frobenius bound rather than panic.
        Err(_) => a.frobenius_norm(),
    }
}

/// Second-largest eigenvalue magnitude of `I - A A*`.
///
/// Near zero certifies that `I - A A*` has rank at most one.
pub fn rank_one_defect_check(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    a.require_square()?;
    let n = a.rows;
    if n < 2 {
        return Ok(0.0);
    }
    let defect = ComplexMatrix::identity(n).sub(&a.matmul(&a.adjoint())?)?.hermitian_part()?;
    let mut mags: Vec<f64> = hermitian_eigen(&defect)?.eigenvalues.iter().map(|l| l.abs()).collect();
    mags.sort_by(|x, y| y.total_cmp(x));
    Ok(mags[1])
}

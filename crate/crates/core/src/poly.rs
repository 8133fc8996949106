//! Complex polynomials and simultaneous (Aberth–Ehrlich) root finding.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("polynomial has no nonzero coefficient")]
    ZeroPolynomial,
    #[error("root finding needs degree >= 1, got a constant")]
    ConstantPolynomial,
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("root finder did not converge: residual {residual:e} exceeds bound {bound:e}")]
    NonConvergence { residual: f64, bound: f64 },
}

/// Polynomial with complex coefficients stored in ascending degree order.
///
/// The leading coefficient is always nonzero; exact trailing zeros are
/// trimmed on construction.
#[derive(Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self, PolyError> {
        if let Some(i) = coeffs.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(PolyError::NonFinite(i));
        }
        while coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Monic polynomial `prod (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = Self::one();
        for &r in roots {
            p = p.multiply(&Self { coeffs: vec![-r, Complex64::new(1.0, 0.0)] });
        }
        p
    }

    pub fn one() -> Self {
        Self { coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn monomial(degree: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[degree] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn max_coeff_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Running error bound for Horner at `z`: `sum |c_i| |z|^i`.
    fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, s: Complex64) -> Result<Self, PolyError> {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `self - other`; fails only if the difference vanishes identically.
    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        - other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.sub(&other.scale(Complex64::new(-1.0, 0.0))?)
    }

    /// Synthetic division by `(z - root)`, returning quotient and remainder.
    pub fn deflate(&self, root: Complex64) -> (Self, Complex64) {
        let n = self.degree();
        if n == 0 {
            return (self.clone(), self.coeffs[0]);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        let mut carry = Complex64::new(0.0, 0.0);
        for k in (0..=n).rev() {
            let v = self.coeffs[k] + carry * root;
            if k == 0 {
                return (Self { coeffs: q }, v);
            }
            q[k - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

impl fmt::Debug for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    pub max_sweeps: usize,
    pub max_polish: usize,
    /// Relative residual tolerance, scaled by `max |c_i|`.
    pub tol: f64,
    /// Roots closer than this are merged into one repeated root.
    pub cluster_radius: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { max_sweeps: 200, max_polish: 20, tol: 1e-13, cluster_radius: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)|` per root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl RootSet {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

pub fn find_roots(p: &ComplexPolynomial) -> Result<RootSet, PolyError> {
    find_roots_with(p, &RootOptions::default())
}

pub fn find_roots_with(p: &ComplexPolynomial, opts: &RootOptions) -> Result<RootSet, PolyError> {
    let n = p.degree();
    if n == 0 {
        return Err(PolyError::ConstantPolynomial);
    }
    let (mut roots, iterations) = if n == 1 {
        (vec![-p.coeffs[0] / p.coeffs[1]], 0)
    } else {
        aberth(p, opts)
    };
    for z in roots.iter_mut() {
        *z = newton_polish(p, *z, opts.max_polish);
    }
    merge_clusters(&mut roots, opts.cluster_radius);
    if p.is_real() {
        pair_conjugates(&mut roots);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let residuals: Vec<f64> = roots.iter().map(|&z| p.eval(z).norm()).collect();
    let scale = p.max_coeff_modulus();
    for (&z, &res) in roots.iter().zip(&residuals) {
        // Residuals below the Horner rounding floor are as good as exact.
        let floor = 8.0 * (n as f64 + 1.0) * f64::EPSILON * p.abs_eval(z);
        let bound = (opts.tol * scale).max(floor);
        if !(res <= bound) {
            return Err(PolyError::NonConvergence { residual: res, bound });
        }
    }
    Ok(RootSet { roots, residuals, iterations })
}

fn aberth(p: &ComplexPolynomial, opts: &RootOptions) -> (Vec<Complex64>, usize) {
    let n = p.degree();
    let lead = p.leading().norm();
    let cauchy = 1.0 + p.coeffs[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    // Offset angle keeps the start off any symmetry axis of real polynomials.
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(cauchy, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut sweeps = 0;
    while sweeps < opts.max_sweeps && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dpv) = p.eval_with_derivative(z[i]);
            if pv.norm_sqr() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm_sqr() == 0.0 { Complex64::new(0.0, 0.0) } else { d.inv() }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !(step.re.is_finite() && step.im.is_finite()) {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
    }
    (z, sweeps)
}

/// Newton steps that are only kept while they reduce `|p|`.
fn newton_polish(p: &ComplexPolynomial, mut z: Complex64, max_steps: usize) -> Complex64 {
    let mut best = p.eval(z).norm();
    for _ in 0..max_steps {
        let (pv, dpv) = p.eval_with_derivative(z);
        if pv.norm_sqr() == 0.0 || dpv.norm_sqr() == 0.0 {
            break;
        }
        let cand = z - pv / dpv;
        let val = p.eval(cand).norm();
        if !(val < best) {
            break;
        }
        best = val;
        z = cand;
    }
    z
}

fn merge_clusters(roots: &mut [Complex64], radius: f64) {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (roots[i] - roots[j]).norm() < radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    for g in groups.iter().filter(|g| g.len() > 1) {
        let center = g.iter().map(|&i| roots[i]).sum::<Complex64>() / g.len() as f64;
        for &i in g {
            roots[i] = center;
        }
    }
}

/// Forces exact conjugate symmetry on the roots of a real polynomial.
///
/// Roots are paired greedily from the largest imaginary part downward;
/// roots within `1e-7` of the real axis are snapped onto it.
fn pair_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| roots[b].im.abs().total_cmp(&roots[a].im.abs()).then(a.cmp(&b)));
    let mut used = vec![false; n];
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        if roots[i].im.abs() <= 1e-7 * (1.0 + roots[i].norm()) {
            roots[i].im = 0.0;
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm()));
        match partner {
            Some(j) => {
                used[j] = true;
                let avg = (roots[i] + roots[j].conj()) * 0.5;
                roots[i] = Complex64::new(avg.re, avg.im.abs());
                roots[j] = roots[i].conj();
            }
            None => roots[i].im = 0.0,
        }
    }
}

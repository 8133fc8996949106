//! Norm of `I + a S_B` from the reduced Foias–Tannenbaum equations.
//!
//! For `rho > 0` let `z1, z2` solve `a z^2 - (4 rho^2 - 1 - |a|^2) z + conj(a) = 0`.
//! The largest `rho` at which
//! `z2 B(z2) - z1 B(z1) + conj(a) (B(z2) - B(z1))` vanishes is
//! `||I + a S_B|| / 2`. No matrix is formed.

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::{BlaschkeError, BlaschkeProduct};

pub const SCAN_SAMPLES: usize = 10_000;
/// Roots of the general-case functional are kept only if `|defect|` is below this.
pub const ROOT_ACCEPT: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FtError {
    #[error("the perturbation a must be nonzero and finite")]
    BadPerturbation,
    #[error("no sign change of the defect on the rho scan")]
    NoRootFound,
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTState {
    pub a: Complex64,
    pub rho: f64,
    pub z1: Complex64,
    pub z2: Complex64,
    pub defect: Complex64,
}

impl FTState {
    /// `(|z1 z2 - conj(a)/a|, |z1 + z2 - s/a|)`.
    pub fn vieta_residuals(&self) -> (f64, f64) {
        let s = 4.0 * self.rho * self.rho - 1.0 - self.a.norm_sqr();
        ((self.z1 * self.z2 - self.a.conj() / self.a).norm(), (self.z1 + self.z2 - s / self.a).norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTResult {
    pub rho_bar: f64,
    pub norm: f64,
    /// Scan interval that contained the root.
    pub bracket: (f64, f64),
    pub defect_residual: f64,
}

/// Roots of `a z^2 - (4 rho^2 - 1 - |a|^2) z + conj(a)`, ordered by imaginary
/// part then real part.
pub fn ft_quadratic_roots(a: Complex64, rho: f64) -> (Complex64, Complex64) {
    let s = Complex64::new(4.0 * rho * rho - 1.0 - a.norm_sqr(), 0.0);
    let mut w = (s * s - 4.0 * a.norm_sqr()).sqrt();
    if (s.conj() * w).re < 0.0 {
        w = -w;
    }
    // |q| >= |a| > 0, so both divisions are safe.
    let q = 0.5 * (s + w);
    let (r1, r2) = (q / a, a.conj() / q);
    let key = |z: &Complex64| (z.im, z.re);
    if key(&r1) <= key(&r2) {
        (r1, r2)
    } else {
        (r2, r1)
    }
}

pub fn ft_defect(b: &BlaschkeProduct, a: Complex64, rho: f64) -> Result<Complex64, BlaschkeError> {
    Ok(ft_state(b, a, rho)?.defect)
}

pub fn ft_state(b: &BlaschkeProduct, a: Complex64, rho: f64) -> Result<FTState, BlaschkeError> {
    let (z1, z2) = ft_quadratic_roots(a, rho);
    let (b1, b2) = (b.eval(z1)?, b.eval(z2)?);
    let defect = z2 * b2 - z1 * b1 + a.conj() * (b2 - b1);
    Ok(FTState { a, rho, z1, z2, defect })
}

/// Scan interval `(|a| 1e-3, (1 + |a|)/2 + 0.05]`.
pub fn scan_interval(a: Complex64) -> (f64, f64) {
    (a.norm() * 1e-3, (1.0 + a.norm()) / 2.0 + 0.05)
}

/// `|s| < 2|a|`: both roots lie on the unit circle.
fn in_window(a: Complex64, rho: f64) -> bool {
    let s = 4.0 * rho * rho - 1.0 - a.norm_sqr();
    s.abs() < 2.0 * a.norm()
}

/// States on the uniform scan grid, skipping samples whose quadratic has no
/// unimodular roots.
pub fn ft_scan(b: &BlaschkeProduct, a: Complex64) -> Result<Vec<FTState>, FtError> {
    check_a(a)?;
    let (lo, hi) = scan_interval(a);
    let h = (hi - lo) / SCAN_SAMPLES as f64;
    (1..=SCAN_SAMPLES)
        .map(|i| lo + h * i as f64)
        .filter(|&rho| in_window(a, rho))
        .map(|rho| ft_state(b, a, rho).map_err(FtError::from))
        .collect()
}

fn check_a(a: Complex64) -> Result<(), FtError> {
    if a.norm() == 0.0 || !a.norm().is_finite() {
        Err(FtError::BadPerturbation)
    } else {
        Ok(())
    }
}

/// `phase * defect` with `phase = a / |a|`; purely imaginary for real `a` and
/// real zeros.
fn aligned(a: Complex64, defect: Complex64) -> Complex64 {
    a / a.norm() * defect
}

fn bisect<F>(f: F, mut lo: f64, mut hi: f64) -> Result<f64, FtError>
where
    F: Fn(f64) -> Result<f64, FtError>,
{
    let mut f_lo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `||I + a S_B||` as `2 rho_bar`.
///
/// For real `a` and real zeros the imaginary part of the aligned defect is
/// bracketed directly. Otherwise sign changes of either component are
/// bisected and a root is kept only if the full complex defect is below
/// [`ROOT_ACCEPT`].
pub fn ft_norm(b: &BlaschkeProduct, a: Complex64) -> Result<FTResult, FtError> {
    check_a(a)?;
    if b.degree() == 1 {
        let norm = (1.0 + a * b.zeros()[0]).norm();
        return Ok(FTResult { rho_bar: norm / 2.0, norm, bracket: (norm / 2.0, norm / 2.0), defect_residual: 0.0 });
    }
    let states = ft_scan(b, a)?;
    let real_case = a.im == 0.0 && b.has_real_zeros();
    type Part = fn(Complex64) -> f64;
    let parts: &[Part] = if real_case { &[|z| z.im] } else { &[|z| z.im, |z| z.re] };

    for pair in states.windows(2).rev() {
        let (s0, s1) = (pair[0], pair[1]);
        let (v0, v1) = (aligned(a, s0.defect), aligned(a, s1.defect));
        let mut best: Option<(f64, f64)> = None;
        for part in parts {
            let (f0, f1) = (part(v0), part(v1));
            if f0 == 0.0 || (f0 > 0.0) == (f1 > 0.0) {
                continue;
            }
            let rho = bisect(|r| Ok(part(aligned(a, ft_defect(b, a, r)?))), s0.rho, s1.rho)?;
            let residual = ft_defect(b, a, rho)?.norm();
            if (real_case || residual <= ROOT_ACCEPT) && best.is_none_or(|(r, _)| rho > r) {
                best = Some((rho, residual));
            }
        }
        if let Some((rho_bar, defect_residual)) = best {
            return Ok(FTResult { rho_bar, norm: 2.0 * rho_bar, bracket: (s0.rho, s1.rho), defect_residual });
        }
    }
    Err(FtError::NoRootFound)
}

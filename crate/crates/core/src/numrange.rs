//! Eigenvalue-sweep ground truth for the numerical range.
//!
//! The support function of `W(A)` in direction `theta` is the top eigenvalue
//! of the Hermitian part of `e^{-i theta} A`; the numerical radius is its
//! maximum over `theta`. Everything here is independent of the Blaschke
//! structure and serves as the oracle for the other routes.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::config::RunConfig;
use crate::linalg::{self, ComplexMatrix, LinalgError};

/// Width to which the golden-section refinement shrinks the angular bracket.
pub const ANGULAR_TOL: f64 = 1e-12;
/// Successive Richardson extrapolants may differ by at most this much.
pub const EXTRAPOLATION_SPREAD: f64 = 1e-4;
/// Number of grid maxima that get refined.
const REFINED_PEAKS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumrangeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("limit extrapolation unstable: successive extrapolants differ by {spread:e}")]
    ExtrapolationUnstable { spread: f64 },
    #[error("t-ladder needs at least two strictly decreasing positive steps")]
    BadLadder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub theta: f64,
    /// Largest eigenvalue of the Hermitian part of `e^{-i theta} A`.
    pub support_value: f64,
    /// `v* A v` for the top eigenvector `v`; a point of the boundary of `W(A)`.
    pub boundary_point: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusEstimate {
    pub value: f64,
    pub argmax_theta: f64,
    pub refinement_width: f64,
}

pub fn support_function(a: &ComplexMatrix, theta: f64) -> Result<BoundarySample, LinalgError> {
    let rotated = a.scale(Complex64::from_polar(1.0, -theta));
    let h = rotated.hermitian_part()?;
    let eig = linalg::hermitian_eigen(&h)?;
    let v = eig.eigenvectors.column(0);
    let av = a.mul_vec(&v);
    let boundary_point = v.iter().zip(&av).map(|(x, y)| x.conj() * y).sum();
    Ok(BoundarySample { theta, support_value: eig.eigenvalues[0], boundary_point })
}

/// Support samples at `samples` equally spaced angles in `[0, 2 pi)`.
pub fn boundary_sweep(a: &ComplexMatrix, samples: usize) -> Result<Vec<BoundarySample>, LinalgError> {
    (0..samples)
        .into_par_iter()
        .map(|k| support_function(a, 2.0 * PI * k as f64 / samples as f64))
        .collect()
}

pub fn numerical_radius(a: &ComplexMatrix) -> Result<RadiusEstimate, LinalgError> {
    numerical_radius_with(a, &RunConfig::default())
}

pub fn numerical_radius_with(a: &ComplexMatrix, cfg: &RunConfig) -> Result<RadiusEstimate, LinalgError> {
    angular_max(|theta| support_function(a, theta).map(|s| s.support_value), cfg.theta_samples)
}

/// `|I + t A| - 1`, computed without cancellation.
///
/// Uses `|I + tA|^2 = 1 + mu` with `mu = lambda_max(tA + (tA)* + |t|^2 A*A)`,
/// so the excess keeps full relative precision as `t -> 0`.
pub fn norm_excess(a: &ComplexMatrix, t: Complex64) -> Result<f64, LinalgError> {
    let gram = a.adjoint().matmul(a)?.scale(Complex64::new(t.norm_sqr(), 0.0));
    let x = a.scale(t).hermitian_part()?.scale(Complex64::new(2.0, 0.0)).add(&gram)?.hermitian_part()?;
    let mu = linalg::max_eigenvalue(&x)?.max(-1.0);
    Ok(mu / ((1.0 + mu).sqrt() + 1.0))
}

pub fn norm_i_plus_ta(a: &ComplexMatrix, t: Complex64) -> Result<f64, LinalgError> {
    Ok(1.0 + norm_excess(a, t)?)
}

/// Difference quotients `(|I + t e^{i theta} A| - 1) / t` along the ladder.
pub fn difference_quotients(a: &ComplexMatrix, theta: f64, ladder: &[f64]) -> Result<Vec<f64>, LinalgError> {
    let dir = Complex64::from_polar(1.0, theta);
    ladder.iter().map(|&t| Ok(norm_excess(a, dir * t)? / t)).collect()
}

/// First-order Richardson extrapolation of `q(t) = w + c t + O(t^2)` to `t = 0`.
///
/// Each adjacent pair of ladder points gives one linear extrapolant; the last
/// one (smallest steps) is returned once the sequence is stable.
pub fn richardson_limit(quotients: &[f64], ladder: &[f64]) -> Result<f64, NumrangeError> {
    if ladder.len() < 2 || quotients.len() != ladder.len() || ladder.windows(2).any(|w| !(w[1] < w[0] && w[1] > 0.0)) {
        return Err(NumrangeError::BadLadder);
    }
    let extrapolants: Vec<f64> = (0..ladder.len() - 1)
        .map(|k| {
            let (t0, t1) = (ladder[k], ladder[k + 1]);
            (t0 * quotients[k + 1] - t1 * quotients[k]) / (t0 - t1)
        })
        .collect();
    let spread = extrapolants.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    if !(spread <= EXTRAPOLATION_SPREAD) {
        return Err(NumrangeError::ExtrapolationUnstable { spread });
    }
    Ok(*extrapolants.last().expect("ladder has two points"))
}

/// `max Re W(e^{-i theta} A)` via the limit of difference quotients.
pub fn limit_support(a: &ComplexMatrix, theta: f64, ladder: &[f64]) -> Result<f64, NumrangeError> {
    let q = difference_quotients(a, -theta, ladder)?;
    richardson_limit(&q, ladder)
}

pub fn radius_via_limit(a: &ComplexMatrix) -> Result<RadiusEstimate, NumrangeError> {
    radius_via_limit_with(a, &RunConfig::default())
}

pub fn radius_via_limit_with(a: &ComplexMatrix, cfg: &RunConfig) -> Result<RadiusEstimate, NumrangeError> {
    angular_max(|theta| limit_support(a, theta, &cfg.t_ladder), cfg.theta_samples)
}

/// Maximizes a periodic function of the angle: uniform grid, then
/// golden-section refinement around the best few grid maxima.
///
/// Ties go to the smallest angle in `[0, 2 pi)`.
pub fn angular_max<F, E>(f: F, samples: usize) -> Result<RadiusEstimate, E>
where
    F: Fn(f64) -> Result<f64, E> + Sync,
    E: Send,
{
    let n = samples.max(3);
    let h = 2.0 * PI / n as f64;
    let grid: Vec<f64> = (0..n).into_par_iter().map(|k| f(h * k as f64)).collect::<Result<_, E>>()?;

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| grid[k] >= grid[(k + n - 1) % n] && grid[k] >= grid[(k + 1) % n])
        .collect();
    if peaks.is_empty() {
        peaks = (0..n).collect();
    }
    peaks.sort_by(|&i, &j| grid[j].total_cmp(&grid[i]).then(i.cmp(&j)));
    peaks.truncate(REFINED_PEAKS);

    let mut best = RadiusEstimate { value: f64::NEG_INFINITY, argmax_theta: 0.0, refinement_width: h };
    let mut consider = |theta: f64, value: f64, width: f64| {
        let theta = theta.rem_euclid(2.0 * PI);
        if value > best.value || (value == best.value && theta < best.argmax_theta) {
            best = RadiusEstimate { value, argmax_theta: theta, refinement_width: width };
        }
    };
    for &k in &peaks {
        let center = h * k as f64;
        let (mut theta, mut value, width) = golden_max_try(&f, center - h, center + h, ANGULAR_TOL)?;
        if grid[k] >= value {
            (theta, value) = (center, grid[k]);
        }
        consider(theta, value, width);
    }
    Ok(best)
}

/// Golden-section search for a maximum on `[lo, hi]`; returns
/// `(argmax, max, final bracket width)`.
pub fn golden_max_try<F, E>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64, f64), E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            if !(x1 > lo && x1 < x2) {
                break;
            }
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            if !(x2 < hi && x2 > x1) {
                break;
            }
            f2 = f(x2)?;
        }
    }
    let (x, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    Ok((x, v, hi - lo))
}

pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v, _) = golden_max_try::<_, std::convert::Infallible>(|x| Ok(f(x)), lo, hi, tol)
        .unwrap_or_else(|e| match e {});
    (x, v)
}

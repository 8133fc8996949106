//! Pick-matrix route to `||I + t S_B||` and, through the `t -> 0+` limit, to
//! the numerical radius for arbitrary distinct zeros.
//!
//! `||I + t S_B||` is the smallest `gamma` for which the interpolation
//! `h(z_k) = (1 + t z_k) / gamma` has a solution bounded by one, i.e. for which
//! `M_jk = (1 - (1 + t z_j)(1 + conj(t z_k)) / gamma^2) / (1 - z_j conj(z_k))`
//! is positive semidefinite.

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::{BlaschkeError, BlaschkeProduct};
use crate::config::RunConfig;
use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::numrange::{self, NumrangeError, RadiusEstimate};
use crate::result::{InputsEcho, Method, NormResult};

pub const MIN_NODE_SEPARATION: f64 = 1e-9;
/// `min_eigenvalue >= -FEASIBILITY_BAND` counts as positive semidefinite.
pub const FEASIBILITY_BAND: f64 = 1e-11;
/// Radial offset used to split repeated zeros.
pub const REPEATED_ZERO_OFFSET: f64 = 1e-6;
pub const SVD_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PickError {
    #[error("nodes {i} and {j} are {separation:.3e} apart (minimum {MIN_NODE_SEPARATION:e})")]
    NodesTooClose { i: usize, j: usize, separation: f64 },
    #[error("no interpolation nodes")]
    Empty,
    #[error("node {index} = {value} is not inside the unit disk")]
    OutsideDisk { index: usize, value: Complex64 },
    #[error("gamma must be positive and finite, got {0}")]
    BadGamma(f64),
    #[error("t must be finite")]
    BadT,
    #[error("Pick matrix is not PSD at the upper bracket gamma = {upper}")]
    BracketFailure { lower: f64, upper: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Numrange(#[from] NumrangeError),
    #[error(transparent)]
    Blaschke(#[from] BlaschkeError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PickProblem {
    nodes: Vec<Complex64>,
    t: Complex64,
    gamma: f64,
}

impl PickProblem {
    /// `gamma` below `max |1 + t z_k|` is accepted; such problems are simply
    /// infeasible.
    pub fn new(nodes: Vec<Complex64>, t: Complex64, gamma: f64) -> Result<Self, PickError> {
        validate_nodes(&nodes)?;
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(PickError::BadT);
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(PickError::BadGamma(gamma));
        }
        Ok(Self { nodes, t, gamma })
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self, PickError> {
        Self::new(self.nodes.clone(), self.t, gamma)
    }

    /// `max_k |1 + t z_k|`, the smallest `gamma` with a nonnegative diagonal.
    pub fn diagonal_bound(&self) -> f64 {
        diagonal_bound(&self.nodes, self.t)
    }
}

fn validate_nodes(nodes: &[Complex64]) -> Result<(), PickError> {
    if nodes.is_empty() {
        return Err(PickError::Empty);
    }
    for (index, &value) in nodes.iter().enumerate() {
        if !(value.norm() < 1.0) {
            return Err(PickError::OutsideDisk { index, value });
        }
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let separation = (nodes[i] - nodes[j]).norm();
            if separation < MIN_NODE_SEPARATION {
                return Err(PickError::NodesTooClose { i, j, separation });
            }
        }
    }
    Ok(())
}

fn diagonal_bound(nodes: &[Complex64], t: Complex64) -> f64 {
    nodes.iter().map(|&z| (1.0 + t * z).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PickMatrixDecomposition {
    /// Szegő kernel `1 / (1 - z_j conj(z_k))`.
    pub e: ComplexMatrix,
    /// `D E D*` with `D = diag(1 + t z_j)`.
    pub f: ComplexMatrix,
    /// `E - F / gamma^2`.
    pub assembled: ComplexMatrix,
}

pub fn pick_matrix(problem: &PickProblem) -> PickMatrixDecomposition {
    let z = &problem.nodes;
    let n = z.len();
    let d: Vec<Complex64> = z.iter().map(|&zk| 1.0 + problem.t * zk).collect();
    let inv_g2 = 1.0 / (problem.gamma * problem.gamma);
    let mut e = ComplexMatrix::zeros(n, n);
    let mut f = ComplexMatrix::zeros(n, n);
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let kernel = 1.0 - z[j] * z[k].conj();
            let num = d[j] * d[k].conj();
            let (ejk, fjk, mjk) = if j == k {
                let denom = kernel.re;
                let fr = num.re / denom;
                (
                    Complex64::new(1.0 / denom, 0.0),
                    Complex64::new(fr, 0.0),
                    Complex64::new((1.0 - num.re * inv_g2) / denom, 0.0),
                )
            } else {
                (1.0 / kernel, num / kernel, (1.0 - num * inv_g2) / kernel)
            };
            e[(j, k)] = ejk;
            f[(j, k)] = fjk;
            m[(j, k)] = mjk;
            e[(k, j)] = ejk.conj();
            f[(k, j)] = fjk.conj();
            m[(k, j)] = mjk.conj();
        }
    }
    PickMatrixDecomposition { e, f, assembled: m }
}

/// Divided-difference tables `T[r][s] = [c_r, ..., c_s] u` for `r <= s`.
type DdTable = Vec<Vec<Complex64>>;

fn dd_product(a: &DdTable, b: &DdTable) -> DdTable {
    let n = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for r in 0..n {
        for s in r..n {
            out[r][s] = (r..=s).map(|k| a[r][k] * b[k][s]).sum();
        }
    }
    out
}

/// Table of `1 / (1 - z c)`: `[c_r..c_s] = z^(s-r) / prod_{l=r..s} (1 - z c_l)`.
fn dd_cauchy(z: Complex64, c: &[Complex64]) -> DdTable {
    let n = c.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for r in 0..n {
        let mut acc = Complex64::new(1.0, 0.0);
        for s in r..n {
            acc = if s == r { acc / (1.0 - z * c[s]) } else { acc * z / (1.0 - z * c[s]) };
            out[r][s] = acc;
        }
    }
    out
}

/// `[c_0..c_k] c^p`, the complete homogeneous symmetric polynomial
/// `h_{p-k}(c_0..c_k)`, for every `k`.
fn dd_monomial_row(p: usize, c: &[Complex64]) -> Vec<Complex64> {
    (0..c.len())
        .map(|k| {
            if k > p {
                return Complex64::new(0.0, 0.0);
            }
            let deg = p - k;
            // h[d] = h_d(c_0..c_m), extended one variable at a time.
            let mut h = vec![Complex64::new(0.0, 0.0); deg + 1];
            h[0] = Complex64::new(1.0, 0.0);
            for &x in &c[..=k] {
                for d in 1..=deg {
                    h[d] = h[d] + x * h[d - 1];
                }
            }
            h[deg]
        })
        .collect()
}

/// The Szegő and weighted parts of `Delta M Delta*`, where `Delta` maps values
/// at the nodes to Newton divided differences.
///
/// Entries are `[z_0..z_i]_z [c_0..c_j]_c g(z, c)` with `c = conj(w)`,
/// evaluated from closed forms, so no differences of nearby nodes are ever
/// divided. The congruence preserves positive semidefiniteness, and for
/// coalescing nodes the result tends to the Hermite–Pick matrix.
pub fn newton_pick_parts(nodes: &[Complex64], t: Complex64) -> (ComplexMatrix, ComplexMatrix) {
    let n = nodes.len();
    let c: Vec<Complex64> = nodes.iter().map(|z| z.conj()).collect();
    let zero = Complex64::new(0.0, 0.0);
    let t2 = t.norm_sqr();
    let mut e = ComplexMatrix::zeros(n, n);
    let mut f = ComplexMatrix::zeros(n, n);
    let mut q: Option<DdTable> = None;
    for i in 0..n {
        // q = table of 1 / prod_{m <= i} (1 - z_m c).
        let factor = dd_cauchy(nodes[i], &c);
        let qi = match q.take() {
            None => factor,
            Some(prev) => dd_product(&prev, &factor),
        };
        // Numerator after z-differencing: c^i for E, and
        // (1 + |t|^2) c^i + conj(t) c^(i+1) + t (z_0 if i = 0 else c^(i-1)) for F.
        let mono_i = dd_monomial_row(i, &c);
        let mono_next = dd_monomial_row(i + 1, &c);
        let mono_prev: Vec<Complex64> = if i == 0 {
            let mut row = vec![zero; n];
            row[0] = nodes[0];
            row
        } else {
            dd_monomial_row(i - 1, &c)
        };
        for j in 0..n {
            let mut ee = zero;
            let mut ff = zero;
            for k in 0..=j {
                let pf = (1.0 + t2) * mono_i[k] + t.conj() * mono_next[k] + t * mono_prev[k];
                ee += mono_i[k] * qi[k][j];
                ff += pf * qi[k][j];
            }
            if i == 0 && j == 0 {
                ff -= t2;
            }
            e[(i, j)] = ee;
            f[(i, j)] = ff;
        }
        q = Some(qi);
    }
    (e, f)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub min_eigenvalue: f64,
}

pub fn is_feasible(problem: &PickProblem) -> Result<Feasibility, PickError> {
    let min_eigenvalue = linalg::min_eigenvalue(&pick_matrix(problem).assembled)?;
    Ok(Feasibility { feasible: min_eigenvalue >= -FEASIBILITY_BAND, min_eigenvalue })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalGamma {
    pub gamma: f64,
    /// Minimum eigenvalue of the Pick matrix at `gamma`.
    pub min_eigenvalue: f64,
    pub lower: f64,
    pub upper: f64,
    pub bracket_width: f64,
    /// The lower endpoint was already feasible.
    pub at_lower_bound: bool,
}

/// Bisection for the PSD boundary on `[max |1 + t z_k|, 1 + |t| + 1e-9]`.
///
/// Each step tests the sign of the minimum eigenvalue of the congruent
/// matrix from [`newton_pick_parts`]; the reported `min_eigenvalue` is that of
/// the plain Pick matrix at the returned `gamma`.
pub fn critical_gamma_bracket(nodes: &[Complex64], t: Complex64, tol: f64) -> Result<CriticalGamma, PickError> {
    let base = PickProblem::new(nodes.to_vec(), t, 1.0)?;
    let lower = base.diagonal_bound();
    let upper = 1.0 + t.norm() + 1e-9;
    let (e, f) = newton_pick_parts(nodes, t);
    let check = |g: f64| -> Result<Feasibility, PickError> {
        let m = e.sub(&f.scale(Complex64::new(1.0 / (g * g), 0.0)))?.hermitian_part()?;
        let min_eigenvalue = linalg::min_eigenvalue(&m)?;
        Ok(Feasibility { feasible: min_eigenvalue >= 0.0, min_eigenvalue })
    };

    if check(lower)?.feasible {
        return Ok(CriticalGamma {
            gamma: lower,
            min_eigenvalue: is_feasible(&base.with_gamma(lower)?)?.min_eigenvalue,
            lower,
            upper,
            bracket_width: 0.0,
            at_lower_bound: true,
        });
    }
    if !check(upper)?.feasible {
        return Err(PickError::BracketFailure { lower, upper });
    }
    let (mut lo, mut hi) = (lower, upper);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if check(mid)?.feasible {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalGamma {
        gamma: hi,
        min_eigenvalue: is_feasible(&base.with_gamma(hi)?)?.min_eigenvalue,
        lower,
        upper,
        bracket_width: hi - lo,
        at_lower_bound: false,
    })
}

/// `||I + t S_B||` for the product with zeros `nodes`, as the critical Pick
/// bound. With `cfg.cross_check` the SVD of `I + t S_B` is compared at 1e-8.
pub fn critical_gamma(nodes: &[Complex64], t: Complex64, cfg: &RunConfig) -> Result<NormResult, PickError> {
    let c = critical_gamma_bracket(nodes, t, cfg.tol_bisect)?;
    let mut result = NormResult::new(c.gamma, Method::Pick, InputsEcho::zeros(nodes).with_t(t));
    result.diagnostic("min_eigenvalue", c.min_eigenvalue);
    result.diagnostic("bracket_width", c.bracket_width);
    result.diagnostic("lower_bound", c.lower);
    result.diagnostic("upper_bound", c.upper);
    if c.at_lower_bound {
        result.warn("Pick matrix already PSD at max |1 + t z_k|; returning the lower bound");
    }
    if cfg.cross_check {
        let b = BlaschkeProduct::new(nodes.to_vec())?;
        result.cross_check(Method::Oracle, svd_norm(&b, t), SVD_TOL);
    }
    Ok(result)
}

/// `||I + t S_B||` from the singular values of the explicit matrix.
pub fn svd_norm(b: &BlaschkeProduct, t: Complex64) -> f64 {
    numrange::norm_i_plus_ta(&b.shift_matrix().matrix, t).unwrap_or_else(|_| {
        let a = b.shift_matrix().matrix;
        linalg::operator_norm(&ComplexMatrix::identity(a.rows()).add(&a.scale(t)).expect("square"))
    })
}

/// Splits repeated zeros by moving later copies radially by multiples of
/// [`REPEATED_ZERO_OFFSET`]. Returns the new nodes and whether anything moved.
pub fn separate_repeated(zeros: &[Complex64]) -> (Vec<Complex64>, bool) {
    let mut out: Vec<Complex64> = Vec::with_capacity(zeros.len());
    let mut moved = false;
    for (i, &z) in zeros.iter().enumerate() {
        let copies = zeros[..i].iter().filter(|&&w| (w - z).norm() < MIN_NODE_SEPARATION).count();
        let mut candidate = z;
        if copies > 0 {
            let r = z.norm();
            let dir = if r > 0.0 { z / r } else { Complex64::new(1.0, 0.0) };
            let step = if r > 0.5 { -REPEATED_ZERO_OFFSET } else { REPEATED_ZERO_OFFSET };
            let mut k = copies as f64;
            candidate = dir * (r + step * k);
            while out.iter().any(|&w| (w - candidate).norm() < MIN_NODE_SEPARATION) {
                k += 1.0;
                candidate = dir * (r + step * k);
            }
            moved = true;
        }
        out.push(candidate);
    }
    (out, moved)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PickRadius {
    pub estimate: RadiusEstimate,
    /// Zeros actually used as Pick nodes.
    pub nodes: Vec<Complex64>,
    pub perturbed: bool,
}

/// `lim (||I + t e^{-i theta} S_B|| - 1) / t` maximized over `theta`, with each
/// norm taken from [`critical_gamma_bracket`].
pub fn radius_via_pick(b: &BlaschkeProduct, cfg: &RunConfig) -> Result<PickRadius, PickError> {
    let (nodes, perturbed) = separate_repeated(b.zeros());
    validate_nodes(&nodes)?;
    let ladder = &cfg.t_ladder;
    let support = |theta: f64| -> Result<f64, PickError> {
        let dir = Complex64::from_polar(1.0, -theta);
        let quotients = ladder
            .iter()
            .map(|&t| Ok((critical_gamma_bracket(&nodes, dir * t, cfg.tol_bisect)?.gamma - 1.0) / t))
            .collect::<Result<Vec<_>, PickError>>()?;
        Ok(numrange::richardson_limit(&quotients, ladder)?)
    };
    let estimate = numrange::angular_max(support, cfg.theta_samples)?;
    Ok(PickRadius { estimate, nodes, perturbed })
}

/// [`radius_via_pick`] packaged with warnings and an oracle cross-check.
pub fn radius_via_pick_result(b: &BlaschkeProduct, cfg: &RunConfig) -> Result<NormResult, PickError> {
    let r = radius_via_pick(b, cfg)?;
    let mut result = NormResult::new(r.estimate.value, Method::Pick, InputsEcho::zeros(b.zeros()));
    result.diagnostic("argmax_theta", r.estimate.argmax_theta);
    if r.perturbed {
        result.warn(format!("repeated zeros separated by {REPEATED_ZERO_OFFSET:e}; expect an error of that order"));
        result.diagnostic("perturbation", REPEATED_ZERO_OFFSET);
    }
    if cfg.cross_check {
        let oracle = numrange::numerical_radius_with(&b.shift_matrix().matrix, cfg)?;
        result.cross_check(Method::Oracle, oracle.value, numrange::EXTRAPOLATION_SPREAD);
    }
    Ok(result)
}

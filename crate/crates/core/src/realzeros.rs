//! Numerical radius for products with real zeros via the unimodular roots of
//! `z B(z) = +-1`, plus the closed forms for degrees 2, 3 and 4.
//!
//! For real zeros `W(S_B)` is symmetric about the real axis, and its vertical
//! support lines pass through conjugate pairs of solutions of `z B(z) = +-1`.
//! Roots at `+-1` are tangency points of no interest and are discarded; the
//! radius is the largest `|Re z|` over the remaining roots of both equations.

use num_complex::Complex64;
use thiserror::Error;

use crate::blaschke::BlaschkeProduct;
use crate::config::RunConfig;
use crate::linalg::LinalgError;
use crate::numrange;
use crate::poly::{self, ComplexPolynomial, PolyError, RootOptions, RootSet};
use crate::result::{InputsEcho, Method, NormResult};

/// Roots this close to `+-1` are classified as trivial.
pub const TRIVIAL_ROOT_TOL: f64 = 1e-8;
/// Agreement required between the root method and the eigenvalue sweep.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealZerosError {
    #[error("the root method needs all zeros real")]
    NotRealZeros,
    #[error("closed form exists for degree {supported}, got {actual}")]
    WrongDegree { supported: &'static str, actual: usize },
    #[error("zero {0} is outside (-1, 1)")]
    OutOfRange(f64),
    #[error("no nontrivial roots of z B(z) = +-1 were found")]
    NoCandidates,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Which unimodular constant `z B(z)` is set equal to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

/// `z num(z) - sign den(z)`; its roots solve `z B(z) = sign`.
pub fn sign_equation_polynomial(b: &BlaschkeProduct, sign: Sign) -> ComplexPolynomial {
    let (num, den) = b.numerator_denominator();
    let lifted = num.multiply(&ComplexPolynomial::monomial(1));
    lifted
        .sub(&den.scale(Complex64::new(sign.value(), 0.0)).expect("den has unit constant term"))
        .expect("z num is monic of degree n + 1, so the difference is nonzero")
}

/// `max_k |c_k + sign conj(c_{n+1-k})|`; zero for a self-inversive polynomial.
pub fn self_inversive_defect(b: &BlaschkeProduct, sign: Sign) -> f64 {
    let p = sign_equation_polynomial(b, sign);
    let c = p.coefficients();
    let m = c.len() - 1;
    (0..=m).map(|k| (c[k] + c[m - k].conj() * sign.value()).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootCertificate {
    pub sign: Sign,
    pub roots: RootSet,
    /// `| 1 - |z| |` per root.
    pub unimodularity_residuals: Vec<f64>,
    pub trivial_roots: Vec<Complex64>,
    /// Real parts of the nontrivial roots in the closed upper half plane.
    pub candidate_real_parts: Vec<f64>,
}

impl RootCertificate {
    pub fn max_unimodularity_residual(&self) -> f64 {
        self.unimodularity_residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn real_product(b: &BlaschkeProduct) -> Result<BlaschkeProduct, RealZerosError> {
    let zeros = b.real_zeros().ok_or(RealZerosError::NotRealZeros)?;
    BlaschkeProduct::from_real(&zeros).map_err(|_| RealZerosError::NotRealZeros)
}

pub fn root_equation(b: &BlaschkeProduct, sign: Sign) -> Result<RootCertificate, RealZerosError> {
    root_equation_with(b, sign, &RootOptions::default())
}

pub fn root_equation_with(b: &BlaschkeProduct, sign: Sign, opts: &RootOptions) -> Result<RootCertificate, RealZerosError> {
    let b = real_product(b)?;
    let p = sign_equation_polynomial(&b, sign);
    let roots = poly::find_roots_with(&p, opts)?;
    let unimodularity_residuals = roots.roots.iter().map(|z| (1.0 - z.norm()).abs()).collect();
    let is_trivial = |z: &Complex64| {
        (z - Complex64::new(1.0, 0.0)).norm() <= TRIVIAL_ROOT_TOL || (z + Complex64::new(1.0, 0.0)).norm() <= TRIVIAL_ROOT_TOL
    };
    let trivial_roots = roots.roots.iter().copied().filter(is_trivial).collect();
    let candidate_real_parts =
        roots.roots.iter().filter(|z| !is_trivial(z) && z.im >= 0.0).map(|z| z.re).collect();
    Ok(RootCertificate { sign, roots, unimodularity_residuals, trivial_roots, candidate_real_parts })
}

/// `w(S_B)` for real zeros as the largest `|Re z|` over nontrivial roots of
/// `z B(z) = +-1`.
///
/// With `cfg.cross_check` the eigenvalue sweep is run as well; a miss beyond
/// [`ORACLE_TOL`] is recorded as a warning, and above degree 4 the oracle
/// value replaces the root-method value.
pub fn numerical_radius_root_method(b: &BlaschkeProduct, cfg: &RunConfig) -> Result<NormResult, RealZerosError> {
    let opts = RootOptions { tol: cfg.tol_root, ..RootOptions::default() };
    let certs = Sign::both().map(|s| root_equation_with(b, s, &opts));
    let [plus, minus] = certs;
    let (plus, minus) = (plus?, minus?);
    let w = plus
        .candidate_real_parts
        .iter()
        .chain(&minus.candidate_real_parts)
        .map(|x| x.abs())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))))
        .ok_or(RealZerosError::NoCandidates)?;

    let mut result = NormResult::new(w, Method::RootMethod, InputsEcho::zeros(b.zeros()));
    result.diagnostic("max_unimodularity_residual", plus.max_unimodularity_residual().max(minus.max_unimodularity_residual()));
    result.diagnostic("max_root_residual", plus.roots.max_residual().max(minus.roots.max_residual()));
    if cfg.cross_check {
        let oracle = numrange::numerical_radius_with(&b.shift_matrix().matrix, cfg)?;
        if !result.cross_check(Method::Oracle, oracle.value, ORACLE_TOL) && b.degree() > 4 {
            result.value = oracle.value;
            result.warn("root-method value replaced by the eigenvalue-sweep oracle");
        }
    }
    Ok(result)
}

fn check_range(zeros: &[f64]) -> Result<(), RealZerosError> {
    match zeros.iter().find(|x| !(x.abs() < 1.0)) {
        Some(&x) => Err(RealZerosError::OutOfRange(x)),
        None => Ok(()),
    }
}

pub fn closed_form_degree2(a1: f64, a2: f64) -> f64 {
    let p = ((a1 + a2 - a1 * a2 + 1.0) / 2.0).abs();
    let q = ((a1 + a2 + a1 * a2 - 1.0) / 2.0).abs();
    p.max(q)
}

/// Real parts `x` with `2x^2 - alpha x + (beta - 1) = 0`.
pub fn quadratic_real_parts(alpha: f64, beta: f64) -> [f64; 2] {
    let disc = (alpha * alpha - 8.0 * (beta - 1.0)).max(0.0).sqrt();
    [(alpha + disc) / 4.0, (alpha - disc) / 4.0]
}

pub fn closed_form_degree3(a: f64, b: f64, c: f64) -> f64 {
    let alpha = a + b + c + a * b * c;
    let beta = a * b + a * c + b * c;
    debug_assert!(alpha * alpha - 8.0 * (beta - 1.0) >= 0.0);
    let [x1, x2] = quadratic_real_parts(alpha, beta);
    x1.abs().max(x2.abs())
}

/// `(alpha, beta)` of the two quartic cofactors for real zeros `a, b, c, d`,
/// ordered as (`z B(z) = 1`, `z B(z) = -1`).
pub fn degree4_cofactor_coeffs(a: f64, b: f64, c: f64, d: f64) -> [(f64, f64); 2] {
    let alpha_plus = -1.0 + a + b + c + d + a * b * c * d;
    let two_beta_plus = (-1.0 + c) * (-1.0 + d)
        + b * (-1.0 + c + d + c * d)
        + a * (-1.0 + c + d + c * d + b * (1.0 + c + d - c * d));
    let alpha_minus = 1.0 + b + c + d - a * (-1.0 + b * c * d);
    let two_beta_minus = (1.0 + c) * (1.0 + d)
        + b * (1.0 + c + d - c * d)
        + a * (1.0 + c + d - c * d - b * (-1.0 + c + d + c * d));
    [(alpha_plus, two_beta_plus / 2.0), (alpha_minus, two_beta_minus / 2.0)]
}

pub fn closed_form_degree4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    degree4_cofactor_coeffs(a, b, c, d)
        .iter()
        .flat_map(|&(alpha, beta)| quadratic_real_parts(alpha, beta))
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// `w(S_B)` for `B(z) = z ((z - a) / (1 - a z))^2`.
pub fn closed_form_origin_double_zero(a: f64) -> f64 {
    let r = (2.0 - a * a).sqrt() / 2.0;
    (a / 2.0 + r).abs().max((a / 2.0 - r).abs())
}

/// Closed-form radius for real zeros of degree 1 to 4.
pub fn closed_form(b: &BlaschkeProduct) -> Result<f64, RealZerosError> {
    let z = b.real_zeros().ok_or(RealZerosError::NotRealZeros)?;
    check_range(&z)?;
    match *z.as_slice() {
        [a] => Ok(a.abs()),
        [a, b] => Ok(closed_form_degree2(a, b)),
        [a, b, c] => Ok(closed_form_degree3(a, b, c)),
        [a, b, c, d] => Ok(closed_form_degree4(a, b, c, d)),
        _ => Err(RealZerosError::WrongDegree { supported: "1 to 4", actual: z.len() }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormCoefficients {
    /// Negative of the `z` coefficient of the normalized cofactor.
    pub alpha: f64,
    /// Half the `z^2` coefficient of the normalized cofactor.
    pub beta: f64,
    pub degree: usize,
}

/// Deflates the trivial `z = +-1` roots out of `z num - sign den` and reads
/// `alpha`, `beta` off the cofactor normalized to constant term 1.
pub fn closed_form_coeffs(b: &BlaschkeProduct, sign: Sign) -> Result<ClosedFormCoefficients, RealZerosError> {
    let b = real_product(b)?;
    let n = b.degree();
    if !(2..=4).contains(&n) {
        return Err(RealZerosError::WrongDegree { supported: "2 to 4", actual: n });
    }
    let mut p = sign_equation_polynomial(&b, sign);
    let one = Complex64::new(1.0, 0.0);
    // B(1) = 1 and B(-1) = (-1)^n for real zeros.
    if sign == Sign::Plus {
        p = p.deflate(one).0;
    }
    let minus_one_is_root = (sign == Sign::Plus) == (n % 2 == 1);
    if minus_one_is_root {
        p = p.deflate(-one).0;
    }
    let c = p.coefficients();
    let c0 = c[0].re;
    Ok(ClosedFormCoefficients { alpha: -c[1].re / c0, beta: c[2].re / c0 / 2.0, degree: n })
}

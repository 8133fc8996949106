//! Finite Blaschke products, their polynomial forms, and the upper-triangular
//! matrix of the compressed shift on the model space.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix, LinalgError};
use crate::poly::ComplexPolynomial;

/// Zeros must satisfy `|a| < 1 - BOUNDARY_MARGIN`.
pub const BOUNDARY_MARGIN: f64 = 1e-12;
/// `|1 - conj(a) z|` below this counts as evaluating at a pole.
pub const POLE_TOL: f64 = 1e-14;
/// Imaginary parts at or below this are treated as zero by `has_real_zeros`.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlaschkeError {
    #[error("a Blaschke product needs at least one zero")]
    Empty,
    #[error("zero {index} = {value} is not strictly inside the unit disk")]
    OutsideDisk { index: usize, value: Complex64 },
    #[error("evaluation point {0} hits a pole")]
    PoleHit(Complex64),
    #[error("expected degree {expected}, got {actual}")]
    WrongDegree { expected: usize, actual: usize },
    #[error("cannot parse complex literal {0:?}")]
    Parse(String),
}

/// Finite Blaschke product `prod (z - a_k) / (1 - conj(a_k) z)` with no
/// unimodular prefactor.
#[derive(Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self, BlaschkeError> {
        if zeros.is_empty() {
            return Err(BlaschkeError::Empty);
        }
        for (index, &value) in zeros.iter().enumerate() {
            let finite = value.re.is_finite() && value.im.is_finite();
            if !finite || value.norm() >= 1.0 - BOUNDARY_MARGIN {
                return Err(BlaschkeError::OutsideDisk { index, value });
            }
        }
        Ok(Self { zeros })
    }

    pub fn from_real(zeros: &[f64]) -> Result<Self, BlaschkeError> {
        Self::new(zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn has_real_zeros(&self) -> bool {
        self.zeros.iter().all(|z| z.im.abs() <= REAL_TOL)
    }

    /// Real parts of the zeros, if all of them are real.
    pub fn real_zeros(&self) -> Option<Vec<f64>> {
        self.has_real_zeros().then(|| self.zeros.iter().map(|z| z.re).collect())
    }

    pub fn has_distinct_zeros(&self, min_separation: f64) -> bool {
        self.min_separation() >= min_separation
    }

    pub fn min_separation(&self) -> f64 {
        let mut sep = f64::INFINITY;
        for i in 0..self.zeros.len() {
            for j in (i + 1)..self.zeros.len() {
                sep = sep.min((self.zeros[i] - self.zeros[j]).norm());
            }
        }
        sep
    }

    /// Zeros multiplied by `e^{i phi}`.
    ///
    /// `S_B` for the rotated product is unitarily equivalent to
    /// `e^{i phi} S_B`, so norms and radii carry over.
    pub fn rotated(&self, phi: f64) -> Self {
        let u = Complex64::from_polar(1.0, phi);
        Self { zeros: self.zeros.iter().map(|&a| a * u).collect() }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, BlaschkeError> {
        let mut acc = Complex64::new(1.0, 0.0);
        for &a in &self.zeros {
            let den = Complex64::new(1.0, 0.0) - a.conj() * z;
            if den.norm() < POLE_TOL {
                return Err(BlaschkeError::PoleHit(z));
            }
            acc *= (z - a) / den;
        }
        Ok(acc)
    }

    /// `(prod (z - a_k), prod (1 - conj(a_k) z))` in expanded form.
    pub fn numerator_denominator(&self) -> (ComplexPolynomial, ComplexPolynomial) {
        let one = Complex64::new(1.0, 0.0);
        let mut num = ComplexPolynomial::one();
        let mut den = ComplexPolynomial::one();
        for &a in &self.zeros {
            num = num.multiply(&ComplexPolynomial::new(vec![-a, one]).expect("monic factor"));
            den = den.multiply(&ComplexPolynomial::new(vec![one, -a.conj()]).expect("unit constant term"));
        }
        (num, den)
    }

    pub fn shift_matrix(&self) -> CompressedShiftMatrix {
        let n = self.degree();
        let mut m = ComplexMatrix::zeros(n, n);
        let defects: Vec<f64> = self.zeros.iter().map(|a| (1.0 - a.norm_sqr()).sqrt()).collect();
        for i in 0..n {
            m[(i, i)] = self.zeros[i];
            let mut chain = Complex64::new(1.0, 0.0);
            for j in (i + 1)..n {
                m[(i, j)] = chain * (defects[i] * defects[j]);
                chain *= -self.zeros[j].conj();
            }
        }
        CompressedShiftMatrix { matrix: m, zero_order: self.zeros.clone() }
    }

    pub fn ellipse_for_degree2(&self) -> Result<EllipseParams, BlaschkeError> {
        if self.degree() != 2 {
            return Err(BlaschkeError::WrongDegree { expected: 2, actual: self.degree() });
        }
        let (f1, f2) = (self.zeros[0], self.zeros[1]);
        let minor_axis = self.shift_matrix().trace_minor_axis();
        let major_axis = (minor_axis * minor_axis + (f1 - f2).norm_sqr()).sqrt();
        Ok(EllipseParams { foci: (f1, f2), minor_axis, major_axis, center: (f1 + f2) * 0.5 })
    }
}

impl fmt::Debug for BlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("BlaschkeProduct").field(&self.zeros).finish()
    }
}

/// Matrix of the compressed shift in the Takenaka–Malmquist basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedShiftMatrix {
    pub matrix: ComplexMatrix,
    pub zero_order: Vec<Complex64>,
}

impl CompressedShiftMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_upper_triangular(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.matrix[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    pub fn norm(&self) -> f64 {
        linalg::operator_norm(&self.matrix)
    }

    pub fn rank_one_defect(&self) -> Result<f64, LinalgError> {
        linalg::rank_one_defect_check(&self.matrix)
    }

    /// `sqrt(tr(A* A) - sum |a_k|^2)`: the Frobenius mass above the diagonal.
    ///
    /// For two zeros this is the minor axis of the elliptical numerical range.
    pub fn trace_minor_axis(&self) -> f64 {
        let tr = self.matrix.adjoint().matmul(&self.matrix).expect("square").trace().re;
        let diag: f64 = self.zero_order.iter().map(|a| a.norm_sqr()).sum();
        (tr - diag).max(0.0).sqrt()
    }
}

/// Elliptical disk with the given foci and axis lengths (full lengths, not
/// semi-axes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub foci: (Complex64, Complex64),
    pub minor_axis: f64,
    pub major_axis: f64,
    pub center: Complex64,
}

impl EllipseParams {
    /// Boundary point at parameter `phi`.
    pub fn boundary_point(&self, phi: f64) -> Complex64 {
        let d = self.foci.1 - self.foci.0;
        let dir = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let local = Complex64::new(0.5 * self.major_axis * phi.cos(), 0.5 * self.minor_axis * phi.sin());
        self.center + dir * local
    }

    /// Largest modulus over the elliptical disk.
    pub fn max_modulus(&self) -> f64 {
        let foci_collinear_with_origin = {
            let (a, b) = self.foci;
            (a.conj() * b).im.abs() <= 1e-15 * (1.0 + a.norm() * b.norm())
        };
        if foci_collinear_with_origin {
            // Major axis lies on a line through 0: farthest point is an apex.
            return self.center.norm() + 0.5 * self.major_axis;
        }
        let f = |phi: f64| self.boundary_point(phi).norm();
        let samples = 3600;
        let (mut best_phi, mut best) = (0.0, f(0.0));
        for k in 1..samples {
            let phi = 2.0 * PI * k as f64 / samples as f64;
            let v = f(phi);
            if v > best {
                best = v;
                best_phi = phi;
            }
        }
        let h = 2.0 * PI / samples as f64;
        let (_, v) = crate::numrange::golden_max(f, best_phi - h, best_phi + h, 1e-13);
        v.max(best)
    }
}

/// Parses `re`, `re+imi`, `re-imi` or `imi`; whitespace is ignored.
pub fn parse_complex(text: &str) -> Result<Complex64, BlaschkeError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || BlaschkeError::Parse(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    let value = match s.strip_suffix('i') {
        None => Complex64::new(s.parse::<f64>().map_err(|_| err())?, 0.0),
        Some(body) => parse_with_imaginary(body).ok_or_else(err)?,
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(err())
    }
}

fn parse_with_imaginary(body: &str) -> Option<Complex64> {
    // Split at the last sign that is not the exponent sign or the leading sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let parse_im = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => t.parse::<f64>().ok(),
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse::<f64>().ok()?, parse_im(&body[k..])?)),
        None => Some(Complex64::new(0.0, parse_im(body)?)),
    }
}

/// Comma-separated list of complex literals, e.g. `0,0.5` or `0.3+0.1i,-0.2`.
pub fn parse_zeros(text: &str) -> Result<Vec<Complex64>, BlaschkeError> {
    text.split(',').map(parse_complex).collect()
}

/// Canonical text form used when echoing inputs.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

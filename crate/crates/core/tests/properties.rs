mod common;

use proptest::prelude::*;
use shiftrad_core::blaschke::BlaschkeProduct;
use shiftrad_core::ft::{ft_quadratic_roots, ft_scan};
use shiftrad_core::linalg::{self, hermitian_eigen, ComplexMatrix};
use shiftrad_core::numrange::{self, difference_quotients, numerical_radius, richardson_limit, support_function};
use shiftrad_core::pick::{self, pick_matrix, PickProblem};
use shiftrad_core::poly::{find_roots, ComplexPolynomial};
use shiftrad_core::realzeros::{self, closed_form, root_equation, self_inversive_defect, Sign};
use shiftrad_core::{Complex64, RunConfig};

fn complex_in(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(move |(r, phi)| Complex64::from_polar(radius * r.sqrt(), phi))
}

fn real_zeros(min: usize, max: usize, bound: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-bound..bound, min..=max)
}

fn complex_zeros(min: usize, max: usize, radius: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec(complex_in(radius), min..=max)
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |v| {
        let entries = v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(n, n, entries).unwrap().hermitian_part().unwrap()
    })
}

fn shift(zeros: &[Complex64]) -> ComplexMatrix {
    BlaschkeProduct::new(zeros.to_vec()).unwrap().shift_matrix().matrix
}

/// Greedy matching by globally closest pairs; returns the worst matched distance.
fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs: Vec<(f64, usize, usize)> =
        (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).map(|(i, j)| ((a[i] - b[j]).norm(), i, j)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut worst: f64 = 0.0;
    for (d, i, j) in pairs {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            worst = worst.max(d);
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_are_recovered(roots in prop::collection::vec(complex_in(2.0), 1..=12)) {
        let p = ComplexPolynomial::from_roots(&roots);
        let found = find_roots(&p).unwrap();
        prop_assert_eq!(found.roots.len(), roots.len());
        let min_sep = roots.iter().enumerate()
            .flat_map(|(i, a)| roots[i + 1..].iter().map(move |b| (a - b).norm()))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(min_sep > 1e-2);
        prop_assert!(matching_distance(&roots, &found.roots) <= 1e-9);
        prop_assert!(found.max_residual() <= 1e-11 * p.max_coeff_modulus());
    }

    #[test]
    fn real_polynomials_have_conjugate_closed_roots(coeffs in prop::collection::vec(-3.0..3.0f64, 2..=11)) {
        prop_assume!(coeffs.last().unwrap().abs() > 1e-2);
        let p = ComplexPolynomial::from_real(&coeffs).unwrap();
        let roots = find_roots(&p).unwrap().roots;
        for z in &roots {
            prop_assert!(roots.iter().any(|w| *w == z.conj()), "{z} has no exact conjugate in {roots:?}");
        }
    }

    #[test]
    fn eigen_reconstruction(a in (1usize..=20).prop_flat_map(hermitian)) {
        let n = a.rows();
        let eig = hermitian_eigen(&a).unwrap();
        let v = &eig.eigenvectors;
        let lambda = ComplexMatrix::from_diagonal(&eig.eigenvalues);
        let rebuilt = v.matmul(&lambda).unwrap().matmul(&v.adjoint()).unwrap();
        prop_assert!(rebuilt.sub(&a).unwrap().frobenius_norm() <= 1e-12 * a.frobenius_norm().max(1.0) * n as f64);
        let gram = v.adjoint().matmul(v).unwrap();
        prop_assert!(gram.sub(&ComplexMatrix::identity(n)).unwrap().frobenius_norm() <= 1e-12 * n as f64);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn weyl_monotonicity(a in hermitian(6), g in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 36)) {
        let g = ComplexMatrix::from_row_major(6, 6, g.into_iter().map(|(r, i)| Complex64::new(r, i)).collect()).unwrap();
        let p = g.matmul(&g.adjoint()).unwrap().hermitian_part().unwrap();
        let sum = a.add(&p).unwrap();
        prop_assert!(linalg::min_eigenvalue(&sum).unwrap() >= linalg::min_eigenvalue(&a).unwrap() - 1e-12);
    }

    #[test]
    fn operator_norm_is_unitarily_invariant(a in hermitian(5), h1 in hermitian(5), h2 in hermitian(5), k in complex_zeros(25, 25, 1.0)) {
        let a = ComplexMatrix::from_row_major(5, 5, k).unwrap().add(&a).unwrap();
        let u = hermitian_eigen(&h1).unwrap().eigenvectors;
        let v = hermitian_eigen(&h2).unwrap().eigenvectors;
        let rotated = u.matmul(&a).unwrap().matmul(&v).unwrap();
        prop_assert!((linalg::operator_norm(&rotated) - linalg::operator_norm(&a)).abs() <= 1e-11);
    }

    #[test]
    fn blaschke_is_unimodular_on_the_circle(zeros in complex_zeros(1, 8, 0.95), phis in prop::collection::vec(0.0..std::f64::consts::TAU, 64)) {
        let b = BlaschkeProduct::new(zeros).unwrap();
        for phi in phis {
            prop_assert!((b.eval(Complex64::from_polar(1.0, phi)).unwrap().norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn numerator_denominator_duality(zeros in real_zeros(1, 10, 0.95)) {
        let b = BlaschkeProduct::from_real(&zeros).unwrap();
        let (num, den) = b.numerator_denominator();
        let (cn, cd) = (num.coefficients(), den.coefficients());
        let n = zeros.len();
        prop_assert_eq!(cn.len(), n + 1);
        for k in 0..=n {
            let d = if k < cd.len() { cd[k] } else { Complex64::new(0.0, 0.0) };
            prop_assert!((d - cn[n - k].conj()).norm() <= 1e-13);
        }
    }

    #[test]
    fn shift_matrix_invariants(zeros in complex_zeros(1, 8, 0.95)) {
        let s = BlaschkeProduct::new(zeros).unwrap().shift_matrix();
        prop_assert!(s.is_upper_triangular());
        prop_assert!(s.norm() <= 1.0 + 1e-10);
        prop_assert!(s.rank_one_defect().unwrap() <= 1e-10);
    }

    #[test]
    fn radius_is_rotation_invariant(zeros in complex_zeros(1, 5, 0.9), phi in 0.0..std::f64::consts::TAU) {
        let a = shift(&zeros);
        let w = numerical_radius(&a).unwrap().value;
        let wr = numerical_radius(&a.scale(Complex64::from_polar(1.0, phi))).unwrap().value;
        prop_assert!((w - wr).abs() <= 1e-10);
    }

    #[test]
    fn support_is_symmetric_for_real_zeros(zeros in real_zeros(1, 6, 0.95), theta in 0.0..std::f64::consts::PI) {
        let a = BlaschkeProduct::from_real(&zeros).unwrap().shift_matrix().matrix;
        let plus = support_function(&a, theta).unwrap().support_value;
        let minus = support_function(&a, -theta).unwrap().support_value;
        prop_assert!((plus - minus).abs() <= 1e-10);
    }

    #[test]
    fn difference_quotients_are_monotone(zeros in complex_zeros(1, 6, 0.95), theta in 0.0..std::f64::consts::TAU) {
        let a = shift(&zeros);
        let ladder = RunConfig::default().t_ladder;
        let q = difference_quotients(&a, theta, &ladder).unwrap();
        // The ladder decreases, so the quotients must not increase along it.
        prop_assert!(q.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{q:?}");
        let limit = richardson_limit(&q, &ladder).unwrap();
        prop_assert!(q.iter().all(|&x| limit <= x + 1e-12));
    }

    #[test]
    fn sandwich_bound(zeros in complex_zeros(1, 8, 0.95)) {
        let a = shift(&zeros);
        let norm = linalg::operator_norm(&a);
        let w = numerical_radius(&a).unwrap().value;
        prop_assert!(norm / 2.0 <= w + 1e-10 && w <= norm + 1e-10);
    }

    #[test]
    fn sign_equation_roots_are_unimodular(zeros in real_zeros(1, 10, 0.95)) {
        let b = BlaschkeProduct::from_real(&zeros).unwrap();
        for s in Sign::both() {
            let cert = root_equation(&b, s).unwrap();
            prop_assert!(cert.max_unimodularity_residual() <= 1e-8);
            prop_assert!(self_inversive_defect(&b, s) <= 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_root_method(zeros in real_zeros(2, 4, 0.9)) {
        let b = BlaschkeProduct::from_real(&zeros).unwrap();
        let cfg = RunConfig { cross_check: false, ..RunConfig::default() };
        let roots = realzeros::numerical_radius_root_method(&b, &cfg).unwrap().value;
        prop_assert!((closed_form(&b).unwrap() - roots).abs() <= 1e-10);
    }

    #[test]
    fn degree3_candidates_solve_the_quadratic(zeros in real_zeros(3, 3, 0.9)) {
        let (a, b, c) = (zeros[0], zeros[1], zeros[2]);
        let alpha = a + b + c + a * b * c;
        let beta = a * b + a * c + b * c;
        let cert = root_equation(&BlaschkeProduct::from_real(&zeros).unwrap(), Sign::Minus).unwrap();
        for x in cert.candidate_real_parts {
            prop_assert!((2.0 * x * x - alpha * x + beta - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn pick_matrix_is_monotone_in_gamma(zeros in complex_zeros(2, 5, 0.9), t in complex_in(0.5), g1 in 0.5..2.0f64, dg in 0.0..1.0f64) {
        let b = BlaschkeProduct::new(zeros.clone()).unwrap();
        prop_assume!(b.min_separation() > 1e-6);
        let lo = pick_matrix(&PickProblem::new(zeros.clone(), t, g1).unwrap());
        let hi = pick_matrix(&PickProblem::new(zeros, t, g1 + dg).unwrap());
        let diff = hi.assembled.sub(&lo.assembled).unwrap().hermitian_part().unwrap();
        let scaled_f = lo.f.scale(Complex64::new(1.0 / (g1 * g1) - 1.0 / ((g1 + dg) * (g1 + dg)), 0.0));
        prop_assert!(diff.sub(&scaled_f).unwrap().frobenius_norm() <= 1e-12 * scaled_f.frobenius_norm().max(1.0));
        prop_assert!(linalg::min_eigenvalue(&lo.f).unwrap() >= -1e-10);
        prop_assert!(linalg::min_eigenvalue(&hi.assembled).unwrap() >= linalg::min_eigenvalue(&lo.assembled).unwrap() - 1e-12 * lo.e.frobenius_norm());
    }

    #[test]
    fn critical_gamma_is_the_norm(zeros in complex_zeros(2, 6, 0.9), t in complex_in(0.5)) {
        let b = BlaschkeProduct::new(zeros.clone()).unwrap();
        prop_assume!(b.min_separation() > 1e-6);
        let c = pick::critical_gamma_bracket(&zeros, t, 1e-12).unwrap();
        let svd = numrange::norm_i_plus_ta(&b.shift_matrix().matrix, t).unwrap();
        prop_assert!((c.gamma - svd).abs() <= 1e-8, "{} vs {svd}", c.gamma);
        prop_assert!(c.gamma >= c.lower - 1e-11 && c.gamma <= 1.0 + t.norm() + 1e-11);
        prop_assert!(c.min_eigenvalue >= -pick::FEASIBILITY_BAND);
    }

    #[test]
    fn ft_scan_respects_vieta(zeros in real_zeros(2, 5, 0.9), a in prop::sample::select(vec![0.4, 0.2, 0.1, 0.05])) {
        let b = BlaschkeProduct::from_real(&zeros).unwrap();
        for s in ft_scan(&b, Complex64::new(a, 0.0)).unwrap() {
            let (prod, sum) = s.vieta_residuals();
            prop_assert!(prod <= 1e-10 && sum <= 1e-10);
            prop_assert!(s.defect.re.abs() <= 1e-12);
        }
    }

    #[test]
    fn ft_roots_satisfy_vieta_for_complex_a(a in complex_in(0.9), rho in 0.01..1.5f64) {
        prop_assume!(a.norm() > 1e-3);
        let (z1, z2) = ft_quadratic_roots(a, rho);
        let s = 4.0 * rho * rho - 1.0 - a.norm_sqr();
        prop_assert!((z1 * z2 - a.conj() / a).norm() <= 1e-10);
        prop_assert!((z1 + z2 - s / a).norm() <= 1e-10 * (1.0 + (s / a).norm()));
    }
}

#[test]
fn shift_matrix_corpus_of_200() {
    let mut r = common::rng(2024);
    for k in 0..200 {
        let s = common::complex_product(&mut r, 1 + k % 8, 0.95).shift_matrix();
        assert!(s.is_upper_triangular());
        assert!(s.norm() <= 1.0 + 1e-10);
        assert!(s.rank_one_defect().unwrap() <= 1e-10);
    }
}

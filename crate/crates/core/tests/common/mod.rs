#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftrad_core::{BlaschkeProduct, Complex64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn real_zeros(rng: &mut ChaCha8Rng, degree: usize, bound: f64) -> Vec<f64> {
    (0..degree).map(|_| rng.gen_range(-bound..bound)).collect()
}

pub fn complex_zeros(rng: &mut ChaCha8Rng, degree: usize, radius: f64) -> Vec<Complex64> {
    (0..degree)
        .map(|_| Complex64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

pub fn real_product(rng: &mut ChaCha8Rng, degree: usize, bound: f64) -> BlaschkeProduct {
    BlaschkeProduct::from_real(&real_zeros(rng, degree, bound)).unwrap()
}

pub fn complex_product(rng: &mut ChaCha8Rng, degree: usize, radius: f64) -> BlaschkeProduct {
    BlaschkeProduct::new(complex_zeros(rng, degree, radius)).unwrap()
}

/// Fixed examples plus 200 random products (degrees 1 to 8, |a| <= 0.95),
/// half with real zeros.
pub fn corpus() -> Vec<BlaschkeProduct> {
    let fixed: &[&[f64]] = &[
        &[0.0],
        &[0.5],
        &[0.0, 0.5],
        &[0.0, 0.0],
        &[0.0, 0.0, 0.0],
        &[0.0, 0.5, 0.5],
        &[0.4, -0.4],
        &[0.8, 0.8, -0.8, 0.8],
        &[0.0; 8],
    ];
    let mut out: Vec<BlaschkeProduct> = fixed.iter().map(|z| BlaschkeProduct::from_real(z).unwrap()).collect();
    out.push(BlaschkeProduct::new(vec![Complex64::new(0.2, 0.3), Complex64::new(-0.1, 0.0)]).unwrap());
    let mut r = rng(0x5eed_c0de);
    for k in 0..200 {
        let degree = 1 + k % 8;
        out.push(if k % 2 == 0 { real_product(&mut r, degree, 0.95) } else { complex_product(&mut r, degree, 0.95) });
    }
    out
}

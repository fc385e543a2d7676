//! Seeded random vectors and matrices for heuristics and property checks.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::HermitianMatrix;
use crate::scalar::Real;

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(a), T::lit(b))
}

pub fn random_complex_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex<T>> {
    DVector::from_fn(n, |_, _| gaussian(rng))
}

/// Haar-distributed unit vector in `ℂ^n`.
pub fn random_unit_vector<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<Complex<T>> {
    let v = random_complex_vector(rng, n);
    let norm = v.norm();
    v.unscale(norm)
}

pub fn random_complex_matrix<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DMatrix<Complex<T>> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// GUE-like hermitian matrix.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix<T> {
    HermitianMatrix::symmetrized(random_complex_matrix(rng, n, n))
}

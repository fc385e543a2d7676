mod common;

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use proptest::prelude::*;

use common::*;
use pptgeo::angle::Angle;
use pptgeo::json::{bipartite_from_json, bipartite_to_json, matrix_from_json, matrix_to_json, parse};
use pptgeo::krawtchouk::{krawtchouk_sum, krawtchouk_sum_big};
use pptgeo::linalg::{
    eig_hermitian, hermitian_to_real_vector, kernel_basis, range_projection, rank_tol,
    real_operator_matrix, real_vector_to_hermitian, ComplexMatrix, HermitianMatrix, Tolerance,
};
use pptgeo::maps::{apply_map, choi_of, decomposable_map, pairing, phi_theta_coefficients, DecomposableSpec};
use pptgeo::states::{is_ppt, p_theta, partial_transpose, rho, sigma, BipartiteMatrix};

fn hermitian(seed: u64, n: usize) -> HermitianMatrix<f64> {
    let a = random_matrix(&mut rng(seed), n, n);
    HermitianMatrix::from_dmatrix((&a + a.adjoint()) * Complex::new(0.5, 0.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvectors_are_unitary(seed in any::<u64>(), n in 1usize..10) {
        let e = eig_hermitian(&hermitian(seed, n)).unwrap();
        let gap = (e.vectors.adjoint() * &e.vectors - DMatrix::<Complex<f64>>::identity(n, n)).norm();
        prop_assert!(gap <= 1e-8);
    }

    #[test]
    fn rank_plus_nullity(seed in any::<u64>(), n in 2usize..10, k in 1usize..10) {
        // rank-deficient by construction: B B† with B of width k
        let b = random_matrix(&mut rng(seed), n, k.min(n));
        let h = HermitianMatrix::from_dmatrix(&b * b.adjoint()).unwrap();
        let tol = Tolerance::default();
        let r = rank_tol(&h, &tol).unwrap();
        prop_assert_eq!(r + kernel_basis(&h, &tol).unwrap().len(), n);
        prop_assert_eq!(r, k.min(n));
    }

    #[test]
    fn range_projection_is_idempotent(seed in any::<u64>(), n in 2usize..10, k in 1usize..9) {
        let b = random_matrix(&mut rng(seed), n, k.min(n));
        let h = HermitianMatrix::from_dmatrix(&b * b.adjoint()).unwrap();
        let p = range_projection(&h, &Tolerance::default()).unwrap();
        let pm = p.as_dmatrix();
        prop_assert!((pm * pm - pm).norm() <= 1e-9);
        prop_assert!((pm - pm.adjoint()).norm() <= 1e-9);
    }

    #[test]
    fn vectorization_is_an_isometry(s1 in any::<u64>(), s2 in any::<u64>(), n in 1usize..8) {
        let x = hermitian(s1, n);
        let y = hermitian(s2, n);
        let dot = hermitian_to_real_vector(&x).dot(&hermitian_to_real_vector(&y));
        prop_assert!((x.trace_product(&y) - dot).abs() <= 1e-10 * x.norm() * y.norm());
        let back = real_vector_to_hermitian(&hermitian_to_real_vector(&x), n).unwrap();
        prop_assert!((back.as_dmatrix() - x.as_dmatrix()).norm() <= 1e-15 * (1.0 + x.norm()));
    }

    #[test]
    fn partial_transpose_is_a_trace_preserving_involution(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let x = BipartiteMatrix::new(m, n, hermitian(seed, m * n)).unwrap();
        let g = partial_transpose(&x);
        prop_assert!((g.trace() - x.trace()).abs() <= 1e-12);
        prop_assert_eq!(&partial_transpose(&g), &x);
        prop_assert_eq!(g.matrix().as_dmatrix(), &gamma(x.matrix().as_dmatrix(), m, n));
    }

    #[test]
    fn json_round_trip_is_bit_exact(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let x = BipartiteMatrix::new(m, n, hermitian(seed, m * n)).unwrap();
        let back: BipartiteMatrix<f64> = bipartite_from_json(&parse(&bipartite_to_json(&x).to_string()).unwrap()).unwrap();
        prop_assert_eq!(back, x);
        let a = ComplexMatrix::from_dmatrix(random_matrix(&mut rng(seed ^ 1), m, n)).unwrap();
        let back: ComplexMatrix<f64> = matrix_from_json(&parse(&matrix_to_json(&a).to_string()).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn angle_round_trip(num in -48i64..48, den in 1i64..24, x in -10.0f64..10.0) {
        let a = Angle::pi_multiple(num, den).unwrap();
        prop_assert_eq!(a.to_string().parse::<Angle>().unwrap(), a);
        let r = Angle::Radians(x);
        prop_assert_eq!(r.to_string().parse::<Angle>().unwrap(), r);
    }

    #[test]
    fn choi_round_trip(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut r = rng(seed);
        let spec = DecomposableSpec::new(
            vec![ComplexMatrix::from_dmatrix(random_matrix(&mut r, m, n)).unwrap()],
            vec![ComplexMatrix::from_dmatrix(random_matrix(&mut r, m, n)).unwrap()],
        ).unwrap();
        let map = decomposable_map(&spec).unwrap();
        let x = random_matrix(&mut r, m, m);
        prop_assert!((apply_map(&map, &x).unwrap() - spec.apply(&x)).norm() <= 1e-10);
        let again = choi_of(m, n, |y| apply_map(&map, y).unwrap()).unwrap();
        prop_assert!((again.choi().matrix() - map.choi().matrix()).norm() <= 1e-10);
    }

    #[test]
    fn pairing_is_bilinear(seed in any::<u64>(), s in -3.0f64..3.0) {
        let mut r = rng(seed);
        let x = BipartiteMatrix::new(2, 3, hermitian(seed, 6)).unwrap();
        let y = BipartiteMatrix::new(2, 3, hermitian(seed ^ 7, 6)).unwrap();
        let spec = DecomposableSpec::new(
            vec![ComplexMatrix::from_dmatrix(random_matrix(&mut r, 2, 3)).unwrap()],
            vec![],
        ).unwrap();
        let phi = decomposable_map(&spec).unwrap();
        let lhs = pairing(&(&x + &y.scale(s)), &phi).unwrap();
        let rhs = pairing(&x, &phi).unwrap() + s * pairing(&y, &phi).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        let oracle = pairing_oracle(x.matrix().as_dmatrix(), phi.choi().matrix().as_dmatrix());
        prop_assert!((pairing(&x, &phi).unwrap() - oracle.re).abs() <= 1e-10 * (1.0 + oracle.norm()));
    }

    #[test]
    fn phi_theta_coefficients_sum_to_p(theta in -PI..PI, t in 0.01f64..50.0) {
        let (a, b, c) = phi_theta_coefficients(theta, t).unwrap();
        prop_assert!((a + b + c - p_theta(theta)).abs() <= 1e-12 * (1.0 + a.abs() + b.abs() + c.abs()));
    }

    #[test]
    fn p_theta_is_the_psd_threshold(theta in -PI..PI) {
        // oracle: −λ_min of the circulant with zero diagonal and −e^{±iθ} off it
        let z = -Complex::from_polar(1.0, theta);
        let off = DMatrix::from_row_slice(3, 3, &[
            Complex::new(0.0, 0.0), z, z.conj(),
            z.conj(), Complex::new(0.0, 0.0), z,
            z, z.conj(), Complex::new(0.0, 0.0),
        ]);
        let h = HermitianMatrix::from_dmatrix(off).unwrap();
        let lmin = eig_hermitian(&h).unwrap().min();
        prop_assert!((p_theta(theta) + lmin).abs() <= 1e-12);
    }

    #[test]
    fn families_are_ppt(b in 0.05f64..20.0, theta in -7.0f64..7.0) {
        let tol = Tolerance::default();
        prop_assert!(is_ppt(&rho(b, theta).unwrap(), &tol).unwrap());
        prop_assert!(is_ppt(&sigma(b, theta).unwrap(), &tol).unwrap());
    }
}

#[test]
fn identity_operator_is_exact() {
    let op = real_operator_matrix(|x: &HermitianMatrix<f64>| x.clone(), 4).unwrap();
    assert_eq!(op.matrix(), &DMatrix::identity(16, 16));
}

#[test]
fn nonlinear_maps_are_rejected() {
    let square = |x: &HermitianMatrix<f64>| HermitianMatrix::from_dmatrix(x.as_dmatrix() * x.as_dmatrix()).unwrap();
    assert!(real_operator_matrix(square, 3).is_err());
}

#[test]
fn krawtchouk_sign_symmetry_exhaustive() {
    for m in 1..=8 {
        for k in 0..=12 {
            for l in 0..=12 {
                let a = krawtchouk_sum::<i64>(l, k, m).unwrap();
                let b = krawtchouk_sum::<i64>(k, l, m).unwrap();
                let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(a, sign * b, "k={k} l={l} m={m}");
            }
        }
    }
}

#[test]
fn krawtchouk_matches_pascal_oracle() {
    let table = pascal(80);
    for m in 1..=10 {
        for k in 0..=40 {
            for l in 0..=40 {
                let want = krawtchouk_brute(k, l, m, &table);
                assert_eq!(krawtchouk_sum::<i128>(k, l, m).unwrap(), want);
                assert_eq!(krawtchouk_sum_big(k, l, m).unwrap(), want.into());
            }
        }
    }
}

#[test]
fn krawtchouk_closed_forms() {
    for k in 0..30usize {
        for l in 0..30usize {
            let two = krawtchouk_sum::<i64>(k, l, 2).unwrap();
            assert_eq!(two, l as i64 - k as i64);
            let d = k as i64 - l as i64;
            let three = krawtchouk_sum::<i64>(k, l, 3).unwrap();
            assert_eq!(three, (d * d - (k + l) as i64) / 2);
        }
    }
}

#[test]
fn decomposable_maps_pair_nonnegatively_with_ppt_states() {
    let mut r = rng(99);
    for _ in 0..20 {
        let spec = DecomposableSpec::new(
            (0..2).map(|_| ComplexMatrix::from_dmatrix(random_matrix(&mut r, 3, 3)).unwrap()).collect(),
            (0..2).map(|_| ComplexMatrix::from_dmatrix(random_matrix(&mut r, 3, 3)).unwrap()).collect(),
        )
        .unwrap();
        let phi = decomposable_map(&spec).unwrap();
        for b in [0.25, 1.0, 4.0] {
            for k in 0..24 {
                let theta = k as f64 * PI / 12.0;
                for x in [rho(b, theta).unwrap(), sigma(b, theta).unwrap()] {
                    assert!(pairing(&x, &phi).unwrap() >= -1e-9);
                }
            }
        }
    }
}

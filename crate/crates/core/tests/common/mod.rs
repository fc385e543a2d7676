//! Independent reference computations used by the integration suites.
//!
//! Nothing here calls the operator, kernel or pairing code under test; the
//! oracles rebuild what they need from index arithmetic and nalgebra's SVD.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<C> {
    DMatrix::from_fn(rows, cols, |_, _| C::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> DVector<C> {
    DVector::from_fn(n, |_, _| C::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

/// Partial transpose by explicit index permutation:
/// entry `((i,j),(k,l))` goes to `((k,j),(i,l))`.
pub fn gamma(x: &DMatrix<C>, m: usize, n: usize) -> DMatrix<C> {
    let mut out = DMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..n {
            for k in 0..m {
                for l in 0..n {
                    out[(k * n + j, i * n + l)] = x[(i * n + j, k * n + l)];
                }
            }
        }
    }
    out
}

/// All complex entries as `[Re…, Im…]`; a real-linear injection of `M_d`.
pub fn flatten(x: &DMatrix<C>) -> DVector<f64> {
    let n = x.len();
    DVector::from_fn(2 * n, |k, _| if k < n { x[k].re } else { x[k - n].im })
}

/// Real basis of the hermitian matrices supported on the column span of `u`
/// (orthonormal columns).
pub fn hermitian_on(u: &DMatrix<C>) -> Vec<DMatrix<C>> {
    let cols: Vec<DVector<C>> = (0..u.ncols()).map(|k| u.column(k).into_owned()).collect();
    let mut out = Vec::new();
    for (a, ua) in cols.iter().enumerate() {
        out.push(ua * ua.adjoint());
        for ub in &cols[a + 1..] {
            let t = ua * ub.adjoint();
            out.push(&t + t.adjoint());
            out.push((&t - t.adjoint()) * C::new(0.0, 1.0));
        }
    }
    out
}

pub fn real_rank(vectors: &[DVector<f64>], rel: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(vectors);
    let sv = m.svd(false, false).singular_values;
    let smax = sv.max();
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// `(dim Herm(D), dim Γ(Herm(E)), dim of their intersection)` computed as
/// `dim A + dim B − rank[A B]`.
pub fn intersection_oracle(d: &DMatrix<C>, e: &DMatrix<C>, m: usize, n: usize) -> (usize, usize, usize) {
    let a: Vec<DVector<f64>> = hermitian_on(d).iter().map(flatten).collect();
    let b: Vec<DVector<f64>> = hermitian_on(e).iter().map(|h| flatten(&gamma(h, m, n))).collect();
    let ra = real_rank(&a, 1e-9);
    let rb = real_rank(&b, 1e-9);
    let both: Vec<DVector<f64>> = a.iter().chain(&b).cloned().collect();
    (ra, rb, ra + rb - real_rank(&both, 1e-9))
}

/// Binomial coefficients from Pascal's triangle.
pub fn pascal(n: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = vec![vec![1]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1i128; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

pub fn krawtchouk_brute(k: usize, l: usize, m: usize, table: &[Vec<i128>]) -> i128 {
    let binom = |n: usize, r: usize| if r > n { 0 } else { table[n][r] };
    (0..m)
        .map(|r| {
            let s = m - 1 - r;
            let sign = if r % 2 == 0 { 1 } else { -1 };
            sign * binom(k, r) * binom(l, s)
        })
        .sum()
}

/// `Tr(ρ C^t)` from an explicit transpose and matrix product.
pub fn pairing_oracle(rho: &DMatrix<C>, choi: &DMatrix<C>) -> C {
    (rho * choi.transpose()).trace()
}

pub fn max_abs(m: &DMatrix<C>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

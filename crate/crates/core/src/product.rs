//! Minimization of hermitian forms over product vectors.
//!
//! For a hermitian `Q` on `ℂ^m ⊗ ℂ^n` the objective
//! `f(x, y) = ⟨x⊗y|Q|x⊗y⟩` with `‖x‖ = ‖y‖ = 1` is a quadratic form in each
//! factor separately. Fixing one factor, the optimal other factor is a
//! minimal eigenvector of the compressed `m×m` or `n×n` matrix, so
//! alternating updates never increase `f`. Multi-start from seeded random
//! product vectors makes the search reproducible.

use nalgebra::{Complex, DMatrix, DVector};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::linalg::{eig_hermitian, HermitianMatrix};
use crate::sampling::random_unit_vector;
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Debug)]
pub struct ProductMinimum<T: Real> {
    pub x: DVector<Complex<T>>,
    pub y: DVector<Complex<T>>,
    pub value: T,
}

/// `x ⊗ y` in the `i·n + j` composite ordering.
pub fn kron<T: Real>(x: &DVector<Complex<T>>, y: &DVector<Complex<T>>) -> DVector<Complex<T>> {
    x.kronecker(y)
}

fn check_shape<T: Real>(q: &HermitianMatrix<T>, m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || q.dim() != m * n {
        return domain(format!(
            "form of size {} does not act on {m}⊗{n}",
            q.dim()
        ));
    }
    Ok(())
}

/// `Σ_ij conj(x_i) x_j Q_ij`, with `Q_ij` the `n×n` blocks.
fn compress_first<T: Real>(
    q: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    x: &DVector<Complex<T>>,
) -> HermitianMatrix<T> {
    let qm = q.as_dmatrix();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            let w = x[i].conj() * x[j];
            if w == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            out += qm.view((i * n, j * n), (n, n)) * w;
        }
    }
    HermitianMatrix::symmetrized(out)
}

/// `A_ij = ⟨y|Q_ij|y⟩`.
fn compress_second<T: Real>(
    q: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    y: &DVector<Complex<T>>,
) -> HermitianMatrix<T> {
    let qm = q.as_dmatrix();
    let ya = y.adjoint();
    let mut out = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = (&ya * qm.view((i * n, j * n), (n, n)) * y)[(0, 0)];
        }
    }
    HermitianMatrix::symmetrized(out)
}

fn min_eigvec<T: Real>(h: &HermitianMatrix<T>) -> Result<(T, DVector<Complex<T>>)> {
    let eig = eig_hermitian(h)?;
    let k = h.dim() - 1;
    Ok((eig.values[k], eig.vectors.column(k).into_owned()))
}

pub fn product_form_value<T: Real>(
    q: &HermitianMatrix<T>,
    x: &DVector<Complex<T>>,
    y: &DVector<Complex<T>>,
) -> T {
    q.expectation(&kron(x, y))
}

/// Alternating descent from `(x0, y0)`; stops once the value reaches `stop`
/// or stagnates.
pub fn descend_from<T: Real>(
    q: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    x0: DVector<Complex<T>>,
    y0: DVector<Complex<T>>,
    stop: T,
) -> Result<ProductMinimum<T>> {
    check_shape(q, m, n)?;
    let mut x = x0.normalize();
    let mut y = y0.normalize();
    let mut value = product_form_value(q, &x, &y);
    let rel = T::lit(T::EXACT_ATOL * 1e-2);
    for _ in 0..MAX_ITERATIONS {
        if value <= stop {
            break;
        }
        let (_, y_new) = min_eigvec(&compress_first(q, m, n, &x))?;
        y = y_new;
        let (v, x_new) = min_eigvec(&compress_second(q, m, n, &y))?;
        x = x_new;
        let improvement = value - v;
        value = v;
        if improvement <= rel * (value.abs() + q.max_abs_entry()) {
            break;
        }
    }
    let value = product_form_value(q, &x, &y);
    Ok(ProductMinimum { x, y, value })
}

/// Multi-start alternating minimization; returns the best local minimum
/// found, stopping early once a value `≤ stop` is reached.
pub fn minimize_product_form<T: Real>(
    q: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    restarts: usize,
    seed: u64,
    stop: T,
) -> Result<ProductMinimum<T>> {
    check_shape(q, m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ProductMinimum<T>> = None;
    for _ in 0..restarts.max(1) {
        let x0 = random_unit_vector(&mut rng, m);
        let y0 = random_unit_vector(&mut rng, n);
        let cand = descend_from(q, m, n, x0, y0, stop)?;
        let done = cand.value <= stop;
        if best.as_ref().is_none_or(|b| cand.value < b.value) {
            best = Some(cand);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Minimum of the form over `samples` random product vectors, followed by a
/// descent from the best sample.
pub fn sampled_minimum<T: Real>(
    q: &HermitianMatrix<T>,
    m: usize,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ProductMinimum<T>> {
    check_shape(q, m, n)?;
    if samples == 0 {
        return domain("at least one sample is required");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ProductMinimum<T>> = None;
    for _ in 0..samples {
        let x = random_unit_vector(&mut rng, m);
        let y = random_unit_vector(&mut rng, n);
        let value = product_form_value(q, &x, &y);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(ProductMinimum { x, y, value });
        }
    }
    let best = best.expect("samples > 0");
    let refined = descend_from(q, m, n, best.x.clone(), best.y.clone(), T::lit(f64::NEG_INFINITY))?;
    Ok(if refined.value < best.value { refined } else { best })
}

//! Dense complex hermitian linear algebra with explicit tolerances.
//!
//! Eigen- and singular-value decompositions are delegated to `nalgebra`; this
//! module owns the validated matrix types, the tolerance policy for ranks and
//! kernels, and the real vectorization of hermitian matrix space used to turn
//! linear maps on hermitian matrices into ordinary real matrices.
//!
//! # Real basis of hermitian space
//!
//! For `dim = d` the `d²` basis elements are ordered as
//!
//! 1. the diagonal units `E_kk`, `k = 0..d`;
//! 2. `(E_ij + E_ji)/√2` for `i < j`, row-major;
//! 3. `i(E_ij − E_ji)/√2` for `i < j`, row-major.
//!
//! The basis is orthonormal for `⟨X, Y⟩ = Tr(XY)`, so vectorization is an
//! isometry onto Euclidean `ℝ^{d²}`.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::sampling;
use crate::scalar::{modulus, re, Real};

const MAX_SWEEPS: usize = 10_000;

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    data: DMatrix<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain("matrix dimensions must be positive");
        }
        if entries.len() != rows * cols {
            return domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    pub fn from_dmatrix(data: DMatrix<Complex<T>>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return domain("matrix dimensions must be positive");
        }
        if !all_finite(&data) {
            return domain("matrix has non-finite entries");
        }
        Ok(Self { data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex<T>> {
        self.data
    }

    pub fn row_major_entries(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.data[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }
}

fn all_finite<T: Real>(m: &DMatrix<Complex<T>>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Square complex matrix that is exactly hermitian.
///
/// Inputs within the hermiticity tolerance of `T` are projected onto
/// `(H + H†)/2`; anything further away is rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    data: DMatrix<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        Self::from_dmatrix(m.data)
    }

    pub fn from_dmatrix(data: DMatrix<Complex<T>>) -> Result<Self> {
        if !data.is_square() || data.nrows() == 0 {
            return domain(format!(
                "hermitian matrix must be square and nonempty, got {}x{}",
                data.nrows(),
                data.ncols()
            ));
        }
        if !all_finite(&data) {
            return domain("matrix has non-finite entries");
        }
        let atol = T::lit(T::EXACT_ATOL);
        let n = data.nrows();
        for i in 0..n {
            for j in i..n {
                let gap = modulus(data[(i, j)] - data[(j, i)].conj());
                if gap > atol {
                    return domain(format!(
                        "matrix is not hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = {}",
                        gap.as_f64()
                    ));
                }
            }
        }
        Ok(Self::symmetrized(data))
    }

    /// Projects onto the hermitian part without a tolerance check. For results
    /// that are hermitian up to rounding by construction.
    pub(crate) fn symmetrized(data: DMatrix<Complex<T>>) -> Self {
        let half = T::lit(0.5);
        let adj = data.adjoint();
        let mut out = (data + adj) * re(half);
        for i in 0..out.nrows() {
            out[(i, i)].im = T::zero();
        }
        Self { data: out }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let mut data = DMatrix::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            data[(k, k)] = re(d);
        }
        Self { data }
    }

    /// `|v⟩⟨v|` (not normalized).
    pub fn outer(v: &DVector<Complex<T>>) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex<T>> {
        &self.data
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex<T>> {
        self.data
    }

    pub fn to_complex_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix {
            data: self.data.clone(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).fold(T::zero(), |acc, k| acc + self.data[(k, k)].re)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> T {
        self.data.norm()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            data: &self.data * re(s),
        }
    }

    pub fn diagonal_entries(&self) -> Vec<T> {
        (0..self.dim()).map(|k| self.data[(k, k)].re).collect()
    }

    pub fn max_abs_off_diagonal(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(modulus(self.data[(i, j)]));
                }
            }
        }
        worst
    }

    pub fn max_abs_entry(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(modulus(*z)))
    }

    /// `Tr(self · other)`, real for hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[(i, j)] * other.data[(j, i)]).re;
            }
        }
        acc
    }

    /// `U† H U` for a square `U` of matching size.
    pub fn conjugate_by(&self, u: &DMatrix<Complex<T>>) -> Self {
        Self::symmetrized(u.adjoint() * &self.data * u)
    }

    /// `⟨v|H|v⟩`.
    pub fn expectation(&self, v: &DVector<Complex<T>>) -> T {
        (v.adjoint() * &self.data * v)[(0, 0)].re
    }
}

impl<T: Real> Add for &HermitianMatrix<T> {
    type Output = HermitianMatrix<T>;
    fn add(self, rhs: Self) -> HermitianMatrix<T> {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl<T: Real> Sub for &HermitianMatrix<T> {
    type Output = HermitianMatrix<T>;
    fn sub(self, rhs: Self) -> HermitianMatrix<T> {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl<T: Real> Mul<T> for &HermitianMatrix<T> {
    type Output = HermitianMatrix<T>;
    fn mul(self, rhs: T) -> HermitianMatrix<T> {
        self.scale(rhs)
    }
}

/// Rank and positivity thresholds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance<T: Real> {
    /// Eigenvalues with `|λ| ≤ rank_rel · max|λ|` count as zero.
    pub rank_rel: T,
    /// `H` is PSD iff `λ_min ≥ −psd_atol · max(1, ‖H‖₂)`.
    pub psd_atol: T,
}

impl<T: Real> Tolerance<T> {
    pub fn new(rank_rel: T, psd_atol: T) -> Result<Self> {
        if !(rank_rel > T::zero() && psd_atol > T::zero()) {
            return domain("tolerances must be strictly positive");
        }
        Ok(Self { rank_rel, psd_atol })
    }
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rank_rel: T::lit(T::DEFAULT_TOL),
            psd_atol: T::lit(T::DEFAULT_TOL),
        }
    }
}

/// Eigenvalues in descending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Complex<T>>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
    }

    pub fn min(&self) -> T {
        *self.values.last().expect("nonempty spectrum")
    }

    fn threshold(&self, tol: &Tolerance<T>) -> T {
        tol.rank_rel * self.max_abs()
    }

    fn column(&self, k: usize) -> DVector<Complex<T>> {
        self.vectors.column(k).into_owned()
    }
}

pub fn eig_hermitian<T: Real>(h: &HermitianMatrix<T>) -> Result<EigenDecomposition<T>> {
    let eig = h
        .data
        .clone()
        .try_symmetric_eigen(T::default_epsilon(), MAX_SWEEPS)
        .ok_or_else(|| Error::NumericalFailure("hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(h.dim(), h.dim());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    let out = EigenDecomposition { values, vectors };

    let scale = out.max_abs();
    let residual = &h.data * &out.vectors
        - &out.vectors * DMatrix::from_diagonal(&DVector::from_iterator(
            h.dim(),
            out.values.iter().map(|&v| re(v)),
        ));
    let bound = T::lit(T::DEFAULT_TOL) * scale * T::lit(h.dim() as f64).sqrt();
    if residual.norm() > bound {
        return Err(Error::NumericalFailure(format!(
            "eigen residual {} exceeds bound",
            residual.norm().as_f64()
        )));
    }
    Ok(out)
}

pub fn rank_tol<T: Real>(h: &HermitianMatrix<T>, tol: &Tolerance<T>) -> Result<usize> {
    let eig = eig_hermitian(h)?;
    let thr = eig.threshold(tol);
    Ok(eig.values.iter().filter(|v| v.abs() > thr).count())
}

/// Orthonormal basis of the numerical kernel.
pub fn kernel_basis<T: Real>(
    h: &HermitianMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<Vec<DVector<Complex<T>>>> {
    let eig = eig_hermitian(h)?;
    let thr = eig.threshold(tol);
    Ok((0..h.dim())
        .filter(|&k| eig.values[k].abs() <= thr)
        .map(|k| eig.column(k))
        .collect())
}

/// Orthonormal basis of the numerical range.
pub fn range_basis<T: Real>(h: &HermitianMatrix<T>, tol: &Tolerance<T>) -> Result<Subspace<T>> {
    let eig = eig_hermitian(h)?;
    let thr = eig.threshold(tol);
    let cols: Vec<DVector<Complex<T>>> = (0..h.dim())
        .filter(|&k| eig.values[k].abs() > thr)
        .map(|k| eig.column(k))
        .collect();
    Ok(Subspace::from_columns_unchecked(h.dim(), &cols))
}

/// Orthogonal projection onto the numerical range.
pub fn range_projection<T: Real>(
    h: &HermitianMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<HermitianMatrix<T>> {
    Ok(range_basis(h, tol)?.projection())
}

pub fn min_eigenvalue<T: Real>(h: &HermitianMatrix<T>) -> Result<T> {
    Ok(eig_hermitian(h)?.min())
}

pub fn is_psd<T: Real>(h: &HermitianMatrix<T>, tol: &Tolerance<T>) -> Result<bool> {
    let eig = eig_hermitian(h)?;
    Ok(eig.min() >= -tol.psd_atol * eig.max_abs().max(T::one()))
}

/// A subspace of `ℂ^d` held as orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T: Real> {
    ambient: usize,
    basis: DMatrix<Complex<T>>,
}

impl<T: Real> Subspace<T> {
    /// Validates that the columns of `basis` are orthonormal.
    pub fn from_orthonormal(basis: DMatrix<Complex<T>>) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let gap = (gram - DMatrix::<Complex<T>>::identity(k, k)).norm();
        if gap > T::lit(T::EXACT_ATOL * 100.0) {
            return domain(format!(
                "basis columns are not orthonormal (deviation {})",
                gap.as_f64()
            ));
        }
        Ok(Self {
            ambient: basis.nrows(),
            basis,
        })
    }

    /// Orthonormalized span of arbitrary vectors (rank-revealing, via SVD).
    pub fn span(ambient: usize, vectors: &[DVector<Complex<T>>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return domain("span vectors must live in the ambient space");
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let m = DMatrix::from_columns(vectors);
        let svd = m
            .try_svd(true, false, T::default_epsilon(), MAX_SWEEPS)
            .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
        let u = svd.u.expect("requested U");
        let smax = svd
            .singular_values
            .iter()
            .fold(T::zero(), |acc, &s| acc.max(s));
        let thr = T::lit(T::DEFAULT_TOL) * smax;
        let cols: Vec<DVector<Complex<T>>> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > thr && s > T::zero())
            .map(|(k, _)| u.column(k).into_owned())
            .collect();
        Ok(Self::from_columns_unchecked(ambient, &cols))
    }

    pub(crate) fn from_columns_unchecked(ambient: usize, cols: &[DVector<Complex<T>>]) -> Self {
        let basis = if cols.is_empty() {
            DMatrix::zeros(ambient, 0)
        } else {
            DMatrix::from_columns(cols)
        };
        Self { ambient, basis }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<Complex<T>> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<DVector<Complex<T>>> {
        (0..self.dim())
            .map(|k| self.basis.column(k).into_owned())
            .collect()
    }

    pub fn projection(&self) -> HermitianMatrix<T> {
        if self.dim() == 0 {
            return HermitianMatrix::zeros(self.ambient);
        }
        HermitianMatrix::symmetrized(&self.basis * self.basis.adjoint())
    }

    /// `‖(I − P)v‖`.
    pub fn distance(&self, v: &DVector<Complex<T>>) -> T {
        if self.dim() == 0 {
            return v.norm();
        }
        let coeffs = self.basis.adjoint() * v;
        (v - &self.basis * coeffs).norm()
    }
}

/// Number of real coordinates of `dim × dim` hermitian matrices.
pub fn real_dim(dim: usize) -> usize {
    dim * dim
}

fn upper_pairs(dim: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..dim).flat_map(move |i| (i + 1..dim).map(move |j| (i, j)))
}

/// The `idx`-th element of the orthonormal real basis (see module docs).
pub fn real_basis_element<T: Real>(dim: usize, idx: usize) -> HermitianMatrix<T> {
    assert!(idx < real_dim(dim), "basis index out of range");
    let mut data = DMatrix::zeros(dim, dim);
    let npairs = dim * (dim - 1) / 2;
    let s = T::one() / T::lit(2.0).sqrt();
    if idx < dim {
        data[(idx, idx)] = Complex::new(T::one(), T::zero());
    } else if idx < dim + npairs {
        let (i, j) = upper_pairs(dim).nth(idx - dim).unwrap();
        data[(i, j)] = re(s);
        data[(j, i)] = re(s);
    } else {
        let (i, j) = upper_pairs(dim).nth(idx - dim - npairs).unwrap();
        data[(i, j)] = Complex::new(T::zero(), s);
        data[(j, i)] = Complex::new(T::zero(), -s);
    }
    HermitianMatrix { data }
}

pub fn hermitian_to_real_vector<T: Real>(h: &HermitianMatrix<T>) -> DVector<T> {
    let dim = h.dim();
    let npairs = dim * (dim - 1) / 2;
    let r2 = T::lit(2.0).sqrt();
    let mut out = DVector::zeros(real_dim(dim));
    for k in 0..dim {
        out[k] = h.data[(k, k)].re;
    }
    for (p, (i, j)) in upper_pairs(dim).enumerate() {
        out[dim + p] = r2 * h.data[(i, j)].re;
        out[dim + npairs + p] = r2 * h.data[(i, j)].im;
    }
    out
}

pub fn real_vector_to_hermitian<T: Real>(v: &DVector<T>, dim: usize) -> Result<HermitianMatrix<T>> {
    if v.len() != real_dim(dim) {
        return domain(format!(
            "real vector of length {} does not match dim {dim}",
            v.len()
        ));
    }
    let npairs = dim * (dim - 1) / 2;
    let s = T::one() / T::lit(2.0).sqrt();
    let mut data = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        data[(k, k)] = re(v[k]);
    }
    for (p, (i, j)) in upper_pairs(dim).enumerate() {
        let z = Complex::new(s * v[dim + p], s * v[dim + npairs + p]);
        data[(i, j)] = z;
        data[(j, i)] = z.conj();
    }
    Ok(HermitianMatrix { data })
}

/// Real matrix of a real-linear map on hermitian `dim × dim` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLinearOperator<T: Real> {
    herm_dim: usize,
    matrix: DMatrix<T>,
}

impl<T: Real> RealLinearOperator<T> {
    pub fn from_matrix(herm_dim: usize, matrix: DMatrix<T>) -> Result<Self> {
        if matrix.ncols() != real_dim(herm_dim) {
            return domain("operator width must equal dim²");
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return domain("operator has non-finite entries");
        }
        Ok(Self { herm_dim, matrix })
    }

    /// Side length of the hermitian matrices the operator acts on.
    pub fn herm_dim(&self) -> usize {
        self.herm_dim
    }

    /// Dimension of the real domain, `herm_dim²`.
    pub fn dim(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// Applies a square operator to a hermitian matrix.
    pub fn apply(&self, x: &HermitianMatrix<T>) -> Result<HermitianMatrix<T>> {
        if self.matrix.nrows() != self.matrix.ncols() || x.dim() != self.herm_dim {
            return domain("operator/argument shape mismatch");
        }
        real_vector_to_hermitian(&(&self.matrix * hermitian_to_real_vector(x)), self.herm_dim)
    }

    /// Vertical concatenation `[self; other]`; the kernel is the intersection.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return domain("stacked operators must share a domain");
        }
        let rows = self.matrix.nrows() + other.matrix.nrows();
        let mut m = DMatrix::zeros(rows, self.dim());
        m.rows_mut(0, self.matrix.nrows()).copy_from(&self.matrix);
        m.rows_mut(self.matrix.nrows(), other.matrix.nrows())
            .copy_from(&other.matrix);
        Ok(Self {
            herm_dim: self.herm_dim,
            matrix: m,
        })
    }

    pub fn singular_values(&self) -> Result<Vec<T>> {
        Ok(self.svd()?.0)
    }

    fn svd(&self) -> Result<(Vec<T>, DMatrix<T>)> {
        let (r, c) = self.matrix.shape();
        // Pad short-and-wide operators so V is square and spans the whole domain.
        let padded = if r < c {
            let mut m = DMatrix::zeros(c, c);
            m.rows_mut(0, r).copy_from(&self.matrix);
            m
        } else {
            self.matrix.clone()
        };
        let svd = padded
            .try_svd(false, true, T::default_epsilon(), MAX_SWEEPS)
            .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
        let v_t = svd.v_t.expect("requested V^T");
        Ok((svd.singular_values.iter().copied().collect(), v_t))
    }

    /// Orthonormal basis (columns) of the numerical kernel, using the relative
    /// singular-value cutoff `rank_rel · σ_max`. Singular values at or below
    /// `EXACT_ATOL` always count as zero, so an operator that vanishes up to
    /// roundoff has the whole domain as kernel.
    pub fn kernel(&self, rank_rel: T) -> Result<DMatrix<T>> {
        let (sv, v_t) = self.svd()?;
        let smax = sv.iter().fold(T::zero(), |acc, &s| acc.max(s));
        let thr = (rank_rel * smax).max(T::lit(T::EXACT_ATOL));
        let cols: Vec<DVector<T>> = sv
            .iter()
            .enumerate()
            .filter(|(_, &s)| s <= thr)
            .map(|(k, _)| v_t.row(k).transpose())
            .collect();
        Ok(if cols.is_empty() {
            DMatrix::zeros(self.dim(), 0)
        } else {
            DMatrix::from_columns(&cols)
        })
    }

    pub fn kernel_dim(&self, rank_rel: T) -> Result<usize> {
        Ok(self.kernel(rank_rel)?.ncols())
    }
}

/// Materializes a real-linear map on hermitian matrices as a real matrix.
///
/// Additivity and real homogeneity are spot-checked on seeded random
/// samples; a failed check is a contract violation.
pub fn real_operator_matrix<T, F>(f: F, dim: usize) -> Result<RealLinearOperator<T>>
where
    T: Real,
    F: Fn(&HermitianMatrix<T>) -> HermitianMatrix<T>,
{
    if dim == 0 {
        return domain("dimension must be positive");
    }
    let n = real_dim(dim);
    let mut matrix = DMatrix::zeros(n, n);
    for k in 0..n {
        let image = f(&real_basis_element(dim, k));
        if image.dim() != dim {
            return Err(Error::ContractViolation(
                "map changes the matrix dimension".into(),
            ));
        }
        matrix.set_column(k, &hermitian_to_real_vector(&image));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x1dea_1e55);
    for _ in 0..3 {
        let x = sampling::random_hermitian::<T, _>(&mut rng, dim);
        let y = sampling::random_hermitian::<T, _>(&mut rng, dim);
        let s = T::lit(rng.random_range(-2.0..2.0));
        let fx = f(&x);
        let fy = f(&y);
        let additive = (&f(&(&x + &y)) - &(&fx + &fy)).norm();
        let homogeneous = (&f(&x.scale(s)) - &fx.scale(s)).norm();
        let scale = T::one() + fx.norm() + fy.norm();
        let bound = T::lit(T::DEFAULT_TOL) * scale;
        if additive > bound || homogeneous > bound {
            return Err(Error::ContractViolation(format!(
                "map failed the linearity spot check (additivity {}, homogeneity {})",
                additive.as_f64(),
                homogeneous.as_f64()
            )));
        }
    }
    RealLinearOperator::from_matrix(dim, matrix)
}

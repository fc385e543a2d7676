//! Bipartite states: the two-parameter `3⊗3` families, partial transpose,
//! type classification, kernel vectors, arcs, convex combinations, and the
//! interior tests for the PPT and separable sets.
//!
//! Composite indices follow `|i⟩⊗|j⟩ ↦ i·n + j`. States are kept
//! unnormalized, exactly as the matrix displays give them; use
//! [`BipartiteMatrix::normalized`] for unit trace.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Sub};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::linalg::{is_psd, rank_tol, HermitianMatrix, Subspace, Tolerance};
use crate::product::{kron, minimize_product_form};
use crate::scalar::{c, cis, re, Real};

/// An `mn × mn` hermitian matrix on `ℂ^m ⊗ ℂ^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteMatrix<T: Real> {
    m: usize,
    n: usize,
    data: HermitianMatrix<T>,
}

impl<T: Real> BipartiteMatrix<T> {
    pub fn new(m: usize, n: usize, data: HermitianMatrix<T>) -> Result<Self> {
        if m == 0 || n == 0 {
            return domain("local dimensions must be positive");
        }
        if data.dim() != m * n {
            return domain(format!(
                "matrix of size {} does not match local dimensions {m}⊗{n}",
                data.dim()
            ));
        }
        Ok(Self { m, n, data })
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            data: HermitianMatrix::identity(m * n),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> HermitianMatrix<T> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data.get(row, col)
    }

    pub fn trace(&self) -> T {
        self.data.trace()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data: self.data.scale(s),
        }
    }

    /// Divides by the trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > T::zero()) {
            return domain("cannot normalize a matrix with non-positive trace");
        }
        Ok(self.scale(T::one() / tr))
    }

    /// The diagonal part.
    pub fn diag(&self) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data: HermitianMatrix::diagonal(&self.data.diagonal_entries()),
        }
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n
    }

    fn map_data(&self, data: HermitianMatrix<T>) -> Self {
        Self {
            m: self.m,
            n: self.n,
            data,
        }
    }
}

impl<T: Real> Add for &BipartiteMatrix<T> {
    type Output = BipartiteMatrix<T>;
    fn add(self, rhs: Self) -> BipartiteMatrix<T> {
        assert!(self.same_shape(rhs), "bipartite shape mismatch");
        self.map_data(&self.data + &rhs.data)
    }
}

impl<T: Real> Sub for &BipartiteMatrix<T> {
    type Output = BipartiteMatrix<T>;
    fn sub(self, rhs: Self) -> BipartiteMatrix<T> {
        assert!(self.same_shape(rhs), "bipartite shape mismatch");
        self.map_data(&self.data - &rhs.data)
    }
}

/// Position of `e^{iθ}` relative to the three open arcs of the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Arc {
    /// θ ∈ (−π, −π/3)
    Minus,
    /// θ ∈ (−π/3, π/3)
    Zero,
    /// θ ∈ (π/3, π)
    Plus,
    /// θ ∈ {−π/3, π/3, π}
    Boundary,
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Arc::Minus => "MINUS",
            Arc::Zero => "ZERO",
            Arc::Plus => "PLUS",
            Arc::Boundary => "BOUNDARY",
        };
        f.write_str(s)
    }
}

/// `(rank ρ, rank ρ^Γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateType {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for StateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// Reduces θ to `(−π, π]`.
pub fn reduce_angle<T: Real>(theta: T) -> T {
    let two_pi = T::two_pi();
    let mut r = theta - two_pi * (theta / two_pi).round();
    if r <= -T::pi() {
        r += two_pi;
    }
    if r > T::pi() {
        r -= two_pi;
    }
    r
}

/// Arc of `e^{iθ}`. The arcs are separated by the odd multiples of `π/3`
/// (that is `±π/3` and `π`); even multiples such as `0` or `2π/3` are arc
/// midpoints.
pub fn arc_of<T: Real>(theta: T) -> Arc {
    let r = reduce_angle(theta);
    let third = T::frac_pi_3();
    let two_thirds = third + third;
    // distance to the nearest odd multiple of π/3
    let shifted = r - third;
    let nearest = (shifted / two_thirds).round() * two_thirds;
    if (shifted - nearest).abs() <= T::lit(T::EXACT_ATOL) {
        Arc::Boundary
    } else if r < -third {
        Arc::Minus
    } else if r < third {
        Arc::Zero
    } else {
        Arc::Plus
    }
}

/// `max_k 2cos(θ + 2πk/3)`, the least `a` making the circulant
/// `[[a, −e^{iθ}, −e^{−iθ}], …]` positive semidefinite.
pub fn p_theta<T: Real>(theta: T) -> T {
    let shift = T::lit(2.0 * PI / 3.0);
    [-T::one(), T::zero(), T::one()]
        .into_iter()
        .map(|k| T::lit(2.0) * (theta + shift * k).cos())
        .fold(T::lit(f64::NEG_INFINITY), |a, b| a.max(b))
}

fn family_diagonal<T: Real>(b: T, theta: T) -> [T; 9] {
    let p = p_theta(theta);
    let ib = T::one() / b;
    [p, ib, b, b, p, ib, ib, b, p]
}

fn check_b<T: Real>(b: T) -> Result<()> {
    if !(b > T::zero()) || !b.is_finite() {
        return domain(format!("b must be a positive finite number, got {}", b.as_f64()));
    }
    Ok(())
}

fn family_matrix<T: Real>(b: T, theta: T, cells: &[(usize, usize)]) -> Result<BipartiteMatrix<T>> {
    check_b(b)?;
    if !theta.is_finite() {
        return domain("θ must be finite");
    }
    let mut data = DMatrix::zeros(9, 9);
    for (k, d) in family_diagonal(b, theta).into_iter().enumerate() {
        data[(k, k)] = re(d);
    }
    let z = -cis(theta);
    for &(i, j) in cells {
        data[(i, j)] = z;
        data[(j, i)] = z.conj();
    }
    BipartiteMatrix::new(3, 3, HermitianMatrix::from_dmatrix(data)?)
}

// Positions (0-based) carrying −e^{iθ}; their transposes carry −e^{−iθ}.
const SIGMA_CELLS: [(usize, usize); 3] = [(0, 4), (4, 8), (8, 0)];
const RHO_CELLS: [(usize, usize); 6] = [(0, 4), (4, 8), (8, 0), (2, 6), (3, 1), (7, 5)];

/// The block-wise symmetric rank-five family `ρ_{b,θ}` on `3⊗3`.
pub fn rho<T: Real>(b: T, theta: T) -> Result<BipartiteMatrix<T>> {
    family_matrix(b, theta, &RHO_CELLS)
}

/// The companion family `σ_{b,θ}` with `ρ = σ + σ^Γ − Diag σ`.
pub fn sigma<T: Real>(b: T, theta: T) -> Result<BipartiteMatrix<T>> {
    family_matrix(b, theta, &SIGMA_CELLS)
}

/// Partial transpose: transposition of the block arrangement,
/// `X = Σ E_ik ⊗ X_ik ↦ Σ E_ki ⊗ X_ik`, i.e. entry `((i,j),(k,l))` moves to
/// `((k,j),(i,l))`. For hermitian input this equals the entrywise conjugate
/// of [`partial_transpose_second`], so ranks and positivity agree.
pub fn partial_transpose<T: Real>(x: &BipartiteMatrix<T>) -> BipartiteMatrix<T> {
    let (m, n) = (x.m, x.n);
    let src = x.data.as_dmatrix();
    let mut out = DMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for k in 0..m {
            out.view_mut((k * n, i * n), (n, n))
                .copy_from(&src.view((i * n, k * n), (n, n)));
        }
    }
    x.map_data(HermitianMatrix::symmetrized(out))
}

/// Transposition inside every `n×n` block: `((i,j),(k,l)) ↦ ((i,l),(k,j))`.
pub fn partial_transpose_second<T: Real>(x: &BipartiteMatrix<T>) -> BipartiteMatrix<T> {
    let (m, n) = (x.m, x.n);
    let src = x.data.as_dmatrix();
    let mut out = DMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for k in 0..m {
            out.view_mut((i * n, k * n), (n, n))
                .copy_from(&src.view((i * n, k * n), (n, n)).transpose());
        }
    }
    x.map_data(HermitianMatrix::symmetrized(out))
}

pub fn is_ppt<T: Real>(x: &BipartiteMatrix<T>, tol: &Tolerance<T>) -> Result<bool> {
    Ok(is_psd(&x.data, tol)? && is_psd(&partial_transpose(x).data, tol)?)
}

pub fn state_type<T: Real>(x: &BipartiteMatrix<T>, tol: &Tolerance<T>) -> Result<StateType> {
    if !is_psd(&x.data, tol)? {
        return domain("state type requires a positive semidefinite matrix");
    }
    Ok(StateType {
        p: rank_tol(&x.data, tol)?,
        q: rank_tol(&partial_transpose(x).data, tol)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelLabel {
    W1,
    W2,
    W3,
    WMinus,
    WZero,
    WPlus,
}

impl fmt::Display for KernelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KernelLabel::W1 => "w1",
            KernelLabel::W2 => "w2",
            KernelLabel::W3 => "w3",
            KernelLabel::WMinus => "w-",
            KernelLabel::WZero => "w0",
            KernelLabel::WPlus => "w+",
        };
        f.write_str(s)
    }
}

/// The explicit kernel vectors of `ρ_{b,θ}`: `w_1, w_2, w_3` always, plus the
/// arc vector `w_−`, `w_0` or `w_+` off the boundary angles.
pub fn kernel_vectors_w<T: Real>(
    b: T,
    theta: T,
) -> Result<Vec<(KernelLabel, DVector<Complex<T>>)>> {
    check_b(b)?;
    let z = cis(theta);
    let bb = re(b);
    let vec_with = |cells: &[(usize, Complex<T>)]| {
        let mut v = DVector::zeros(9);
        for &(k, val) in cells {
            v[k] = val;
        }
        v
    };
    let mut out = vec![
        (KernelLabel::W1, vec_with(&[(1, bb), (3, z)])),
        (KernelLabel::W2, vec_with(&[(5, bb), (7, z)])),
        (KernelLabel::W3, vec_with(&[(2, z), (6, bb)])),
    ];
    let one = c(1.0, 0.0);
    let omega = cis(T::lit(2.0 * PI / 3.0));
    match arc_of(theta) {
        Arc::Minus => out.push((
            KernelLabel::WMinus,
            vec_with(&[(0, one), (4, omega), (8, omega.conj())]),
        )),
        Arc::Zero => out.push((KernelLabel::WZero, vec_with(&[(0, one), (4, one), (8, one)]))),
        Arc::Plus => out.push((
            KernelLabel::WPlus,
            vec_with(&[(0, one), (4, omega.conj()), (8, omega)]),
        )),
        Arc::Boundary => {}
    }
    Ok(out)
}

/// Convex combination `Σ w_i X_i`.
pub fn combine<T: Real>(states: &[BipartiteMatrix<T>], weights: &[T]) -> Result<BipartiteMatrix<T>> {
    if states.is_empty() || states.len() != weights.len() {
        return domain("need one weight per state and at least one state");
    }
    if !states.iter().all(|s| s.same_shape(&states[0])) {
        return domain("states have different local dimensions");
    }
    if weights.iter().any(|&w| !(w >= T::zero()) || !w.is_finite()) {
        return domain("weights must be nonnegative");
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if (total - T::one()).abs() > T::lit(T::EXACT_ATOL) {
        return domain(format!("weights sum to {}, not 1", total.as_f64()));
    }
    let mut acc = states[0].scale(weights[0]);
    for (s, &w) in states.iter().zip(weights).skip(1) {
        acc = &acc + &s.scale(w);
    }
    Ok(acc)
}

/// `(I⊗U)⁻¹ X (I⊗U)` with `U = Diag(1, e^{−2πi/3}, e^{2πi/3})`; shifts θ by
/// `−2π/3` in both families.
pub fn conjugate_by_phase_unitary<T: Real>(x: &BipartiteMatrix<T>) -> Result<BipartiteMatrix<T>> {
    if x.m != 3 || x.n != 3 {
        return domain("phase unitary acts on 3⊗3 only");
    }
    let phase = T::lit(2.0 * PI / 3.0);
    let u = [c(1.0, 0.0), cis(-phase), cis(phase)];
    let diag = DVector::from_fn(9, |k, _| u[k % 3]);
    Ok(x.map_data(x.data.conjugate_by(&DMatrix::from_diagonal(&diag))))
}

/// A PPT state is interior to the PPT set iff both it and its partial
/// transpose have full rank.
pub fn is_interior_of_t<T: Real>(x: &BipartiteMatrix<T>, tol: &Tolerance<T>) -> Result<bool> {
    if !is_ppt(x, tol)? {
        return domain("interior test requires a PPT state");
    }
    let full = x.dim();
    Ok(rank_tol(&x.data, tol)? == full && rank_tol(&partial_transpose(x).data, tol)? == full)
}

/// Sufficient test for the interior of the separable set: diagonal with
/// strictly positive diagonal. `false` means undecided.
pub fn is_interior_of_s_sufficient<T: Real>(x: &BipartiteMatrix<T>, tol: &Tolerance<T>) -> bool {
    let scale = x.data.max_abs_entry();
    x.data.max_abs_off_diagonal() <= T::lit(T::EXACT_ATOL) * scale
        && x.data.diagonal_entries().iter().all(|&d| d > tol.psd_atol)
}

/// `|ξ⊗η⟩⟨ξ⊗η|` with unit trace.
pub fn product_state<T: Real>(
    xi: &DVector<Complex<T>>,
    eta: &DVector<Complex<T>>,
) -> Result<BipartiteMatrix<T>> {
    if xi.is_empty() || eta.is_empty() {
        return domain("product factors must be nonempty");
    }
    if !(xi.norm() > T::zero() && eta.norm() > T::zero()) {
        return domain("product factors must be nonzero");
    }
    let z = kron(&xi.normalize(), &eta.normalize());
    BipartiteMatrix::new(xi.len(), eta.len(), HermitianMatrix::outer(&z))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductTerm<T: Real> {
    pub xi: DVector<Complex<T>>,
    pub eta: DVector<Complex<T>>,
    pub weight: T,
}

/// `Σ w_i |ξ_i⊗η_i⟩⟨ξ_i⊗η_i|` with the vectors taken as given (unnormalized).
pub fn product_sum<T: Real>(m: usize, n: usize, parts: &[ProductTerm<T>]) -> Result<BipartiteMatrix<T>> {
    let mut acc = HermitianMatrix::zeros(m * n);
    for p in parts {
        if p.xi.len() != m || p.eta.len() != n {
            return domain("product term does not match local dimensions");
        }
        acc = &acc + &HermitianMatrix::outer(&kron(&p.xi, &p.eta)).scale(p.weight);
    }
    BipartiteMatrix::new(m, n, acc)
}

/// `‖X − Σ w_i |ξ_i⊗η_i⟩⟨ξ_i⊗η_i|‖_F`.
pub fn product_decomposition_residual<T: Real>(
    x: &BipartiteMatrix<T>,
    parts: &[ProductTerm<T>],
) -> Result<T> {
    if parts.iter().any(|p| !(p.weight > T::zero())) {
        return domain("decomposition weights must be positive");
    }
    let sum = product_sum(x.m, x.n, parts)?;
    Ok((x - &sum).data.norm())
}

/// True iff the residual is at most `1e-8·‖X‖` (scaled for the precision).
pub fn verify_product_decomposition<T: Real>(
    x: &BipartiteMatrix<T>,
    parts: &[ProductTerm<T>],
) -> Result<bool> {
    let bound = T::lit(T::DEFAULT_TOL * 10.0) * x.data.norm();
    Ok(product_decomposition_residual(x, parts)? <= bound)
}

/// The four real product vectors `(±1,±1,±1)^{⊗2}` (one sign flip at most)
/// with weight ¼ each; their sum is exactly `ρ_{1,π}`.
pub fn separable_decomposition_rho_1_pi<T: Real>() -> Vec<ProductTerm<T>> {
    let signs = [[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 1.0], [-1.0, 1.0, 1.0]];
    signs
        .iter()
        .map(|s| {
            let v = DVector::from_iterator(3, s.iter().map(|&x| c::<T>(x, 0.0)));
            ProductTerm {
                xi: v.clone(),
                eta: v,
                weight: T::lit(0.25),
            }
        })
        .collect()
}

/// Heuristic search for a unit product vector in `D`.
///
/// Minimizes `‖(I−P_D)(ξ⊗η)‖²` by alternating eigen-updates from `restarts`
/// seeded starts. `None` does not prove that `D` has no product vector.
pub fn search_product_vector_in_subspace<T: Real>(
    d: &Subspace<T>,
    m: usize,
    n: usize,
    restarts: usize,
    seed: u64,
) -> Result<Option<(DVector<Complex<T>>, DVector<Complex<T>>)>> {
    if d.ambient_dim() != m * n {
        return domain("subspace does not live in ℂ^m⊗ℂ^n");
    }
    let q = &HermitianMatrix::identity(m * n) - &d.projection();
    let accept = T::lit(T::LOOSE_TOL);
    let best = minimize_product_form(&q, m, n, restarts, seed, accept * accept * T::lit(1e-2))?;
    let residual = d.distance(&kron(&best.x, &best.y));
    Ok((residual <= accept).then_some((best.x, best.y)))
}

pub const DEFAULT_RESTARTS: usize = 100;

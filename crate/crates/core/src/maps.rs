//! Linear maps `M_m → M_n` held as Choi matrices `C_φ = Σ E_ij ⊗ φ(E_ij)`,
//! the duality pairing `⟨ρ, φ⟩ = Tr(ρ C_φ^t)`, and decomposable maps
//! `Σ φ_{V_i} + Σ φ^{W_j}` with `φ_V(X) = V*XV`, `φ^W(X) = W*X^tW`.
//!
//! `ξ̄` always means entrywise conjugation in the computational basis. For a
//! product vector the pairing reduces to `⟨ξ̄⊗η̄|C_φ|ξ̄⊗η̄⟩`, so every
//! search over product vectors below is a minimization of the Choi form.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::product::{minimize_product_form, sampled_minimum};
use crate::scalar::{cis, modulus, re, Real};
use crate::states::{p_theta, BipartiteMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMap<T: Real> {
    m: usize,
    n: usize,
    choi: BipartiteMatrix<T>,
    /// The decomposition the map was built from, when known.
    decomposition: Option<DecomposableSpec<T>>,
}

impl<T: Real> ChoiMap<T> {
    pub fn from_choi(choi: BipartiteMatrix<T>) -> Self {
        Self {
            m: choi.m(),
            n: choi.n(),
            choi,
            decomposition: None,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choi(&self) -> &BipartiteMatrix<T> {
        &self.choi
    }

    pub fn decomposition(&self) -> Option<&DecomposableSpec<T>> {
        self.decomposition.as_ref()
    }
}

/// Kraus-like data of a decomposable map; every matrix is `m × n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposableSpec<T: Real> {
    vs: Vec<ComplexMatrix<T>>,
    ws: Vec<ComplexMatrix<T>>,
}

impl<T: Real> DecomposableSpec<T> {
    pub fn new(vs: Vec<ComplexMatrix<T>>, ws: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let Some(first) = vs.iter().chain(&ws).next() else {
            return domain("a decomposable map needs at least one V or W");
        };
        let shape = (first.rows(), first.cols());
        if vs.iter().chain(&ws).any(|a| (a.rows(), a.cols()) != shape) {
            return domain("all V and W must share one m×n shape");
        }
        Ok(Self { vs, ws })
    }

    pub fn vs(&self) -> &[ComplexMatrix<T>] {
        &self.vs
    }

    pub fn ws(&self) -> &[ComplexMatrix<T>] {
        &self.ws
    }

    /// `(m, n)`.
    pub fn shape(&self) -> (usize, usize) {
        let a = self.vs.first().or(self.ws.first()).expect("nonempty");
        (a.rows(), a.cols())
    }

    /// `(k, ℓ) = (|V|, |W|)`.
    pub fn counts(&self) -> (usize, usize) {
        (self.vs.len(), self.ws.len())
    }

    pub fn apply(&self, x: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let (_, n) = self.shape();
        let mut out = DMatrix::zeros(n, n);
        for v in &self.vs {
            let v = v.as_dmatrix();
            out += v.adjoint() * x * v;
        }
        let xt = x.transpose();
        for w in &self.ws {
            let w = w.as_dmatrix();
            out += w.adjoint() * &xt * w;
        }
        out
    }
}

/// Choi matrix of `φ`, given by its action on `m × m` matrices.
pub fn choi_of<T, F>(m: usize, n: usize, phi: F) -> Result<ChoiMap<T>>
where
    T: Real,
    F: Fn(&DMatrix<Complex<T>>) -> DMatrix<Complex<T>>,
{
    if m == 0 || n == 0 {
        return domain("map dimensions must be positive");
    }
    let mut c = DMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in 0..m {
            let mut unit = DMatrix::zeros(m, m);
            unit[(i, j)] = re(T::one());
            let image = phi(&unit);
            if image.shape() != (n, n) {
                return domain(format!("map image has shape {:?}, expected {n}x{n}", image.shape()));
            }
            c.view_mut((i * n, j * n), (n, n)).copy_from(&image);
        }
    }
    let h = HermitianMatrix::from_dmatrix(c).map_err(|_| {
        Error::Domain("map is not hermiticity-preserving (Choi matrix not hermitian)".into())
    })?;
    Ok(ChoiMap::from_choi(BipartiteMatrix::new(m, n, h)?))
}

pub fn identity_map<T: Real>(n: usize) -> Result<ChoiMap<T>> {
    choi_of(n, n, |x| x.clone())
}

pub fn transpose_map<T: Real>(n: usize) -> Result<ChoiMap<T>> {
    choi_of(n, n, |x| x.transpose())
}

/// `X ↦ Tr(X) I_n`.
pub fn trace_map<T: Real>(m: usize, n: usize) -> Result<ChoiMap<T>> {
    choi_of(m, n, |x| DMatrix::identity(n, n) * x.trace())
}

/// `φ(X) = Σ_ij X_ij · C_ij`, with `C_ij` the `n×n` blocks of the Choi matrix.
pub fn apply_map<T: Real>(phi: &ChoiMap<T>, x: &DMatrix<Complex<T>>) -> Result<DMatrix<Complex<T>>> {
    let (m, n) = (phi.m, phi.n);
    if x.shape() != (m, m) {
        return domain(format!("map acts on {m}x{m} matrices, got {:?}", x.shape()));
    }
    let c = phi.choi.matrix().as_dmatrix();
    let mut out = DMatrix::zeros(n, n);
    for i in 0..m {
        for j in 0..m {
            if x[(i, j)] != Complex::new(T::zero(), T::zero()) {
                out += c.view((i * n, j * n), (n, n)) * x[(i, j)];
            }
        }
    }
    Ok(out)
}

/// `Tr(ρ C_φ^t)`.
pub fn pairing<T: Real>(rho: &BipartiteMatrix<T>, phi: &ChoiMap<T>) -> Result<T> {
    if rho.m() != phi.m || rho.n() != phi.n {
        return domain("state and map dimensions differ");
    }
    let r = rho.matrix().as_dmatrix();
    let c = phi.choi.matrix().as_dmatrix();
    // Tr(ρ C^t) = Σ_ab ρ_ab C_ab
    let z = r.zip_fold(c, Complex::new(T::zero(), T::zero()), |acc, a, b| acc + a * b);
    let scale = T::one().max(rho.matrix().norm() * phi.choi.matrix().norm());
    if z.im.abs() > T::lit(1e-10_f64.max(T::EXACT_ATOL)) * scale {
        return Err(Error::ContractViolation(format!(
            "pairing has imaginary part {}",
            z.im.as_f64()
        )));
    }
    Ok(z.re)
}

/// `Σ_i |⟨ξ|V_i|η̄⟩|² + Σ_j |⟨ξ̄|W_j|η̄⟩|²`.
pub fn product_pairing<T: Real>(
    spec: &DecomposableSpec<T>,
    xi: &DVector<Complex<T>>,
    eta: &DVector<Complex<T>>,
) -> Result<T> {
    let (m, n) = spec.shape();
    if xi.len() != m || eta.len() != n {
        return domain("product vector does not match the map shape");
    }
    let eta_bar = eta.conjugate();
    let sq = |z: Complex<T>| {
        let r = modulus(z);
        r * r
    };
    let v_part = spec
        .vs
        .iter()
        .fold(T::zero(), |acc, v| acc + sq(xi.dotc(&(v.as_dmatrix() * &eta_bar))));
    let xi_bar = xi.conjugate();
    let w_part = spec
        .ws
        .iter()
        .fold(T::zero(), |acc, w| acc + sq(xi_bar.dotc(&(w.as_dmatrix() * &eta_bar))));
    Ok(v_part + w_part)
}

/// Diagonal coefficients `(a, b, c)` of `Φ_θ(t)`; `a + b + c = p_θ`.
pub fn phi_theta_coefficients<T: Real>(theta: T, t: T) -> Result<(T, T, T)> {
    if !(t > T::zero()) || !t.is_finite() {
        return domain(format!("t must be positive, got {}", t.as_f64()));
    }
    let p1 = p_theta(theta) - T::one();
    let den = T::one() - t + t * t;
    Ok((T::one() - p1 * t / den, p1 * t * t / den, p1 / den))
}

/// The positive map `Φ_θ(t)` on `M_3`.
pub fn phi_theta_t<T: Real>(theta: T, t: T) -> Result<ChoiMap<T>> {
    let (a, b, c) = phi_theta_coefficients(theta, t)?;
    let diag = [[a, b, c], [c, a, b], [b, c, a]];
    let f = -cis(theta);
    let g = -cis(-theta);
    let off = [[f, f, g], [g, f, f], [f, g, f]];
    // off[i][j] for i≠j: (0,1)→−e^{iθ}, (0,2)→−e^{−iθ}, (1,0)→−e^{−iθ},
    // (1,2)→−e^{iθ}, (2,0)→−e^{iθ}, (2,1)→−e^{−iθ}
    choi_of(3, 3, |x| {
        DMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                (0..3).fold(Complex::new(T::zero(), T::zero()), |acc, k| acc + x[(k, k)] * diag[i][k])
            } else {
                off[i][j] * x[(i, j)]
            }
        })
    })
}

fn is_diagonal_positive<T: Real>(h: &HermitianMatrix<T>) -> bool {
    h.max_abs_off_diagonal() <= T::lit(T::EXACT_ATOL) * h.max_abs_entry()
        && h.diagonal_entries().iter().all(|&d| d > T::zero())
}

/// Sufficient test for the interior of the positive cone: a diagonal Choi
/// matrix with strictly positive diagonal.
pub fn is_interior_sufficient<T: Real>(phi: &ChoiMap<T>) -> bool {
    is_diagonal_positive(phi.choi.matrix())
}

/// Choi matrix of `Φ_θ(t) + Φ_{θ+π}(s)`, checked to be diagonal with a
/// strictly positive diagonal.
pub fn antipodal_sum_choi<T: Real>(theta: T, t: T, s: T) -> Result<ChoiMap<T>> {
    let lhs = phi_theta_t(theta, t)?;
    let rhs = phi_theta_t(theta + T::pi(), s)?;
    let sum = ChoiMap::from_choi(&lhs.choi + &rhs.choi);
    if !is_interior_sufficient(&sum) {
        return Err(Error::ContractViolation(
            "antipodal sum is not diagonal with positive entries".into(),
        ));
    }
    Ok(sum)
}

pub fn decomposable_map<T: Real>(spec: &DecomposableSpec<T>) -> Result<ChoiMap<T>> {
    let (m, n) = spec.shape();
    let mut map = choi_of(m, n, |x| spec.apply(x))?;
    map.decomposition = Some(spec.clone());
    Ok(map)
}

fn real_matrix<T: Real>(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> ComplexMatrix<T> {
    ComplexMatrix::from_dmatrix(DMatrix::from_fn(rows, cols, |i, j| re(T::lit(f(i, j)))))
        .expect("finite entries")
}

/// `V_i` with `I₂` and `W_i` with `[[0,−1],[1,0]]` as the `i`-th `2×2`
/// block of a `2×2μ` matrix; the sum of the maps is `X ↦ Tr(X) I_{2μ}`.
pub fn trace_map_decomposition_2n<T: Real>(mu: usize) -> Result<DecomposableSpec<T>> {
    if mu == 0 {
        return domain("μ must be at least 1");
    }
    let block = |i: usize, b: [[f64; 2]; 2]| {
        real_matrix(2, 2 * mu, move |r, c| {
            if c / 2 == i {
                b[r][c % 2]
            } else {
                0.0
            }
        })
    };
    let vs = (0..mu).map(|i| block(i, [[1.0, 0.0], [0.0, 1.0]])).collect();
    let ws = (0..mu).map(|i| block(i, [[0.0, -1.0], [1.0, 0.0]])).collect();
    DecomposableSpec::new(vs, ws)
}

/// `φ_I + φ^{E12−E21} + φ^{E23−E32} + φ^{E31−E13}`, the trace map on `M_3`.
pub fn trace_map_decomposition_33<T: Real>() -> DecomposableSpec<T> {
    let anti = |a: usize, b: usize| {
        real_matrix(3, 3, move |i, j| {
            if (i, j) == (a, b) {
                1.0
            } else if (i, j) == (b, a) {
                -1.0
            } else {
                0.0
            }
        })
    };
    DecomposableSpec::new(
        vec![ComplexMatrix::identity(3)],
        vec![anti(0, 1), anti(1, 2), anti(2, 0)],
    )
    .expect("valid spec")
}

#[derive(Clone, Debug)]
pub struct BoundaryWitness<T: Real> {
    pub xi: DVector<Complex<T>>,
    pub eta: DVector<Complex<T>>,
    pub residual: T,
}

pub const DEFAULT_WITNESS_RESTARTS: usize = 1000;

/// Searches for unit `ξ, η` with `Σ|⟨ξ|V_i|η̄⟩|² + Σ|⟨ξ̄|W_j|η̄⟩|² ≤ 1e-12`,
/// i.e. a product vector certifying that the map is on the boundary of the
/// positive cone. `None` is inconclusive.
pub fn boundary_witness_search<T: Real>(
    spec: &DecomposableSpec<T>,
    restarts: usize,
    seed: u64,
) -> Result<Option<BoundaryWitness<T>>> {
    let (m, n) = spec.shape();
    let map = decomposable_map(spec)?;
    let threshold = T::lit(T::EXACT_ATOL);
    let best = minimize_product_form(map.choi.matrix(), m, n, restarts, seed, threshold * T::lit(1e-2))?;
    let xi = best.x.conjugate();
    let eta = best.y.conjugate();
    let residual = product_pairing(spec, &xi, &eta)?;
    Ok((residual <= threshold).then_some(BoundaryWitness { xi, eta, residual }))
}

/// `min ⟨η|φ(|ξ⟩⟨ξ|)|η⟩` over `samples` random unit product vectors, refined
/// by alternating descent from the best sample.
pub fn block_positivity_sample<T: Real>(phi: &ChoiMap<T>, samples: usize, seed: u64) -> Result<T> {
    Ok(sampled_minimum(phi.choi.matrix(), phi.m, phi.n, samples, seed)?.value)
}

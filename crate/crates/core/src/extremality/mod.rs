//! Extreme points of the PPT set.
//!
//! A PPT state `X` with `D = 𝓡X` and `E = 𝓡X^Γ` is extreme iff the real
//! solution space of `P_D Y P_D = Y`, `(P_E Y^Γ P_E)^Γ = Y` is
//! one-dimensional. Both conditions are kernels of real operators on the
//! `(mn)²`-dimensional space of hermitian matrices, so the test is a single
//! SVD of the stacked operator.

mod appendix;

pub use appendix::{
    appendix_basis_x, appendix_basis_x_corrected, appendix_basis_y, distinct, verify_appendix, verify_combination_identity,
    AppendixReport, CombinationReport, LabeledMatrix,
};

use crate::error::{domain, Error, Result};
use crate::linalg::{
    range_basis, real_operator_matrix, real_vector_to_hermitian, HermitianMatrix,
    RealLinearOperator, Subspace, Tolerance,
};
use crate::scalar::Real;
use crate::states::{is_ppt, partial_transpose, BipartiteMatrix};

/// The face `τ(D, E)` of a PPT state: range of the state and of its partial
/// transpose.
#[derive(Clone, Debug)]
pub struct FaceSpec<T: Real> {
    pub m: usize,
    pub n: usize,
    pub d: Subspace<T>,
    pub e: Subspace<T>,
}

#[derive(Clone, Debug)]
pub struct ExtremalityReport<T: Real> {
    pub dim_ker_d: usize,
    pub dim_ker_e: usize,
    pub dim_intersection: usize,
    pub is_extreme: bool,
    /// Unit-trace spanning element of the intersection when it is a line.
    pub generator: Option<BipartiteMatrix<T>>,
}

pub fn face_of<T: Real>(x: &BipartiteMatrix<T>, tol: &Tolerance<T>) -> Result<FaceSpec<T>> {
    if !is_ppt(x, tol)? {
        return domain("face requires a PPT state");
    }
    Ok(FaceSpec {
        m: x.m(),
        n: x.n(),
        d: range_basis(x.matrix(), tol)?,
        e: range_basis(partial_transpose(x).matrix(), tol)?,
    })
}

/// `X ↦ P_D X P_D − X`; its kernel is the hermitian matrices supported on `D`.
pub fn phi_d_operator<T: Real>(d: &Subspace<T>) -> Result<RealLinearOperator<T>> {
    let p = d.projection();
    let pm = p.as_dmatrix().clone();
    real_operator_matrix(
        |x| HermitianMatrix::symmetrized(&pm * x.as_dmatrix() * &pm - x.as_dmatrix()),
        d.ambient_dim(),
    )
}

/// `X ↦ (P_E X^Γ P_E)^Γ − X` on `ℂ^m ⊗ ℂ^n`.
pub fn phi_e_operator<T: Real>(e: &Subspace<T>, m: usize, n: usize) -> Result<RealLinearOperator<T>> {
    if m * n != e.ambient_dim() {
        return domain("subspace does not live in ℂ^m⊗ℂ^n");
    }
    let pm = e.projection().into_dmatrix();
    real_operator_matrix(
        |x| {
            let xb = BipartiteMatrix::new(m, n, x.clone()).expect("shape checked");
            let g = partial_transpose(&xb);
            let inner = HermitianMatrix::symmetrized(&pm * g.matrix().as_dmatrix() * &pm);
            let back = partial_transpose(&BipartiteMatrix::new(m, n, inner).expect("shape checked"));
            back.matrix() - x
        },
        m * n,
    )
}

pub fn is_extreme_in_t<T: Real>(
    x: &BipartiteMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<ExtremalityReport<T>> {
    if x.matrix().max_abs_entry() == T::zero() {
        return domain("extremality of the zero matrix is undefined");
    }
    let face = face_of(x, tol)?;
    let phi_d = phi_d_operator(&face.d)?;
    let phi_e = phi_e_operator(&face.e, face.m, face.n)?;
    let dim_ker_d = phi_d.kernel_dim(tol.rank_rel)?;
    let dim_ker_e = phi_e.kernel_dim(tol.rank_rel)?;
    let kernel = phi_d.stack(&phi_e)?.kernel(tol.rank_rel)?;
    let dim_intersection = kernel.ncols();

    let generator = if dim_intersection == 1 {
        Some(generator_from(x, &kernel.column(0).into_owned(), &phi_d, &phi_e)?)
    } else {
        None
    };
    Ok(ExtremalityReport {
        dim_ker_d,
        dim_ker_e,
        dim_intersection,
        is_extreme: dim_intersection == 1,
        generator,
    })
}

fn generator_from<T: Real>(
    x: &BipartiteMatrix<T>,
    v: &nalgebra::DVector<T>,
    phi_d: &RealLinearOperator<T>,
    phi_e: &RealLinearOperator<T>,
) -> Result<BipartiteMatrix<T>> {
    let h = real_vector_to_hermitian(v, x.dim())?;
    let tr = h.trace();
    if tr.abs() <= T::lit(T::EXACT_ATOL) * h.norm() {
        return Err(Error::ContractViolation(
            "intersection generator is traceless".into(),
        ));
    }
    let g = BipartiteMatrix::new(x.m(), x.n(), h.scale(T::one() / tr))?;

    let in_kernels = phi_d.apply(g.matrix())?.norm().max(phi_e.apply(g.matrix())?.norm());
    if in_kernels > T::lit(T::DEFAULT_TOL * 10.0) * g.matrix().norm() {
        return Err(Error::ContractViolation(format!(
            "generator leaves the kernels (residual {})",
            in_kernels.as_f64()
        )));
    }
    let target = x.normalized()?;
    let gap = (g.matrix() - target.matrix()).norm();
    if gap > T::lit(T::LOOSE_TOL) * target.matrix().norm() {
        return Err(Error::ContractViolation(format!(
            "intersection generator is not proportional to the state (gap {})",
            gap.as_f64()
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{rho, sigma};
    use std::f64::consts::PI;

    #[test]
    fn full_space_gives_zero_operators() {
        let full = Subspace::<f64>::full(4);
        assert!(phi_d_operator(&full).unwrap().matrix().amax() < 1e-14);
        assert!(phi_e_operator(&full, 2, 2).unwrap().matrix().amax() < 1e-14);
    }

    #[test]
    fn rho_is_extreme() {
        let r = is_extreme_in_t(&rho(2.0, PI / 6.0).unwrap(), &Tolerance::default()).unwrap();
        assert_eq!((r.dim_ker_d, r.dim_ker_e, r.dim_intersection), (25, 25, 1));
        assert!(r.is_extreme);
        assert!((r.generator.unwrap().trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn separable_rho_is_not_extreme() {
        let r = is_extreme_in_t(&rho(1.0, PI).unwrap(), &Tolerance::default()).unwrap();
        assert!(!r.is_extreme);
        assert!(r.dim_intersection > 1);
        assert!(r.generator.is_none());
    }

    #[test]
    fn identity_face_is_everything() {
        let f = face_of(&BipartiteMatrix::<f64>::identity(3, 3), &Tolerance::default()).unwrap();
        assert_eq!((f.d.dim(), f.e.dim()), (9, 9));
    }

    #[test]
    fn non_ppt_is_rejected() {
        let s = 0.5f64.sqrt();
        let v = nalgebra::DVector::from_vec(vec![
            nalgebra::Complex::new(s, 0.0),
            Default::default(),
            Default::default(),
            nalgebra::Complex::new(s, 0.0),
        ]);
        let bell = BipartiteMatrix::new(2, 2, HermitianMatrix::outer(&v)).unwrap();
        assert!(is_extreme_in_t(&bell, &Tolerance::default()).is_err());
    }

    #[test]
    fn sigma_faces_have_type_dimensions() {
        let f = face_of(&sigma(2.0, PI / 6.0).unwrap(), &Tolerance::default()).unwrap();
        assert_eq!((f.d.dim(), f.e.dim()), (8, 6));
    }
}

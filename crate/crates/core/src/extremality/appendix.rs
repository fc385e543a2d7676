//! The explicit kernel bases for `ρ_{b,θ}` and the identity expressing the
//! state in each basis.
//!
//! Every basis element is a short sum `Σ κ · (±E_ij ± E_kl ...)` of matrix
//! units on `M_9` (1-based indices, as written in the source tables). A
//! coefficient `κ = b^p e^{iqθ} i^r` is stored symbolically, which makes
//! "the same formula listed twice" decidable without floating point.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Serialize;

use super::{phi_d_operator, phi_e_operator};
use crate::error::Result;
use crate::linalg::{hermitian_to_real_vector, range_basis, HermitianMatrix, RealLinearOperator, Tolerance};
use crate::scalar::{cis, Real};
use crate::states::{partial_transpose, rho};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Coef {
    b_pow: i32,
    phase: i32,
    i_pow: u8,
}

const fn k(b_pow: i32, phase: i32) -> Coef {
    Coef { b_pow, phase, i_pow: 0 }
}

const ONE: Coef = k(0, 0);
const B: Coef = k(1, 0);
const INV_B: Coef = k(-1, 0);
const E: Coef = k(0, -1);
const F: Coef = k(0, 1);
const I: Coef = Coef { b_pow: 0, phase: 0, i_pow: 1 };
const NEG_I: Coef = Coef { b_pow: 0, phase: 0, i_pow: 3 };

type Formula = &'static [(Coef, &'static str)];

const X_TABLE: [Formula; 25] = [
    &[(ONE, "+11 +55 -15 -51")],
    &[(ONE, "+11 +99 -19 -91")],
    &[(ONE, "+55 +99 -59 -95")],
    &[(I, "+19 -15 -59"), (NEG_I, "+91 -51 -95")],
    &[(E, "+24"), (F, "+42"), (B, "-44"), (INV_B, "-22")],
    &[(E, "+68"), (F, "+86"), (B, "-88"), (INV_B, "-66")],
    &[(E, "+73"), (F, "+37"), (B, "-33"), (INV_B, "-77")],
    &[(E, "+29 -21"), (F, "+92 -12"), (B, "+14 +41 -49 -94")],
    &[(E, "+71 -75"), (F, "+17 -57"), (B, "+35 +53 -13 -31")],
    &[(E, "+79 -71"), (F, "+97 -17"), (B, "+13 +31 -39 -93")],
    &[(E, "+61 -65"), (F, "+16 -56"), (B, "+58 +85 -18 -81")],
    &[(E, "+69 -61"), (F, "+96 -16"), (B, "+18 +81 -89 -98")],
    &[(E, "-21 -25"), (F, "-12 -52"), (B, "+14 +41 -45 -54")],
    &[(E, "+13 -53"), (F, "+31 -35"), (INV_B, "+57 +75 -17 -71")],
    &[(E, "+13 -93"), (F, "+31 -39"), (INV_B, "+97 +79 -17 -71")],
    &[(E, "+14 -54"), (F, "+41 -45"), (INV_B, "+25 +52 -12 -21")],
    &[(E, "+14 -94"), (F, "+41 -49"), (INV_B, "+29 +92 -12 -21")],
    &[(E, "+18 -98"), (F, "+81 -89"), (INV_B, "+69 +96 -16 -61")],
    &[(E, "+58 -18"), (F, "+85 -81"), (INV_B, "+16 +61 -56 -65")],
    &[(E, "+63 +78"), (F, "+36 +87"), (B, "-38 -83"), (INV_B, "-67 -76")],
    &[(E, "-23 -74"), (F, "-32 -47"), (B, "+34 +43"), (INV_B, "+27 +72")],
    &[(E, "-28 -64"), (F, "-82 -46"), (B, "+48 +84"), (INV_B, "+26 +62")],
    &[
        (E, "+67"),
        (k(2, -1), "+83"),
        (k(1, -2), "-63"),
        (F, "+76"),
        (k(2, 1), "+38"),
        (k(1, 2), "-36"),
        (B, "-78 -87"),
    ],
    &[
        (E, "+48"),
        (k(-2, -1), "+26"),
        (k(-1, -2), "-28"),
        (F, "+84"),
        (k(-2, 1), "+62"),
        (k(-1, 2), "-82"),
        (INV_B, "-46 -64"),
    ],
    &[
        (E, "-43"),
        (k(-2, -1), "-27"),
        (k(-1, -2), "+23"),
        (F, "-34"),
        (k(-2, 1), "-72"),
        (k(-1, 2), "+32"),
        (INV_B, "+47 +74"),
    ],
];

// Printed with `−(E21+E25)`; membership in `Ker φ_D` forces the vector
// `e_1 − e_5` of the range, i.e. `−(E21−E25)` and `−(E12−E52)`.
const X13_CORRECTED: Formula = &[(E, "-21 +25"), (F, "-12 +52"), (B, "+14 +41 -45 -54")];

const Y14: Formula = &[(E, "+26 -13"), (F, "+62 -31"), (INV_B, "+17 +71 -48 -84")];
const Y15: Formula = &[(E, "+39 -13"), (F, "+93 -31"), (INV_B, "+17 +71 -79 -97")];

// The source lists Y14 and Y15 three times each.
const Y_TABLE: [(&str, Formula); 29] = [
    ("Y1", &[(ONE, "+11 +55 -24 -42")]),
    ("Y2", &[(ONE, "+11 +99 -37 -73")]),
    ("Y3", &[(ONE, "+55 +99 -68 -86")]),
    ("Y4", &[(I, "+37 +42 +86"), (NEG_I, "+73 +24 +68")]),
    ("Y5", &[(E, "+19"), (F, "+91"), (B, "-33"), (INV_B, "-77")]),
    ("Y6", &[(E, "+51"), (F, "+15"), (B, "-44"), (INV_B, "-22")]),
    ("Y7", &[(E, "+95"), (F, "+59"), (B, "-88"), (INV_B, "-66")]),
    ("Y8", &[(E, "+21 -83"), (F, "+12 -38"), (B, "+67 +76 -14 -41")]),
    ("Y9", &[(E, "+21 -52"), (F, "+12 -25"), (B, "+45 +54 -14 -41")]),
    ("Y10", &[(E, "+34 -65"), (F, "+43 -56"), (B, "+58 +85 -27 -72")]),
    ("Y11", &[(E, "+34 -96"), (F, "+43 -69"), (B, "+89 +98 -27 -72")]),
    ("Y12", &[(E, "+48 -17"), (F, "+84 -71"), (B, "+13 +31 -26 -62")]),
    ("Y13", &[(E, "+79 -17"), (F, "+97 -71"), (B, "+13 +31 -39 -93")]),
    ("Y14", Y14),
    ("Y15", Y15),
    ("Y14", Y14),
    ("Y15", Y15),
    ("Y14", Y14),
    ("Y15", Y15),
    ("Y16", &[(E, "+41 -54"), (F, "+14 -45"), (INV_B, "+25 +52 -12 -21")]),
    ("Y17", &[(E, "+67 -41"), (F, "+76 -14"), (INV_B, "+12 +21 -38 -83")]),
    ("Y18", &[(E, "+72 -85"), (F, "+27 -58"), (INV_B, "+56 +65 -34 -43")]),
    ("Y19", &[(E, "+72 -98"), (F, "+27 -89"), (INV_B, "+69 +96 -34 -43")]),
    ("Y20", &[(E, "+36 +78"), (F, "+63 +87"), (B, "-29 -92"), (INV_B, "-49 -94")]),
    ("Y21", &[(E, "-64 -82"), (F, "-46 -28"), (B, "+57 +75"), (INV_B, "+35 +53")]),
    (
        "Y22",
        &[
            (k(1, -2), "+36"),
            (E, "-94"),
            (k(2, -1), "-29"),
            (k(1, 2), "+63"),
            (F, "-49"),
            (k(2, 1), "-92"),
            (B, "+78 +87"),
        ],
    ),
    (
        "Y23",
        &[
            (k(-1, -2), "+82"),
            (k(-2, -1), "-53"),
            (E, "-75"),
            (k(-1, 2), "+28"),
            (k(-2, 1), "-35"),
            (F, "-57"),
            (INV_B, "+46 +64"),
        ],
    ),
    (
        "Y24",
        &[
            (k(0, -2), "+23"),
            (k(1, -1), "-16"),
            (k(-1, -1), "-81"),
            (k(0, 2), "+32"),
            (k(1, 1), "-61"),
            (k(-1, 1), "-18"),
            (ONE, "+47 +74"),
        ],
    ),
    (
        "Y25",
        &[
            (k(0, -2), "+47"),
            (k(1, -1), "-61"),
            (k(-1, -1), "-18"),
            (k(0, 2), "+74"),
            (k(1, 1), "-16"),
            (k(-1, 1), "-81"),
            (ONE, "+23 +32"),
        ],
    ),
];

/// A basis element together with its printed name and formula.
#[derive(Clone, Debug)]
pub struct LabeledMatrix<T: Real> {
    pub label: String,
    pub matrix: HermitianMatrix<T>,
    formula: Formula,
}

impl<T: Real> LabeledMatrix<T> {
    /// Whether two entries were produced by the same formula.
    pub fn same_formula(&self, other: &Self) -> bool {
        self.formula == other.formula
    }
}

fn eval_coef<T: Real>(k: Coef, b: T, theta: T) -> Complex<T> {
    let mut z = cis(theta * T::lit(f64::from(k.phase))) * b.powi(k.b_pow);
    for _ in 0..k.i_pow {
        z = Complex::new(-z.im, z.re);
    }
    z
}

fn materialize<T: Real>(formula: Formula, b: T, theta: T) -> Result<HermitianMatrix<T>> {
    let mut data = DMatrix::zeros(9, 9);
    for &(coef, units) in formula {
        let z = eval_coef(coef, b, theta);
        for unit in units.split_whitespace() {
            let (sign, digits) = unit.split_at(1);
            let idx: Vec<usize> = digits.bytes().map(|d| usize::from(d - b'1')).collect();
            let term = if sign == "-" { -z } else { z };
            data[(idx[0], idx[1])] += term;
        }
    }
    HermitianMatrix::from_dmatrix(data)
}

fn labeled<T: Real>(label: String, formula: Formula, b: T, theta: T) -> Result<LabeledMatrix<T>> {
    Ok(LabeledMatrix {
        label,
        matrix: materialize(formula, b, theta)?,
        formula,
    })
}

/// `X_1, …, X_25`, spanning `Ker φ_D` for `D = 𝓡ρ_{b,θ}`.
pub fn appendix_basis_x<T: Real>(b: T, theta: T) -> Result<Vec<LabeledMatrix<T>>> {
    X_TABLE
        .iter()
        .enumerate()
        .map(|(i, f)| labeled(format!("X{}", i + 1), f, b, theta))
        .collect()
}

/// `X_1, …, X_25` with the sign of the `E_25`/`E_52` terms of `X_13` fixed.
pub fn appendix_basis_x_corrected<T: Real>(b: T, theta: T) -> Result<Vec<LabeledMatrix<T>>> {
    let mut xs = appendix_basis_x(b, theta)?;
    xs[12] = labeled("X13".into(), X13_CORRECTED, b, theta)?;
    Ok(xs)
}

/// The listed `Y_i`, including the repeated `Y_14`/`Y_15` (29 entries).
pub fn appendix_basis_y<T: Real>(b: T, theta: T) -> Result<Vec<LabeledMatrix<T>>> {
    Y_TABLE
        .iter()
        .map(|&(label, f)| labeled(label.to_string(), f, b, theta))
        .collect()
}

/// First occurrences only, comparing formulas.
pub fn distinct<T: Real>(list: &[LabeledMatrix<T>]) -> Vec<LabeledMatrix<T>> {
    let mut out: Vec<LabeledMatrix<T>> = Vec::new();
    for item in list {
        if !out.iter().any(|o| o.same_formula(item)) {
            out.push(item.clone());
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinationReport {
    /// `‖cosθ(X₁+X₂+X₃) + sinθ X₄ − X₅ − X₆ − X₇ − ρ‖ / ‖ρ‖`.
    pub x_residual: f64,
    /// The Y-form ending in `−X₇`, as printed.
    pub y_residual_ending_x7: f64,
    /// The Y-form ending in `−Y₇`.
    pub y_residual_ending_y7: f64,
    /// The X-form holds within the requested relative tolerance.
    pub holds: bool,
}

fn find<'a, T: Real>(list: &'a [LabeledMatrix<T>], label: &str) -> &'a HermitianMatrix<T> {
    &list.iter().find(|l| l.label == label).expect("label present").matrix
}

fn lin<T: Real>(terms: &[(T, &HermitianMatrix<T>)]) -> HermitianMatrix<T> {
    terms
        .iter()
        .fold(HermitianMatrix::zeros(9), |acc, &(w, h)| &acc + &h.scale(w))
}

pub fn verify_combination_identity<T: Real>(b: T, theta: T, tol: T) -> Result<CombinationReport> {
    let target = rho(b, theta)?.into_matrix();
    let xs = appendix_basis_x(b, theta)?;
    let ys = appendix_basis_y(b, theta)?;
    let (c, s) = (theta.cos(), theta.sin());
    let x = |l: &str| find(&xs, l);
    let y = |l: &str| find(&ys, l);

    let one = T::one();
    let x_form = lin(&[(c, x("X1")), (c, x("X2")), (c, x("X3")), (s, x("X4")), (-one, x("X5")), (-one, x("X6")), (-one, x("X7"))]);
    let y_head = [(c, y("Y1")), (c, y("Y2")), (c, y("Y3")), (-s, y("Y4")), (-one, y("Y5")), (-one, y("Y6"))];
    let y_x7 = lin(&[&y_head[..], &[(-one, x("X7"))]].concat());
    let y_y7 = lin(&[&y_head[..], &[(-one, y("Y7"))]].concat());

    let scale = target.norm();
    let rel = |h: &HermitianMatrix<T>| ((h - &target).norm() / scale).as_f64();
    let x_residual = rel(&x_form);
    Ok(CombinationReport {
        x_residual,
        y_residual_ending_x7: rel(&y_x7),
        y_residual_ending_y7: rel(&y_y7),
        holds: x_residual <= tol.as_f64(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AppendixReport {
    pub b: f64,
    pub theta: f64,
    pub x_listed: usize,
    pub x_distinct: usize,
    pub x_rank: usize,
    pub max_phi_d_residual: f64,
    /// Same checks with the sign-corrected `X_13`.
    pub corrected_x_rank: usize,
    pub corrected_max_phi_d_residual: f64,
    pub y_listed: usize,
    pub y_distinct: usize,
    pub y_rank: usize,
    pub max_phi_e_residual: f64,
    /// Labels of listed elements whose residual exceeds the tolerance.
    pub failures: Vec<String>,
    pub combination: CombinationReport,
}

fn real_rank<T: Real>(list: &[LabeledMatrix<T>], rank_rel: T) -> Result<usize> {
    if list.is_empty() {
        return Ok(0);
    }
    let cols: Vec<DVector<T>> = list.iter().map(|l| hermitian_to_real_vector(&l.matrix)).collect();
    let op = RealLinearOperator::from_matrix(9, DMatrix::from_columns(&cols).transpose())?;
    let sv = op.singular_values()?;
    let smax = sv.iter().fold(T::zero(), |a, &s| a.max(s));
    Ok(sv.iter().filter(|&&s| s > rank_rel * smax).count())
}

fn max_residual<T: Real>(
    op: &RealLinearOperator<T>,
    list: &[LabeledMatrix<T>],
    tol: T,
    failures: &mut Vec<String>,
) -> Result<f64> {
    let mut worst = T::zero();
    for item in list {
        let r = op.apply(&item.matrix)?.norm();
        if r > tol && !failures.contains(&item.label) {
            failures.push(item.label.clone());
        }
        worst = worst.max(r);
    }
    Ok(worst.as_f64())
}

/// Checks every listed basis element against the operators built from the
/// numerically computed face of `ρ_{b,θ}`, the ranks of both spans, and the
/// combination identity.
pub fn verify_appendix<T: Real>(b: T, theta: T, tol: &Tolerance<T>) -> Result<AppendixReport> {
    let state = rho(b, theta)?;
    let d = range_basis(state.matrix(), tol)?;
    let e = range_basis(partial_transpose(&state).matrix(), tol)?;
    let phi_d = phi_d_operator(&d)?;
    let phi_e = phi_e_operator(&e, 3, 3)?;
    let xs = appendix_basis_x(b, theta)?;
    let ys = appendix_basis_y(b, theta)?;
    let xd = distinct(&xs);
    let yd = distinct(&ys);
    let bound = T::lit(T::DEFAULT_TOL);
    let mut failures = Vec::new();
    let max_phi_d_residual = max_residual(&phi_d, &xs, bound, &mut failures)?;
    let max_phi_e_residual = max_residual(&phi_e, &ys, bound, &mut failures)?;
    let xc = appendix_basis_x_corrected(b, theta)?;
    let corrected_max_phi_d_residual = max_residual(&phi_d, &xc, bound, &mut Vec::new())?;
    Ok(AppendixReport {
        b: b.as_f64(),
        theta: theta.as_f64(),
        x_listed: xs.len(),
        x_distinct: xd.len(),
        x_rank: real_rank(&xd, tol.rank_rel)?,
        max_phi_d_residual,
        corrected_x_rank: real_rank(&xc, tol.rank_rel)?,
        corrected_max_phi_d_residual,
        y_listed: ys.len(),
        y_distinct: yd.len(),
        y_rank: real_rank(&yd, tol.rank_rel)?,
        max_phi_e_residual,
        failures,
        combination: verify_combination_identity(b, theta, T::lit(T::EXACT_ATOL * 100.0))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn x1_is_a_rank_one_projector_times_two() {
        let xs = appendix_basis_x(2.0, PI / 6.0).unwrap();
        let x1 = &xs[0].matrix;
        assert_eq!(x1.get(0, 0).re, 1.0);
        assert_eq!(x1.get(0, 4).re, -1.0);
        assert!((&(x1 * 0.5) - &HermitianMatrix::from_dmatrix(
            x1.as_dmatrix() * x1.as_dmatrix() * Complex::new(0.25, 0.0)
        ).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn y_duplicates_are_detected() {
        let ys = appendix_basis_y(2.0, PI / 6.0).unwrap();
        assert_eq!(ys.len(), 29);
        assert_eq!(distinct(&ys).len(), 25);
    }

    #[test]
    fn combination_at_zero_angle() {
        let r = verify_combination_identity(1.5, 0.0, 1e-10).unwrap();
        assert!(r.holds, "{r:?}");
    }
}

//! The Diophantine system `k + ℓ = m + n − 2`,
//! `Σ_{r+s=m−1} (−1)^r C(k,r) C(ℓ,s) = 0`, whose solvability decides whether a
//! decomposable map with `k` CP and `ℓ` co-CP pieces can avoid a common zero
//! product vector, and the resulting values and bounds of ν.
//!
//! Arithmetic is exact and generic over signed integer types; overflow of a
//! fixed-width type is reported, never wrapped. [`BigInt`] never overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};

pub trait ExactInt: Integer + Signed + Clone + FromPrimitive + CheckedAdd + CheckedSub + CheckedMul {}

impl<I> ExactInt for I where I: Integer + Signed + Clone + FromPrimitive + CheckedAdd + CheckedSub + CheckedMul {}

fn overflow() -> Error {
    Error::NumericalFailure("integer overflow in exact arithmetic".into())
}

fn lift<I: ExactInt>(x: usize) -> Result<I> {
    I::from_usize(x).ok_or_else(overflow)
}

pub fn binomial<I: ExactInt>(n: usize, r: usize) -> Result<I> {
    if r > n {
        return Ok(I::zero());
    }
    let r = r.min(n - r);
    let mut acc = I::one();
    for i in 1..=r {
        acc = acc.checked_mul(&lift(n - r + i)?).ok_or_else(overflow)? / lift(i)?;
    }
    Ok(acc)
}

/// `Σ_{r+s=m−1} (−1)^r C(k,r) C(ℓ,s)`.
pub fn krawtchouk_sum<I: ExactInt>(k: usize, l: usize, m: usize) -> Result<I> {
    if m == 0 {
        return domain("m must be at least 1");
    }
    let mut acc = I::zero();
    for r in 0..m {
        let term = binomial::<I>(k, r)?
            .checked_mul(&binomial(l, m - 1 - r)?)
            .ok_or_else(overflow)?;
        acc = if r % 2 == 0 {
            acc.checked_add(&term)
        } else {
            acc.checked_sub(&term)
        }
        .ok_or_else(overflow)?;
    }
    Ok(acc)
}

/// `krawtchouk_sum` in arbitrary precision.
pub fn krawtchouk_sum_big(k: usize, l: usize, m: usize) -> Result<BigInt> {
    krawtchouk_sum(k, l, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KrawtchoukSolution {
    pub k: usize,
    #[serde(rename = "l")]
    pub l: usize,
    pub m: usize,
    pub n: usize,
    /// The representative named in the known families: `(μ, μ)` for `m = 2`,
    /// `(C(μ+1,2), C(μ+2,2))` for `m = 3, n = μ(μ+2)`.
    pub canonical: bool,
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return domain(format!("need m, n ≥ 2, got ({m}, {n})"));
    }
    Ok(())
}

fn is_canonical(k: usize, l: usize, m: usize, n: usize) -> bool {
    match m {
        2 => k == l,
        3 => (1..=n).any(|mu| mu * (mu + 2) == n && k == mu * (mu + 1) / 2 && l == (mu + 1) * (mu + 2) / 2),
        _ => false,
    }
}

/// All `(k, ℓ)` in lexicographic order.
pub fn solve(m: usize, n: usize) -> Result<Vec<KrawtchoukSolution>> {
    check_dims(m, n)?;
    let total = m + n - 2;
    let mut out = Vec::new();
    for k in 0..=total {
        let l = total - k;
        if krawtchouk_sum_big(k, l, m)?.is_zero() {
            out.push(KrawtchoukSolution {
                k,
                l,
                m,
                n,
                canonical: is_canonical(k, l, m, n),
            });
        }
    }
    Ok(out)
}

/// `m+n−1` when the system has no solution, else `m+n−2`.
pub fn nu_lower_bound_d(m: usize, n: usize) -> Result<usize> {
    Ok(if solve(m, n)?.is_empty() { m + n - 1 } else { m + n - 2 })
}

/// `ν(𝔻_{2,n})`: `n + 1` for odd `n`, `n` for even `n`.
pub fn nu_d_2n(n: usize) -> Result<usize> {
    check_dims(2, n)?;
    Ok(if n % 2 == 1 { n + 1 } else { n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Exact,
    Bound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NuD {
    pub value: Option<usize>,
    pub lower_bound: usize,
    pub status: BoundStatus,
}

/// Known values of ν for the separable (`S`), PPT (`T`), positive (`P`) and
/// decomposable (`D`) cones; `None` where the value is open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NuSummary {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "S")]
    pub s: usize,
    #[serde(rename = "T")]
    pub t: Option<usize>,
    #[serde(rename = "P")]
    pub p: Option<usize>,
    #[serde(rename = "D")]
    pub d: NuD,
}

pub fn nu_summary(m: usize, n: usize) -> Result<NuSummary> {
    check_dims(m, n)?;
    let lower_bound = nu_lower_bound_d(m, n)?;
    let three = (m, n) == (3, 3);
    let exact = match (m, n) {
        (2, _) => Some(nu_d_2n(n)?),
        (3, 3) => Some(4),
        _ => None,
    };
    Ok(NuSummary {
        m,
        n,
        s: m * n,
        t: three.then_some(2),
        p: three.then_some(2),
        d: NuD {
            value: exact,
            lower_bound,
            status: if exact.is_some() { BoundStatus::Exact } else { BoundStatus::Bound },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        assert_eq!(krawtchouk_sum::<i64>(1, 3, 3).unwrap(), 0);
        assert_eq!(krawtchouk_sum::<i64>(2, 2, 2).unwrap(), 0);
        assert_eq!(krawtchouk_sum::<i64>(0, 0, 1).unwrap(), 1);
        assert!(krawtchouk_sum::<i64>(0, 0, 0).is_err());
    }

    #[test]
    fn fixed_width_overflow_is_an_error() {
        assert!(krawtchouk_sum::<i8>(20, 20, 10).is_err());
        assert!(krawtchouk_sum_big(200, 200, 100).is_ok());
    }

    #[test]
    fn three_by_three() {
        let s = solve(3, 3).unwrap();
        let pairs: Vec<_> = s.iter().map(|x| (x.k, x.l, x.canonical)).collect();
        assert_eq!(pairs, vec![(1, 3, true), (3, 1, false)]);
        assert!(solve(2, 3).unwrap().is_empty());
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu_lower_bound_d(2, 3).unwrap(), 4);
        assert_eq!(nu_lower_bound_d(2, 4).unwrap(), 4);
        assert_eq!(nu_lower_bound_d(3, 3).unwrap(), 4);
        assert_eq!(nu_d_2n(2).unwrap(), 2);
        let s = nu_summary(2, 5).unwrap();
        assert_eq!((s.s, s.t, s.d.value), (10, None, Some(6)));
        let j = serde_json::to_string(&nu_summary(3, 3).unwrap()).unwrap();
        assert_eq!(
            j,
            r#"{"m":3,"n":3,"S":9,"T":2,"P":2,"D":{"value":4,"lower_bound":4,"status":"exact"}}"#
        );
        let big = nu_summary(4, 4).unwrap();
        assert_eq!(big.d.status, BoundStatus::Bound);
    }
}

//! Convex geometry of bipartite PPT states, separable states, positive and
//! decomposable maps, with the `3⊗3` families `ρ_{b,θ}` and `σ_{b,θ}` as the
//! central examples.
//!
//! Numerical code is generic over [`scalar::Real`] (`f64` or `f32`); the
//! aliases below fix `f64`. Integer combinatorics is generic over
//! [`krawtchouk::ExactInt`], with [`KrawtchoukInt`] as the default.

pub mod angle;
pub mod error;
pub mod extremality;
pub mod json;
pub mod krawtchouk;
pub mod linalg;
pub mod maps;
pub mod product;
pub mod sampling;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};

pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type BipartiteMatrix = states::BipartiteMatrix<f64>;
pub type Subspace = linalg::Subspace<f64>;
pub type Tolerance = linalg::Tolerance<f64>;
pub type RealLinearOperator = linalg::RealLinearOperator<f64>;
pub type FaceSpec = extremality::FaceSpec<f64>;
pub type ExtremalityReport = extremality::ExtremalityReport<f64>;
pub type ChoiMap = maps::ChoiMap<f64>;
pub type DecomposableSpec = maps::DecomposableSpec<f64>;
pub type ProductTerm = states::ProductTerm<f64>;
pub type KrawtchoukInt = num_bigint::BigInt;

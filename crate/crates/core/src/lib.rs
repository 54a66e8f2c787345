//! Poisson brackets on spaces of graph connections, given by a ciliated
//! graph and an r-matrix at each vertex.
//!
//! The algebraic layers ([`lie_core`], [`r_matrix`], [`invariant_calculus`])
//! are generic over the coefficient type [`Scalar`]; use [`Rational`] for
//! literal identities. [`group_numerics`] evaluates invariant multivector
//! fields at points of a matrix group in double precision.

pub mod ciliated_graph;
pub mod error;
pub mod group_numerics;
pub mod invariant_calculus;
pub mod io;
pub mod lie_core;
pub mod r_matrix;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;

pub type ExactAlgebra = lie_core::LieAlgebra<Rational>;
pub type FloatAlgebra = lie_core::LieAlgebra<f64>;
pub type ExactTensor = lie_core::Tensor<Rational>;
pub type ExactAltTensor = lie_core::AltTensor<Rational>;
pub type FloatAltTensor = lie_core::AltTensor<f64>;
pub type ExactRMatrix = r_matrix::RMatrix<Rational>;
pub type ExactMultivector = invariant_calculus::InvariantMultivector<Rational>;



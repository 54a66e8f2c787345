//! Exact multilinear algebra over a Lie algebra given by structure constants.

mod algebra;
mod calculus;
mod tensor;

pub use algebra::{abelian, builtin_algebra, from_matrix_basis, gl, gl2, sl, sl2, DirectSum, LieAlgebra};
pub use calculus::{ad_alt, ad_invariant, ad_tensor, phi_s, schouten, AdInvariant, Cobracket};
pub use tensor::{AltTensor, LinearMap, SparseVec, Tensor};


//! Small dense complex linear algebra: states, Hermitian operators, tensor
//! products and spectral decomposition.
//!
//! Basis ordering over tensor factors is lexicographic with the leftmost
//! factor most significant.

mod operator;
pub mod spectral;
pub mod spin;
mod state;

pub use operator::{HermitianOperator, Projector};
pub use spectral::{spectral, SpectralDecomposition, DEFAULT_MERGE_TOL};
pub use state::{Amplitude, StateVector};

pub(crate) use operator::max_abs_diff;
pub(crate) use state::{check_dim, inner_raw, norm};

//! Sparse symmetric tensors, Wiener chaos algebra and Monte Carlo
//! reproductions of chaos limit theorems, all over a finite orthonormal basis.

pub mod algebra;
pub mod combinat;
pub mod discrete;
pub mod error;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod tensor;
pub mod timeseries;

pub use algebra::{ChaosExpansion, ChaosVectorSpec, CovarianceMatrix};
pub use error::{Error, Result};
pub use stats::Estimate;
pub use tensor::{
    contract, contraction_norm_sq_dual, symmetrize, symmetrized_contraction, BipartiteTensor, MultiIndex,
    SymmetricTensor,
};

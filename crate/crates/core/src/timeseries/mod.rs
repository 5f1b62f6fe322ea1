//! Stationary Gaussian sequences, Hermite partial sums and their limits.

mod joint;
mod limits;
mod model;
mod path;
mod rosenblatt;

pub use joint::{joint_experiment, JointRegime, JointReport};
pub use limits::{
    breuer_major_constant, breuer_major_series, breuer_major_sum, finite_n_variance, hermite_partial_sum,
    hermite_prefix_sums, hurwitz_zeta, taqqu_constant, taqqu_normalizer, HermitePartialSum, TaqquNormalizer, FDD_GRID,
};
pub use model::{fgn_covariance, CovarianceModel, SlowlyVarying};
pub use path::{gaussian_path, GaussianPathSampler, CHOLESKY_MAX, EIGEN_FLOOR};
pub use rosenblatt::{
    gram_constant, rosenblatt_constant, rosenblatt_cumulants, GridLevel, RosenblattCumulants, RosenblattKernelGrid,
    DEFAULT_CELLS, MAX_CALIBRATION_SHIFT,
};

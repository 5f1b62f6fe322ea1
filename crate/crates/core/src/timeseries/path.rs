use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::model::CovarianceModel;
use crate::error::{Error, Result};

/// Embedding eigenvalues down to this value are clipped to zero.
pub const EIGEN_FLOOR: f64 = -1e-8;
/// Largest `n` for the dense Cholesky fallback.
pub const CHOLESKY_MAX: usize = 4096;

enum Method {
    Trivial,
    Circulant {
        fft: Arc<dyn Fft<f64>>,
        scale: Vec<f64>,
    },
    Cholesky(DMatrix<f64>),
}

/// Draws stationary Gaussian paths of length `n` with the exact finite-n
/// covariance of a model. Setup (FFT plan, eigenvalues) is done once.
pub struct GaussianPathSampler {
    n: usize,
    method: Method,
    min_eigenvalue: f64,
}

impl GaussianPathSampler {
    /// Circulant embedding of size `2(n-1)`; falls back to a Cholesky factor
    /// of the Toeplitz matrix when the embedding has eigenvalues below
    /// [`EIGEN_FLOOR`] and `n <= CHOLESKY_MAX`.
    pub fn new(model: &CovarianceModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("path length must be positive".into()));
        }
        if n == 1 {
            return Ok(GaussianPathSampler {
                n,
                method: Method::Trivial,
                min_eigenvalue: 1.0,
            });
        }
        let m = 2 * (n - 1);
        let mut row: Vec<Complex64> = (0..m)
            .map(|j| {
                let lag = if j < n { j } else { m - j };
                Complex64::new(model.r(lag as i64), 0.0)
            })
            .collect();
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(m);
        fft.process(&mut row);
        let min_eigenvalue = row.iter().map(|c| c.re).fold(f64::INFINITY, f64::min);
        if min_eigenvalue >= EIGEN_FLOOR {
            let scale = row.iter().map(|c| (c.re.max(0.0) / m as f64).sqrt()).collect();
            return Ok(GaussianPathSampler {
                n,
                method: Method::Circulant { fft, scale },
                min_eigenvalue,
            });
        }
        if n > CHOLESKY_MAX {
            return Err(Error::InvalidModel {
                n,
                msg: format!(
                    "circulant embedding has eigenvalue {min_eigenvalue:e} and n exceeds the Cholesky limit {CHOLESKY_MAX}"
                ),
            });
        }
        let toeplitz = DMatrix::from_fn(n, n, |i, j| model.r(i as i64 - j as i64));
        let chol = toeplitz.cholesky().ok_or_else(|| Error::InvalidModel {
            n,
            msg: "covariance matrix is not positive definite".into(),
        })?;
        Ok(GaussianPathSampler {
            n,
            method: Method::Cholesky(chol.l()),
            min_eigenvalue,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Smallest eigenvalue of the circulant embedding.
    pub fn min_embedding_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn uses_circulant(&self) -> bool {
        matches!(self.method, Method::Circulant { .. })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.method {
            Method::Trivial => vec![rng.sample(StandardNormal)],
            Method::Circulant { fft, scale } => {
                let mut w: Vec<Complex64> = scale
                    .iter()
                    .map(|&s| Complex64::new(s * rng.sample::<f64, _>(StandardNormal), s * rng.sample::<f64, _>(StandardNormal)))
                    .collect();
                fft.process(&mut w);
                w[..self.n].iter().map(|c| c.re).collect()
            }
            Method::Cholesky(l) => {
                let z = DVector::from_fn(self.n, |_, _| rng.sample(StandardNormal));
                (l * z).iter().copied().collect()
            }
        }
    }
}

/// One stationary Gaussian path of length `n`.
pub fn gaussian_path<R: Rng + ?Sized>(model: &CovarianceModel, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    Ok(GaussianPathSampler::new(model, n)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::stats::{mean_estimate, pairwise_sum};
    use crate::timeseries::SlowlyVarying;

    fn lag1(path: &[f64]) -> Vec<f64> {
        path.windows(2).map(|w| w[0] * w[1]).collect()
    }

    #[test]
    fn white_noise_lag_one() {
        let mut rng = substream(1, "t", 0);
        let p = gaussian_path(&CovarianceModel::WhiteNoise, 4096, &mut rng).unwrap();
        let c = pairwise_sum(&lag1(&p)) / 4095.0;
        assert!(c.abs() < 4.0 / 4096f64.sqrt());
    }

    #[test]
    fn ar1_lag_one_over_replicates() {
        let model = CovarianceModel::geometric(0.5).unwrap();
        let s = GaussianPathSampler::new(&model, 4096).unwrap();
        assert!(s.uses_circulant());
        let vals: Vec<f64> = (0..20)
            .flat_map(|r| lag1(&s.sample(&mut substream(2, "t", r))))
            .collect();
        // neighbouring products are correlated; check the mean loosely
        assert!((mean_estimate(&vals).value - 0.5).abs() < 0.03);
    }

    #[test]
    fn fgn_unit_variance() {
        let model = CovarianceModel::fgn(0.3).unwrap();
        let s = GaussianPathSampler::new(&model, 4096).unwrap();
        // coordinate 0 across replicates is an i.i.d. N(0,1) sample
        let xs: Vec<f64> = (0..4000).map(|r| s.sample(&mut substream(3, "t", r))[0].powi(2)).collect();
        assert!(mean_estimate(&xs).within(1.0, 4.0));
    }

    #[test]
    fn invalid_power_law_is_rejected() {
        let model = CovarianceModel::regvar(0.3, SlowlyVarying::One).unwrap();
        assert!(matches!(GaussianPathSampler::new(&model, 64), Err(Error::InvalidModel { .. })));
        assert!(matches!(GaussianPathSampler::new(&model, 8192), Err(Error::InvalidModel { .. })));
    }

    #[test]
    fn short_paths() {
        let mut rng = substream(4, "t", 0);
        assert_eq!(gaussian_path(&CovarianceModel::WhiteNoise, 1, &mut rng).unwrap().len(), 1);
        assert_eq!(gaussian_path(&CovarianceModel::WhiteNoise, 2, &mut rng).unwrap().len(), 2);
        assert!(gaussian_path(&CovarianceModel::WhiteNoise, 0, &mut rng).is_err());
    }
}

use serde::Serialize;

use super::limits::{breuer_major_constant, finite_n_variance, hermite_prefix_sums, taqqu_normalizer, FDD_GRID};
use super::model::CovarianceModel;
use super::path::GaussianPathSampler;
use crate::error::{Error, Result};
use crate::rng::par_replicates;
use crate::sampler::ks_distance;
use crate::stats::{covariance_estimate, cumulant_estimates, Estimate};

/// Which joint limit applies to `(S_{q,n}, S_{2,n})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointRegime {
    /// `D > ½`: both sums scaled by `√n`, limit `(a_q B_1, a_2 B_2)` with
    /// independent Brownian motions.
    BothGaussian,
    /// `1/q < D < ½`: `S_q/√n → a_q B`, `S_2/(n^{1-D}L(n)) → b_D R`
    /// with `R` Rosenblatt and independent of `B`.
    GaussianRosenblatt,
}

impl JointRegime {
    pub fn classify(d: f64, q: usize) -> Result<Self> {
        if q < 3 {
            return Err(Error::InvalidArgument(format!("the higher rank must be at least 3, got {q}")));
        }
        if d > 0.5 {
            Ok(JointRegime::BothGaussian)
        } else if d < 0.5 && d * q as f64 > 1.0 {
            Ok(JointRegime::GaussianRosenblatt)
        } else {
            Err(Error::OutOfScope(format!(
                "no joint limit covered for D = {d}, q = {q} (need D > ½ or 1/q < D < ½)"
            )))
        }
    }
}

/// Monte Carlo replicates of the jointly normalized pair and summary
/// statistics.
#[derive(Clone, Debug, Serialize)]
pub struct JointReport {
    pub regime: JointRegime,
    pub d: f64,
    pub q: usize,
    pub n: usize,
    pub replicates: usize,
    /// Limit scale of the first component, `a_q`.
    pub first_constant: f64,
    /// Limit scale of the second component: `a_2` or `b_D`.
    pub second_constant: f64,
    /// Exact standard deviations of the normalized sums at this `n`.
    pub first_sd: f64,
    pub second_sd: f64,
    /// Normalized sums at t ∈ {¼, ½, ¾, 1}, one row per replicate.
    pub first: Vec<[f64; 4]>,
    pub second: Vec<[f64; 4]>,
    /// Statistics of the t = 1 values divided by their exact sd.
    pub cross_cov: Estimate,
    pub cov_squares: Estimate,
    pub ks_first: f64,
    pub ks_second: f64,
    pub cumulants_second: [Estimate; 4],
}

impl JointReport {
    pub fn standardized_first(&self) -> Vec<f64> {
        self.first.iter().map(|r| r[3] / self.first_sd).collect()
    }

    pub fn standardized_second(&self) -> Vec<f64> {
        self.second.iter().map(|r| r[3] / self.second_sd).collect()
    }
}

/// Simulate `(S_{q,n}, S_{2,n})` on a Gaussian path with the given
/// regularly varying covariance, scaled by the regime's normalizers.
pub fn joint_experiment(model: &CovarianceModel, q: usize, n: usize, replicates: usize, seed: u64) -> Result<JointReport> {
    let d = model
        .exponent()
        .ok_or_else(|| Error::InvalidArgument(format!("{model:?} is not regularly varying")))?;
    let regime = JointRegime::classify(d, q)?;
    if replicates < 3 {
        return Err(Error::InvalidArgument("need at least 3 replicates".into()));
    }
    let first_constant = breuer_major_constant(model, q)?;
    let root_n = (n as f64).sqrt();
    let (second_constant, second_norm) = match regime {
        JointRegime::BothGaussian => (breuer_major_constant(model, 2)?, root_n),
        JointRegime::GaussianRosenblatt => {
            let t = taqqu_normalizer(model, n)?;
            (t.b_d, t.normalizer)
        }
    };
    let first_sd = finite_n_variance(model, q, n).sqrt() / root_n;
    let second_sd = finite_n_variance(model, 2, n).sqrt() / second_norm;

    let sampler = GaussianPathSampler::new(model, n)?;
    let rows: Vec<([f64; 4], [f64; 4])> = par_replicates(replicates, seed, "joint-path", |_, rng| {
        let path = sampler.sample(rng);
        let sq = hermite_prefix_sums(&path, q);
        let s2 = hermite_prefix_sums(&path, 2);
        let at = |s: &[f64], norm: f64| FDD_GRID.map(|t| s[((n as f64 * t).floor() as usize).min(n)] / norm);
        (at(&sq, root_n), at(&s2, second_norm))
    });
    let (first, second): (Vec<_>, Vec<_>) = rows.into_iter().unzip();

    let mut report = JointReport {
        regime,
        d,
        q,
        n,
        replicates,
        first_constant,
        second_constant,
        first_sd,
        second_sd,
        first,
        second,
        cross_cov: Estimate { value: 0.0, se: 0.0 },
        cov_squares: Estimate { value: 0.0, se: 0.0 },
        ks_first: 0.0,
        ks_second: 0.0,
        cumulants_second: [Estimate { value: 0.0, se: 0.0 }; 4],
    };
    let x = report.standardized_first();
    let y = report.standardized_second();
    report.cross_cov = covariance_estimate(&x, &y);
    let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
    let y2: Vec<f64> = y.iter().map(|v| v * v).collect();
    report.cov_squares = covariance_estimate(&x2, &y2);
    report.ks_first = ks_distance(&x);
    report.ks_second = ks_distance(&y);
    report.cumulants_second = cumulant_estimates(&y);
    Ok(report)
}

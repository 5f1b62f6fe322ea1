use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Slowly varying factor `L` in `r(k) = k^{-D} L(k)`.
#[derive(Clone)]
pub enum SlowlyVarying {
    /// `L ≡ 1`. Note that `r(k) = k^{-D}` with `r(0) = 1` is not a valid
    /// covariance (it is not positive semidefinite), so this choice supports
    /// the analytic quantities but not path simulation.
    One,
    /// Fractional Gaussian noise with Hurst index `1 - D/2`; `L(k) → H(2H-1)`.
    Fgn,
    /// `r(k) = (1 + k)^{-D}`.
    Shifted,
    /// A user-supplied `L`, assumed bounded on compacts and slowly varying.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for SlowlyVarying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlowlyVarying::One => write!(f, "One"),
            SlowlyVarying::Fgn => write!(f, "Fgn"),
            SlowlyVarying::Shifted => write!(f, "Shifted"),
            SlowlyVarying::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

type CovFn = Arc<dyn Fn(usize) -> f64 + Send + Sync>;
/// `(K, q) ↦` an upper bound on `Σ_{k>K} |r(k)|^q`.
type TailFn = Arc<dyn Fn(usize, usize) -> f64 + Send + Sync>;

/// Covariance sequence `r(k) = E[G_1 G_{1+k}]` of a stationary unit-variance
/// Gaussian sequence.
#[derive(Clone)]
pub enum CovarianceModel {
    /// `r(k) = 0` for `k ≠ 0`.
    WhiteNoise,
    /// `r(k) = ρ^{|k|}` (AR(1)).
    Geometric { rho: f64 },
    /// An arbitrary summable sequence with a certified tail bound.
    Summable { r: CovFn, tail: TailFn },
    /// `r(k) = k^{-D} L(k)` for `k ≥ 1`.
    RegVar { d: f64, l: SlowlyVarying },
}

impl fmt::Debug for CovarianceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CovarianceModel::WhiteNoise => write!(f, "WhiteNoise"),
            CovarianceModel::Geometric { rho } => write!(f, "Geometric {{ rho: {rho} }}"),
            CovarianceModel::Summable { .. } => write!(f, "Summable {{ .. }}"),
            CovarianceModel::RegVar { d, l } => write!(f, "RegVar {{ d: {d}, l: {l:?} }}"),
        }
    }
}

/// Fractional Gaussian noise autocovariance `½(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H})`.
pub fn fgn_covariance(hurst: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    fgn_second_difference(hurst, k as f64)
}

// ½(|x+1|^{2H} - 2x^{2H} + |x-1|^{2H}) for x ≥ 1, written as
// ½x^{2H}[((1+u)^{2H} - 1) + ((1-u)^{2H} - 1)] with u = 1/x so the large-x
// cancellation happens between two O(u) terms instead of three O(x^{2H}).
fn fgn_second_difference(hurst: f64, x: f64) -> f64 {
    let e = 2.0 * hurst;
    if x < 2.0 {
        return 0.5 * ((x + 1.0).powf(e) - 2.0 * x.powf(e) + (x - 1.0).abs().powf(e));
    }
    let u = 1.0 / x;
    let up = (e * u.ln_1p()).exp_m1();
    let down = (e * (-u).ln_1p()).exp_m1();
    0.5 * x.powf(e) * (up + down)
}

impl CovarianceModel {
    pub fn geometric(rho: f64) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!("|rho| must be below 1, got {rho}")));
        }
        Ok(CovarianceModel::Geometric { rho })
    }

    pub fn regvar(d: f64, l: SlowlyVarying) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::InvalidArgument(format!("exponent D must be positive, got {d}")));
        }
        if matches!(l, SlowlyVarying::Fgn) && d >= 2.0 {
            return Err(Error::InvalidArgument(format!(
                "fractional Gaussian noise needs D < 2, got {d}"
            )));
        }
        Ok(CovarianceModel::RegVar { d, l })
    }

    /// Fractional Gaussian noise with exponent `D = 2 - 2H`.
    pub fn fgn(d: f64) -> Result<Self> {
        Self::regvar(d, SlowlyVarying::Fgn)
    }

    /// `r(k)` for any integer lag (symmetric in `k`).
    pub fn r(&self, k: i64) -> f64 {
        let k = k.unsigned_abs() as usize;
        if k == 0 {
            return 1.0;
        }
        match self {
            CovarianceModel::WhiteNoise => 0.0,
            CovarianceModel::Geometric { rho } => rho.powi(k as i32),
            CovarianceModel::Summable { r, .. } => r(k),
            CovarianceModel::RegVar { d, l } => {
                let kf = k as f64;
                match l {
                    SlowlyVarying::One => kf.powf(-d),
                    SlowlyVarying::Fgn => fgn_covariance(1.0 - d / 2.0, k),
                    SlowlyVarying::Shifted => (1.0 + kf).powf(-d),
                    SlowlyVarying::Custom(lf) => kf.powf(-d) * lf(kf),
                }
            }
        }
    }

    /// The slowly varying factor at `x`, `L(x) = r(x) x^D`. Only meaningful
    /// for regularly varying models.
    pub fn slowly_varying(&self, x: f64) -> Option<f64> {
        match self {
            CovarianceModel::RegVar { d, l } => Some(match l {
                SlowlyVarying::One => 1.0,
                SlowlyVarying::Custom(lf) => lf(x),
                SlowlyVarying::Shifted => (x / (1.0 + x)).powf(*d),
                SlowlyVarying::Fgn => {
                    // continuous extension of the fGn covariance, valid for x ≥ 1
                    fgn_second_difference(1.0 - d / 2.0, x) * x.powf(*d)
                }
            }),
            _ => None,
        }
    }

    /// Exponent `D` of a regularly varying model.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            CovarianceModel::RegVar { d, .. } => Some(*d),
            _ => None,
        }
    }

    /// An upper bound on `Σ_{k>K} |r(k)|^q`, when the model can certify one.
    pub fn tail_bound(&self, big_k: usize, q: usize) -> Option<f64> {
        let qf = q as f64;
        match self {
            CovarianceModel::WhiteNoise => Some(0.0),
            CovarianceModel::Geometric { rho } => {
                let a = rho.abs().powi(q as i32);
                Some(a.powi(big_k as i32 + 1) / (1.0 - a))
            }
            CovarianceModel::Summable { tail, .. } => Some(tail(big_k, q)),
            CovarianceModel::RegVar { d, l } => {
                let s = d * qf;
                if s <= 1.0 {
                    return None;
                }
                let kf = big_k.max(1) as f64;
                match l {
                    // Σ_{k>K} k^{-s} ≤ ∫_K^∞ x^{-s} dx
                    SlowlyVarying::One => Some(kf.powf(1.0 - s) / (s - 1.0)),
                    SlowlyVarying::Shifted => Some((kf + 1.0).powf(1.0 - s) / (s - 1.0)),
                    // |r(k)| ≤ H|2H-1| (k-1)^{-D} for k ≥ 2 (mean value theorem)
                    SlowlyVarying::Fgn => {
                        if big_k < 2 {
                            return None;
                        }
                        let h = 1.0 - d / 2.0;
                        let c = (h * (2.0 * h - 1.0)).abs().powf(qf);
                        let k1 = (big_k - 1) as f64;
                        Some(c * (k1.powf(-s) + k1.powf(1.0 - s) / (s - 1.0)))
                    }
                    SlowlyVarying::Custom(_) => None,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lags_are_symmetric_and_unit_at_zero() {
        let models = [
            CovarianceModel::WhiteNoise,
            CovarianceModel::geometric(0.5).unwrap(),
            CovarianceModel::fgn(0.3).unwrap(),
            CovarianceModel::regvar(0.3, SlowlyVarying::One).unwrap(),
        ];
        for m in &models {
            assert_eq!(m.r(0), 1.0);
            assert_eq!(m.r(3), m.r(-3));
        }
        assert_eq!(CovarianceModel::geometric(0.5).unwrap().r(2), 0.25);
    }

    #[test]
    fn fgn_is_regularly_varying() {
        let d = 0.3;
        let m = CovarianceModel::fgn(d).unwrap();
        let h = 1.0 - d / 2.0;
        let l = m.slowly_varying(1e6).unwrap();
        assert!((l - h * (2.0 * h - 1.0)).abs() < 1e-6);
        assert!((m.r(10) - 10f64.powf(-d) * m.slowly_varying(10.0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn invalid_parameters() {
        assert!(CovarianceModel::geometric(1.0).is_err());
        assert!(CovarianceModel::regvar(0.0, SlowlyVarying::One).is_err());
        assert!(CovarianceModel::fgn(2.5).is_err());
    }

    #[test]
    fn tail_bounds_dominate() {
        let m = CovarianceModel::fgn(0.8).unwrap();
        let q = 3;
        let k = 50;
        let partial: f64 = (k + 1..200_000).map(|j| m.r(j as i64).abs().powi(q as i32)).sum();
        assert!(m.tail_bound(k, q).unwrap() >= partial);
        assert!(CovarianceModel::fgn(0.3).unwrap().tail_bound(10, 2).is_none());
    }
}

//! Deterministic reductions and Monte Carlo summaries.

use serde::Serialize;

/// Pairwise (cascade) summation. The split points depend only on the length,
/// so the result is a fixed function of the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    pairwise_sum(xs) / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(xs);
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    pairwise_sum(&sq) / (n - 1) as f64
}

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    /// `|value - target| <= k * se`
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.se
    }

    /// Number of standard errors between the estimate and `target`.
    pub fn z(&self, target: f64) -> f64 {
        (self.value - target) / self.se
    }
}

/// Sample mean with standard error `s / sqrt(n)`.
pub fn mean_estimate(xs: &[f64]) -> Estimate {
    Estimate {
        value: mean(xs),
        se: (sample_variance(xs) / xs.len() as f64).sqrt(),
    }
}

/// Sample variance with the delta-method standard error
/// `sqrt((m4 - s^4) / n)`.
pub fn variance_estimate(xs: &[f64]) -> Estimate {
    let n = xs.len() as f64;
    let m = mean(xs);
    let s2 = sample_variance(xs);
    let c4: Vec<f64> = xs.iter().map(|x| (x - m).powi(4)).collect();
    let m4 = pairwise_sum(&c4) / n;
    Estimate {
        value: s2,
        se: ((m4 - s2 * s2).max(0.0) / n).sqrt(),
    }
}

/// Cumulants of orders 1..=4 from raw moments.
pub fn cumulants_from_raw(m: [f64; 4]) -> [f64; 4] {
    let [m1, m2, m3, m4] = m;
    [
        m1,
        m2 - m1 * m1,
        m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3),
        m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1.powi(4),
    ]
}

/// Plug-in cumulants `κ1..κ4` with leave-one-out jackknife standard errors.
/// Each leave-one-out estimate is computed from power sums, so the cost is
/// linear in the sample size.
pub fn cumulant_estimates(xs: &[f64]) -> [Estimate; 4] {
    let n = xs.len();
    assert!(n >= 3, "cumulant estimates need at least three samples");
    let power = |k: i32| pairwise_sum(&xs.iter().map(|x| x.powi(k)).collect::<Vec<_>>());
    let sums = [power(1), power(2), power(3), power(4)];
    let full = cumulants_from_raw(sums.map(|s| s / n as f64));

    let nf = (n - 1) as f64;
    let loo: Vec<[f64; 4]> = xs
        .iter()
        .map(|&x| {
            let raw = [
                (sums[0] - x) / nf,
                (sums[1] - x * x) / nf,
                (sums[2] - x.powi(3)) / nf,
                (sums[3] - x.powi(4)) / nf,
            ];
            cumulants_from_raw(raw)
        })
        .collect();

    let mut out = [Estimate { value: 0.0, se: 0.0 }; 4];
    for k in 0..4 {
        let col: Vec<f64> = loo.iter().map(|c| c[k]).collect();
        let bar = mean(&col);
        let dev: Vec<f64> = col.iter().map(|c| (c - bar) * (c - bar)).collect();
        out[k] = Estimate {
            value: full[k],
            se: ((n as f64 - 1.0) / n as f64 * pairwise_sum(&dev)).sqrt(),
        };
    }
    out
}

/// Sample covariance of two equally long columns with a standard error from
/// the variance of the centered products.
pub fn covariance_estimate(xs: &[f64], ys: &[f64]) -> Estimate {
    assert_eq!(xs.len(), ys.len());
    let (mx, my) = (mean(xs), mean(ys));
    let prods: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).collect();
    mean_estimate(&prods)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn raw_to_cumulants_for_known_laws() {
        // standard normal: moments 0, 1, 0, 3
        assert_eq!(cumulants_from_raw([0.0, 1.0, 0.0, 3.0]), [0.0, 1.0, 0.0, 0.0]);
        // Poisson(1): raw moments 1, 2, 5, 15; all cumulants 1
        assert_eq!(cumulants_from_raw([1.0, 2.0, 5.0, 15.0]), [1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn jackknife_of_two_point_law() {
        let xs: Vec<f64> = (0..1000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let c = cumulant_estimates(&xs);
        assert!(c[1].value - 1.0 < 1e-12);
        assert!((c[3].value + 2.0).abs() < 1e-12);
        assert!(c[3].se < 0.2);
    }
}

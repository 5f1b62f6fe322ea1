//! Exact pathwise evaluation of multiple Wiener-Itô integrals over a finite
//! basis, and Monte Carlo summaries of the resulting vectors.

mod cumulants;
mod matrix;

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::algebra::{ChaosExpansion, ChaosVectorSpec};
use crate::combinat::{factorial, multiplicities};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::stats::{mean_estimate, Estimate};
use crate::tensor::SymmetricTensor;

pub use cumulants::{
    cumulants_to_moments, joint_cumulant, moment_table_from_samples, moments_to_cumulants, CumulantKey, MomentTable,
    DEFAULT_MAX_ORDER,
};
pub use matrix::{sample_vector, SampleMatrix, BATCH_ROWS};

/// Probabilists' Hermite polynomial `H_q(x)` by the three-term recurrence.
pub fn hermite_eval(q: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if q == 0 {
        return prev;
    }
    for k in 1..q {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `H_0(x), .., H_qmax(x)`.
pub fn hermite_all(qmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(qmax + 1);
    out.push(1.0);
    if qmax >= 1 {
        out.push(x);
    }
    for k in 1..qmax {
        out.push(x * out[k] - k as f64 * out[k - 1]);
    }
    out
}

/// Draw `d` i.i.d. standard normal coordinates `X(e_1), .., X(e_d)`.
pub fn draw_isonormal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// A chaos kernel flattened for repeated evaluation: each sorted entry `m`
/// becomes `coeff · q!/Π α_j! · Π_j H_{α_j}(ξ_j)`.
#[derive(Clone, Debug)]
pub struct CompiledChaos {
    dim: usize,
    max_mult: usize,
    terms: Vec<(f64, Vec<(usize, usize)>)>,
}

impl CompiledChaos {
    pub fn new(f: &SymmetricTensor) -> Self {
        let q = f.order();
        let mut max_mult = 0;
        let terms = f
            .iter()
            .map(|(m, v)| {
                let runs = multiplicities(m.as_slice());
                let denom: f64 = runs.iter().map(|&(_, a)| factorial(a)).product();
                max_mult = runs.iter().map(|&(_, a)| a).max().unwrap_or(0).max(max_mult);
                (
                    v * factorial(q) / denom,
                    runs.into_iter().map(|(i, a)| (i as usize - 1, a)).collect(),
                )
            })
            .collect();
        CompiledChaos {
            dim: f.dim(),
            max_mult,
            terms,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest Hermite degree needed at any single coordinate.
    pub fn max_mult(&self) -> usize {
        self.max_mult
    }

    /// Evaluate using a precomputed table `h[j][k] = H_k(ξ_j)`.
    pub fn eval_with_table(&self, table: &[Vec<f64>]) -> f64 {
        self.terms
            .iter()
            .map(|(w, runs)| w * runs.iter().map(|&(j, a)| table[j][a]).product::<f64>())
            .sum()
    }

    pub fn eval(&self, xi: &[f64]) -> Result<f64> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, xi.len()));
        }
        Ok(self.eval_with_table(&hermite_table(xi, self.max_mult)))
    }
}

/// `h[j][k] = H_k(ξ_j)` for `k <= qmax`.
pub fn hermite_table(xi: &[f64], qmax: usize) -> Vec<Vec<f64>> {
    xi.iter().map(|&x| hermite_all(qmax, x)).collect()
}

/// `I_q(f)` evaluated at the isonormal draw `ξ`. Exact: every basis term is
/// a product of Hermite polynomials in independent coordinates.
pub fn evaluate_chaos(f: &SymmetricTensor, xi: &[f64]) -> Result<f64> {
    CompiledChaos::new(f).eval(xi)
}

/// `Σ_q I_q(f_q)` at `ξ`.
pub fn evaluate_expansion(e: &ChaosExpansion, xi: &[f64]) -> Result<f64> {
    e.terms().map(|f| evaluate_chaos(f, xi)).sum()
}

/// Sample mean of `Π_i column_i^{k_i}` with its standard error.
pub fn empirical_moment(samples: &SampleMatrix, powers: &[u32]) -> Result<Estimate> {
    if powers.len() != samples.cols() {
        return Err(Error::DimensionMismatch(samples.cols(), powers.len()));
    }
    let vals: Vec<f64> = samples
        .rows()
        .map(|row| row.iter().zip(powers).map(|(x, &k)| x.powi(k as i32)).product())
        .collect();
    Ok(mean_estimate(&vals))
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypercontractivityReport {
    /// empirical `(E|F|^r)^{1/r}`
    pub lhs: f64,
    pub lhs_se: f64,
    /// `(r-1)^{q/2} (E F²)^{1/2}` with the exact second moment
    pub rhs: f64,
}

impl HypercontractivityReport {
    pub fn holds(&self, k_se: f64) -> bool {
        self.lhs <= self.rhs + k_se * self.lhs_se
    }
}

/// Compare the empirical `r`-th absolute moment of `I_q(f)` with the
/// hypercontractivity bound.
pub fn hypercontractivity_check(f: &SymmetricTensor, r: f64, n_samples: usize, seed: u64) -> Result<HypercontractivityReport> {
    if !(r >= 2.0) {
        return Err(Error::InvalidArgument(format!("moment order must be at least 2, got {r}")));
    }
    let spec = ChaosVectorSpec::new(vec![f.clone()])?;
    let samples = sample_vector(&spec, n_samples, seed)?;
    let abs_r: Vec<f64> = samples.column(0).iter().map(|x| x.abs().powf(r)).collect();
    let m = mean_estimate(&abs_r);
    let lhs = m.value.powf(1.0 / r);
    // delta method for m ↦ m^{1/r}
    let lhs_se = if m.value > 0.0 { m.se * lhs / (r * m.value) } else { 0.0 };
    let rhs = (r - 1.0).powf(f.order() as f64 / 2.0) * crate::algebra::second_moment(f).sqrt();
    Ok(HypercontractivityReport { lhs, lhs_se, rhs })
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and the standard normal law.
pub fn ks_distance(samples: &[f64]) -> f64 {
    let normal = Normal::standard();
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = normal.cdf(x);
            ((i + 1) as f64 / n - c).max(c - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Standard normal draws from a named substream, in batches of
/// [`BATCH_ROWS`] so the result is independent of thread count.
pub fn normal_samples(n: usize, seed: u64, name: &str) -> Vec<f64> {
    use rayon::prelude::*;
    let batches = n.div_ceil(BATCH_ROWS);
    (0..batches)
        .into_par_iter()
        .flat_map_iter(|b| {
            let rows = BATCH_ROWS.min(n - b * BATCH_ROWS);
            let mut rng = substream(seed, name, b as u64);
            draw_isonormal(&mut rng, rows)
        })
        .collect()
}

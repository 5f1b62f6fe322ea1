use chaoslab_core::algebra::identities::random_tensor;
use chaoslab_core::algebra::{c_q, chi2_criteria, chi2_target_moments, fourth_cumulant, stein_bound, SteinKind};
use chaoslab_core::rng::{par_replicates, substream};
use chaoslab_core::sampler::{
    hypercontractivity_check, ks_distance, normal_samples, sample_vector, SampleMatrix, BATCH_ROWS,
};
use chaoslab_core::stats::{cumulant_estimates, mean_estimate, Estimate};
use chaoslab_core::{ChaosVectorSpec, Result, SymmetricTensor};
use rand::Rng;
use rand_distr::Gamma;
use rayon::prelude::*;

use crate::config::Params;
use crate::report::{Metric, Outcome};

/// `f_n(2k-1, 2k) = 1/(2√n)` for `k = 1..n`: `I_2(f_n) = n^{-1/2} Σ_k ξ_{2k-1} ξ_{2k}`.
pub(crate) fn off_diagonal_family(n: usize, offset: u32, dim: usize) -> Result<SymmetricTensor> {
    let c = 0.5 / (n as f64).sqrt();
    let entries = (0..n as u32).map(|k| (vec![offset + 2 * k + 1, offset + 2 * k + 2], c));
    SymmetricTensor::from_entries(2, dim, entries)
}

pub fn fourth_moment(params: &Params, seed: u64) -> Result<Outcome> {
    let sizes = params.ints("n");
    let samples = params.usize("samples");
    let (ks_small, ks_large) = (params.float("ks_small"), params.float("ks_large"));
    let mut o = Outcome::default();
    let mut worst_kappa: f64 = 0.0;
    for &n in &sizes {
        let f = off_diagonal_family(n, 0, 2 * n)?;
        let exact = 6.0 / n as f64;
        let k4 = fourth_cumulant(&f)?;
        if !((k4 - exact).abs() <= worst_kappa) {
            worst_kappa = (k4 - exact).abs();
        }
        let s = sample_vector(&ChaosVectorSpec::new(vec![f])?, samples, seed)?;
        let x = s.column(0);
        let ks = ks_distance(&x);
        let cum = cumulant_estimates(&x);
        o.row(n, 0, "kappa4_exact", k4);
        o.row(n, 0, "kappa4_sample", cum[3].value);
        o.row(n, 0, "ks_distance", ks);
        o.metric(Metric::within_se(format!("kappa4_sample_n{n}"), cum[3], exact, 4.0, 0.0));
    }
    o.metric(Metric::near("kappa4_closed_form", worst_kappa, 0.0, 1e-12));
    if let (Some(&first), Some(&last)) = (sizes.iter().min(), sizes.iter().max()) {
        let ks_at = |n: usize| o.rows.iter().find(|r| r.n == n as u64 && r.stat_name == "ks_distance").map(|r| r.value);
        let (ks_first, ks_last) = (ks_at(first).unwrap_or(f64::NAN), ks_at(last).unwrap_or(f64::NAN));
        o.metric(Metric::below(format!("ks_n{last}"), ks_last, ks_small));
        o.metric(Metric::above(format!("ks_n{first}"), ks_first, ks_large));
    }
    Ok(o)
}

fn stein_specs() -> Result<Vec<(&'static str, ChaosVectorSpec)>> {
    let e = |dim: usize, i: u32| SymmetricTensor::from_entries(1, dim, [(vec![i], 1.0)]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mixed = SymmetricTensor::from_entries(1, 2, [(vec![1], h), (vec![2], h)])?;
    let chi2 = SymmetricTensor::from_entries(2, 2, [(vec![1, 1], 0.5), (vec![2, 2], 0.5)])?;
    Ok(vec![
        ("gaussian_scalar", ChaosVectorSpec::new(vec![e(1, 1)?])?),
        ("gaussian_correlated", ChaosVectorSpec::new(vec![e(2, 1)?, mixed])?),
        ("second_chaos_n16", ChaosVectorSpec::new(vec![off_diagonal_family(16, 0, 32)?])?),
        ("second_chaos_n8_and_gaussian", ChaosVectorSpec::new(vec![off_diagonal_family(8, 0, 17)?, e(17, 17)?])?),
        ("centered_chi2_2", ChaosVectorSpec::new(vec![chi2])?),
    ])
}

fn h_lipschitz(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt().min(1.0)
}

fn h_smooth(x: &[f64]) -> f64 {
    x.iter().map(|v| v.sin()).sum()
}

/// `n` draws of `N(0, Σ)` as rows, `N = L z`.
fn gaussian_reference(sigma: &chaoslab_core::CovarianceMatrix, n: usize, seed: u64, name: &str) -> SampleMatrix {
    let d = sigma.dim();
    let l = sigma.sqrt_factor();
    let z = normal_samples(n * d, seed, name);
    let data: Vec<f64> = z
        .par_chunks(d)
        .flat_map_iter(|zr| (0..d).map(|i| (0..d).map(|j| l[(i, j)] * zr[j]).sum::<f64>()).collect::<Vec<_>>())
        .collect();
    SampleMatrix::from_rows(d, data, seed)
}

fn difference(a: &SampleMatrix, b: &SampleMatrix, h: fn(&[f64]) -> f64) -> Estimate {
    let ea = mean_estimate(&a.rows().map(h).collect::<Vec<_>>());
    let eb = mean_estimate(&b.rows().map(h).collect::<Vec<_>>());
    Estimate { value: ea.value - eb.value, se: ea.se.hypot(eb.se) }
}

pub fn stein_bounds(params: &Params, seed: u64) -> Result<Outcome> {
    let samples = params.usize("samples");
    let mut o = Outcome::default();
    for (k, (name, v)) in stein_specs()?.into_iter().enumerate() {
        let sigma = v.covariance()?;
        let f = sample_vector(&v, samples, seed)?;
        let n = gaussian_reference(&sigma, samples, seed, &format!("stein-reference-{k}"));
        let gaussian = v.orders().iter().all(|&q| q == 1);
        for (label, h, kind) in [
            ("lipschitz", h_lipschitz as fn(&[f64]) -> f64, SteinKind::Lipschitz { lip: 1.0 }),
            ("smooth", h_smooth, SteinKind::C2 { hess: 1.0 }),
        ] {
            let bound = stein_bound(&v, &sigma, kind)?;
            let diff = difference(&f, &n, h);
            o.row(samples, k, &format!("{name}_{label}_bound"), bound);
            o.row(samples, k, &format!("{name}_{label}_diff"), diff.value);
            o.row(samples, k, &format!("{name}_{label}_diff_se"), diff.se);
            let slack = bound - (diff.value.abs() - 3.0 * diff.se);
            o.metric(Metric {
                name: format!("{name}_{label}"),
                value: bound,
                se: Some(diff.se),
                target: Some(diff.value.abs()),
                tol: Some(3.0 * diff.se),
                pass: slack >= 0.0,
            });
            if gaussian {
                o.metric(Metric::near(format!("{name}_{label}_zero"), bound, 0.0, 0.0));
            }
        }
    }
    Ok(o)
}

/// `2·Gamma(ν/2, 1) - ν`, drawn in fixed batches.
fn centered_chi2(nu: f64, n: usize, seed: u64) -> Vec<f64> {
    let gamma = Gamma::new(nu / 2.0, 1.0).expect("positive shape");
    (0..n.div_ceil(BATCH_ROWS))
        .into_par_iter()
        .flat_map_iter(|b| {
            let rows = BATCH_ROWS.min(n - b * BATCH_ROWS);
            let mut rng = substream(seed, &format!("gamma-{nu}"), b as u64);
            (0..rows).map(|_| 2.0 * rng.sample(gamma) - nu).collect::<Vec<_>>()
        })
        .collect()
}

pub fn chi2(params: &Params, seed: u64) -> Result<Outcome> {
    let samples = params.usize("samples");
    let mut o = Outcome::default();
    o.metric(Metric::near("c_2", c_q(2)?, 1.0, 0.0));
    for nu in params.ints("nu") {
        let entries = (1..=nu as u32).map(|i| (vec![i, i], 1.0));
        let f = SymmetricTensor::from_entries(2, nu, entries)?;
        let rep = chi2_criteria(&f, nu as f64)?;
        o.row(nu, 0, "mid_gap", rep.mid_gap);
        o.row(nu, 0, "variance_gap", rep.variance_gap);
        o.metric(Metric::near(format!("mid_gap_nu{nu}"), rep.mid_gap, 0.0, 0.0));
        o.metric(Metric::near(format!("variance_gap_nu{nu}"), rep.variance_gap, 0.0, 0.0));

        let (m2, m43) = chi2_target_moments(nu as f64);
        let x = centered_chi2(nu as f64, samples, seed);
        let e2 = mean_estimate(&x.iter().map(|v| v * v).collect::<Vec<_>>());
        let e43 = mean_estimate(&x.iter().map(|v| v.powi(4) - 12.0 * v.powi(3)).collect::<Vec<_>>());
        o.row(nu, 0, "second_moment", e2.value);
        o.row(nu, 0, "fourth_minus_12_third", e43.value);
        o.metric(Metric::within_se(format!("second_moment_nu{nu}"), e2, m2, 4.0, 0.0));
        o.metric(Metric::within_se(format!("fourth_minus_12_third_nu{nu}"), e43, m43, 4.0, 0.0));
    }
    Ok(o)
}

pub fn hypercontractivity(params: &Params, seed: u64) -> Result<Outcome> {
    let (rs, qs) = (params.floats("r"), params.ints("q"));
    let (tensors, dim, samples) = (params.usize("tensors"), params.usize("dim").max(1), params.usize("samples"));
    let mut o = Outcome::default();
    for &q in &qs {
        let kernels = par_replicates(tensors, seed, &format!("hyper-kernels-{q}"), |_, rng| {
            (random_tensor(rng, q, dim), rng.random::<u64>())
        });
        for &r in &rs {
            let mut worst = f64::NEG_INFINITY;
            let mut holds = true;
            for (i, (f, s)) in kernels.iter().enumerate() {
                let rep = hypercontractivity_check(f, r, samples, *s)?;
                o.row(samples, i, &format!("q{q}_r{r}_lhs"), rep.lhs);
                o.row(samples, i, &format!("q{q}_r{r}_rhs"), rep.rhs);
                holds &= rep.holds(3.0);
                worst = worst.max(rep.lhs / rep.rhs);
            }
            o.metric(Metric::flag(format!("q{q}_r{r}_max_ratio"), worst, holds));
        }
    }
    Ok(o)
}

use chaoslab_core::rng::par_replicates;
use chaoslab_core::stats::{cumulant_estimates, variance_estimate};
use chaoslab_core::timeseries::{
    breuer_major_series, breuer_major_sum, finite_n_variance, hermite_prefix_sums, joint_experiment, rosenblatt_cumulants,
    taqqu_normalizer, CovarianceModel, GaussianPathSampler, JointRegime, SlowlyVarying, FDD_GRID,
};
use chaoslab_core::Result;

use crate::config::Params;
use crate::report::{Metric, Outcome};

/// `S_{q,n}(1)` for `replicates` independent paths.
fn endpoint_sums(model: &CovarianceModel, q: usize, n: usize, replicates: usize, seed: u64, stream: &str) -> Result<Vec<f64>> {
    let sampler = GaussianPathSampler::new(model, n)?;
    Ok(par_replicates(replicates, seed, stream, |_, rng| {
        let path = sampler.sample(rng);
        hermite_prefix_sums(&path, q)[n]
    }))
}

pub fn breuer_major(params: &Params, seed: u64) -> Result<Outcome> {
    let (rho, q) = (params.float("rho"), params.usize("q"));
    let (replicates, n_large) = (params.usize("replicates"), params.usize("n_large"));
    let model = CovarianceModel::geometric(rho)?;
    let mut o = Outcome::default();

    let closed = breuer_major_sum(&model, q)?;
    let (series, terms) = breuer_major_series(&model, q, 1e-14)?;
    let q_fact: f64 = (1..=q).map(|k| k as f64).product();
    o.row(terms, 0, "long_run_variance_closed", q_fact * closed);
    o.row(terms, 0, "long_run_variance_series", q_fact * series);
    o.metric(Metric::near("closed_form_vs_series", q_fact * closed, q_fact * series, params.float("series_tol")));

    for n in params.ints("n") {
        let sums = endpoint_sums(&model, q, n, replicates, seed, &format!("breuer-major-{n}"))?;
        for (i, s) in sums.iter().enumerate() {
            o.row(n, i, "partial_sum_t1", *s);
        }
        let exact = finite_n_variance(&model, q, n);
        let var = variance_estimate(&sums);
        o.row(n, 0, "finite_n_variance", exact);
        o.metric(Metric::within_se(format!("mc_variance_n{n}"), var, exact, 4.0, 0.0));
    }

    let ratio = finite_n_variance(&model, q, n_large) / n_large as f64;
    o.row(n_large, 0, "variance_over_n", ratio);
    o.metric(Metric::near_rel(format!("variance_over_n_{n_large}"), ratio, q_fact * closed, params.float("long_run_rel")));
    Ok(o)
}

pub fn taqqu(params: &Params, seed: u64) -> Result<Outcome> {
    let (d, n, replicates, cells) = (params.float("D"), params.usize("n"), params.usize("replicates"), params.usize("cells"));
    let mut o = Outcome::default();

    // finite-n variance with L ≡ 1, against b_D² and against the 2·b_D² that
    // Var H_2(G) = 2 predicts
    let pure = CovarianceModel::regvar(d, SlowlyVarying::One)?;
    let t = taqqu_normalizer(&pure, n)?;
    let ratio = finite_n_variance(&pure, 2, n) / t.normalizer.powi(2);
    let b2 = t.b_d * t.b_d;
    o.row(n, 0, "variance_ratio", ratio);
    o.row(n, 0, "b_d_squared", b2);
    o.row(n, 0, "near_pole", if t.near_pole { 1.0 } else { 0.0 });
    o.metric(Metric::near_rel("variance_ratio_vs_b_d_squared", ratio, b2, 0.10));
    o.metric(Metric::near_rel("variance_ratio_vs_twice_b_d_squared", ratio, 2.0 * b2, 0.10));

    let fgn = CovarianceModel::fgn(d)?;
    let sd = finite_n_variance(&fgn, 2, n).sqrt();
    let sums = endpoint_sums(&fgn, 2, n, replicates, seed, "taqqu-path")?;
    let z: Vec<f64> = sums.iter().map(|s| s / sd).collect();
    for (i, v) in z.iter().enumerate() {
        o.row(n, i, "standardized_sum_t1", *v);
    }
    let limit = rosenblatt_cumulants(1.0 - d, cells)?;
    let k = cumulant_estimates(&z);
    o.row(n, 0, "limit_kappa3", limit.kappa3);
    o.row(n, 0, "limit_kappa4", limit.kappa4);
    o.metric(Metric::within_se("kappa3", k[2], limit.kappa3, 4.0, limit.grid_tol_kappa3));
    o.metric(Metric::positive("kappa4", k[3], 3.0));
    Ok(o)
}

pub fn joint_limits(params: &Params, seed: u64) -> Result<Outcome> {
    let (d, q, n, replicates) = (params.float("D"), params.usize("q"), params.usize("n"), params.usize("replicates"));
    let model = CovarianceModel::fgn(d)?;
    let rep = joint_experiment(&model, q, n, replicates, seed)?;
    let mut o = Outcome::default();
    for (i, (a, b)) in rep.first.iter().zip(&rep.second).enumerate() {
        for (k, t) in FDD_GRID.iter().enumerate() {
            o.row(n, i, &format!("first_t{t}"), a[k]);
            o.row(n, i, &format!("second_t{t}"), b[k]);
        }
    }
    o.row(n, 0, "first_constant", rep.first_constant);
    o.row(n, 0, "second_constant", rep.second_constant);
    o.row(n, 0, "first_sd", rep.first_sd);
    o.row(n, 0, "second_sd", rep.second_sd);

    o.metric(Metric::below("ks_first", rep.ks_first, 0.05));
    match rep.regime {
        JointRegime::BothGaussian => {
            o.metric(Metric::below("ks_second", rep.ks_second, 0.05));
            o.metric(Metric::within_se("cov_squares", rep.cov_squares, 0.0, 4.0, 0.0));
        }
        JointRegime::GaussianRosenblatt => {
            o.metric(Metric::positive("kappa4_second", rep.cumulants_second[3], 3.0));
            o.metric(Metric::within_se("cross_cov", rep.cross_cov, 0.0, 4.0, 0.0));
        }
    }
    Ok(o)
}

pub fn rosenblatt(params: &Params, _seed: u64) -> Result<Outcome> {
    let (hurst, cells) = (params.float("hurst"), params.usize("cells"));
    let c = rosenblatt_cumulants(hurst, cells)?;
    let mut o = Outcome::default();
    for l in &c.levels {
        o.row(l.cells, 0, "kappa2_grid", l.kappa2);
        o.row(l.cells, 0, "kappa3", l.kappa3);
        o.row(l.cells, 0, "kappa4", l.kappa4);
        o.row(l.cells, 0, "c_h_grid", l.c_h);
    }
    o.row(cells, 0, "c_h", c.c_h);
    // the grid sees only part of the second-order spectrum, never more
    let finest = c.levels.last().map_or(f64::NAN, |l| l.kappa2);
    o.metric(Metric::flag("kappa2_grid_below_one", finest, finest > 0.0 && finest <= 1.0));
    o.metric(Metric::below("kappa3_grid_shift_rel", c.grid_tol_kappa3 / c.kappa3.abs(), 0.01));
    o.metric(Metric::below("kappa4_grid_shift_rel", c.grid_tol_kappa4 / c.kappa4.abs(), 0.01));
    o.metric(Metric::above("kappa3", c.kappa3, 0.0));
    o.metric(Metric::above("kappa4", c.kappa4, 0.0));
    Ok(o)
}

use chaoslab_core::algebra::identities::{multiplication_residual, random_tensor, run_default_identity_suite};
use chaoslab_core::algebra::{block_independence_report, generalized_cs_check, random_gencs_instance, IndependenceFlag};
use chaoslab_core::rng::{par_replicates, substream};
use chaoslab_core::sampler::draw_isonormal;
use chaoslab_core::{contract, contraction_norm_sq_dual, symmetrize, ChaosVectorSpec, Result, SymmetricTensor};
use rand::Rng;

use crate::config::Params;
use crate::report::{Metric, Outcome};

/// `f_1 = ½(-e_11 + e_12 + e_21 + e_22)`, `f_2 = ½(e_11 + e_12 + e_21 - e_22)`.
pub(crate) fn orthogonal_kernel_pair(dim: usize) -> (SymmetricTensor, SymmetricTensor) {
    let f1 = SymmetricTensor::from_entries(2, dim, [(vec![1, 1], -0.5), (vec![1, 2], 0.5), (vec![2, 2], 0.5)]).expect("valid");
    let f2 = SymmetricTensor::from_entries(2, dim, [(vec![1, 1], 0.5), (vec![1, 2], 0.5), (vec![2, 2], -0.5)]).expect("valid");
    (f1, f2)
}

pub fn contraction_counterexample(_: &Params, _seed: u64) -> Result<Outcome> {
    let (f1, f2) = orthogonal_kernel_pair(2);
    let c = contract(&f1, &f2, 1)?;
    let inner = f1.inner(&f2)?;
    let sym = symmetrize(&c).norm();
    let plain = c.norm_sq();
    let dual = contraction_norm_sq_dual(&f1, &f2, 1)?;
    let mut o = Outcome::default();
    for (name, v) in [
        ("inner_product", inner),
        ("symmetrized_contraction_norm", sym),
        ("contraction_norm_sq", plain),
        ("contraction_norm_sq_dual", dual),
    ] {
        o.row(2, 0, name, v);
    }
    o.metric(Metric::near("inner_product", inner, 0.0, 0.0));
    o.metric(Metric::near("symmetrized_contraction_norm", sym, 0.0, 0.0));
    o.metric(Metric::near("contraction_norm_sq", plain, 0.5, 0.0));
    o.metric(Metric::near("contraction_norm_sq_dual", dual, 0.5, 0.0));
    Ok(o)
}

pub fn identities(params: &Params, seed: u64) -> Result<Outcome> {
    let trials = params.usize("trials");
    let mut o = Outcome::default();
    for r in run_default_identity_suite(seed, trials)? {
        o.row(trials, 0, &r.name, r.max_residual);
        o.metric(Metric {
            name: r.name,
            value: r.max_residual,
            se: None,
            target: Some(0.0),
            tol: Some(r.tol),
            pass: r.pass,
        });
    }
    Ok(o)
}

pub fn multiplication_formula(params: &Params, seed: u64) -> Result<Outcome> {
    let (pairs, draws, max_order, dim) =
        (params.usize("pairs"), params.usize("draws"), params.usize("max_order").max(1), params.usize("dim").max(1));
    let mut rng = substream(seed, "multiplication-draws", 0);
    let shared: Vec<Vec<f64>> = (0..draws).map(|_| draw_isonormal(&mut rng, dim)).collect();
    let residuals = par_replicates(pairs, seed, "multiplication-pairs", |_, rng| {
        let p = rng.random_range(1..=max_order);
        let q = rng.random_range(1..=max_order);
        let f = random_tensor(rng, p, dim);
        let g = random_tensor(rng, q, dim);
        multiplication_residual(&f, &g, &shared, &symmetrize)
    });
    let mut o = Outcome::default();
    let mut worst: f64 = 0.0;
    for (i, r) in residuals.into_iter().enumerate() {
        let r = r?;
        o.row(draws, i, "relative_residual", r);
        if !(r <= worst) {
            worst = r;
        }
    }
    o.metric(Metric::near("max_relative_residual", worst, 0.0, 1e-8));
    Ok(o)
}

pub fn block_independence(params: &Params, _seed: u64) -> Result<Outcome> {
    let tol = params.float("tol");
    let dim = 4;
    let (f1, f2) = orthogonal_kernel_pair(dim);
    let h3 = SymmetricTensor::from_entries(2, dim, [(vec![3, 3], 1.0)])?;
    let h4 = SymmetricTensor::from_entries(1, dim, [(vec![4], 1.0)])?;
    let v = ChaosVectorSpec::new(vec![f1, f2, h3, h4])?;
    let blocks: Vec<Vec<usize>> = (0..4).map(|i| vec![i]).collect();
    let report = block_independence_report(&v, &blocks, tol)?;
    let mut o = Outcome::default();
    for r in &report {
        let [i, j] = r.pair;
        let name = format!("pair_{i}_{j}");
        o.row(dim, 0, &format!("{name}_cov_squares"), r.cov_squares);
        let max_contraction = r.contraction_norms.iter().copied().fold(0.0, f64::max);
        o.row(dim, 0, &format!("{name}_max_contraction_norm"), max_contraction);
        // only the two orthogonal kernels share basis directions
        let expect = if (i, j) == (0, 1) { IndependenceFlag::Dependent } else { IndependenceFlag::Independent };
        o.metric(Metric::flag(format!("{name}_flag"), max_contraction.max(r.cov_squares), r.flag == expect));
    }
    Ok(o)
}

pub fn gen_cs(params: &Params, seed: u64) -> Result<Outcome> {
    let (n, vars, atoms) = (params.usize("instances"), params.usize("max_vars"), params.usize("max_atoms"));
    let reports = par_replicates(n, seed, "gencs", |_, rng| {
        let inst = random_gencs_instance(rng, vars.max(2), atoms.max(1));
        generalized_cs_check(&inst, None)
    });
    let mut o = Outcome::default();
    let mut worst = f64::INFINITY;
    for (i, r) in reports.into_iter().enumerate() {
        let r = r?;
        o.row(n, i, "lhs", r.lhs);
        o.row(n, i, "rhs_pair", r.rhs_gencs1);
        o.row(n, i, "rhs_product", r.rhs_gencs);
        worst = worst.min(r.slack());
    }
    if n == 0 {
        worst = 0.0;
    }
    o.metric(Metric::above("min_slack", worst, -1e-12));
    Ok(o)
}

//! Randomized checks of the exact algebraic identities between contractions,
//! symmetrizations and inner products.
//!
//! Every check takes the symmetrization as a parameter so that a deliberately
//! broken implementation can be shown to be caught.

use rand::Rng;
use serde::Serialize;

use super::gencs::{generalized_cs_check, random_gencs_instance};
use super::multiply_with;
use crate::combinat::{binomial, factorial};
use crate::error::Result;
use crate::rng::{par_replicates, StreamRng};
use crate::sampler::{draw_isonormal, evaluate_chaos, evaluate_expansion};
use crate::tensor::{contract, contraction_norm_sq_dual, symmetrize, BipartiteTensor, SymmetricTensor};

pub type SymmetrizeFn = dyn Fn(&BipartiteTensor) -> SymmetricTensor + Sync;

/// Tolerance for the exact identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for pathwise equality of a product and its chaos expansion.
pub const PATHWISE_TOL: f64 = 1e-8;

/// `|a - b| / max(1, |a|, |b|)`
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// A random tensor with 1..=8 sparse entries.
pub fn random_tensor<R: Rng + ?Sized>(rng: &mut R, order: usize, dim: usize) -> SymmetricTensor {
    let nnz = rng.random_range(1..=8);
    SymmetricTensor::random_sparse(rng, order, dim, nnz)
}

/// `‖f ⊗_r g‖²` directly vs. through `<f ⊗_{p-r} f, g ⊗_{q-r} g>`.
pub fn fubini_residual(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<f64> {
    let direct = contract(f, g, r)?.norm_sq();
    let dual = contraction_norm_sq_dual(f, g, r)?;
    Ok((direct - dual).abs() / (1.0 + direct.abs()))
}

/// `‖f ⊗̃ g‖² = p! q! / (p+q)! Σ_r C(p,r) C(q,r) ‖f ⊗_r g‖²`.
pub fn sym_norm_residual(f: &SymmetricTensor, g: &SymmetricTensor, sym: &SymmetrizeFn) -> Result<f64> {
    let (p, q) = (f.order(), g.order());
    let lhs = sym(&contract(f, g, 0)?).norm_sq();
    let mut rhs = 0.0;
    for r in 0..=p.min(q) {
        rhs += binomial(p, r) * binomial(q, r) * contract(f, g, r)?.norm_sq();
    }
    rhs *= factorial(p) * factorial(q) / factorial(p + q);
    Ok(rel_err(lhs, rhs))
}

/// `(2q)! <f1 ⊗̃ f2, f3 ⊗̃ f4> = Σ_{r=1}^{q-1} q!² C(q,r)² <f1 ⊗_r f3, f4 ⊗_r f2>
///  + q!² (<f1,f3><f2,f4> + <f1,f4><f2,f3>)` for kernels of a common order `q`.
pub fn azerty_residual(fs: [&SymmetricTensor; 4], sym: &SymmetrizeFn) -> Result<f64> {
    let [f1, f2, f3, f4] = fs;
    let q = f1.order();
    let lhs = factorial(2 * q) * sym(&contract(f1, f2, 0)?).inner(&sym(&contract(f3, f4, 0)?))?;
    let qf2 = factorial(q).powi(2);
    let mut rhs = qf2 * (f1.inner(f3)? * f2.inner(f4)? + f1.inner(f4)? * f2.inner(f3)?);
    for r in 1..q {
        rhs += qf2 * binomial(q, r).powi(2) * contract(f1, f3, r)?.inner(&contract(f4, f2, r)?)?;
    }
    Ok(rel_err(lhs, rhs))
}

/// For `f` of order `2q` and `g` of order `q`:
/// `<f ⊗̃_q f, g ⊗̃ g> = 2 q!²/(2q)! <f ⊗_q f, g ⊗ g>
///  + q!²/(2q)! Σ_{r=1}^{q-1} C(q,r)² <f ⊗_r g, g ⊗_r f>`,
/// the last inner products pairing slots positionally.
pub fn azertiop_residual(f: &SymmetricTensor, g: &SymmetricTensor, sym: &SymmetrizeFn) -> Result<f64> {
    let q = g.order();
    assert_eq!(f.order(), 2 * q, "f must have twice the order of g");
    let ffq = contract(f, f, q)?;
    let gg = contract(g, g, 0)?;
    let lhs = sym(&ffq).inner(&sym(&gg))?;
    let c = factorial(q).powi(2) / factorial(2 * q);
    let mut rhs = 2.0 * c * ffq.inner(&gg)?;
    for r in 1..q {
        rhs += c * binomial(q, r).powi(2) * contract(f, g, r)?.inner_flat(&contract(g, f, r)?)?;
    }
    Ok(rel_err(lhs, rhs))
}

/// `sym(sym(t)) = sym(t)` with the inner `sym(t)` re-embedded as bipartite
/// with the block sizes of `t`.
pub fn projection_residual(t: &BipartiteTensor, sym: &SymmetrizeFn) -> Result<f64> {
    let once = sym(t);
    let twice = sym(&once.to_bipartite(t.left_order())?);
    Ok(twice.sub(&once)?.norm() / once.norm().max(1.0))
}

/// Largest relative gap over the draws between `I_p(f) I_q(g)` and the
/// evaluation of its chaos expansion. Relative to `max(1, |product|)`.
pub fn multiplication_residual(
    f: &SymmetricTensor,
    g: &SymmetricTensor,
    draws: &[Vec<f64>],
    sym: &SymmetrizeFn,
) -> Result<f64> {
    let expansion = multiply_with(f, g, &|a, b, r| Ok(sym(&contract(a, b, r)?)))?;
    let mut worst: f64 = 0.0;
    for xi in draws {
        let prod = evaluate_chaos(f, xi)? * evaluate_chaos(g, xi)?;
        let expanded = evaluate_expansion(&expansion, xi)?;
        worst = worst.max((prod - expanded).abs() / prod.abs().max(1.0));
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

fn summarize(name: &str, residuals: Vec<Result<f64>>, tol: f64) -> Result<IdentityResult> {
    let trials = residuals.len();
    let mut max_residual: f64 = 0.0;
    for r in residuals {
        let r = r?;
        // NaN must fail, so compare through `!(r <= max)`.
        if !(r <= max_residual) {
            max_residual = r;
        }
    }
    Ok(IdentityResult {
        name: name.to_string(),
        trials,
        max_residual,
        tol,
        pass: max_residual <= tol,
    })
}

fn dims(rng: &mut StreamRng, max_order: usize) -> (usize, usize, usize) {
    (rng.random_range(1..=max_order), rng.random_range(1..=max_order), rng.random_range(1..=6))
}

/// Run every identity check `trials` times from substreams of `seed`.
pub fn run_identity_suite(seed: u64, trials: usize, sym: &SymmetrizeFn) -> Result<Vec<IdentityResult>> {
    let mut out = Vec::new();

    let res = par_replicates(trials, seed, "fubini", |_, rng| {
        let (p, q, d) = dims(rng, 4);
        let (f, g) = (random_tensor(rng, p, d), random_tensor(rng, q, d));
        let r = rng.random_range(0..=p.min(q));
        fubini_residual(&f, &g, r)
    });
    out.push(summarize("contraction-norm-duality", res, IDENTITY_TOL)?);

    let res = par_replicates(trials, seed, "sym-norm", |_, rng| {
        let (p, q, d) = dims(rng, 4);
        sym_norm_residual(&random_tensor(rng, p, d), &random_tensor(rng, q, d), sym)
    });
    out.push(summarize("symmetrized-product-norm", res, IDENTITY_TOL)?);

    let res = par_replicates(trials, seed, "azerty", |_, rng| {
        let q = rng.random_range(1..=3);
        let d = rng.random_range(1..=6);
        let fs: Vec<SymmetricTensor> = (0..4).map(|_| random_tensor(rng, q, d)).collect();
        azerty_residual([&fs[0], &fs[1], &fs[2], &fs[3]], sym)
    });
    out.push(summarize("four-kernel-product-inner", res, IDENTITY_TOL)?);

    let res = par_replicates(trials, seed, "azertiop", |_, rng| {
        let q = rng.random_range(1..=2);
        let d = rng.random_range(1..=6);
        azertiop_residual(&random_tensor(rng, 2 * q, d), &random_tensor(rng, q, d), sym)
    });
    out.push(summarize("half-contraction-inner", res, IDENTITY_TOL)?);

    let res = par_replicates(trials, seed, "projection", |_, rng| {
        let (p, q, d) = dims(rng, 4);
        let r = rng.random_range(0..=p.min(q));
        let t = contract(&random_tensor(rng, p, d), &random_tensor(rng, q, d), r)?;
        projection_residual(&t, sym)
    });
    out.push(summarize("symmetrization-projection", res, IDENTITY_TOL)?);

    let res = par_replicates(trials, seed, "multiplication", |_, rng| {
        let (p, q, d) = dims(rng, 4);
        let (f, g) = (random_tensor(rng, p, d), random_tensor(rng, q, d));
        let draws: Vec<Vec<f64>> = (0..20).map(|_| draw_isonormal(rng, d)).collect();
        multiplication_residual(&f, &g, &draws, sym)
    });
    out.push(summarize("multiplication-pathwise", res, PATHWISE_TOL)?);

    let res = par_replicates(trials, seed, "gencs", |_, rng| {
        let inst = random_gencs_instance(rng, 6, 5);
        // a violation shows up as negative slack
        generalized_cs_check(&inst, None).map(|r| (-r.slack()).max(0.0))
    });
    out.push(summarize("generalized-cauchy-schwarz", res, 1e-12)?);

    Ok(out)
}

/// [`run_identity_suite`] with the crate's own symmetrization.
pub fn run_default_identity_suite(seed: u64, trials: usize) -> Result<Vec<IdentityResult>> {
    run_identity_suite(seed, trials, &symmetrize)
}

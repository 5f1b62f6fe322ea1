use std::collections::BTreeMap;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::{eval_terms, ChaosForm, InnovationLaw};
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sampler::BATCH_ROWS;
use crate::stats::{mean, pairwise_sum, sample_variance, Estimate};

/// Largest support for exact enumeration over sign patterns.
pub const MAX_ENUMERATION_DIM: usize = 24;
const ENUM_CHUNK: u64 = 1 << 12;

/// How `E[Q_1^M Q_2^N] − E[Q_1^M] E[Q_2^N]` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMode {
    /// Exact sum over all `2^d` sign patterns (Rademacher only).
    Enumerate,
    /// Exact expansion into monomials, integrated with the law's moments.
    Expand,
    /// Monte Carlo with a delta-method standard error.
    Sample { n: usize, seed: u64 },
}

fn check_pair(a1: &ChaosForm, a2: &ChaosForm, m: u32, n: u32) -> Result<()> {
    if a1.dim() != a2.dim() {
        return Err(Error::DimensionMismatch(a1.dim(), a2.dim()));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("moment exponents must be at least 1".into()));
    }
    Ok(())
}

/// The moment-independence gap `E[Q_1^M Q_2^N] − E[Q_1^M] E[Q_2^N]`.
/// Exact modes return a zero standard error.
pub fn moment_gap(a1: &ChaosForm, a2: &ChaosForm, m: u32, n: u32, law: &InnovationLaw, mode: GapMode) -> Result<Estimate> {
    check_pair(a1, a2, m, n)?;
    match mode {
        GapMode::Enumerate => enumerate_gap(a1, a2, m, n, law),
        GapMode::Expand => expand_gap(a1, a2, m, n, law),
        GapMode::Sample { n: draws, seed } => {
            let [pairs] = sample_powers(a1, a2, m, n, &[law.clone()], draws, seed)?;
            Ok(gap_estimate(&pairs).0)
        }
    }
}

fn enumerate_gap(a1: &ChaosForm, a2: &ChaosForm, m: u32, n: u32, law: &InnovationLaw) -> Result<Estimate> {
    if *law != InnovationLaw::Rademacher {
        return Err(Error::InvalidArgument("enumeration needs Rademacher innovations".into()));
    }
    let d = a1.dim();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!(
            "enumerating 2^{d} sign patterns (limit 2^{MAX_ENUMERATION_DIM})"
        )));
    }
    let (t1, t2) = (a1.weighted_terms(), a2.weighted_terms());
    let total = 1u64 << d;
    let chunks = total.div_ceil(ENUM_CHUNK);
    let partial: Vec<[f64; 3]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut x = vec![0.0; d];
            let mut acc = [0.0; 3];
            for bits in c * ENUM_CHUNK..((c + 1) * ENUM_CHUNK).min(total) {
                for (k, xk) in x.iter_mut().enumerate() {
                    *xk = if bits >> k & 1 == 1 { 1.0 } else { -1.0 };
                }
                let a = eval_terms(&t1, &x).powi(m as i32);
                let b = eval_terms(&t2, &x).powi(n as i32);
                acc[0] += a * b;
                acc[1] += a;
                acc[2] += b;
            }
            acc
        })
        .collect();
    let col = |k: usize| pairwise_sum(&partial.iter().map(|p| p[k]).collect::<Vec<_>>()) / total as f64;
    Ok(Estimate {
        value: col(0) - col(1) * col(2),
        se: 0.0,
    })
}

/// Sparse polynomial: sorted `(variable, exponent)` lists to coefficients.
type Poly = BTreeMap<Vec<(usize, u32)>, f64>;

fn form_poly(a: &ChaosForm) -> Poly {
    a.weighted_terms()
        .into_iter()
        .map(|(idx, w)| (idx.into_iter().map(|i| (i, 1)).collect(), w))
        .collect()
}

fn mul_monomials(x: &[(usize, u32)], y: &[(usize, u32)]) -> Vec<(usize, u32)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push(y[j]);
            j += 1;
        } else {
            out.push((x[i].0, x[i].1 + y[j].1));
            i += 1;
            j += 1;
        }
    }
    out
}

fn mul_poly(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for (mx, cx) in p {
        for (my, cy) in q {
            *out.entry(mul_monomials(mx, my)).or_insert(0.0) += cx * cy;
        }
    }
    out
}

fn pow_poly(p: &Poly, k: u32) -> Poly {
    let mut out = Poly::from([(Vec::new(), 1.0)]);
    for _ in 0..k {
        out = mul_poly(&out, p);
    }
    out
}

fn expectation(p: &Poly, law: &InnovationLaw) -> Result<f64> {
    let mut terms = Vec::with_capacity(p.len());
    for (mono, c) in p {
        let mut v = *c;
        for &(_, e) in mono {
            v *= law.moment(e as usize)?;
        }
        terms.push(v);
    }
    Ok(pairwise_sum(&terms))
}

const MAX_EXPANSION_TERMS: usize = 2_000_000;

fn expand_gap(a1: &ChaosForm, a2: &ChaosForm, m: u32, n: u32, law: &InnovationLaw) -> Result<Estimate> {
    let needed = a1.order() * m as usize + a2.order() * n as usize;
    if let InnovationLaw::Moments(list) = law {
        if list.len() < needed {
            return Err(Error::MissingMoment((list.len() + 1..=needed).collect()));
        }
    }
    let guess = (a1.tensor().nnz() as f64).powi(m as i32) * (a2.tensor().nnz() as f64).powi(n as i32);
    if guess > MAX_EXPANSION_TERMS as f64 {
        return Err(Error::TooLarge(format!("expansion with up to {guess:e} monomials")));
    }
    let p1 = pow_poly(&form_poly(a1), m);
    let p2 = pow_poly(&form_poly(a2), n);
    let joint = expectation(&mul_poly(&p1, &p2), law)?;
    Ok(Estimate {
        value: joint - expectation(&p1, law)? * expectation(&p2, law)?,
        se: 0.0,
    })
}

/// Per-draw `(Q_1^M, Q_2^N)` for each law, all driven by the same Gaussian
/// draws: Rademacher innovations are the signs of those draws.
fn sample_powers<const L: usize>(
    a1: &ChaosForm,
    a2: &ChaosForm,
    m: u32,
    n: u32,
    laws: &[InnovationLaw; L],
    draws: usize,
    seed: u64,
) -> Result<[Vec<(f64, f64)>; L]> {
    if draws < 2 {
        return Err(Error::InvalidArgument("need at least 2 draws".into()));
    }
    if let Some(law) = laws.iter().find(|l| matches!(l, InnovationLaw::Moments(_))) {
        return Err(Error::InvalidArgument(format!("cannot sample from {law:?}; use an exact mode")));
    }
    let d = a1.dim();
    let (t1, t2) = (a1.weighted_terms(), a2.weighted_terms());
    let batches = draws.div_ceil(BATCH_ROWS);
    let per_batch: Vec<[Vec<(f64, f64)>; L]> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = substream(seed, "innovations", b as u64);
            let rows = BATCH_ROWS.min(draws - b * BATCH_ROWS);
            let mut out: [Vec<(f64, f64)>; L] = std::array::from_fn(|_| Vec::with_capacity(rows));
            let mut g = vec![0.0; d];
            let mut x = vec![0.0; d];
            for _ in 0..rows {
                g.iter_mut().for_each(|v| *v = StandardNormal.sample(&mut rng));
                for (law, col) in laws.iter().zip(out.iter_mut()) {
                    let z = match law {
                        InnovationLaw::Gaussian => &g,
                        _ => {
                            for (xi, gi) in x.iter_mut().zip(&g) {
                                *xi = if *gi >= 0.0 { 1.0 } else { -1.0 };
                            }
                            &x
                        }
                    };
                    col.push((eval_terms(&t1, z).powi(m as i32), eval_terms(&t2, z).powi(n as i32)));
                }
            }
            out
        })
        .collect();
    let mut out: [Vec<(f64, f64)>; L] = std::array::from_fn(|_| Vec::with_capacity(draws));
    for batch in per_batch {
        for (dst, src) in out.iter_mut().zip(batch) {
            dst.extend(src);
        }
    }
    Ok(out)
}

/// Gap estimate and its per-draw influence values.
fn gap_estimate(pairs: &[(f64, f64)]) -> (Estimate, Vec<f64>) {
    let ab: Vec<f64> = pairs.iter().map(|(a, b)| a * b).collect();
    let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (mab, ma, mb) = (mean(&ab), mean(&a), mean(&b));
    let psi: Vec<f64> = pairs.iter().map(|(x, y)| x * y - mb * x - ma * y).collect();
    let se = (sample_variance(&psi) / pairs.len() as f64).sqrt();
    (Estimate { value: mab - ma * mb, se }, psi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LindebergReport {
    /// Gap under the innovation law.
    pub gap_x: Estimate,
    /// Gap under Gaussian innovations.
    pub gap_g: Estimate,
    /// `gap_x − gap_g`, with a standard error from the coupled draws.
    pub delta: Estimate,
}

/// Compare the moment gap under `law` with the Gaussian one, using the
/// same draws for both (Rademacher innovations are signs of the Gaussians).
pub fn lindeberg_gap(
    a1: &ChaosForm,
    a2: &ChaosForm,
    m: u32,
    n: u32,
    law: &InnovationLaw,
    n_samples: usize,
    seed: u64,
) -> Result<LindebergReport> {
    check_pair(a1, a2, m, n)?;
    let [px, pg] = sample_powers(a1, a2, m, n, &[law.clone(), InnovationLaw::Gaussian], n_samples, seed)?;
    let (gap_x, psi_x) = gap_estimate(&px);
    let (gap_g, psi_g) = gap_estimate(&pg);
    let diff: Vec<f64> = psi_x.iter().zip(&psi_g).map(|(x, g)| x - g).collect();
    let delta = Estimate {
        value: gap_x.value - gap_g.value,
        se: (sample_variance(&diff) / n_samples as f64).sqrt(),
    };
    Ok(LindebergReport { gap_x, gap_g, delta })
}

#[cfg(test)]
mod tests {
    use super::super::{alternating_off_diagonal, counterexample_pair, uniform_off_diagonal};
    use super::*;

    #[test]
    fn counterexample_gap_is_minus_quarter() {
        let (a1, a2) = counterexample_pair();
        let law = InnovationLaw::Rademacher;
        assert_eq!(moment_gap(&a1, &a2, 2, 2, &law, GapMode::Enumerate).unwrap().value, -0.25);
        assert_eq!(moment_gap(&a1, &a2, 2, 2, &law, GapMode::Expand).unwrap().value, -0.25);
        // Under Gaussian innovations G2 + G3 and G2 - G3 are independent, so
        // the two forms are independent and the gap closes.
        let g = moment_gap(&a1, &a2, 2, 2, &InnovationLaw::Gaussian, GapMode::Expand).unwrap();
        assert!(g.value.abs() < 1e-15);
    }

    #[test]
    fn cross_second_moment() {
        let a = uniform_off_diagonal(5).unwrap();
        let b = alternating_off_diagonal(5).unwrap();
        // M = N = 1: gap = E[Q1 Q2] = 2 <a, b>
        let expect = 2.0 * a.tensor().inner(b.tensor()).unwrap();
        for mode in [GapMode::Enumerate, GapMode::Expand] {
            let v = moment_gap(&a, &b, 1, 1, &InnovationLaw::Rademacher, mode).unwrap().value;
            assert!((v - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn disjoint_forms_are_independent() {
        let a = ChaosForm::from_entries(2, 4, [(vec![1, 2], 1.0)]).unwrap();
        let b = ChaosForm::from_entries(2, 4, [(vec![3, 4], 1.0)]).unwrap();
        let v = moment_gap(&a, &b, 2, 3, &InnovationLaw::Rademacher, GapMode::Enumerate).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn sampling_agrees_with_enumeration() {
        let (a1, a2) = counterexample_pair();
        let est = moment_gap(&a1, &a2, 2, 2, &InnovationLaw::Rademacher, GapMode::Sample { n: 20_000, seed: 3 }).unwrap();
        assert!(est.within(-0.25, 4.0), "{est:?}");
    }

    #[test]
    fn gaussian_law_has_zero_delta() {
        let (a1, a2) = counterexample_pair();
        let r = lindeberg_gap(&a1, &a2, 2, 2, &InnovationLaw::Gaussian, 2_000, 5).unwrap();
        assert_eq!(r.delta.value, 0.0);
        assert_eq!(r.gap_x, r.gap_g);
    }

    #[test]
    fn mode_errors() {
        let (a1, a2) = counterexample_pair();
        assert!(moment_gap(&a1, &a2, 2, 2, &InnovationLaw::Gaussian, GapMode::Enumerate).is_err());
        let big = uniform_off_diagonal(25).unwrap();
        assert!(matches!(
            moment_gap(&big, &big, 1, 1, &InnovationLaw::Rademacher, GapMode::Enumerate),
            Err(Error::TooLarge(_))
        ));
        let short = InnovationLaw::moments(vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(moment_gap(&a1, &a2, 2, 2, &short, GapMode::Expand), Err(Error::MissingMoment(_))));
        assert!(lindeberg_gap(&a1, &a2, 2, 2, &short, 100, 1).is_err());
    }
}

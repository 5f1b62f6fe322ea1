//! Closed-form analytics on Wiener chaos elements.

mod covariance;
mod gencs;
pub mod identities;
mod moments;
mod report;

use std::collections::BTreeMap;

use crate::combinat::{binomial, factorial};
use crate::error::{Error, Result};
use crate::tensor::{symmetrized_contraction, SymmetricTensor};

pub use covariance::{
    chaos_fourth_norm, fourth_moment_excess, gaussian_fourth_norm, stein_bound, ChaosVectorSpec, CovarianceMatrix,
    SteinKind,
};
pub use gencs::{generalized_cs_check, random_gencs_instance, GenCsInstance, GenCsReport};
pub use moments::{
    c_q, chi2_criteria, chi2_target_moments, contraction_norms, cov_squares, cov_squares_lower_bound, fourth_cumulant,
    ustunel_zakai_gap, Chi2Report,
};
pub use report::{block_independence_report, IndependenceFlag, PairReport};

/// A finite chaos decomposition `Σ_q I_q(f_q)` with at most one kernel per
/// order. The order-0 kernel is the mean.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosExpansion {
    dim: usize,
    terms: BTreeMap<usize, SymmetricTensor>,
}

impl ChaosExpansion {
    pub fn new(dim: usize) -> Self {
        ChaosExpansion {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// A single chaos term `I_q(f)`.
    pub fn single(f: SymmetricTensor) -> Self {
        let mut e = Self::new(f.dim());
        e.terms.insert(f.order(), f);
        e
    }

    /// Add `f` to the kernel of its order.
    pub fn add_term(&mut self, f: SymmetricTensor) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, f.dim()));
        }
        let q = f.order();
        let merged = match self.terms.remove(&q) {
            Some(old) => old.add(&f)?,
            None => f,
        };
        self.terms.insert(q, merged);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Kernels in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = &SymmetricTensor> + '_ {
        self.terms.values()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.keys().copied().collect()
    }

    pub fn term(&self, q: usize) -> Option<&SymmetricTensor> {
        self.terms.get(&q)
    }

    /// `E[F] = f_0`.
    pub fn mean(&self) -> f64 {
        self.terms.get(&0).and_then(|t| t.scalar()).unwrap_or(0.0)
    }

    /// `E[F²] = Σ_q q! ‖f_q‖²`.
    pub fn second_moment(&self) -> f64 {
        self.terms.values().map(second_moment).sum()
    }
}

/// `E[I_q(f)²] = q! ‖f‖²`; for order 0 this is the square of the constant.
pub fn second_moment(f: &SymmetricTensor) -> f64 {
    factorial(f.order()) * f.norm_sq()
}

/// The product `I_p(f) I_q(g)` expanded in chaoses:
/// `Σ_r r! C(p,r) C(q,r) I_{p+q-2r}(f ⊗̃_r g)`.
pub fn multiply(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<ChaosExpansion> {
    multiply_with(f, g, &|f, g, r| symmetrized_contraction(f, g, r))
}

/// [`multiply`] with a caller-supplied symmetrized contraction. Used by the
/// identity suite to check that a faulty symmetrization is detected.
pub fn multiply_with(
    f: &SymmetricTensor,
    g: &SymmetricTensor,
    sym_contract: &dyn Fn(&SymmetricTensor, &SymmetricTensor, usize) -> Result<SymmetricTensor>,
) -> Result<ChaosExpansion> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    let (p, q) = (f.order(), g.order());
    let mut out = ChaosExpansion::new(f.dim());
    for r in 0..=p.min(q) {
        let w = factorial(r) * binomial(p, r) * binomial(q, r);
        out.add_term(sym_contract(f, g, r)?.scale(w))?;
    }
    Ok(out)
}

/// Product of two full expansions, term by term.
pub fn multiply_expansions(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    let mut out = ChaosExpansion::new(a.dim);
    for f in a.terms() {
        for g in b.terms() {
            for t in multiply(f, g)?.terms.into_values() {
                out.add_term(t)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_square_identity() {
        let e1 = SymmetricTensor::basis(2, 1).unwrap();
        let prod = multiply(&e1, &e1).unwrap();
        assert_eq!(prod.orders(), vec![0, 2]);
        assert_eq!(prod.mean(), 1.0);
        assert_eq!(prod.term(2).unwrap().get(&[1, 1]), 1.0);
    }

    #[test]
    fn orthogonal_product_has_no_constant() {
        let e1 = SymmetricTensor::basis(2, 1).unwrap();
        let e2 = SymmetricTensor::basis(2, 2).unwrap();
        let prod = multiply(&e1, &e2).unwrap();
        assert_eq!(prod.mean(), 0.0);
        assert_eq!(prod.term(2).unwrap().get(&[1, 2]), 0.5);
        // E[(ξ1 ξ2)²] = 1
        assert!((prod.second_moment() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn second_moments() {
        assert_eq!(second_moment(&SymmetricTensor::basis(3, 2).unwrap()), 1.0);
        let f = SymmetricTensor::from_entries(2, 2, [(vec![1, 1], 0.5), (vec![2, 2], 0.5)]).unwrap();
        assert_eq!(second_moment(&f), 1.0);
        assert_eq!(second_moment(&SymmetricTensor::constant(2, -3.0)), 9.0);
    }
}

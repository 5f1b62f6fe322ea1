//! Homogeneous multilinear forms `Q(X) = Σ a(i_1..i_q) X_{i_1}···X_{i_q}`
//! over i.i.d. innovations with coefficients vanishing on diagonals.

mod gap;

pub use gap::{lindeberg_gap, moment_gap, GapMode, LindebergReport, MAX_ENUMERATION_DIM};

use crate::combinat::factorial;
use crate::error::{Error, Result};
use crate::tensor::{contract, SymmetricTensor};

/// A symmetric coefficient array that vanishes whenever two indices agree.
/// Stored as the symmetric tensor of its values, keyed by strictly
/// increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosForm {
    tensor: SymmetricTensor,
}

impl ChaosForm {
    /// Entries are given at any one permutation of their indices. Entries
    /// with a repeated index are rejected.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        Self::from_tensor(SymmetricTensor::from_entries(order, dim, entries)?)
    }

    pub fn from_tensor(tensor: SymmetricTensor) -> Result<Self> {
        if tensor.order() == 0 {
            return Err(Error::InvalidArgument("a chaos form needs order at least 1".into()));
        }
        if let Some((m, _)) = tensor.iter().find(|(m, _)| !m.is_distinct()) {
            return Err(Error::InvalidArgument(format!(
                "coefficient at {:?} has a repeated index",
                m.as_slice()
            )));
        }
        Ok(ChaosForm { tensor })
    }

    pub fn order(&self) -> usize {
        self.tensor.order()
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn tensor(&self) -> &SymmetricTensor {
        &self.tensor
    }

    /// `E[Q(X)²] = q! Σ_{ordered} a²` for any mean-zero, unit-variance law.
    pub fn variance(&self) -> f64 {
        factorial(self.order()) * self.tensor.norm_sq()
    }

    /// Fails unless the variance is 1 within `1e-10`.
    pub fn check_unit_variance(&self) -> Result<()> {
        let v = self.variance();
        if (v - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!("form variance is {v}, not 1")));
        }
        Ok(())
    }

    /// Sorted-key terms with 0-based indices and weight `q!·a`.
    pub(crate) fn weighted_terms(&self) -> Vec<(Vec<usize>, f64)> {
        let w = factorial(self.order());
        self.tensor
            .iter()
            .map(|(m, v)| (m.as_slice().iter().map(|&i| i as usize - 1).collect(), w * v))
            .collect()
    }
}

/// Innovation distribution, standardized to mean 0 and variance 1.
#[derive(Clone, Debug, PartialEq)]
pub enum InnovationLaw {
    Rademacher,
    Gaussian,
    /// Raw moments `E X^1, E X^2, ..` of a user-specified law.
    Moments(Vec<f64>),
}

impl InnovationLaw {
    pub fn moments(list: Vec<f64>) -> Result<Self> {
        if list.len() < 2 || list[0].abs() > 1e-12 || (list[1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(
                "an innovation law needs E X = 0 and E X² = 1".into(),
            ));
        }
        Ok(InnovationLaw::Moments(list))
    }

    /// `E X^k`.
    pub fn moment(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        Ok(match self {
            InnovationLaw::Rademacher => {
                if k % 2 == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            InnovationLaw::Gaussian => {
                if k % 2 == 0 {
                    (1..k).step_by(2).map(|j| j as f64).product()
                } else {
                    0.0
                }
            }
            InnovationLaw::Moments(list) => *list.get(k - 1).ok_or_else(|| Error::MissingMoment(vec![k]))?,
        })
    }
}

/// `Q(x) = q! Σ_{i_1<..<i_q} a(i) x_{i_1}···x_{i_q}`.
pub fn evaluate_form(a: &ChaosForm, x: &[f64]) -> Result<f64> {
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch(a.dim(), x.len()));
    }
    Ok(eval_terms(&a.weighted_terms(), x))
}

pub(crate) fn eval_terms(terms: &[(Vec<usize>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(idx, w)| w * idx.iter().map(|&i| x[i]).product::<f64>())
        .sum()
}

/// `Σ_{i_2..i_q} a(i, i_2..i_q)²` over ordered tails (`i` is 1-based).
pub fn influence(a: &ChaosForm, i: u32) -> Result<f64> {
    if i == 0 || i as usize > a.dim() {
        return Err(Error::IndexOutOfRange { index: i, dim: a.dim() });
    }
    let tails = factorial(a.order() - 1);
    Ok(tails * a.tensor.iter().filter(|(m, _)| m.contains(i)).map(|(_, v)| v * v).sum::<f64>())
}

/// Largest influence over all coordinates.
pub fn max_influence(a: &ChaosForm) -> f64 {
    let mut per = vec![0.0; a.dim()];
    for (m, v) in a.tensor.iter() {
        for &i in m.as_slice() {
            per[i as usize - 1] += v * v;
        }
    }
    factorial(a.order() - 1) * per.into_iter().fold(0.0, f64::max)
}

/// `[Σ_{i,j} (Σ_l a_1(l, i) a_2(l, j))²]^{1/2}` with `r` contracted slots.
pub fn mixed_contraction_norm(a1: &ChaosForm, a2: &ChaosForm, r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidArgument("contraction order must be at least 1".into()));
    }
    Ok(contract(&a1.tensor, &a2.tensor, r)?.norm())
}

/// `a_1 = ¼(1_{12} + 1_{13})`, `a_2 = ¼(1_{24} − 1_{34})` on four symbols:
/// `Q_1 = ½X_1(X_2+X_3)` and `Q_2 = ½X_4(X_2−X_3)`. Under Rademacher
/// innovations `Q_1 Q_2 ≡ 0`.
pub fn counterexample_pair() -> (ChaosForm, ChaosForm) {
    let a1 = ChaosForm::from_entries(2, 4, [(vec![1, 2], 0.25), (vec![1, 3], 0.25)]).expect("valid form");
    let a2 = ChaosForm::from_entries(2, 4, [(vec![2, 4], 0.25), (vec![3, 4], -0.25)]).expect("valid form");
    (a1, a2)
}

/// `a(i, j) = c` for all `i ≠ j` on `d` symbols, with `c` giving unit variance.
pub fn uniform_off_diagonal(d: usize) -> Result<ChaosForm> {
    signed_off_diagonal(d, |_| 1.0)
}

/// `a(i, j) = c ε_i ε_j` with `ε_i = (-1)^i`, unit variance. Paired with
/// [`uniform_off_diagonal`] this gives a family where both the influences
/// and all mixed contractions vanish as `d` grows.
pub fn alternating_off_diagonal(d: usize) -> Result<ChaosForm> {
    signed_off_diagonal(d, |i| if i % 2 == 0 { 1.0 } else { -1.0 })
}

fn signed_off_diagonal(d: usize, eps: impl Fn(u32) -> f64) -> Result<ChaosForm> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 symbols, got {d}")));
    }
    let c = (1.0 / (2.0 * (d * (d - 1)) as f64)).sqrt();
    let d32 = d as u32;
    let entries = (1..=d32).flat_map(|i| (i + 1..=d32).map(move |j| (i, j)));
    ChaosForm::from_entries(2, d, entries.map(|(i, j)| (vec![i, j], c * eps(i) * eps(j))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_diagonal_entries() {
        assert!(ChaosForm::from_entries(2, 3, [(vec![2, 2], 1.0)]).is_err());
        assert!(ChaosForm::from_entries(2, 3, [(vec![1, 2], 1.0)]).is_ok());
    }

    #[test]
    fn counterexample_values() {
        let (a1, a2) = counterexample_pair();
        assert_eq!(evaluate_form(&a1, &[1.0; 4]).unwrap(), 1.0);
        assert_eq!(influence(&a1, 1).unwrap(), 0.125);
        assert_eq!(max_influence(&a1), 0.125);
        assert_eq!(max_influence(&a2), 0.125);
        assert_eq!(mixed_contraction_norm(&a1, &a2, 1).unwrap(), 0.0);
        assert_eq!(mixed_contraction_norm(&a1, &a2, 2).unwrap(), 0.0);
        assert_eq!(a1.variance(), 0.5);
        assert!(a1.check_unit_variance().is_err());
        // Q1 Q2 vanishes on every sign pattern
        for bits in 0..16u32 {
            let x: Vec<f64> = (0..4).map(|k| if bits >> k & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let p = evaluate_form(&a1, &x).unwrap() * evaluate_form(&a2, &x).unwrap();
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn single_entry_forms() {
        let a = ChaosForm::from_entries(2, 3, [(vec![1, 2], 0.5)]).unwrap();
        assert_eq!(influence(&a, 1).unwrap(), 0.25);
        assert_eq!(influence(&a, 2).unwrap(), 0.25);
        assert_eq!(influence(&a, 3).unwrap(), 0.0);
        assert_eq!(mixed_contraction_norm(&a, &a, 2).unwrap(), 0.5);
        assert!(influence(&a, 4).is_err());
    }

    #[test]
    fn uniform_family() {
        for d in [3usize, 10, 25] {
            let a = uniform_off_diagonal(d).unwrap();
            a.check_unit_variance().unwrap();
            let c2 = 1.0 / (2.0 * (d * (d - 1)) as f64);
            assert!((max_influence(&a) - (d - 1) as f64 * c2).abs() < 1e-15);
            alternating_off_diagonal(d).unwrap().check_unit_variance().unwrap();
        }
    }

    #[test]
    fn law_moments() {
        assert_eq!(InnovationLaw::Gaussian.moment(6).unwrap(), 15.0);
        assert_eq!(InnovationLaw::Rademacher.moment(3).unwrap(), 0.0);
        let law = InnovationLaw::moments(vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(law.moment(4), Err(Error::MissingMoment(_))));
        assert!(InnovationLaw::moments(vec![0.1, 1.0]).is_err());
    }
}

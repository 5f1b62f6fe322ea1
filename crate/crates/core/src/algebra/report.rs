use rayon::prelude::*;
use serde::Serialize;

use super::covariance::ChaosVectorSpec;
use super::moments::{contraction_norms, cov_squares};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndependenceFlag {
    Independent,
    Dependent,
}

/// Diagnostics for one cross-block pair of components.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub pair: [usize; 2],
    pub cov_squares: f64,
    /// `‖f_i ⊗_r f_j‖` for `r = 1..=q_i∧q_j`
    pub contraction_norms: Vec<f64>,
    pub flag: IndependenceFlag,
}

/// Check every pair of components lying in different blocks. A pair is
/// flagged independent when its covariance of squares and all contraction
/// norms are at most `tol`. `blocks` must partition the component indices.
pub fn block_independence_report(v: &ChaosVectorSpec, blocks: &[Vec<usize>], tol: f64) -> Result<Vec<PairReport>> {
    let n = v.len();
    let mut owner = vec![usize::MAX; n];
    for (b, block) in blocks.iter().enumerate() {
        for &i in block {
            if i >= n {
                return Err(Error::InvalidArgument(format!("component {i} out of range (len {n})")));
            }
            if owner[i] != usize::MAX {
                return Err(Error::InvalidArgument(format!("component {i} appears in two blocks")));
            }
            owner[i] = b;
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidArgument(format!("component {i} is in no block")));
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| owner[i] != owner[j])
        .collect();
    let c = v.components();
    pairs
        .par_iter()
        .map(|&(i, j)| {
            let cov = cov_squares(&c[i], &c[j])?;
            let norms = contraction_norms(&c[i], &c[j])?;
            let independent = cov <= tol && norms.iter().all(|&x| x <= tol);
            Ok(PairReport {
                pair: [i, j],
                cov_squares: cov,
                contraction_norms: norms,
                flag: if independent {
                    IndependenceFlag::Independent
                } else {
                    IndependenceFlag::Dependent
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SymmetricTensor;

    #[test]
    fn orthogonal_blocks_are_independent() {
        let v = ChaosVectorSpec::new(vec![
            SymmetricTensor::from_entries(2, 4, [(vec![1, 2], 1.0)]).unwrap(),
            SymmetricTensor::from_entries(1, 4, [(vec![3], 1.0)]).unwrap(),
            SymmetricTensor::from_entries(2, 4, [(vec![4, 4], 1.0)]).unwrap(),
        ])
        .unwrap();
        let rep = block_independence_report(&v, &[vec![0], vec![1, 2]], 1e-8).unwrap();
        assert_eq!(rep.len(), 2);
        assert!(rep.iter().all(|r| r.flag == IndependenceFlag::Independent));
        assert!(rep.iter().all(|r| r.cov_squares == 0.0));
    }

    #[test]
    fn json_field_names() {
        let v = ChaosVectorSpec::new(vec![SymmetricTensor::basis(1, 1).unwrap(), SymmetricTensor::basis(1, 1).unwrap()])
            .unwrap();
        let rep = block_independence_report(&v, &[vec![0], vec![1]], 1e-8).unwrap();
        let json = serde_json::to_string(&rep[0]).unwrap();
        assert_eq!(
            json,
            r#"{"pair":[0,1],"cov_squares":2.0,"contraction_norms":[1.0],"flag":"dependent"}"#
        );
    }

    #[test]
    fn bad_partitions() {
        let v = ChaosVectorSpec::new(vec![SymmetricTensor::basis(1, 1).unwrap(); 2]).unwrap();
        assert!(block_independence_report(&v, &[vec![0]], 1e-8).is_err());
        assert!(block_independence_report(&v, &[vec![0, 1], vec![1]], 1e-8).is_err());
    }
}

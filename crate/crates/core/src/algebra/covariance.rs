use nalgebra::{DMatrix, DVector};

use super::moments::{cov_squares, cov_squares_excess};
use super::second_moment;
use crate::combinat::factorial;
use crate::error::{Error, Result};
use crate::tensor::SymmetricTensor;

/// Radicands down to this value are treated as roundoff and clamped to 0.
pub const RADICAND_FLOOR: f64 = -1e-10;

const PSD_TOL: f64 = 1e-10;

/// The vector `(I_{q_1}(f_1), .., I_{q_m}(f_m))` over a shared basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaosVectorSpec {
    dim: usize,
    components: Vec<SymmetricTensor>,
}

impl ChaosVectorSpec {
    pub fn new(components: Vec<SymmetricTensor>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("a chaos vector needs at least one component".into()))?;
        let dim = first.dim();
        for c in &components {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch(dim, c.dim()));
            }
            if c.order() == 0 {
                return Err(Error::InvalidArgument("vector components must have order at least 1".into()));
            }
        }
        Ok(ChaosVectorSpec { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[SymmetricTensor] {
        &self.components
    }

    pub fn orders(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.order()).collect()
    }

    /// `σ_ij = q! <f_i, f_j>` when the orders agree, else 0.
    pub fn covariance(&self) -> Result<CovarianceMatrix> {
        let m = self.components.len();
        let mut s = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let (fi, fj) = (&self.components[i], &self.components[j]);
                let v = if fi.order() == fj.order() {
                    factorial(fi.order()) * fi.inner(fj)?
                } else {
                    0.0
                };
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        CovarianceMatrix::new(s)
    }
}

/// A symmetric positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    sigma: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl CovarianceMatrix {
    /// Validates symmetry and positive semidefiniteness (tolerance 1e-10,
    /// relative to the largest entry).
    pub fn new(sigma: DMatrix<f64>) -> Result<Self> {
        if !sigma.is_square() || sigma.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "covariance must be square and nonempty, got {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let scale = sigma.amax().max(1.0);
        let n = sigma.nrows();
        for i in 0..n {
            for j in 0..i {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > PSD_TOL * scale {
                    return Err(Error::ShapeMismatch(format!("covariance not symmetric at ({i}, {j})")));
                }
            }
        }
        let eigenvalues = symmetric_eigenvalues(&sigma);
        let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOL * scale {
            return Err(Error::NotPositiveSemidefinite(min));
        }
        Ok(CovarianceMatrix { sigma, eigenvalues })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("covariance rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is a covariance")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn dim(&self) -> usize {
        self.sigma.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sigma[(i, j)]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `‖Σ‖_op`, the largest eigenvalue.
    pub fn op_norm(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0).max(0.0)
    }

    /// `‖Σ^{-1}‖_op`, the reciprocal of the smallest eigenvalue.
    pub fn inverse_op_norm(&self) -> Result<f64> {
        let min = self.eigenvalues[0];
        if min <= PSD_TOL * self.op_norm().max(1.0) {
            return Err(Error::SingularCovariance(min));
        }
        Ok(1.0 / min)
    }

    /// Lower-triangular `L` with `L Lᵀ = Σ`, computed from the
    /// eigendecomposition so singular matrices are allowed.
    pub fn sqrt_factor(&self) -> DMatrix<f64> {
        if let Some(ch) = self.sigma.clone().cholesky() {
            return ch.l();
        }
        let eig = self.sigma.clone().symmetric_eigen();
        let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()));
        &eig.eigenvectors * DMatrix::from_diagonal(&d)
    }
}

/// Eigenvalues of a symmetric matrix, ascending. Falls back to power
/// iteration for the extreme eigenvalues if the QR sweep does not converge.
fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = match m.clone().try_symmetric_eigen(1e-14, 10_000) {
        Some(e) => e.eigenvalues.iter().copied().collect(),
        None => {
            let top = power_iteration(m);
            let shifted = DMatrix::identity(m.nrows(), m.nrows()) * top - m;
            let bottom = top - power_iteration(&shifted);
            vec![bottom, top]
        }
    };
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn power_iteration(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut v = DVector::from_fn(n, |i, _| 1.0 + i as f64 / n as f64);
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let w = m * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w);
        v = w / norm;
        if (next - lambda).abs() <= 1e-14 * next.abs().max(1.0) {
            return next;
        }
        lambda = next;
    }
    lambda
}

/// `E‖N‖⁴ = Σ_{i,j} (σ_ii σ_jj + 2 σ_ij²)` for `N ~ N(0, Σ)`.
pub fn gaussian_fourth_norm(sigma: &CovarianceMatrix) -> f64 {
    let n = sigma.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += sigma.get(i, i) * sigma.get(j, j) + 2.0 * sigma.get(i, j).powi(2);
        }
    }
    total
}

/// `E‖F‖⁴ = Σ_{i,j} (Cov(F_i², F_j²) + E[F_i²] E[F_j²])`.
pub fn chaos_fourth_norm(v: &ChaosVectorSpec) -> Result<f64> {
    let c = v.components();
    let mut total = 0.0;
    for fi in c {
        for fj in c {
            total += cov_squares(fi, fj)? + second_moment(fi) * second_moment(fj);
        }
    }
    Ok(total)
}

/// `E‖F‖⁴ - E‖N‖⁴` for `N` with the covariance of `F`, summed pair by pair
/// from the contraction terms so that it is exactly 0 for Gaussian vectors.
pub fn fourth_moment_excess(v: &ChaosVectorSpec) -> Result<f64> {
    let c = v.components();
    let mut total = 0.0;
    for fi in c {
        for fj in c {
            total += cov_squares_excess(fi, fj)?;
        }
    }
    Ok(total)
}

/// Regularity class of the test function in a Stein bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SteinKind {
    /// `h` is Lipschitz with the given constant.
    Lipschitz { lip: f64 },
    /// `h` is `C²` with `max_ij sup |∂_ij h|` given.
    C2 { hess: f64 },
}

/// Upper bound on `|E h(F) - E h(N)|` with `N ~ N(0, Σ)`, driven by
/// `sqrt(E‖F‖⁴ - E‖N‖⁴)`.
pub fn stein_bound(v: &ChaosVectorSpec, sigma: &CovarianceMatrix, kind: SteinKind) -> Result<f64> {
    if sigma.dim() != v.len() {
        return Err(Error::DimensionMismatch(v.len(), sigma.dim()));
    }
    // Written as (E‖F‖⁴ - E‖N_F‖⁴) + (E‖N_F‖⁴ - E‖N‖⁴) where N_F carries the
    // covariance of F; the second bracket vanishes identically when Σ is it.
    let own = v.covariance()?;
    let radicand = fourth_moment_excess(v)? + gaussian_fourth_norm(&own) - gaussian_fourth_norm(sigma);
    let radicand = if radicand < 0.0 {
        if radicand < RADICAND_FLOOR {
            return Err(Error::NegativeRadicand(radicand));
        }
        0.0
    } else {
        radicand
    };
    let root = radicand.sqrt();
    Ok(match kind {
        SteinKind::Lipschitz { lip } => {
            let d = v.len() as f64;
            d.sqrt() * sigma.op_norm().sqrt() * sigma.inverse_op_norm()? * lip * root
        }
        SteinKind::C2 { hess } => 0.5 * hess * root,
    })
}

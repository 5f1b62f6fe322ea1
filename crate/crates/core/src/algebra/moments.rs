use crate::combinat::{binomial, factorial};
use crate::error::{Error, Result};
use crate::tensor::{contract, symmetrized_contraction, SymmetricTensor};

fn check_dims(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<()> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    Ok(())
}

fn check_positive_order(f: &SymmetricTensor) -> Result<()> {
    if f.order() == 0 {
        return Err(Error::InvalidArgument("chaos order must be at least 1".into()));
    }
    Ok(())
}

/// `‖f ⊗_r g‖` for `r = 1..=p∧q`.
pub fn contraction_norms(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<Vec<f64>> {
    check_dims(f, g)?;
    (1..=f.order().min(g.order()))
        .map(|r| contract(f, g, r).map(|c| c.norm()))
        .collect()
}

/// The `r`-th summand pair of `Cov(I_p(f)², I_q(g)²)`:
/// `p! q! C(p,r) C(q,r) ‖f ⊗_r g‖² + r!² C(p,r)² C(q,r)² (p+q-2r)! ‖f ⊗̃_r g‖²`.
fn cov_term(f: &SymmetricTensor, g: &SymmetricTensor, r: usize) -> Result<f64> {
    let (p, q) = (f.order(), g.order());
    let (cp, cq) = (binomial(p, r), binomial(q, r));
    let plain = contract(f, g, r)?.norm_sq();
    let sym = symmetrized_contraction(f, g, r)?.norm_sq();
    Ok(factorial(p) * factorial(q) * cp * cq * plain
        + factorial(r).powi(2) * (cp * cq).powi(2) * factorial(p + q - 2 * r) * sym)
}

/// `Cov(I_p(f)², I_q(g)²)` in closed form. Always nonnegative.
pub fn cov_squares(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<f64> {
    check_dims(f, g)?;
    check_positive_order(f)?;
    check_positive_order(g)?;
    (1..=f.order().min(g.order())).map(|r| cov_term(f, g, r)).sum()
}

/// `Cov(F², G²) - 2 E[FG]²`. When the orders agree the `r = q` summand is
/// exactly `2 E[FG]²` and is left out; otherwise `E[FG] = 0` and this is the
/// full covariance of squares.
pub(crate) fn cov_squares_excess(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<f64> {
    check_dims(f, g)?;
    check_positive_order(f)?;
    check_positive_order(g)?;
    let top = if f.order() == g.order() { f.order() - 1 } else { f.order().min(g.order()) };
    (1..=top).map(|r| cov_term(f, g, r)).sum()
}

/// `max_r ‖f ⊗_r g‖²`, a lower bound for [`cov_squares`].
pub fn cov_squares_lower_bound(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<f64> {
    Ok(contraction_norms(f, g)?.into_iter().map(|n| n * n).fold(0.0, f64::max))
}

/// `‖f ⊗_1 g‖²`; zero exactly when `I_p(f)` and `I_q(g)` are independent.
pub fn ustunel_zakai_gap(f: &SymmetricTensor, g: &SymmetricTensor) -> Result<f64> {
    check_dims(f, g)?;
    check_positive_order(f)?;
    check_positive_order(g)?;
    Ok(contract(f, g, 1)?.norm_sq())
}

/// Fourth cumulant `E[F⁴] - 3 E[F²]²` of `F = I_q(f)`.
pub fn fourth_cumulant(f: &SymmetricTensor) -> Result<f64> {
    check_positive_order(f)?;
    cov_squares_excess(f, f)
}

/// `c_q = 4 ((q/2)!)³ / (q!)²` for even `q`.
pub fn c_q(q: usize) -> Result<f64> {
    if q == 0 || q % 2 == 1 {
        return Err(Error::InvalidArgument(format!("c_q needs an even positive order, got {q}")));
    }
    Ok(4.0 * factorial(q / 2).powi(3) / factorial(q).powi(2))
}

/// Second moment and `E[G⁴] - 12 E[G³]` of the centered chi-square law
/// with `ν` degrees of freedom: `(2ν, 12ν² - 48ν)`.
pub fn chi2_target_moments(nu: f64) -> (f64, f64) {
    (2.0 * nu, 12.0 * nu * nu - 48.0 * nu)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chi2Report {
    /// `‖f ⊗̃_{q/2} f - c_q f‖`
    pub mid_gap: f64,
    /// `(r, ‖f ⊗_r f‖)` for `r = 1..q-1`, `r ≠ q/2`
    pub other_contractions: Vec<(usize, f64)>,
    /// `q! ‖f‖² - 2ν`
    pub variance_gap: f64,
}

/// Contraction conditions for convergence of `I_q(f)` to the centered
/// chi-square law with `ν` degrees of freedom.
pub fn chi2_criteria(f: &SymmetricTensor, nu: f64) -> Result<Chi2Report> {
    let q = f.order();
    let c = c_q(q)?;
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(format!("degrees of freedom must be positive, got {nu}")));
    }
    let mid = symmetrized_contraction(f, f, q / 2)?;
    let mid_gap = mid.sub(&f.scale(c))?.norm();
    let other_contractions = (1..q)
        .filter(|&r| r != q / 2)
        .map(|r| contract(f, f, r).map(|t| (r, t.norm())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Chi2Report {
        mid_gap,
        other_contractions,
        variance_gap: factorial(q) * f.norm_sq() - 2.0 * nu,
    })
}

//! Cumulants of the Rosenblatt variable `R_H = c_H I_2(f_H(1,·,·))`.
//!
//! The kernel `f_H(1,x,y) = ∫_0^1 (s-x)_+^{α}(s-y)_+^{α} ds` with
//! `α = H/2 - 1` defines a Hilbert-Schmidt operator `T` on `L²(R)`.
//! `T = J J*` with `(J g)(x) = ∫_0^1 (s-x)_+^{α} g(s) ds`, so `T` has the
//! same nonzero spectrum as `J* J`, whose kernel on `[0,1]²` is
//! `∫ (s-x)_+^{α}(s'-x)_+^{α} dx = B(α+1, -2α-1) |s-s'|^{2α+1}`.
//! With `D = 1 - H`, `2α+1 = -D` and `κ_m(I_2(f)) = 2^{m-1}(m-1)! tr(T^m)`.

use nalgebra::DMatrix;
use statrs::function::beta::beta;

use crate::error::{Error, Result};

/// Default number of Galerkin cells on `[0, 1]`.
pub const DEFAULT_CELLS: usize = 512;
/// Largest relative shift of `κ3` or `κ4` between the two finest grids.
pub const MAX_CALIBRATION_SHIFT: f64 = 0.01;

/// Galerkin matrix of the operator with kernel `B |s - s'|^{-D}` on `[0, 1]`,
/// using piecewise-constant functions on `cells` equal cells.
#[derive(Clone, Debug)]
pub struct RosenblattKernelGrid {
    hurst: f64,
    cells: usize,
    /// Symmetric matrix whose eigenvalues approximate those of the operator
    /// (without the `c_H` factor).
    matrix: DMatrix<f64>,
}

impl RosenblattKernelGrid {
    pub fn new(hurst: f64, cells: usize) -> Result<Self> {
        if !(hurst > 0.5 && hurst < 1.0) {
            return Err(Error::InvalidArgument(format!("Hurst index must lie in (½, 1), got {hurst}")));
        }
        if cells < 4 {
            return Err(Error::InvalidArgument(format!("need at least 4 cells, got {cells}")));
        }
        let d = 1.0 - hurst;
        let b = gram_constant(hurst);
        let h = 1.0 / cells as f64;
        // F'' = |z|^{-D}; the average of |x - y|^{-D} over two cells at
        // offset dz is (F(dz+h) - 2F(dz) + F(dz-h)) / h².
        let big_f = |z: f64| z.abs().powf(2.0 - d) / ((1.0 - d) * (2.0 - d));
        let avg: Vec<f64> = (0..cells)
            .map(|k| {
                let z = k as f64 * h;
                (big_f(z + h) - 2.0 * big_f(z) + big_f(z - h)) / (h * h)
            })
            .collect();
        let matrix = DMatrix::from_fn(cells, cells, |i, j| b * h * avg[i.abs_diff(j)]);
        Ok(RosenblattKernelGrid { hurst, cells, matrix })
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `tr(A²), tr(A³), tr(A⁴)` of the unscaled matrix.
    pub fn traces(&self) -> [f64; 3] {
        let a = &self.matrix;
        let a2 = a * a;
        let t2 = a2.trace();
        let t3 = a2.component_mul(a).sum();
        let t4 = a2.component_mul(&a2).sum();
        [t2, t3, t4]
    }
}

/// `B(H/2, 1-H)`, the constant of the Gram kernel.
pub fn gram_constant(hurst: f64) -> f64 {
    beta(hurst / 2.0, 1.0 - hurst)
}

/// `c_H = [H(2H-1) / (2 B(H/2, 1-H)²)]^{1/2}`, the normalization giving
/// `E R_H² = 1`.
pub fn rosenblatt_constant(hurst: f64) -> f64 {
    let b = gram_constant(hurst);
    (hurst * (2.0 * hurst - 1.0) / (2.0 * b * b)).sqrt()
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct GridLevel {
    pub cells: usize,
    /// `c_H` that would make this grid's `κ2` equal to 1.
    pub c_h: f64,
    /// `κ2` of this grid with the analytic `c_H`.
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RosenblattCumulants {
    pub hurst: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    /// Analytic `c_H`, used for all cumulants.
    pub c_h: f64,
    /// `c_H` calibrated on the finest grid so that its `κ2` is 1.
    pub c_h_grid: f64,
    /// Differences between the two finest grids.
    pub grid_tol_kappa3: f64,
    pub grid_tol_kappa4: f64,
    /// Coarse to fine: `cells/4, cells/2, cells`.
    pub levels: Vec<GridLevel>,
}

// The discrete spectrum misses the eigenvalue tail Σ_{k>N} λ_k^m, which
// decays like N^{-(m-1-mD)}: slowly for m = 2, much faster for m = 3, 4.
// Cumulants therefore use the exact c_H rather than a grid calibration.
fn level(hurst: f64, cells: usize) -> Result<GridLevel> {
    let [t2, t3, t4] = RosenblattKernelGrid::new(hurst, cells)?.traces();
    let c = rosenblatt_constant(hurst);
    Ok(GridLevel {
        cells,
        c_h: (1.0 / (2.0 * t2)).sqrt(),
        kappa2: 2.0 * c * c * t2,
        kappa3: 8.0 * c.powi(3) * t3,
        kappa4: 48.0 * c.powi(4) * t4,
    })
}

/// Second to fourth cumulants of `R_H` from Galerkin grids of `cells/4`,
/// `cells/2` and `cells` cells.
pub fn rosenblatt_cumulants(hurst: f64, cells: usize) -> Result<RosenblattCumulants> {
    if cells < 16 {
        return Err(Error::InvalidArgument(format!("need at least 16 cells, got {cells}")));
    }
    let levels = [cells / 4, cells / 2, cells]
        .into_iter()
        .map(|c| level(hurst, c))
        .collect::<Result<Vec<_>>>()?;
    let (mid, fine) = (&levels[1], &levels[2]);
    let shift = ((fine.kappa3 - mid.kappa3) / fine.kappa3)
        .abs()
        .max(((fine.kappa4 - mid.kappa4) / fine.kappa4).abs());
    if shift > MAX_CALIBRATION_SHIFT {
        return Err(Error::GridTooCoarse(format!(
            "cumulants moved by {:.3}% between {} and {} cells",
            100.0 * shift,
            mid.cells,
            fine.cells
        )));
    }
    Ok(RosenblattCumulants {
        hurst,
        kappa2: 1.0,
        kappa3: fine.kappa3,
        kappa4: fine.kappa4,
        c_h: rosenblatt_constant(hurst),
        c_h_grid: fine.c_h,
        grid_tol_kappa3: (fine.kappa3 - mid.kappa3).abs(),
        grid_tol_kappa4: (fine.kappa4 - mid.kappa4).abs(),
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_constant_matches_beta_integral() {
        // ∫_0^∞ v^{α}(1+v)^{α} dv by midpoint rule after v = w^{1/(1+α)}.
        let hurst = 0.7;
        let alpha = hurst / 2.0 - 1.0;
        let e = 1.0 / (1.0 + alpha);
        // w in (0, ∞) mapped from u in (0, 1) by w = u / (1 - u)
        let n = 200_000;
        let mut acc = 0.0;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            let w = u / (1.0 - u);
            let v = w.powf(e);
            acc += (1.0 + v).powf(alpha) / ((1.0 - u) * (1.0 - u));
        }
        let integral = acc / n as f64 / (1.0 + alpha);
        assert!((integral - gram_constant(hurst)).abs() / gram_constant(hurst) < 1e-3);
    }

    #[test]
    fn grid_variance_approaches_one_from_below() {
        for &hurst in &[0.6, 0.7, 0.85] {
            let r = rosenblatt_cumulants(hurst, 256).unwrap();
            let k2: Vec<f64> = r.levels.iter().map(|l| l.kappa2).collect();
            assert!(k2[0] < k2[1] && k2[1] < k2[2] && k2[2] < 1.0, "H = {hurst}: {k2:?}");
            assert!(r.c_h_grid > r.c_h);
            assert!(r.kappa3 > 0.0 && r.kappa4 > 0.0);
        }
    }

    #[test]
    fn cumulants_converge_under_refinement() {
        let r = rosenblatt_cumulants(0.7, 256).unwrap();
        assert!(r.grid_tol_kappa3 < 1e-3 * r.kappa3);
        assert!(r.grid_tol_kappa4 < 1e-4 * r.kappa4);
    }

    #[test]
    fn skewness_tends_to_chi_square_as_h_tends_to_one() {
        // Near H = 1 the kernel is nearly rank one, so R_H approaches
        // (N² - 1)/√2 with κ3 = 2√2, κ4 = 12.
        let r = rosenblatt_cumulants(0.99, 128).unwrap();
        assert!((r.kappa3 - 2.0 * 2f64.sqrt()).abs() < 0.05, "{r:?}");
        assert!((r.kappa4 - 12.0).abs() < 0.3, "{r:?}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(RosenblattKernelGrid::new(0.4, 64).is_err());
        assert!(rosenblatt_cumulants(0.7, 8).is_err());
    }
}

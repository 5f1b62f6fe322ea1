use super::model::{CovarianceModel, SlowlyVarying};
use crate::combinat::factorial;
use crate::error::{Error, Result};
use crate::sampler::hermite_eval;

/// Time grid used for finite-dimensional distributions.
pub const FDD_GRID: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Neumaier compensated summation.
#[derive(Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `S(k) = Σ_{j=1}^{k} H_q(G_j)` for `k = 0..=n`.
pub fn hermite_prefix_sums(path: &[f64], q: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for &g in path {
        acc += hermite_eval(q, g);
        out.push(acc);
    }
    out
}

/// `S_{q,n}(t)` on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitePartialSum {
    pub q: usize,
    pub n: usize,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Partial sums `S_{q,n}(t) = Σ_{k=1}^{⌊nt⌋} H_q(G_k)` of a path of length
/// `n` at the given times (each in `[0, 1]`).
pub fn hermite_partial_sum(path: &[f64], q: usize, times: &[f64]) -> Result<HermitePartialSum> {
    if let Some(t) = times.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::InvalidArgument(format!("time {t} outside [0, 1]")));
    }
    let n = path.len();
    let prefix = hermite_prefix_sums(path, q);
    let values = times
        .iter()
        .map(|&t| prefix[((n as f64 * t).floor() as usize).min(n)])
        .collect();
    Ok(HermitePartialSum {
        q,
        n,
        times: times.to_vec(),
        values,
    })
}

/// `Var(S_{q,n}(1)) = q! Σ_{|k|<n} (n - |k|) r(k)^q`, summed with
/// compensation.
pub fn finite_n_variance(model: &CovarianceModel, q: usize, n: usize) -> f64 {
    let mut acc = KahanSum::default();
    acc.add(n as f64);
    for k in 1..n {
        acc.add(2.0 * (n - k) as f64 * model.r(k as i64).powi(q as i32));
    }
    factorial(q) * acc.value()
}

/// Bernoulli numbers B_2, B_4, .., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}` for `s > 1`, `a > 0`, by
/// Euler-Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    const N: usize = 16;
    let mut acc = KahanSum::default();
    for k in 0..N {
        acc.add((k as f64 + a).powf(-s));
    }
    let x = N as f64 + a;
    acc.add(x.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * x.powf(-s));
    // Σ_j B_{2j}/(2j)! · s(s+1)..(s+2j-2) · x^{-s-2j+1}
    let mut rising = s; // s(s+1)..(s+2j-2)
    let mut fact = 2.0; // (2j)!
    for (j, b) in BERNOULLI.iter().enumerate() {
        let j = j + 1;
        acc.add(b / fact * rising * x.powf(-s - 2.0 * j as f64 + 1.0));
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
    }
    acc.value()
}

/// `Σ_{k∈Z} r(k)^q` by direct summation until the model's certified tail
/// bound drops below `tol`. Returns the sum and the truncation lag.
pub fn breuer_major_series(model: &CovarianceModel, q: usize, tol: f64) -> Result<(f64, usize)> {
    const MAX_LAG: usize = 100_000_000;
    if model.tail_bound(MAX_LAG, q).is_none_or(|b| b > tol) {
        return Err(Error::NotSummable(format!(
            "no certified tail bound below {tol:e} for {model:?} with q = {q} within {MAX_LAG} lags"
        )));
    }
    // Smallest K with a small enough tail, by doubling then bisection.
    let ok = |k: usize| model.tail_bound(k, q).is_some_and(|b| 2.0 * b <= tol);
    let mut hi = 1usize;
    while !ok(hi) && hi < MAX_LAG {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut acc = KahanSum::default();
    acc.add(1.0);
    for k in 1..=hi {
        acc.add(2.0 * model.r(k as i64).powi(q as i32));
    }
    Ok((acc.value(), hi))
}

/// `Σ_{k∈Z} r(k)^q`, in closed form where one exists.
pub fn breuer_major_sum(model: &CovarianceModel, q: usize) -> Result<f64> {
    if q == 0 {
        return Err(Error::InvalidArgument("Hermite rank must be at least 1".into()));
    }
    match model {
        CovarianceModel::WhiteNoise => Ok(1.0),
        CovarianceModel::Geometric { rho } => {
            let a = rho.powi(q as i32);
            Ok((1.0 + a) / (1.0 - a))
        }
        CovarianceModel::Summable { .. } => breuer_major_series(model, q, 1e-12).map(|(s, _)| s),
        CovarianceModel::RegVar { d, l } => {
            let s = d * q as f64;
            if s <= 1.0 {
                return Err(Error::NotSummable(format!(
                    "Σ|r(k)|^q diverges for D·q = {s} ≤ 1"
                )));
            }
            match l {
                SlowlyVarying::One => Ok(1.0 + 2.0 * hurwitz_zeta(s, 1.0)),
                SlowlyVarying::Shifted => Ok(1.0 + 2.0 * hurwitz_zeta(s, 2.0)),
                SlowlyVarying::Fgn => {
                    // explicit head, then the leading power-law tail
                    // r(k)^q ≈ (H(2H-1))^q k^{-Dq} (1 + O(k^{-2}))
                    const K: usize = 100_000;
                    let mut acc = KahanSum::default();
                    acc.add(1.0);
                    for k in 1..=K {
                        acc.add(2.0 * model.r(k as i64).powi(q as i32));
                    }
                    let h = 1.0 - d / 2.0;
                    let c = (h * (2.0 * h - 1.0)).powi(q as i32);
                    acc.add(2.0 * c * hurwitz_zeta(s, (K + 1) as f64));
                    Ok(acc.value())
                }
                SlowlyVarying::Custom(_) => Err(Error::NotSummable(
                    "cannot certify summability for a custom slowly varying factor".into(),
                )),
            }
        }
    }
}

/// `a_q = [q! Σ_{k∈Z} r(k)^q]^{1/2}`.
pub fn breuer_major_constant(model: &CovarianceModel, q: usize) -> Result<f64> {
    let s = breuer_major_sum(model, q)?;
    if s < 0.0 {
        return Err(Error::InvalidModel {
            n: 0,
            msg: format!("Σ r(k)^q = {s} is negative"),
        });
    }
    Ok((factorial(q) * s).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaqquNormalizer {
    /// `n^{1-D} L(n)`
    pub normalizer: f64,
    /// `[(1-D)(1-2D)]^{-1/2}`
    pub b_d: f64,
    /// `D` within 0.01 of the pole at ½
    pub near_pole: bool,
}

/// `b_D = [(1-D)(1-2D)]^{-1/2}`.
pub fn taqqu_constant(d: f64) -> Result<f64> {
    if !(d > 0.0 && d < 0.5) {
        return Err(Error::OutOfScope(format!("the second-chaos limit needs 0 < D < ½, got {d}")));
    }
    Ok(((1.0 - d) * (1.0 - 2.0 * d)).powf(-0.5))
}

pub fn taqqu_normalizer(model: &CovarianceModel, n: usize) -> Result<TaqquNormalizer> {
    let d = model
        .exponent()
        .ok_or_else(|| Error::InvalidArgument(format!("{model:?} is not regularly varying")))?;
    let b_d = taqqu_constant(d)?;
    let l = model.slowly_varying(n as f64).expect("regularly varying");
    Ok(TaqquNormalizer {
        normalizer: (n as f64).powf(1.0 - d) * l,
        b_d,
        near_pole: 0.5 - d < 0.01,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sums() {
        let path = [0.5, -1.0, 2.0, 0.0];
        let s = hermite_partial_sum(&path, 1, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(s.values, vec![0.0, -0.5, 1.5]);
        let c = hermite_partial_sum(&[3.0; 4], 2, &[0.25, 0.5, 0.75, 1.0]).unwrap();
        assert_eq!(c.values, vec![8.0, 16.0, 24.0, 32.0]);
        assert!(hermite_partial_sum(&path, 1, &[1.5]).is_err());
    }

    #[test]
    fn finite_n_variances() {
        assert_eq!(finite_n_variance(&CovarianceModel::WhiteNoise, 3, 10), 60.0);
        let ar = CovarianceModel::geometric(0.5).unwrap();
        assert!((finite_n_variance(&ar, 2, 2) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_values() {
        let pi = std::f64::consts::PI;
        assert!((hurwitz_zeta(2.0, 1.0) - pi * pi / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(4.0, 1.0) - pi.powi(4) / 90.0).abs() < 1e-14);
        // ζ(2, 2) = ζ(2) - 1
        assert!((hurwitz_zeta(2.0, 2.0) - (pi * pi / 6.0 - 1.0)).abs() < 1e-14);
        assert!((hurwitz_zeta(1.5, 1.0) - 2.612_375_348_685_488).abs() < 1e-13);
    }

    #[test]
    fn breuer_major_closed_forms() {
        let ar = CovarianceModel::geometric(0.5).unwrap();
        let a2 = breuer_major_constant(&ar, 2).unwrap();
        assert!((a2 * a2 - 10.0 / 3.0).abs() < 1e-14);
        let (series, _) = breuer_major_series(&ar, 3, 1e-12).unwrap();
        assert!((6.0 * series - 6.0 * 9.0 / 7.0).abs() < 1e-10);
        assert!((breuer_major_constant(&CovarianceModel::WhiteNoise, 4).unwrap().powi(2) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn power_law_sums() {
        let m = CovarianceModel::regvar(0.8, SlowlyVarying::One).unwrap();
        // q = 2: 1 + 2ζ(1.6)
        let s = breuer_major_sum(&m, 2).unwrap();
        let head: f64 = 1.0 + 2.0 * (1..2_000_000).map(|k| (k as f64).powf(-1.6)).sum::<f64>();
        let tail = 2.0 * (2_000_000f64 - 0.5).powf(-0.6) / 0.6;
        assert!((s - head - tail).abs() < 1e-8);
        assert!(matches!(breuer_major_sum(&m, 1), Err(Error::NotSummable(_))));
        let fgn = CovarianceModel::fgn(0.8).unwrap();
        let exact = breuer_major_sum(&fgn, 3).unwrap();
        let (trunc, _) = breuer_major_series(&fgn, 3, 1e-6).unwrap();
        assert!((exact - trunc).abs() < 1e-6);
    }

    #[test]
    fn taqqu_constants() {
        assert!((taqqu_constant(0.3).unwrap() - 0.28f64.powf(-0.5)).abs() < 1e-15);
        assert!((taqqu_constant(0.3).unwrap() - 1.889_822_365).abs() < 1e-9);
        assert!(taqqu_constant(0.5).is_err());
        let m = CovarianceModel::regvar(0.3, SlowlyVarying::One).unwrap();
        let t = taqqu_normalizer(&m, 1024).unwrap();
        assert!((t.normalizer - 1024f64.powf(0.7)).abs() < 1e-9);
        assert!(!t.near_pole);
        let near = CovarianceModel::regvar(0.495, SlowlyVarying::One).unwrap();
        assert!(taqqu_normalizer(&near, 10).unwrap().near_pole);
    }
}

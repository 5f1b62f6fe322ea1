use chaoslab_core::timeseries::{
    breuer_major_constant, breuer_major_series, finite_n_variance, hermite_partial_sum, rosenblatt_cumulants,
    CovarianceModel, SlowlyVarying, FDD_GRID,
};

fn double_sum_variance(model: &CovarianceModel, q: usize, n: usize) -> f64 {
    // Var(Σ H_q(G_i)) = q! Σ_i Σ_j r(i - j)^q
    let fact: f64 = (1..=q).map(|i| i as f64).product();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += model.r(i as i64 - j as i64).powi(q as i32);
        }
    }
    fact * acc
}

#[test]
fn finite_variance_matches_double_sum() {
    let models = [
        CovarianceModel::WhiteNoise,
        CovarianceModel::geometric(0.5).unwrap(),
        CovarianceModel::geometric(-0.7).unwrap(),
        CovarianceModel::fgn(0.3).unwrap(),
        CovarianceModel::regvar(0.4, SlowlyVarying::One).unwrap(),
    ];
    for m in &models {
        for q in 1..=4 {
            for n in [1usize, 2, 17, 200] {
                let a = finite_n_variance(m, q, n);
                let b = double_sum_variance(m, q, n);
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{m:?} q={q} n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn closed_form_constants_match_truncated_series() {
    for rho in [0.5, -0.3, 0.9] {
        let m = CovarianceModel::geometric(rho).unwrap();
        for q in 1..=4 {
            let a = breuer_major_constant(&m, q).unwrap();
            let (s, _) = breuer_major_series(&m, q, 1e-13).unwrap();
            let fact: f64 = (1..=q).map(|i| i as f64).product();
            assert!((a * a - fact * s).abs() <= 1e-10, "rho={rho} q={q}");
        }
    }
    let shifted = CovarianceModel::regvar(0.7, SlowlyVarying::Shifted).unwrap();
    let a = breuer_major_constant(&shifted, 3).unwrap();
    let (s, k) = breuer_major_series(&shifted, 3, 1e-6).unwrap();
    assert!(k > 1000);
    assert!((a * a - 6.0 * s).abs() <= 6.0 * 1e-6);
}

#[test]
fn long_run_variance_approaches_constant() {
    let m = CovarianceModel::geometric(0.5).unwrap();
    let a2 = breuer_major_constant(&m, 2).unwrap();
    let n = 1 << 15;
    assert!((finite_n_variance(&m, 2, n) / n as f64 / (a2 * a2) - 1.0).abs() < 1e-3);
}

#[test]
fn partial_sums_on_fdd_grid() {
    let path: Vec<f64> = (0..8).map(|i| i as f64 / 4.0 - 1.0).collect();
    let s = hermite_partial_sum(&path, 1, &FDD_GRID).unwrap();
    let expect: Vec<f64> = [2usize, 4, 6, 8].iter().map(|&k| path[..k].iter().sum()).collect();
    assert_eq!(s.values, expect);
}

#[test]
fn rosenblatt_cumulants_are_monotone_in_hurst() {
    // heavier memory pushes the law further from Gaussian toward χ²
    let k: Vec<f64> = [0.6, 0.7, 0.8, 0.9].iter().map(|&h| rosenblatt_cumulants(h, 256).unwrap().kappa3).collect();
    assert!(k.windows(2).all(|w| w[0] < w[1]), "{k:?}");
    assert!(k[3] < 2.0 * 2f64.sqrt());
}

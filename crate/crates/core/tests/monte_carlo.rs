use chaoslab_core::algebra::{fourth_cumulant, second_moment};
use chaoslab_core::discrete::{alternating_off_diagonal, moment_gap, uniform_off_diagonal, GapMode, InnovationLaw};
use chaoslab_core::rng::par_replicates;
use chaoslab_core::sampler::{
    empirical_moment, moment_table_from_samples, moments_to_cumulants, sample_vector, CumulantKey,
};
use chaoslab_core::stats::{covariance_estimate, mean_estimate, variance_estimate};
use chaoslab_core::timeseries::{finite_n_variance, hermite_prefix_sums, CovarianceModel, GaussianPathSampler};
use chaoslab_core::{ChaosVectorSpec, SymmetricTensor};

const K: f64 = 4.0;

fn spec() -> ChaosVectorSpec {
    let f1 = SymmetricTensor::from_entries(1, 3, [(vec![1], 0.6), (vec![3], -0.8)]).unwrap();
    let f2 = SymmetricTensor::from_entries(2, 3, [(vec![1, 2], 0.5), (vec![3, 3], 0.4)]).unwrap();
    let g2 = SymmetricTensor::from_entries(2, 3, [(vec![1, 2], 1.0), (vec![2, 2], -0.3)]).unwrap();
    let f3 = SymmetricTensor::from_entries(3, 3, [(vec![1, 2, 3], 0.3), (vec![1, 1, 2], 0.2)]).unwrap();
    ChaosVectorSpec::new(vec![f1, f2, g2, f3]).unwrap()
}

#[test]
fn isometry_and_orthogonality() {
    let v = spec();
    let sigma = v.covariance().unwrap();
    let s = sample_vector(&v, 200_000, 21).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let c = covariance_estimate(&s.column(i), &s.column(j));
            assert!(c.within(sigma.get(i, j), K), "({i},{j}): {c:?} vs {}", sigma.get(i, j));
        }
        assert!(mean_estimate(&s.column(i)).within(0.0, K));
    }
    // chaoses of different orders are uncorrelated
    assert_eq!(sigma.get(0, 1), 0.0);
    assert_eq!(sigma.get(1, 3), 0.0);
    assert!(sigma.get(1, 2) != 0.0);
}

#[test]
fn fourth_moment_consistency() {
    let v = spec();
    let s = sample_vector(&v, 400_000, 22).unwrap();
    for (col, f) in v.components().iter().enumerate().skip(1) {
        let var = second_moment(f);
        let target = 3.0 * var * var + fourth_cumulant(f).unwrap();
        let mut powers = [0u32; 4];
        powers[col] = 4;
        let m4 = empirical_moment(&s, &powers).unwrap();
        assert!(m4.within(target, K), "component {col}: {m4:?} vs {target}");
    }
}

#[test]
fn sample_cumulants_round_trip() {
    let v = spec();
    let s = sample_vector(&v, 50_000, 23).unwrap();
    let moments = moment_table_from_samples(&s, 3);
    let cum = moments_to_cumulants(&moments).unwrap();
    // second joint cumulant is the sample covariance (plug-in)
    let c01 = cum.get(&CumulantKey::from([1, 2])).unwrap();
    let m = |k: [usize; 2]| moments.get(&CumulantKey::from(k)).unwrap();
    let m1 = |k: [usize; 1]| moments.get(&CumulantKey::from(k)).unwrap();
    assert!((c01 - (m([1, 2]) - m1([1]) * m1([2]))).abs() < 1e-12);
    // third cumulant of a first-chaos variable vanishes in law
    let k3 = cum.get(&CumulantKey::from([0, 0, 0])).unwrap();
    assert!(k3.abs() < 0.05, "{k3}");
}

#[test]
fn gaussian_paths_have_model_covariance() {
    let model = CovarianceModel::fgn(0.3).unwrap();
    let n = 64;
    let sampler = GaussianPathSampler::new(&model, n).unwrap();
    let paths = par_replicates(20_000, 31, "paths", |_, rng| sampler.sample(rng));
    for lag in [0usize, 1, 5, 40] {
        let x: Vec<f64> = paths.iter().map(|p| p[3]).collect();
        let y: Vec<f64> = paths.iter().map(|p| p[3 + lag]).collect();
        let c = covariance_estimate(&x, &y);
        assert!(c.within(model.r(lag as i64), K), "lag {lag}: {c:?}");
    }
}

#[test]
fn hermite_sum_variance_matches_exact_formula() {
    let model = CovarianceModel::geometric(0.5).unwrap();
    let n = 128;
    let sampler = GaussianPathSampler::new(&model, n).unwrap();
    for q in 1..=3 {
        let sums = par_replicates(20_000, 32 + q as u64, "paths", |_, rng| hermite_prefix_sums(&sampler.sample(rng), q)[n]);
        let v = variance_estimate(&sums);
        assert!(v.within(finite_n_variance(&model, q, n), K), "q={q}: {v:?}");
    }
}

#[test]
fn moment_gap_shrinks_along_refining_family() {
    // exact at d = 8 and 16 by enumeration, then sampled at d = 40
    let gaps: Vec<_> = [8usize, 16, 40]
        .iter()
        .map(|&d| {
            let a1 = uniform_off_diagonal(d).unwrap();
            let a2 = alternating_off_diagonal(d).unwrap();
            let mode = if d <= 16 { GapMode::Enumerate } else { GapMode::Sample { n: 200_000, seed: 41 } };
            moment_gap(&a1, &a2, 2, 2, &InnovationLaw::Rademacher, mode).unwrap()
        })
        .collect();
    for w in gaps.windows(2) {
        assert!(w[1].value.abs() + K * w[1].se < w[0].value.abs(), "{gaps:?}");
    }
}

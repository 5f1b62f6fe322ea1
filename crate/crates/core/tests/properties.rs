use chaoslab_core::algebra::{cov_squares, fourth_cumulant, multiply};
use chaoslab_core::rng::substream;
use chaoslab_core::sampler::{cumulants_to_moments, moments_to_cumulants, MomentTable};
use chaoslab_core::{contract, contraction_norm_sq_dual, symmetrize, symmetrized_contraction, SymmetricTensor};
use proptest::prelude::*;

fn tensor(order: usize, dim: usize) -> impl Strategy<Value = SymmetricTensor> {
    let entry = (proptest::collection::vec(1..=dim as u32, order), -2.0f64..2.0);
    proptest::collection::vec(entry, 1..6).prop_map(move |es| {
        // later duplicates overwrite earlier ones
        let mut t = SymmetricTensor::zeros(order, dim);
        for (idx, v) in es {
            t.set(idx, v).unwrap();
        }
        t
    })
}

fn pair() -> impl Strategy<Value = (SymmetricTensor, SymmetricTensor)> {
    (1usize..=3, 1usize..=3, 1usize..=4).prop_flat_map(|(p, q, d)| (tensor(p, d), tensor(q, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn symmetrize_is_idempotent_and_contracts_norm((f, g) in pair()) {
        for r in 0..=f.order().min(g.order()) {
            let t = contract(&f, &g, r).unwrap();
            let s = symmetrize(&t);
            let again = symmetrize(&s.to_bipartite(0).unwrap());
            prop_assert!(s.sub(&again).unwrap().norm() <= 1e-12 * s.norm().max(1.0));
            prop_assert!(s.norm_sq() <= t.norm_sq() * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn contraction_norm_has_two_routes((f, g) in pair()) {
        for r in 0..=f.order().min(g.order()) {
            let direct = contract(&f, &g, r).unwrap().norm_sq();
            let dual = contraction_norm_sq_dual(&f, &g, r).unwrap();
            prop_assert!((direct - dual).abs() <= 1e-10 * direct.max(1.0));
        }
    }

    #[test]
    fn contraction_is_symmetric_under_swap((f, g) in pair()) {
        for r in 0..=f.order().min(g.order()) {
            let a = contract(&f, &g, r).unwrap();
            let b = contract(&g, &f, r).unwrap();
            // same support, values equal up to summation order
            let t = a.transpose();
            prop_assert_eq!(t.nnz(), b.nnz());
            for (l, rr, v) in t.iter() {
                let w = b.get(l.as_slice(), rr.as_slice());
                prop_assert!((v - w).abs() <= 1e-12 * v.abs().max(1.0), "{} vs {}", v, w);
            }
            let sa = symmetrized_contraction(&f, &g, r).unwrap();
            let sb = symmetrized_contraction(&g, &f, r).unwrap();
            prop_assert!(sa.sub(&sb).unwrap().norm() <= 1e-12 * sa.norm().max(1.0));
        }
    }

    #[test]
    fn product_second_moment_matches_isometry((f, g) in pair()) {
        // E[(I_p(f) I_q(g))²] from the product expansion against
        // E[I_p(f)²] E[I_q(g)²] + Cov(I_p(f)², I_q(g)²)
        let prod = multiply(&f, &g).unwrap();
        let lhs = prod.second_moment();
        let (p, q) = (f.order(), g.order());
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        let rhs = fact(p) * fact(q) * f.norm_sq() * g.norm_sq() + cov_squares(&f, &g).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "lhs {} rhs {}", lhs, rhs);
    }

    #[test]
    fn fourth_cumulant_is_nonnegative(f in (1usize..=3, 1usize..=4).prop_flat_map(|(q, d)| tensor(q, d))) {
        prop_assert!(fourth_cumulant(&f).unwrap() >= -1e-10);
    }

    #[test]
    fn literal_round_trip((f, _) in pair()) {
        let back: SymmetricTensor = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn cumulant_moment_round_trip(vals in proptest::collection::vec(-1.0f64..1.0, 14)) {
        // two variables, all mixed moments up to order 4
        let keys: Vec<Vec<usize>> = vec![
            vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 1], vec![0, 0, 0], vec![0, 0, 1],
            vec![0, 1, 1], vec![1, 1, 1], vec![0, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 1],
            vec![0, 1, 1, 1], vec![1, 1, 1, 1],
        ];
        let mut cum = MomentTable::new();
        for (k, v) in keys.iter().zip(&vals) {
            cum.insert(chaoslab_core::sampler::CumulantKey::new(k.clone()), *v);
        }
        let mom = cumulants_to_moments(&cum).unwrap();
        let back = moments_to_cumulants(&mom).unwrap();
        for (k, v) in cum.iter() {
            prop_assert!((back.get(k).unwrap() - v).abs() < 1e-12);
        }
    }
}

#[test]
fn random_sparse_tensors_have_requested_support() {
    let mut rng = substream(9, "props", 0);
    let t = SymmetricTensor::random_sparse(&mut rng, 3, 5, 7);
    assert!(t.nnz() <= 7 && t.nnz() > 0);
    assert!(t.iter().all(|(m, _)| m.len() == 3 && m.as_slice().iter().all(|&i| (1..=5).contains(&i))));
}

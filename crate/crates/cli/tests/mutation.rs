use chaoslab_core::algebra::identities::run_identity_suite;
use chaoslab_core::{symmetrize, BipartiteTensor};

#[test]
fn sign_flipped_symmetrization_fails_the_suite() {
    let flipped = |t: &BipartiteTensor| symmetrize(t).scale(-1.0);
    let res = run_identity_suite(3, 200, &flipped).unwrap();
    assert!(res.iter().any(|r| !r.pass));
    let honest = run_identity_suite(3, 200, &symmetrize).unwrap();
    assert!(honest.iter().all(|r| r.pass), "{honest:?}");
}

#[test]
fn misnormalized_symmetrization_fails_the_suite() {
    // wrong normalization above order two
    let lazy = |t: &BipartiteTensor| {
        let full = symmetrize(t);
        if t.left_order() + t.right_order() > 2 {
            full.scale(0.5)
        } else {
            full
        }
    };
    let res = run_identity_suite(3, 200, &lazy).unwrap();
    assert!(res.iter().any(|r| !r.pass));
}

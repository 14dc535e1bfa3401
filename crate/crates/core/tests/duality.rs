use std::sync::Arc;

use fell_core::bundle::{regular_family, semidirect_bundle, trivial_bundle, twisted_semidirect_bundle};
use fell_core::catalog::{
    pauli_quotient, s3_coset_action, s3_matrix_action, s3_scalar_example, scalar_algebra, swap_action, twisted_z4,
};
use fell_core::duality::{
    extract_twist, graded_ideals, is_g_simple, landstad_reconstruct, olesen_pedersen_forward, pullback_quotient_round_trip,
    pullback_round_trips, stabilizer_obstruction, transported_family, twisted_unitaries,
};
use fell_core::{cx, FiniteGroup, Matrix, GSetAction, Quotient, SectionAlgebra};

const TOL: f64 = 1e-9;

#[test]
fn char_round_trips_on_both_quotients() {
    let (q, d) = pauli_quotient::<f64>(TOL).unwrap();
    let (a, b) = pullback_round_trips(&d, &q, TOL).unwrap();
    assert!(a.holds(1e-8) && b.holds(1e-8), "{a:?} {b:?}");

    let (action, d) = s3_scalar_example::<f64>(TOL).unwrap();
    let (a, b) = pullback_round_trips(&d.bundle, action.quotient(), TOL).unwrap();
    assert!(a.holds(1e-8) && b.holds(1e-8), "{a:?} {b:?}");
}

#[test]
fn quotient_of_trivial_bundle() {
    let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
    let a = trivial_bundle(g.clone(), &scalar_algebra(1, TOL).unwrap(), TOL).unwrap();
    let q = Quotient::new(g, &[0, 2]).unwrap();
    let u = regular_family(&Matrix::identity(1), &q).unwrap();
    let r = pullback_quotient_round_trip(&a, &u, &q, TOL).unwrap();
    assert!(r.holds(1e-8), "{r:?}");
}

#[test]
fn olesen_pedersen_twisted_and_control() {
    for sign in [-1.0, 1.0] {
        let t = twisted_z4::<f64>(sign, TOL).unwrap();
        let op = olesen_pedersen_forward(&t, TOL).unwrap();
        assert!(op.isomorphism.holds(1e-8), "{:?}", op.isomorphism);
        let u = transported_family(&t, &op, TOL).unwrap();
        let tau = extract_twist(&t, &op.semidirect, &u, TOL).unwrap();
        let t2 = &tau.iter().find(|(n, _)| *n == 2).unwrap().1;
        assert!((t2[(0, 0)] - cx(sign, 0.0)).norm() < 1e-10);
    }
    let untwisted = twisted_z4::<f64>(-1.0, TOL).unwrap().untwisted_part();
    let op = olesen_pedersen_forward(&untwisted, TOL).unwrap();
    assert!(op.isomorphism.holds(1e-8));
    assert_eq!(op.dim_semidirect(), op.dim_pullback());
}

#[test]
fn olesen_pedersen_matrix_action() {
    let t = s3_matrix_action::<f64>(TOL).unwrap();
    let op = olesen_pedersen_forward(&t, TOL).unwrap();
    assert!(op.isomorphism.holds(1e-8), "{:?}", op.isomorphism);
    let u = transported_family(&t, &op, TOL).unwrap();
    let tau = extract_twist(&t, &op.semidirect, &u, TOL).unwrap();
    for (n, m) in tau {
        assert!((&m - t.tau(n)).max_abs() < 1e-8, "tau at {n}");
    }
}

#[test]
fn landstad_on_both_examples() {
    for t in [twisted_z4::<f64>(-1.0, TOL).unwrap(), s3_matrix_action::<f64>(TOL).unwrap()] {
        let d = twisted_semidirect_bundle(&t).concretize(TOL).unwrap();
        let u = twisted_unitaries(&t, &d).unwrap();
        let r = landstad_reconstruct(&d.bundle, t.quotient(), &u, TOL).unwrap();
        assert!(r.isomorphism.holds(1e-8), "{:?}", r.isomorphism);
        assert_eq!(r.action.algebra().dim(), t.algebra().dim());
    }
    let (t, d) = s3_scalar_example::<f64>(TOL).unwrap();
    let u = twisted_unitaries(&t, &d).unwrap();
    assert!(landstad_reconstruct(&d.bundle, t.quotient(), &u, TOL).unwrap().isomorphism.holds(1e-8));
}

#[test]
fn coset_space_is_not_induced_but_g_simple() {
    let act = s3_coset_action();
    let r = stabilizer_obstruction(&act, &[0, 3, 4]).unwrap();
    assert_eq!(r.kernel, vec![0]);
    assert!(!r.induced_possible);
    let b = act.crossed_product_bundle::<f64>(TOL).unwrap();
    assert_eq!(b.total_dim(), 18);
    let s = SectionAlgebra::new(&b, TOL).unwrap();
    assert!(is_g_simple(&s, TOL).unwrap());
    assert_eq!(act.invariant_ideal_count(), 2);
}

#[test]
fn non_transitive_action_has_graded_ideals() {
    let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
    let act = GSetAction::trivial(g, 2);
    let b = act.crossed_product_bundle::<f64>(TOL).unwrap();
    let s = SectionAlgebra::new(&b, TOL).unwrap();
    assert!(graded_ideals(&s, TOL).unwrap().len() >= 4);
    assert!(!is_g_simple(&s, TOL).unwrap());
    let swap = semidirect_bundle(&swap_action::<f64>(TOL).unwrap()).concretize(TOL).unwrap();
    assert!(is_g_simple(&SectionAlgebra::new(&swap.bundle, TOL).unwrap(), TOL).unwrap());
}

use std::sync::Arc;

use fell_core::bundle::{pullback, verify_bundle_isomorphism};
use fell_core::catalog::{pauli_quotient, standard_rep_s3};
use fell_core::group::{left_regular, right_regular};
use fell_core::{Bundle, Cx, FiniteGroup, GradedBundle, Matrix, MatrixSubspace, Quotient};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn group_strategy() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..9).prop_map(|m| FiniteGroup::cyclic(m).unwrap()),
        (1usize..6).prop_map(|m| FiniteGroup::dihedral(m).unwrap()),
        (1usize..5).prop_map(|m| FiniteGroup::symmetric(m).unwrap()),
        (1usize..4, 1usize..4)
            .prop_map(|(a, b)| FiniteGroup::cyclic(a).unwrap().direct_product(&FiniteGroup::cyclic(b).unwrap()).unwrap()),
    ]
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = Matrix<f64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| Matrix::from_vec(n, n, v.into_iter().map(|(a, b)| Cx::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws(g in group_strategy()) {
        for s in g.elements() {
            prop_assert_eq!(g.mul(s, g.inv(s)), 0);
            for t in g.elements() {
                for u in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(s, t), u), g.mul(s, g.mul(t, u)));
                }
            }
        }
    }

    #[test]
    fn regular_representations_commute(g in group_strategy()) {
        for s in g.elements() {
            let ls = left_regular::<f64>(&g, s);
            prop_assert!((&ls.transpose() - &left_regular(&g, g.inv(s))).max_abs() == 0.0);
            for t in g.elements() {
                prop_assert!((&(&ls * &left_regular(&g, t)) - &left_regular(&g, g.mul(s, t))).max_abs() == 0.0);
                let rt = right_regular::<f64>(&g, t);
                prop_assert!((&(&ls * &rt) - &(&rt * &ls)).max_abs() == 0.0);
            }
        }
    }

    #[test]
    fn quotients_are_consistent(g in group_strategy()) {
        for n in g.normal_subgroups() {
            let q = Quotient::new(Arc::new(g.clone()), &n).unwrap();
            prop_assert_eq!(q.index() * n.len(), g.order());
            prop_assert_eq!(q.section(0), 0);
            for k in 0..q.index() {
                prop_assert_eq!(q.q(q.section(k)), k);
            }
            for s in g.elements() {
                prop_assert!(n.contains(&q.n_of(s)));
                prop_assert_eq!(g.mul(q.section(q.q(s)), q.n_of(s)), s);
                for t in g.elements() {
                    prop_assert_eq!(q.q(g.mul(s, t)), q.quotient_group().mul(q.q(s), q.q(t)));
                }
            }
        }
    }

    #[test]
    fn orthonormalize_spans_inputs(ms in proptest::collection::vec(matrix_strategy(3), 0..6)) {
        let s = MatrixSubspace::orthonormalize(3, &ms, TOL).unwrap();
        prop_assert!(s.dim() <= ms.len());
        for m in &ms {
            prop_assert!(s.contains(m, 1e-8).unwrap());
            prop_assert!((&s.combine(&s.coords(m)) - m).max_abs() < 1e-8);
        }
        for (i, a) in s.basis().iter().enumerate() {
            for (j, b) in s.basis().iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((a.hs_inner(b) - Cx::new(expected, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn unitary_conjugates_are_isomorphic_bundles(idx in 0usize..6, phase in 0.0f64..std::f64::consts::TAU) {
        let (q, d) = pauli_quotient(TOL).unwrap();
        let p = pullback(&d, &q, TOL).unwrap();
        let pi = standard_rep_s3::<f64>();
        let w = pi[idx].scale(Cx::from_polar(1.0, phase)).kron(&Matrix::identity(4));
        let conj = |x: &Matrix<f64>| &(&w * x) * &w.adjoint();
        let fibers: Vec<Vec<Matrix<f64>>> = p.fibers().iter().map(|f| f.basis().iter().map(conj).collect()).collect();
        let moved: Bundle = GradedBundle::from_spanning(p.group().clone(), p.ambient_dim(), &fibers, TOL).unwrap();
        prop_assert!(moved.verify(1e-8).passed());
        let r = verify_bundle_isomorphism(&p, &moved, |_, x| conj(x), TOL).unwrap();
        prop_assert!(r.holds(1e-8));
    }
}

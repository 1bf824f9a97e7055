//! Randomized checks of the algebraic laws the exact arithmetic must
//! satisfy, plus pipeline invariances over randomly drawn parameters.

use flatpencil_core::algebra::linalg::Mat;
use flatpencil_core::*;
use proptest::prelude::*;

fn test_ring() -> RingConfig {
    let dv = DegreeVector::new(
        vec![Rat::one(), Rat::new(1, 2).unwrap()],
        Rat::new(3, 2).unwrap(),
        Mode::Polynomial,
    )
    .unwrap();
    RingConfig::new(dv, CoeffKind::Rat)
}

fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d).unwrap())
}

fn poly_strategy() -> impl Strategy<Value = GradedPoly> {
    let term = (0u32..=3, 0u32..=3, rat_strategy());
    proptest::collection::vec(term, 0..5).prop_map(|terms| {
        let ring = test_ring();
        let mut p = GradedPoly::zero(&ring);
        for (a, b, c) in terms {
            p.add_term(vec![a, b], ring.lift(c));
        }
        p
    })
}

fn point_strategy() -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(rat_strategy(), 2)
}

fn mat_strategy(n: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(rat_strategy(), n * n).prop_map(move |v| {
        let rows = v.chunks(n).map(|r| r.to_vec()).collect();
        Mat::from_rows(rows)
    })
}

proptest! {
    #[test]
    fn multiplication_distributes(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        let lhs = &(&p + &q) * &r;
        let rhs = &(&p * &r) + &(&q * &r);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_satisfies_the_product_rule(p in poly_strategy(), q in poly_strategy()) {
        for alpha in 0..2 {
            let lhs = (&p * &q).derive(alpha);
            let rhs = &(&p.derive(alpha) * &q) + &(&p * &q.derive(alpha));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn grading_operator_is_a_derivation(p in poly_strategy(), q in poly_strategy()) {
        let lhs = (&p * &q).euler();
        let rhs = &(&p.euler() * &q) + &(&p * &q.euler());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly_strategy(), q in poly_strategy(), pt in point_strategy()) {
        let prod = (&p * &q).evaluate(&pt, None).unwrap();
        let sep = p.evaluate(&pt, None).unwrap() * q.evaluate(&pt, None).unwrap();
        prop_assert_eq!(prod, sep);
        let sum = (&p + &q).evaluate(&pt, None).unwrap();
        let sep = p.evaluate(&pt, None).unwrap() + q.evaluate(&pt, None).unwrap();
        prop_assert_eq!(sum, sep);
    }

    #[test]
    fn partial_derivatives_commute(p in poly_strategy()) {
        let ab = p.derive(0).derive(1);
        let ba = p.derive(1).derive(0);
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn determinant_is_multiplicative(a in mat_strategy(3), b in mat_strategy(3)) {
        let prod = a.mul(&b);
        prop_assert_eq!(prod.det(), a.det() * b.det());
    }

    #[test]
    fn solving_inverts_the_matrix_action(a in mat_strategy(3), x in proptest::collection::vec(rat_strategy(), 3)) {
        prop_assume!(!a.det().is_zero());
        let b = a.mul_vec(&x);
        let solved = a.solve_unique(&b).unwrap();
        prop_assert_eq!(solved, x);
    }

    #[test]
    fn series_multiplication_commutes_and_derives(
        u in proptest::collection::vec(rat_strategy(), 5),
        v in proptest::collection::vec(rat_strategy(), 5),
    ) {
        let s = QSeries::from_coeffs(u);
        let t = QSeries::from_coeffs(v);
        prop_assert_eq!(s.mul(&t), t.mul(&s));
        let lhs = s.mul(&t).d_b();
        let rhs = s.d_b().mul(&t).add(&s.mul(&t.d_b()));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_admissible_second_degree_yields_a_frobenius_structure(
        num in 1i64..=6, den in 1i64..=6,
    ) {
        prop_assume!(num <= den);
        let d2 = Rat::new(num, den).unwrap();
        let (g, eta) = trivial_rank_two(d2).unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        let s = build_structure(&chr, &eta).unwrap();
        prop_assert!(verify_frobenius(&s).all_passed());
    }

    #[test]
    fn scaling_by_any_nonzero_constant_is_recovered(c in rat_strategy()) {
        prop_assume!(!c.is_zero());
        let (g, eta) = trivial_rank_two(Rat::new(1, 3).unwrap()).unwrap();
        let chr = Christoffel::solve(&g).unwrap();
        let s = build_structure(&chr, &eta).unwrap();
        let scaled = scale_structure(&s, &c).unwrap();
        match match_up_to_scaling(&s, &scaled).unwrap() {
            MatchResult::Matched { factor } => prop_assert_eq!(factor, c),
            MatchResult::Mismatch { detail } => prop_assert!(false, "unexpected mismatch: {detail}"),
        }
    }
}

//! End-to-end runs of the two rank-three reflection charts through the
//! whole pipeline, frozen against independently derived values.

use flatpencil_core::*;

fn poly(ring: &RingConfig, terms: &[([u32; 3], Rat)]) -> GradedPoly {
    let mut p = GradedPoly::zero(ring);
    for (e, c) in terms {
        p.add_term(e.to_vec(), ring.lift(c.clone()));
    }
    p
}

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

#[test]
fn type_a_rank_three_matches_frozen_values() {
    let inst = coxeter_instance(GroupKind::TypeA, 3, 0x5eed).unwrap();
    assert_eq!(inst.chart.degrees(), &[4, 3, 2]);

    let flat_ring = inst.flat.g_flat.ring().clone();
    assert_eq!(flat_ring.degree().charge(), &r(3, 2));

    let chart_ring = inst.orbit_form.ring().clone();
    assert_eq!(
        inst.flat.t_of_s,
        vec![
            poly(&chart_ring, &[([1, 0, 0], r(1, 1)), ([0, 0, 2], r(-3, 8))]),
            poly(&chart_ring, &[([0, 1, 0], r(1, 1))]),
            poly(&chart_ring, &[([0, 0, 1], r(1, 8))]),
        ]
    );

    assert_eq!(inst.flat.eta.upper(0, 2), &r(1, 1));
    assert_eq!(inst.flat.eta.upper(1, 1), &r(9, 1));
    assert_eq!(inst.flat.eta.upper(0, 0), &Rat::zero());
    assert_eq!(inst.flat.eta.upper(0, 1), &Rat::zero());

    let g = &inst.flat.g_flat;
    assert_eq!(
        g.entry(0, 0),
        &poly(&flat_ring, &[([0, 0, 3], r(128, 1)), ([0, 2, 0], r(4, 3))])
    );
    assert_eq!(g.entry(0, 1), &poly(&flat_ring, &[([0, 1, 1], r(20, 1))]));
    assert_eq!(g.entry(0, 2), &poly(&flat_ring, &[([1, 0, 0], r(1, 1))]));
    assert_eq!(
        g.entry(1, 1),
        &poly(&flat_ring, &[([0, 0, 2], r(72, 1)), ([1, 0, 0], r(9, 1))])
    );
    assert_eq!(g.entry(1, 2), &poly(&flat_ring, &[([0, 1, 0], r(3, 4))]));
    assert_eq!(g.entry(2, 2), &poly(&flat_ring, &[([0, 0, 1], r(1, 2))]));

    let chr = Christoffel::solve(g).unwrap();
    let s = build_structure(&chr, &inst.flat.eta).unwrap();
    let report = verify_frobenius(&s);
    assert!(report.all_passed(), "{report}");

    let expected_f = poly(
        &flat_ring,
        &[
            ([2, 0, 1], r(1, 2)),
            ([1, 2, 0], r(1, 18)),
            ([0, 2, 2], r(4, 9)),
            ([0, 0, 5], r(64, 15)),
        ],
    );
    assert_eq!(s.potential.tau_poly().p, expected_f);
    assert!(s.potential.tau_poly().tau.is_zero());

    assert_eq!(s.intersection_form().unwrap(), inst.flat.g_flat);
}

#[test]
fn type_b_rank_three_matches_frozen_values() {
    let inst = coxeter_instance(GroupKind::TypeB, 3, 0x5eed).unwrap();
    assert_eq!(inst.chart.degrees(), &[6, 4, 2]);

    let flat_ring = inst.flat.g_flat.ring().clone();
    assert_eq!(flat_ring.degree().charge(), &r(4, 3));

    let chart_ring = inst.orbit_form.ring().clone();
    assert_eq!(
        inst.flat.t_of_s,
        vec![
            poly(
                &chart_ring,
                &[
                    ([1, 0, 0], r(1, 1)),
                    ([0, 1, 1], r(-5, 4)),
                    ([0, 0, 3], r(25, 72)),
                ]
            ),
            poly(
                &chart_ring,
                &[([0, 1, 0], r(1, 1)), ([0, 0, 2], r(-1, 2))]
            ),
            poly(&chart_ring, &[([0, 0, 1], r(1, 12))]),
        ]
    );

    assert_eq!(inst.flat.eta.upper(0, 2), &r(1, 1));
    assert_eq!(inst.flat.eta.upper(1, 1), &r(16, 1));

    let g = &inst.flat.g_flat;
    assert_eq!(
        g.entry(0, 0),
        &poly(
            &flat_ring,
            &[([0, 0, 5], r(6912, 1)), ([0, 2, 1], r(15, 1))]
        )
    );
    assert_eq!(
        g.entry(0, 1),
        &poly(
            &flat_ring,
            &[([0, 1, 2], r(192, 1)), ([0, 2, 0], r(2, 1))]
        )
    );
    assert_eq!(g.entry(0, 2), &poly(&flat_ring, &[([1, 0, 0], r(1, 1))]));
    assert_eq!(
        g.entry(1, 1),
        &poly(
            &flat_ring,
            &[
                ([0, 0, 3], r(768, 1)),
                ([0, 1, 1], r(48, 1)),
                ([1, 0, 0], r(16, 1)),
            ]
        )
    );
    assert_eq!(g.entry(1, 2), &poly(&flat_ring, &[([0, 1, 0], r(2, 3))]));
    assert_eq!(g.entry(2, 2), &poly(&flat_ring, &[([0, 0, 1], r(1, 3))]));

    let chr = Christoffel::solve(g).unwrap();
    let s = build_structure(&chr, &inst.flat.eta).unwrap();
    let report = verify_frobenius(&s);
    assert!(report.all_passed(), "{report}");

    let expected_f = poly(
        &flat_ring,
        &[
            ([2, 0, 1], r(1, 2)),
            ([1, 2, 0], r(1, 32)),
            ([0, 3, 1], r(1, 32)),
            ([0, 2, 3], r(3, 2)),
            ([0, 0, 7], r(3456, 35)),
        ],
    );
    assert_eq!(s.potential.tau_poly().p, expected_f);
}

#[test]
fn rank_three_instances_do_not_depend_on_the_sampling_seed() {
    let a = coxeter_instance(GroupKind::TypeA, 3, 1).unwrap();
    let b = coxeter_instance(GroupKind::TypeA, 3, 0xfeed_beef).unwrap();
    assert_eq!(a.flat.t_of_s, b.flat.t_of_s);
    assert_eq!(a.flat.g_flat, b.flat.g_flat);
    assert_eq!(a.orbit_form, b.orbit_form);
}

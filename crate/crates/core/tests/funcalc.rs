mod common;

use proptest::prelude::*;

use common::{aff, kink_pair, q};
use vopcert::exactlp::rational::{int, ratio, Rational};
use vopcert::exactlp::{QMatrix, QVector};
use vopcert::funcalc::{
    clarke_subdiff_component, kconvexity_check, scalarized_subdiff, KConvexity, ObjectiveVector, Piece, PieceFn,
    SubdiffPolytope,
};
use vopcert::geometry::OrderingCone;

#[test]
fn evaluations() {
    let f1 = PieceFn::Max(vec![aff(&[0], 0), aff(&[1], 0)]);
    let f2 = PieceFn::Min(vec![aff(&[0], 0), aff(&[-1], 0)]);
    assert_eq!(f1.eval(&q(&[2])), int(2));
    assert_eq!(f2.eval(&q(&[2])), int(-2));
    let half_square = PieceFn::Smooth(Piece::quad(QMatrix::identity(1), q(&[0]), int(0)));
    assert_eq!(half_square.eval(&q(&[3])), ratio(9, 2));
}

#[test]
fn kink_subdifferentials() {
    let (inst, x) = kink_pair();
    let sd = inst.f.component_subdiffs(&x);
    assert!(sd[0]
        .same_set(&SubdiffPolytope::new(1, vec![q(&[0]), q(&[1])]))
        .unwrap());
    assert!(sd[1]
        .same_set(&SubdiffPolytope::new(1, vec![q(&[-1]), q(&[0])]))
        .unwrap());
}

/// The Clarke support `max ⟨ξ, d⟩` recovered from one-sided difference
/// quotients, which are exact for piecewise-affine data at a small step.
fn clarke_support_by_quotient(f: &PieceFn, x: &QVector, d: &QVector) -> Rational {
    let t = ratio(1, 1000);
    let quotient = |dir: &QVector| {
        let mut y = x.clone();
        y.axpy(&t, dir);
        (f.eval(&y) - f.eval(x)) / &t
    };
    match f {
        PieceFn::Min(_) => -quotient(&d.neg()),
        _ => quotient(d),
    }
}

#[test]
fn two_piece_max_matches_sixteen_directions() {
    let f = PieceFn::Max(vec![aff(&[1, 1], 0), aff(&[2, 0], 0)]);
    let x = q(&[1, 1]);
    let sd = clarke_subdiff_component(&f, &x);
    assert!(sd
        .same_set(&SubdiffPolytope::new(2, vec![q(&[1, 1]), q(&[2, 0])]))
        .unwrap());
    for a in -2..2 {
        for b in -2..2 {
            let d = q(&[a, b]);
            assert_eq!(sd.support(&d), clarke_support_by_quotient(&f, &x, &d), "direction {d}");
        }
    }
}

#[test]
fn scalarizations_of_the_kink_pair() {
    let (inst, x) = kink_pair();
    let s = scalarized_subdiff(&q(&[2, 1]), &inst.f, &x).unwrap();
    let expected = SubdiffPolytope::new(1, vec![q(&[0]), q(&[1])]);
    assert!(s.exact().unwrap().same_set(&expected).unwrap());

    let zero = scalarized_subdiff(&q(&[0, 0]), &inst.f, &x).unwrap();
    assert!(zero
        .exact()
        .unwrap()
        .same_set(&SubdiffPolytope::point(q(&[0])))
        .unwrap());

    // μ = (1, 1): max{0, x} + min{0, −x} vanishes identically.
    let mu = q(&[1, 1]);
    for k in -50..50 {
        let y = QVector::new(vec![ratio(k, 50)]);
        assert_eq!(inst.f.scalarize(&mu, &y), int(0));
    }
    let flat = scalarized_subdiff(&mu, &inst.f, &x).unwrap();
    assert!(flat
        .exact()
        .unwrap()
        .same_set(&SubdiffPolytope::point(q(&[0])))
        .unwrap());
}

#[test]
fn convexity_examples() {
    let (inst, _) = kink_pair();
    assert_eq!(kconvexity_check(&inst.f, &inst.k).unwrap(), KConvexity::Convex);

    let affine = ObjectiveVector::new(
        2,
        vec![
            PieceFn::affine(q(&[1, -2]), int(3)),
            PieceFn::affine(q(&[0, 1]), int(0)),
        ],
    )
    .unwrap();
    let skew = OrderingCone::from_vrep(2, vec![q(&[1, 0]), q(&[-1, 1])]).unwrap();
    assert_eq!(kconvexity_check(&affine, &skew).unwrap(), KConvexity::Convex);

    let concave = ObjectiveVector::new(
        1,
        vec![
            PieceFn::Smooth(Piece::quad(QMatrix::identity(1).scale(&int(-2)), q(&[0]), int(0))),
            PieceFn::affine(q(&[1]), int(0)),
        ],
    )
    .unwrap();
    let orthant = OrderingCone::nonneg_orthant(2);
    match kconvexity_check(&concave, &orthant).unwrap() {
        KConvexity::NotConvex(w) => assert!(w.verify(&concave, &orthant)),
        other => panic!("expected a midpoint witness, got {other:?}"),
    }
    // By hand at x = −1, y = 1, λ = ½: −0² = 0 exceeds ½(−1) + ½(−1).
    let mid = concave.eval(&q(&[0]));
    let avg = (concave.eval(&q(&[-1])).add(&concave.eval(&q(&[1])))).scale(&ratio(1, 2));
    assert!(mid[0] > avg[0]);
}

fn pa_component() -> impl Strategy<Value = PieceFn> {
    let piece = (prop::collection::vec(-3i64..=3, 2), -2i64..=2).prop_map(|(a, b)| aff(&a, b));
    (prop::collection::vec(piece, 1..4), 0u8..2).prop_map(
        |(ps, kind)| {
            if kind == 0 {
                PieceFn::Max(ps)
            } else {
                PieceFn::Min(ps)
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_matches_difference_quotients(
        f in pa_component(),
        x in prop::collection::vec(-2i64..=2, 2),
        d in prop::collection::vec(-3i64..=3, 2),
    ) {
        let (x, d) = (q(&x), q(&d));
        let sd = clarke_subdiff_component(&f, &x);
        prop_assert_eq!(sd.support(&d), clarke_support_by_quotient(&f, &x, &d));
    }

    #[test]
    fn scalarized_inner_bound_sits_inside_the_outer(
        f1 in pa_component(),
        f2 in pa_component(),
        mu in prop::collection::vec(-2i64..=2, 2),
    ) {
        let f = ObjectiveVector::new(2, vec![f1, f2]).unwrap();
        let x = q(&[0, 0]);
        let s = scalarized_subdiff(&q(&mu), &f, &x).unwrap();
        prop_assert!(s.outer().contains_polytope(s.inner()).unwrap());
        // The Minkowski sum of the scaled parts always contains the truth.
        let mut sum = SubdiffPolytope::point(QVector::zeros(2));
        for (m, sd) in mu.iter().zip(f.component_subdiffs(&x)) {
            sum = sum.minkowski_sum(&sd.scale(&int(*m))).unwrap();
        }
        prop_assert!(sum.contains_polytope(s.outer()).unwrap());
    }
}

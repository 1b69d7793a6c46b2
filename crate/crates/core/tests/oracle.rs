mod common;

use common::{aff, kink_pair, q};
use vopcert::certifier::{certify, Status, VopInstance};
use vopcert::exactlp::rational::{int, ratio, Rational};
use vopcert::funcalc::{ObjectiveVector, PieceFn};
use vopcert::geometry::{FeasibleSet, OrderingCone};
use vopcert::oracle::{
    radius_estimate, robust_oracle, robust_oracle_with, verify_refutation, OracleConfig, Outcome, SampleSource,
    DEFAULT_BUDGET, DEFAULT_SEED, RADIUS_LEVELS,
};

fn opposing_lines() -> VopInstance {
    let f = ObjectiveVector::new(
        1,
        vec![PieceFn::affine(q(&[1]), int(0)), PieceFn::affine(q(&[-1]), int(0))],
    )
    .unwrap();
    VopInstance::new(f, FeasibleSet::whole_space(), OrderingCone::nonneg_orthant(2)).unwrap()
}

#[test]
fn kink_pair_is_refuted_and_re_verified() {
    let (inst, x) = kink_pair();
    let r = ratio(1, 10);
    let rep = robust_oracle(&inst, &x, &r, DEFAULT_BUDGET, DEFAULT_SEED).unwrap();
    let Outcome::RefutedWithWitness {
        perturbation,
        y,
        source,
    } = &rep.outcome
    else {
        panic!("expected a refutation, got {:?}", rep.outcome);
    };
    assert!(matches!(source, SampleSource::Pattern(_)));
    assert!(perturbation.within(&r));
    assert!(verify_refutation(&inst, &x, &r, &perturbation.c, y));
    assert!(rep.exact);
}

#[test]
fn zero_perturbation_keeps_an_efficient_point() {
    let (inst, x) = kink_pair();
    let cfg = OracleConfig {
        budget: 0,
        patterns: false,
        ..OracleConfig::default()
    };
    let rep = robust_oracle_with(&inst, &x, &ratio(1, 10), &cfg).unwrap();
    assert!(matches!(rep.outcome, Outcome::NoCounterexampleFound { budget: 0, .. }));
    assert_eq!((rep.samples_tried, rep.patterns_tried), (0, 0));
}

#[test]
fn common_descent_is_refuted_by_a_pattern() {
    // max{0, x} twice: x̄ = 0 is efficient, yet −1 is a common non-ascent direction.
    let ramp = || PieceFn::Max(vec![aff(&[0], 0), aff(&[1], 0)]);
    let f = ObjectiveVector::new(1, vec![ramp(), ramp()]).unwrap();
    let inst = VopInstance::new(f, FeasibleSet::whole_space(), OrderingCone::nonneg_orthant(2)).unwrap();
    let x = q(&[0]);
    assert_eq!(certify(&inst, &x).unwrap().status, Status::NotRobustCertified);
    let r = ratio(1, 1000);
    let rep = robust_oracle(&inst, &x, &r, DEFAULT_BUDGET, DEFAULT_SEED).unwrap();
    match &rep.outcome {
        Outcome::RefutedWithWitness {
            perturbation,
            y,
            source,
        } => {
            assert!(matches!(source, SampleSource::Pattern(_)));
            assert!(y[0] < 0);
            assert!(verify_refutation(&inst, &x, &r, &perturbation.c, y));
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
}

#[test]
fn robust_pair_survives_the_default_budget() {
    let inst = opposing_lines();
    let rep = robust_oracle(&inst, &q(&[2]), &ratio(1, 1000), DEFAULT_BUDGET, DEFAULT_SEED).unwrap();
    assert!(!rep.is_refuted());
    assert_eq!(rep.samples_tried, DEFAULT_BUDGET);
    assert!(rep.patterns_tried > 0);
}

#[test]
fn identical_inputs_give_identical_reports() {
    let (inst, x) = kink_pair();
    let cfg = OracleConfig {
        budget: 50,
        seed: 99,
        patterns: false,
        workers: Some(1),
    };
    let a = robust_oracle_with(&inst, &x, &ratio(1, 10), &cfg).unwrap();
    let b = robust_oracle_with(&inst, &x, &ratio(1, 10), &cfg).unwrap();
    assert_eq!(a, b);
    if let Outcome::RefutedWithWitness { perturbation, y, .. } = &a.outcome {
        assert!(verify_refutation(&inst, &x, &ratio(1, 10), &perturbation.c, y));
    }
}

#[test]
fn radius_brackets() {
    let (inst, x) = kink_pair();
    let est = radius_estimate(&inst, &x, &ratio(1, 10), 100, DEFAULT_SEED).unwrap();
    assert!(est.trace.iter().all(|p| p.refuted));
    assert_eq!(est.trace.len(), RADIUS_LEVELS + 1);
    let hi = est.refuted_at.clone().unwrap();
    assert!(est.clean_below < hi);
    assert_eq!(hi, ratio(1, 10) / Rational::from(1u64 << RADIUS_LEVELS));

    let robust = opposing_lines();
    let est = radius_estimate(&robust, &q(&[0]), &ratio(1, 100), 100, DEFAULT_SEED).unwrap();
    assert_eq!(est.refuted_at, None);
    assert_eq!(est.clean_below, ratio(1, 100));

    let est = radius_estimate(&robust, &q(&[0]), &int(0), 100, DEFAULT_SEED).unwrap();
    assert_eq!(est.clean_below, int(0));
    assert!(est.trace.is_empty());
}

mod common;

use proptest::prelude::*;

use common::{aff, box_set, g1_within_g2, kink_pair, q, random_pa_instance, rng};
use vopcert::certifier::{
    certify, check_t1_necessary, check_t1_sufficient, check_t2_forms, efficiency_check, verify_direction,
    verify_domination, ConditionId, Status, VopInstance, Witness,
};
use vopcert::exactlp::rational::{int, ratio};
use vopcert::exactlp::QVector;
use vopcert::funcalc::{ObjectiveVector, PieceFn};
use vopcert::geometry::{FeasibleSet, OrderingCone, Truth};
use vopcert::oracle::{robust_oracle, DEFAULT_BUDGET, DEFAULT_SEED};

fn linear(n: usize, grads: &[&[i64]], omega: FeasibleSet) -> VopInstance {
    let f = ObjectiveVector::new(n, grads.iter().map(|g| PieceFn::affine(q(g), int(0))).collect()).unwrap();
    VopInstance::new(f, omega, OrderingCone::nonneg_orthant(grads.len())).unwrap()
}

#[test]
fn efficiency_examples() {
    let (inst, x) = kink_pair();
    let r = efficiency_check(&inst, &x).unwrap();
    assert!(r.efficient && r.exact && r.witness.is_none());

    let opposing = linear(1, &[&[1], &[-1]], box_set(1, 0, 1));
    assert!(
        efficiency_check(&opposing, &QVector::new(vec![ratio(1, 2)]))
            .unwrap()
            .efficient
    );

    let aligned = linear(1, &[&[1], &[1]], box_set(1, 0, 1));
    let r = efficiency_check(&aligned, &q(&[1])).unwrap();
    assert!(!r.efficient);
    let y = r.witness.unwrap();
    assert_eq!(y, q(&[0]));
    assert!(verify_domination(&aligned, &q(&[1]), None, &y));
}

#[test]
fn necessary_condition_examples() {
    let (inst, x) = kink_pair();
    assert_eq!(check_t1_necessary(&inst, &x).unwrap().holds, Truth::True);

    let descent = linear(2, &[&[1, 0], &[0, 1]], FeasibleSet::whole_space());
    let x = q(&[3, -1]);
    let r = check_t1_necessary(&descent, &x).unwrap();
    assert_eq!(r.holds, Truth::False);
    let d = r.direction().unwrap();
    assert!(d[0] <= 0 && d[1] <= 0 && !d.is_zero());
    assert!(verify_direction(&descent, &x, d).unwrap());
    let v = certify(&descent, &x).unwrap();
    assert_eq!(v.status, Status::NotRobustCertified);
    assert!(matches!(v.witness(), Some(Witness::Direction { .. })));

    let spanning = linear(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], FeasibleSet::whole_space());
    assert_eq!(check_t1_necessary(&spanning, &q(&[0, 0])).unwrap().holds, Truth::True);
}

#[test]
fn sufficient_condition_examples() {
    let (inst, x) = kink_pair();
    assert_eq!(check_t1_sufficient(&inst, &x).unwrap().holds, Truth::False);

    let opposing = linear(1, &[&[1], &[-1]], FeasibleSet::whole_space());
    let x = q(&[4]);
    let r = check_t1_sufficient(&opposing, &x).unwrap();
    assert_eq!((r.holds, r.applicable), (Truth::True, Truth::True));
    assert_eq!(certify(&opposing, &x).unwrap().status, Status::RobustCertified);
    let rep = robust_oracle(&opposing, &x, &ratio(1, 1000), DEFAULT_BUDGET, DEFAULT_SEED).unwrap();
    assert!(!rep.is_refuted());
    assert_eq!(rep.samples_tried, DEFAULT_BUDGET);

    let flat = linear(2, &[&[0, 0], &[0, 0]], box_set(2, -1, 1));
    assert_eq!(check_t1_sufficient(&flat, &q(&[0, 0])).unwrap().holds, Truth::False);
}

#[test]
fn dual_form_examples() {
    let (inst, x) = kink_pair();
    let (i, ii) = check_t2_forms(&inst, &x).unwrap();
    assert_eq!((i.holds, ii.holds), (Truth::True, Truth::False));

    let corner = FeasibleSet::polyhedral(2, vec![q(&[-1, 0]), q(&[0, -1])], q(&[0, 0])).unwrap();
    let inst = linear(2, &[&[1, 0], &[0, 1]], corner);
    let (i, ii) = check_t2_forms(&inst, &q(&[0, 0])).unwrap();
    assert_eq!((i.holds, ii.holds), (Truth::True, Truth::True));

    let line = linear(2, &[&[1, 0], &[-1, 0]], FeasibleSet::whole_space());
    let (i, ii) = check_t2_forms(&line, &q(&[0, 0])).unwrap();
    assert_eq!((i.holds, ii.holds), (Truth::False, Truth::False));
}

#[test]
fn verdicts() {
    let (inst, x) = kink_pair();
    let v = certify(&inst, &x).unwrap();
    assert_eq!(v.status, Status::Inconclusive);
    assert!(v.oracle_referral);
    assert_eq!(v.hypotheses.cq1, Truth::False);
    assert_eq!(v.condition(ConditionId::Cq1).unwrap().holds, Truth::False);

    // |x₁| and |x₂| at the corner of the unit box.
    let f = ObjectiveVector::new(
        2,
        vec![
            PieceFn::Max(vec![aff(&[1, 0], 0), aff(&[-1, 0], 0)]),
            PieceFn::Max(vec![aff(&[0, 1], 0), aff(&[0, -1], 0)]),
        ],
    )
    .unwrap();
    let inst = VopInstance::new(f, box_set(2, 0, 1), OrderingCone::nonneg_orthant(2)).unwrap();
    let x = q(&[0, 0]);
    let v = certify(&inst, &x).unwrap();
    assert_eq!(v.status, Status::RobustCertified);
    let rep = robust_oracle(&inst, &x, &ratio(1, 1000), DEFAULT_BUDGET, DEFAULT_SEED).unwrap();
    assert!(!rep.is_refuted());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verdict_witnesses_re_validate(seed in 0u64..10_000) {
        let (inst, x) = random_pa_instance(&mut rng(seed));
        prop_assert!(g1_within_g2(&inst, &x));
        let v = certify(&inst, &x).unwrap();
        if v.status == Status::NotRobustCertified {
            let d = v.condition(ConditionId::NecessaryIntersection).unwrap().direction().unwrap();
            prop_assert!(verify_direction(&inst, &x, d).unwrap());
        }
        let e = efficiency_check(&inst, &x).unwrap();
        prop_assert!(e.exact);
        if let Some(y) = &e.witness {
            prop_assert!(verify_domination(&inst, &x, None, y));
            // A dominated candidate cannot pass the necessary condition
            // with a certificate of robustness.
            prop_assert!(v.status != Status::RobustCertified);
        }
    }
}

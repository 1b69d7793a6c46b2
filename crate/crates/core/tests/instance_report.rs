mod common;

use serde_json::Value;

use common::q;
use vopcert::certifier::{certify, efficiency_check};
use vopcert::exactlp::rational::ratio;
use vopcert::exactlp::ConeHRep;
use vopcert::funcalc::SubdiffPolytope;
use vopcert::instance::{parse_instance, parse_instance_str, InstanceFile};
use vopcert::oracle::{robust_oracle, DEFAULT_BUDGET, DEFAULT_SEED};
use vopcert::report::{describe, verify_report, DescribeDocument, ReportDocument};
use vopcert::Error;

const KINK_PAIR: &str = r#"{
  "dims": {"n": 1, "p": 2},
  "objectives": [
    {"max": [{"affine": {"a": [0], "b": 0}}, {"affine": {"a": [1], "b": 0}}]},
    {"min": [{"affine": {"a": [0], "b": 0}}, {"affine": {"a": [-1], "b": 0}}]}
  ],
  "cone": {"hrep": [[1, 1], [1, 0]]},
  "feasible": {"polyhedral": {"g": [], "h": []}},
  "candidate": [0]
}"#;

const COMMON_DESCENT: &str = r#"{
  "dims": {"n": 2, "p": 2},
  "objectives": [
    {"smooth": {"affine": {"a": [1, 0], "b": 0}}},
    {"smooth": {"affine": {"a": [0, 1], "b": "1/2"}}}
  ],
  "cone": {"vrep": [[1, 0], [0, 1]]},
  "feasible": {"polyhedral": {"g": [[1, 0]], "h": [3]}},
  "candidate": ["3/2", -1]
}"#;

#[test]
fn files_parse_and_round_trip() {
    let path = std::env::temp_dir().join(format!("vopcert-kink-{}.json", std::process::id()));
    std::fs::write(&path, KINK_PAIR).unwrap();
    let p = parse_instance(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let (inst, x) = common::kink_pair();
    assert_eq!(p.candidate, x);
    assert!(p.instance.k.hrep().same_set(inst.k.hrep()).unwrap());
    assert_eq!(p.instance.f.eval(&q(&[3])), inst.f.eval(&q(&[3])));

    let file = InstanceFile::from_json(COMMON_DESCENT).unwrap();
    assert_eq!(InstanceFile::from_json(&file.to_json()).unwrap(), file);
}

#[test]
fn input_errors_are_classified() {
    let short = KINK_PAIR.replace("\"candidate\": [0]", "\"candidate\": [0, 1]");
    assert!(matches!(parse_instance_str(&short), Err(Error::Dimension(_))));
    let p3 = KINK_PAIR.replace("\"p\": 2", "\"p\": 3");
    assert!(matches!(parse_instance_str(&p3), Err(Error::Dimension(_))));
    let half_line = KINK_PAIR.replace("{\"hrep\": [[1, 1], [1, 0]]}", "{\"vrep\": [[1, 1]]}");
    let err = parse_instance_str(&half_line).unwrap_err();
    assert!(err.to_string().contains("EmptyInterior"), "{err}");
    assert!(err.is_input_error());
    let garbled = KINK_PAIR.replace("\"b\": 0}}]}", "\"b\": \"x/2\"}}]}");
    assert!(matches!(parse_instance_str(&garbled), Err(Error::MalformedRational(_))));
}

fn report_for(text: &str, radius: (i64, i64)) -> (vopcert::instance::Problem, Value) {
    let p = parse_instance_str(text).unwrap();
    let mut doc = ReportDocument::new("all");
    doc.seed = Some(DEFAULT_SEED);
    doc.verdict = Some(certify(&p.instance, &p.candidate).unwrap());
    doc.efficiency = Some(efficiency_check(&p.instance, &p.candidate).unwrap());
    doc.oracle = Some(
        robust_oracle(
            &p.instance,
            &p.candidate,
            &ratio(radius.0, radius.1),
            DEFAULT_BUDGET,
            DEFAULT_SEED,
        )
        .unwrap(),
    );
    let value: Value = serde_json::from_str(&doc.to_json()).unwrap();
    (p, value)
}

#[test]
fn report_witnesses_re_validate() {
    let (p, value) = report_for(KINK_PAIR, (1, 10));
    let checks = verify_report(&p, &value).unwrap();
    assert!(checks.iter().any(|c| c.kind == "perturbation"));
    assert!(checks.iter().all(|c| c.valid), "{checks:?}");

    let (p, value) = report_for(COMMON_DESCENT, (1, 1000));
    let checks = verify_report(&p, &value).unwrap();
    for kind in ["direction", "domination", "perturbation"] {
        assert!(checks.iter().any(|c| c.kind == kind), "no {kind} witness in {checks:?}");
    }
    assert!(checks.iter().all(|c| c.valid), "{checks:?}");
}

#[test]
fn tampered_witnesses_are_rejected() {
    let (p, mut value) = report_for(KINK_PAIR, (1, 10));
    value["oracle"]["outcome"]["y"] = serde_json::json!(["1"]);
    let checks = verify_report(&p, &value).unwrap();
    let oracle = checks.iter().find(|c| c.kind == "perturbation").unwrap();
    assert!(!oracle.valid);

    // A perturbation outside the claimed ball fails even with the right y.
    let (p, mut value) = report_for(KINK_PAIR, (1, 10));
    value["oracle"]["radius"] = serde_json::json!("1/1000000");
    let checks = verify_report(&p, &value).unwrap();
    assert!(!checks.iter().find(|c| c.kind == "perturbation").unwrap().valid);
}

#[test]
fn describe_data_re_parses_to_the_same_sets() {
    let p = parse_instance_str(KINK_PAIR).unwrap();
    let d = describe(&p).unwrap();
    assert!(d.subdifferentials[0]
        .same_set(&SubdiffPolytope::new(1, vec![q(&[0]), q(&[1])]))
        .unwrap());
    assert!(d.subdifferentials[1]
        .same_set(&SubdiffPolytope::new(1, vec![q(&[-1]), q(&[0])]))
        .unwrap());
    assert!(d.g2.exact);
    assert!(d.g2.inner.same_set(&ConeHRep::new(1, vec![q(&[1])]).unwrap()).unwrap());

    let back: DescribeDocument = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
    assert_eq!(back, d);
    assert!(back.g1.same_set(&d.g1).unwrap());
    assert!(back.tangent.same_set(&ConeHRep::full(1)).unwrap());
}

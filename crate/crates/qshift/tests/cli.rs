//! The command-line layer: parsing, report schema, determinism.

use clap::Parser;
use qshift::cli::{run, Cli, CliError, Report};
use qshift::suite::Status;
use serde_json::Value;

fn go(args: &[&str]) -> Result<Report, CliError> {
    let mut full = vec!["qshift"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).expect("arguments parse"))
}

fn json(r: &Report) -> Value {
    serde_json::from_str(&r.to_json()).unwrap()
}

#[test]
fn classify_excluded_type_is_a_passing_verdict() {
    let r = go(&["classify", "--type", "G2~1"]).unwrap();
    assert!(r.passed());
    let j = json(&r);
    assert_eq!(j["command"], "classify");
    assert_eq!(j["data"]["verdict"], "NotShiftable");
    for key in ["name", "paper_ref", "status"] {
        assert!(j["verdicts"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn classify_with_rank() {
    let r = go(&["classify", "--type", "C~1", "--rank", "3"]).unwrap();
    assert_eq!(json(&r)["data"]["verdict"], "Shiftable");
    assert!(go(&["classify", "--type", "C3~1", "--rank", "2"]).is_err());
    assert!(go(&["classify", "--type", "C~1"]).is_err());
}

#[test]
fn solve_reports_every_equation() {
    let r = go(&["solve", "--type", "A2~2"]).unwrap();
    assert!(r.passed());
    assert!(r.verdicts.len() >= 3);
}

#[test]
fn verify_hom_d3_passes() {
    let r = go(&["verify-hom", "--type", "D3~2", "--cutoff", "6"]).unwrap();
    assert!(r.passed());
    assert!(r.verdicts.iter().any(|v| v.name.starts_with("Serre")));
}

#[test]
fn lweight_c2_plus() {
    let r = go(&["lweight", "--type", "C2~1", "--component", "+"]).unwrap();
    assert!(r.passed());
    let j = json(&r);
    assert_eq!(j["data"]["closed_form"]["c"][1], "((1)/(v^2))");
    assert_eq!(j["data"]["f"]["f_2"]["f"], "(((1)/(v^12))*z + ((1)/(v^2))) / (((1)/(v^14))*z + (1))");
}

#[test]
fn lweight_eval_point() {
    let r = go(&["lweight", "--type", "C2~1", "--component", "+", "--eval", "v=2", "z=3"]).unwrap();
    assert_eq!(json(&r)["data"]["f"]["f_2"]["value"], "4108/16387");
}

#[test]
fn lweight_rejects_wrong_component() {
    assert!(matches!(go(&["lweight", "--type", "D3~2", "--component", "+"]), Err(CliError::Unsupported(_))));
}

#[test]
fn type_a_multiplicity_collision_is_reported() {
    let r = go(&["weights", "--type", "A1~1", "--cutoff", "3"]).unwrap();
    assert!(!r.passed());
    let bad = r.verdicts.iter().find(|v| v.status == Status::Fail).unwrap();
    assert_eq!(bad.name, "multiplicity free");
}

#[test]
fn module_substitutes_parameters() {
    let r = go(&["module", "--type", "A1~1", "--cutoff", "2", "--b", "2,b", "--eval", "b=3", "z=5", "v=2"]).unwrap();
    assert!(r.passed());
    let j = json(&r);
    let mats = j["data"]["matrices"].as_object().unwrap();
    let coeffs: Vec<&str> = mats.values().flat_map(|m| m.as_array().unwrap()).map(|e| e["coeff"].as_str().unwrap()).collect();
    assert!(!coeffs.is_empty());
    assert!(coeffs.iter().all(|c| !c.contains('z') && !c.contains('b') && !c.contains('v')), "{coeffs:?}");
}

#[test]
fn bad_inputs() {
    assert!(matches!(go(&["module", "--type", "C2~1", "--eps", "101"]), Err(CliError::Eps(..))));
    assert!(matches!(go(&["module", "--type", "C2~1", "--eval", "z=0"]), Err(CliError::Eval(_))));
    assert!(matches!(go(&["classify", "--type", "Q2~1"]), Err(CliError::Label(_))));
}

#[test]
fn output_is_deterministic() {
    let args = ["weights", "--type", "C2~1", "--eps", "11", "--cutoff", "4"];
    assert_eq!(go(&args).unwrap().to_json(), go(&args).unwrap().to_json());
}

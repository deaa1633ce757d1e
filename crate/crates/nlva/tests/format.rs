use std::path::PathBuf;

use nlva::format::parse_q;
use nlva::{AlgebraFile, CliError};
use nlva_core::formal_series::{fmt_q, qfrac};
use nlva_core::Error;
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

const FIXTURES: [&str; 7] =
    ["a3.json", "ut2.json", "z22_twist.json", "m2_a3.json", "a2_z2_cross.json", "a3_operators.json", "pole_operator.json"];

const SMALL: &str = r#"{
  "format_version": 1,
  "basis": ["one", "t"],
  "vacuum": "one",
  "entries": [
    {"u": "one", "v": "one", "n": -1, "result": {"one": "1"}},
    {"u": "one", "v": "t", "n": -1, "result": {"t": "1"}},
    {"u": "t", "v": "one", "n": -1, "result": {"t": "RESULT"}}
  ]
}"#;

#[test]
fn a3_fixture() {
    let f = AlgebraFile::read(&fixture("a3.json")).unwrap();
    let a = f.algebra().unwrap();
    assert_eq!(a.dim(), 3);
    assert_eq!(a.basis(), ["one", "t", "t2"]);
    assert_eq!(a.vacuum(), &a.unit(0));
    assert!(f.assoc().unwrap().is_some());
}

#[test]
fn fixtures_round_trip_byte_for_byte() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let f = AlgebraFile::parse_str(&text).unwrap();
        assert_eq!(f.to_json(), text, "{name}");
        if f.has_algebra() {
            let again = AlgebraFile::from_algebra(&f.algebra().unwrap());
            assert_eq!(again.algebra().unwrap(), f.algebra().unwrap());
        }
    }
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let f = AlgebraFile::parse_str(&SMALL.replace("RESULT", "1/0")).unwrap();
    assert!(matches!(f.algebra(), Err(CliError::Parse { .. })));
}

#[test]
fn malformed_json_reports_a_position() {
    match AlgebraFile::parse_str("{\n  \"format_version\": 1,\n  \"basis\": [\"a\",]\n}") {
        Err(CliError::Parse { location, .. }) => assert!(location.starts_with("line 3"), "{location}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(AlgebraFile::parse_str(r#"{"format_version": 2}"#), Err(CliError::Parse { .. })));
    assert!(matches!(AlgebraFile::parse_str(r#"{"format_version": 1, "extra": 0}"#), Err(CliError::Parse { .. })));
}

#[test]
fn unknown_name_is_a_validation_error() {
    let text = SMALL.replace("RESULT", "1").replace(r#""u": "t", "v": "one""#, r#""u": "s", "v": "one""#);
    let f = AlgebraFile::parse_str(&text).unwrap();
    assert!(matches!(f.algebra(), Err(CliError::Validation(Error::MalformedStructure(_)))));
}

#[test]
fn unreduced_rationals_are_normalized() {
    let f = AlgebraFile::parse_str(&SMALL.replace("RESULT", "2/2")).unwrap();
    let a = f.algebra().unwrap();
    assert_eq!(a.product(1, 0, -1), a.unit(1));
    assert_eq!(fmt_q(&parse_q("-6/4", "x").unwrap()), "-3/2");
    for bad in ["", "1.5", "1/", "a", "1e3", " 1"] {
        assert!(parse_q(bad, "x").is_err(), "{bad:?}");
    }
}

#[test]
fn sections_resolve() {
    let z = AlgebraFile::read(&fixture("z22_twist.json")).unwrap();
    assert_eq!(z.grading().unwrap().unwrap().degrees.len(), 4);
    assert!(z.cocycle().unwrap().is_some());
    assert!(z.rmap().unwrap().is_some());
    let c = AlgebraFile::read(&fixture("a2_z2_cross.json")).unwrap();
    assert_eq!(c.group_action().unwrap().unwrap().group.size(), 2);
    let m = AlgebraFile::read(&fixture("m2_a3.json")).unwrap();
    assert_eq!(m.module().unwrap().unwrap().dim(), 6);
    let (d, ops) = AlgebraFile::read(&fixture("a3_operators.json")).unwrap().operators().unwrap().unwrap();
    assert_eq!((d, ops.len()), (3, 1));
}

proptest! {
    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = qfrac(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x), "x").unwrap(), x.clone());
        prop_assert_eq!(parse_q(&format!("{n}/{d}"), "x").unwrap(), x);
    }
}

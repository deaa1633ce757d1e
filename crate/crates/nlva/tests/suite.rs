use std::path::PathBuf;

use nlva::report::RecordVerdict;
use nlva::suite::parse_window;
use nlva::{run_suite, AlgebraFile, QChoice, Suite, SuiteOptions, SuiteReport};
use nlva_core::formal_series::q;
use nlva_core::operator_space::ClosureOptions;

fn load(name: &str) -> AlgebraFile {
    AlgebraFile::read(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)).unwrap()
}

fn run(name: &str, suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    run_suite(name, &load(name), suite, opts).unwrap()
}

fn verdicts<'a>(r: &'a SuiteReport, check: &str) -> Vec<&'a RecordVerdict> {
    r.records.iter().filter(|x| x.check == check).map(|x| &x.verdict).collect()
}

#[test]
fn a3_passes_everything() {
    let r = run("a3.json", Suite::All, &SuiteOptions::default());
    assert!(r.records.iter().all(|x| x.verdict == RecordVerdict::Pass), "{}", r.to_text());
    assert_eq!(r.summary.failures, 0);
    assert_eq!(r.classification["locality"], "local");
    for check in ["axioms.weak-associativity", "locality", "skew.symmetry"] {
        assert_eq!(r.records.iter().find(|x| x.check == check).unwrap().order, Some(0), "{check}");
    }
}

#[test]
fn ut2_is_nonlocal_without_failing() {
    let r = run("ut2.json", Suite::Locality, &SuiteOptions::default());
    assert_eq!(r.classification["locality"], "nonlocal");
    assert!(!r.has_failures());
    let pair = r.records.iter().find(|x| x.notes.get("pair").map(String::as_str) == Some("E11,E12")).unwrap();
    assert_eq!(pair.verdict, RecordVerdict::NotSatisfied);
    assert_eq!(pair.notes["constant_witness"], "true");
    assert_eq!(pair.notes["search"], "not-found-within-bound");
    let w = &pair.witnesses[0];
    assert_eq!((w.lhs.clone(), w.rhs.clone()), (vec!["0".into(), "1".into(), "0".into()], vec!["0".to_string(); 3]));
}

#[test]
fn z22_jacobi_with_cocycle_scalars() {
    let opts = SuiteOptions { q: QChoice::FromCocycle, ..SuiteOptions::default() };
    let r = run("z22_twist.json", Suite::Jacobi, &opts);
    assert_eq!(verdicts(&r, "jacobi.identity"), [&RecordVerdict::Pass]);
    let rec = r.records.iter().find(|x| x.check == "jacobi.identity").unwrap();
    assert!(rec.notes["c_values"].contains("g10,g01=-1"));
    let plain = run("z22_twist.json", Suite::Jacobi, &SuiteOptions::default());
    assert_eq!(verdicts(&plain, "jacobi.identity"), [&RecordVerdict::NotSatisfied]);
    assert!(!plain.has_failures());
}

#[test]
fn from_cocycle_needs_the_sections() {
    let opts = SuiteOptions { q: QChoice::FromCocycle, ..SuiteOptions::default() };
    assert!(run_suite("a3.json", &load("a3.json"), Suite::Locality, &opts).is_err());
}

#[test]
fn rmap_fixtures_pass_jacobi_like() {
    for name in ["m2_a3.json", "a2_z2_cross.json", "z22_twist.json"] {
        let r = run(name, Suite::JacobiLike, &SuiteOptions::default());
        assert_eq!(verdicts(&r, "jacobi-like"), [&RecordVerdict::Pass], "{name}");
    }
    assert!(run_suite("a3.json", &load("a3.json"), Suite::JacobiLike, &SuiteOptions::default()).is_err());
}

#[test]
fn module_suite_on_the_column_module() {
    let r = run("m2_a3.json", Suite::Modules, &SuiteOptions::default());
    assert!(!r.has_failures());
    assert!(r.records.iter().all(|x| x.verdict == RecordVerdict::Pass));
    assert!(r.records.iter().all(|x| x.notes["module"] == "file"));
}

#[test]
fn closure_round_trip() {
    let r = run("a3_operators.json", Suite::Closure, &SuiteOptions::default());
    let c = r.closure.as_ref().unwrap();
    assert_eq!(c.status, "closed");
    assert_eq!(c.dim, 3);
    let emitted = c.algebra.as_ref().unwrap().to_json();
    let parsed = AlgebraFile::parse_str(&emitted).unwrap();
    assert_eq!(parsed.algebra().unwrap().entries(), load("a3.json").algebra().unwrap().entries());
    let again = run_suite("closed", &parsed, Suite::All, &SuiteOptions::default()).unwrap();
    assert!(again.records.iter().all(|x| x.verdict == RecordVerdict::Pass), "{}", again.to_text());
}

#[test]
fn closure_caps_are_inconclusive() {
    let r = run("pole_operator.json", Suite::All, &SuiteOptions::default());
    assert_eq!(r.closure.as_ref().unwrap().status, "index-range-exhausted");
    assert_eq!(r.summary.inconclusive, 1);
    assert!(!r.has_failures());
    let opts = SuiteOptions {
        closure: ClosureOptions { n_range: Some((-40, 0)), dim_cap: 10, ..ClosureOptions::default() },
        ..SuiteOptions::default()
    };
    let r = run("pole_operator.json", Suite::Closure, &opts);
    assert_eq!(r.closure.as_ref().unwrap().status, "cap-exceeded");
    assert_eq!(r.options["n_range"], "-40:0");
    assert!(!r.has_failures());
}

#[test]
fn reports_are_deterministic_and_reparse() {
    for name in ["ut2.json", "z22_twist.json"] {
        let a = run(name, Suite::All, &SuiteOptions::default()).to_json();
        let b = run(name, Suite::All, &SuiteOptions::default()).to_json();
        assert_eq!(a, b);
        assert_eq!(SuiteReport::parse_json(&a).unwrap().to_json(), a);
    }
}

#[test]
fn witnesses_are_capped() {
    let r = run("m2_a3.json", Suite::Jacobi, &SuiteOptions::default());
    let rec = r.records.iter().find(|x| x.check == "jacobi.identity").unwrap();
    assert_eq!(rec.witnesses.len(), nlva::report::MAX_WITNESSES);
    assert!(rec.witness_count > rec.witnesses.len());
    let text = r.to_text();
    assert!(text.contains("more witnesses"));
}

#[test]
fn options_change_the_report() {
    let opts = SuiteOptions { bound: 3, window: parse_window("x0=-4:4").unwrap(), q: QChoice::Value(q(-1)), ..SuiteOptions::default() };
    let r = run("a3.json", Suite::Locality, &opts);
    assert_eq!(r.options["bound"], "3");
    assert_eq!(r.options["q"], "-1");
    assert_eq!(r.options["window"], "x0=-4:4,x1=-6:6,x2=-6:6");
    assert_eq!(r.classification["locality"], "nonlocal");
}

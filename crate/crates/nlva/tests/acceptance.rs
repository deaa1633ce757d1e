//! One line per acceptance criterion. Runs without the test harness so the
//! lines always show; exits nonzero when a criterion that should hold fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use nlva::report::RecordVerdict;
use nlva::{run_suite, AlgebraFile, QChoice, Suite, SuiteOptions};
use nlva_core::algebra_core::{
    check_jacobi, check_skew_symmetry, find_locality_k, jacobi_triple, locality_triple, weak_assoc_triple,
    AlgebraStructure, JacobiContext, Search,
};
use nlva_core::constructions::{
    check_jacobi_like, cross_product, from_assoc_with_derivation, group_algebra, matrix_algebra, tensor_product,
    AbelianGroup, AssocAlgebraData, FiniteGroup, GroupActionData, RMap,
};
use nlva_core::formal_series::{delta_three_term, q, window_equal, Side, VectorQ, Window, WindowVerdict, Q};
use nlva_core::linalg::Matrix;
use nlva_core::modules_rep::{check_generation_transfer, check_locality_transfer, check_module, ModuleStructure};
use nlva_core::operator_space::{
    closure, nth_product, verify_module_structure, ClosureOptions, ClosureStatus, VertexOperator,
};

const FIXTURES: [&str; 7] =
    ["a3.json", "ut2.json", "z22_twist.json", "m2_a3.json", "a2_z2_cross.json", "a3_operators.json", "pole_operator.json"];

fn load(name: &str) -> AlgebraFile {
    AlgebraFile::read(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)).unwrap()
}

fn alg(name: &str) -> AlgebraStructure {
    load(name).algebra().unwrap()
}

fn win() -> Window {
    Window::uniform(&["x0", "x1", "x2"], -6, 6)
}

fn triples(d: usize) -> impl Iterator<Item = [usize; 3]> {
    (0..d).flat_map(move |u| (0..d).flat_map(move |v| (0..d).map(move |w| [u, v, w])))
}

fn all_weak_assoc_zero(a: &AlgebraStructure) -> bool {
    triples(a.dim()).all(|t| weak_assoc_triple(a, a, t, 8, &win()).unwrap() == Search::Found(0))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let w = Window::uniform(&["x0", "x1", "x2"], -8, 8);
    let left = delta_three_term(Side::Left, &w).unwrap();
    let right = delta_three_term(Side::Right, &w).unwrap();
    let verdict = window_equal(&left, &right, &w);
    let t = start.elapsed();
    outcome(!matches!(verdict, WindowVerdict::Differs(_)) && t < Duration::from_secs(1), format!("{verdict:?} in {t:.2?}"))
}

fn criterion_2() -> Outcome {
    let ctx = JacobiContext::new(&win()).unwrap();
    let (mut total, mut agree) = (0, 0);
    for name in ["a3.json", "ut2.json", "z22_twist.json", "m2_a3.json"] {
        let a = alg(name);
        for c in [q(1), q(-1)] {
            for t in triples(a.dim()) {
                let r = jacobi_triple(&a, &a, t, &c, 8, &ctx).unwrap();
                let jacobi = !r.witnesses.iter().any(|w| w.label == "Jacobi identity");
                let (u, v, w) = (a.unit(t[0]), a.unit(t[1]), a.unit(t[2]));
                let loc = locality_triple(&a, &u, &v, &w, &c, t.to_vec(), 8, &win()).unwrap().is_found();
                let assoc = weak_assoc_triple(&a, &a, t, 8, &win()).unwrap().is_found();
                total += 1;
                agree += usize::from(jacobi == (loc && assoc));
            }
        }
    }
    outcome(agree == total, format!("{agree}/{total} triples agree"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let r = run_suite("a3.json", &load("a3.json"), Suite::All, &SuiteOptions::default()).unwrap();
    let t = start.elapsed();
    let all_pass = r.records.iter().all(|x| x.verdict == RecordVerdict::Pass);
    let a = alg("a3.json");
    let mut orders_zero = true;
    for u in 0..3 {
        for v in 0..3 {
            orders_zero &= find_locality_k(&a, 3, u, v, &q(1), 8, &win()).unwrap() == Search::Found(0);
            orders_zero &= check_skew_symmetry(&a, u, v, &q(1), 8, &win()).unwrap().is_pass();
        }
    }
    orders_zero &= all_weak_assoc_zero(&a);
    outcome(all_pass && orders_zero && t < Duration::from_secs(5), format!("{} records, k = l = 0, {t:.2?}", r.records.len()))
}

fn criterion_4() -> Outcome {
    let a = alg("ut2.json");
    let assoc = all_weak_assoc_zero(&a);
    let witness_ok = match find_locality_k(&a, 3, 0, 1, &q(1), 8, &win()).unwrap() {
        Search::NotFound { constant_witness: true, witness: Some(w), .. } => {
            w.lhs == a.unit(1) && w.rhs.is_zero() && w.exponent == [0, 0]
        }
        _ => false,
    };
    let mut matches = 0;
    for u in 0..3 {
        for v in 0..3 {
            let loc = find_locality_k(&a, 3, u, v, &q(1), 8, &win()).unwrap().is_found();
            matches += usize::from(loc == check_skew_symmetry(&a, u, v, &q(1), 8, &win()).unwrap().is_pass());
        }
    }
    outcome(assoc && witness_ok && matches == 9, format!("constant witness E12 vs 0: {witness_ok}, skew/locality match {matches}/9"))
}

fn criterion_5() -> Outcome {
    let f = load("z22_twist.json");
    let a = f.algebra().unwrap();
    let grading = f.grading().unwrap().unwrap();
    let eps = f.cocycle().unwrap().unwrap();
    let valid = grading.validate(&a).is_ok() && eps.validate().is_ok();
    let c = eps.commutation(&[1, 0], &[0, 1]);
    let deg = &grading.degrees;
    let cq = |u: usize, v: usize| eps.commutation(&deg[u], &deg[v]);
    let mut graded_local = true;
    for u in 0..4 {
        for v in 0..4 {
            graded_local &= find_locality_k(&a, 4, u, v, &cq(u, v), 8, &win()).unwrap() == Search::Found(0);
        }
    }
    let (g10, g01) = (a.index_of("g10").unwrap(), a.index_of("g01").unwrap());
    let plain_fails = !find_locality_k(&a, 4, g10, g01, &q(1), 8, &win()).unwrap().is_found();
    let ctx = JacobiContext::new(&win()).unwrap();
    let jacobi = (0..4).all(|u| (0..4).all(|v| check_jacobi(&a, &a, u, v, &cq(u, v), 8, &ctx).unwrap().is_pass()));
    outcome(
        valid && c == q(-1) && graded_local && plain_fails && jacobi,
        format!("c((1,0),(0,1)) = {c}, q = c local: {graded_local}, q = 1 refuted: {plain_fails}, Jacobi: {jacobi}"),
    )
}

fn m2q() -> AlgebraStructure {
    from_assoc_with_derivation(&AssocAlgebraData::matrix_units(2)).unwrap()
}

fn criterion_6() -> Outcome {
    let a3 = alg("a3.json");
    let m = matrix_algebra(&a3, 2).unwrap();
    let t = tensor_product(&[a3, m2q()]).unwrap();
    let tables = m.entries() == t.entries() && m.vacuum() == t.vacuum() && m.basis() == t.basis();
    let shipped = alg("m2_a3.json") == m;
    let assoc = all_weak_assoc_zero(&m);
    let ctx = JacobiContext::new(&win()).unwrap();
    let r = check_jacobi_like(&m, &RMap::tensor_swap(12, 4), 8, &ctx).unwrap();
    outcome(tables && shipped && assoc && r.is_pass(), format!("tables equal: {tables}, Jacobi-like: {}", r.is_pass()))
}

fn criterion_7() -> Outcome {
    let f = load("a2_z2_cross.json");
    let x = f.algebra().unwrap();
    let act = f.group_action().unwrap().unwrap();
    let assoc = triples(x.dim()).all(|t| weak_assoc_triple(&x, &x, t, 8, &win()).unwrap().is_found());
    let ctx = JacobiContext::new(&win()).unwrap();
    let r = check_jacobi_like(&x, &RMap::cross(2, &act), 8, &ctx).unwrap();
    let a2 = load("inputs/a2_z2.json").algebra().unwrap();
    let trivial = GroupActionData { group: FiniteGroup::cyclic(2), matrices: vec![Matrix::identity(2); 2] };
    let crossed = cross_product(&a2, &trivial).unwrap();
    let tensored = tensor_product(&[a2, group_algebra(&AbelianGroup::new(vec![2]).unwrap()).unwrap()]).unwrap();
    let same = crossed.entries() == tensored.entries() && crossed.vacuum() == tensored.vacuum();
    outcome(
        assoc && r.is_pass() && triples(x.dim()).count() == 64 && same,
        format!("Jacobi-like on 64 triples: {}, trivial action equals tensor: {same}", r.is_pass()),
    )
}

fn criterion_8() -> Outcome {
    let (_, gens) = load("a3_operators.json").operators().unwrap().unwrap();
    let a3 = alg("a3.json");
    let cr = closure(3, &gens, &ClosureOptions::default()).unwrap();
    let Some(s) = cr.structure.clone() else { return outcome(false, format!("{:?}", cr.status)) };
    let closed = cr.status == ClosureStatus::Closed && s.dim() == 3 && s.entries() == a3.entries();
    let y = |i: usize| VertexOperator::from_action(&a3, &a3.unit(i));
    let product = nth_product(&y(1), &y(1), -1).unwrap() == y(2);
    let truncation = (0..6).all(|n| nth_product(&y(1), &y(1), n).unwrap().is_zero());
    let local = closure(3, &gens, &ClosureOptions { local: true, ..ClosureOptions::default() }).unwrap();
    let same = local.structure.as_ref() == Some(&s);
    let ctx = JacobiContext::new(&win()).unwrap();
    let jacobi = (0..3).all(|u| (0..3).all(|v| check_jacobi(&s, &s, u, v, &q(1), 8, &ctx).unwrap().is_pass()));
    let module = verify_module_structure(&cr, 8, &win()).unwrap().is_pass();
    outcome(
        closed && product && truncation && same && jacobi && module,
        format!("closed dim 3: {closed}, local closure identical: {same}, module: {module}"),
    )
}

/// Adjoint module checks plus locality transfer on every pair.
fn module_ok(a: &AlgebraStructure, m: &ModuleStructure, qs: &dyn Fn(usize, usize) -> Q) -> bool {
    let r = check_module(a, m, 8, true, &win()).unwrap();
    let mut ok = r.overall().is_pass();
    for u in 0..a.dim() {
        for v in 0..a.dim() {
            ok &= check_locality_transfer(a, m, u, v, &qs(u, v), 8, &win()).unwrap().is_pass();
        }
    }
    ok
}

fn criterion_9() -> Outcome {
    let mut adjoint_ok = true;
    for name in ["a3.json", "ut2.json", "z22_twist.json", "m2_a3.json", "a2_z2_cross.json"] {
        let a = alg(name);
        adjoint_ok &= module_ok(&a, &ModuleStructure::adjoint(&a), &|_, _| q(1));
    }
    let f = load("m2_a3.json");
    let (m, w2) = (f.algebra().unwrap(), f.module().unwrap().unwrap());
    let w2_ok = module_ok(&m, &w2, &|_, _| q(1));
    let transfer = check_generation_transfer(&ModuleStructure::adjoint(&alg("a3.json")), 2).unwrap().is_pass();
    let stuck: Vec<&str> =
        (0..w2.dim()).filter(|&j| !w2.generates(&VectorQ::unit(w2.dim(), j))).map(|j| w2.basis()[j].as_str()).collect();
    outcome(
        adjoint_ok && w2_ok && transfer && stuck.is_empty(),
        format!(
            "adjoint modules: {adjoint_ok}, (A3)^2: {w2_ok}, generation transfer: {transfer}, basis vectors not generating (A3)^2: [{}]",
            stuck.join(", ")
        ),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let mut identical = true;
    for name in FIXTURES {
        let f = load(name);
        let opts = SuiteOptions::default();
        let a = run_suite(name, &f, Suite::All, &opts).unwrap().to_json();
        let b = run_suite(name, &f, Suite::All, &opts).unwrap().to_json();
        identical &= a == b;
    }
    let z = load("z22_twist.json");
    let opts = SuiteOptions { q: QChoice::FromCocycle, ..SuiteOptions::default() };
    identical &= run_suite("z", &z, Suite::All, &opts).unwrap().to_json() == run_suite("z", &z, Suite::All, &opts).unwrap().to_json();
    let t = start.elapsed();
    outcome(identical && t < Duration::from_secs(60), format!("all fixtures twice in {t:.2?}, byte-identical: {identical}"))
}

/// Criteria whose literal claim does not hold; see the note printed with them.
const KNOWN_FALSE: [usize; 1] = [9];

fn main() {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut unexpected = Vec::new();
    for (i, c) in criteria.iter().enumerate() {
        let n = i + 1;
        let o = c();
        println!("criterion {n}: {} ({})", if o.pass { "pass" } else { "fail" }, o.detail);
        if o.pass == KNOWN_FALSE.contains(&n) {
            unexpected.push(n);
        }
    }
    println!(
        "note: criterion 9 claims every basis vector generates (A3)^2; t and t2 span a proper ideal of A3, so in any row they generate a proper submodule"
    );
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::algebra_core::{check_jacobi, find_weak_assoc_l, AlgebraStructure, JacobiContext, Search};
use crate::constructions::{cocycle_twist, group_algebra, matrix_algebra, AbelianGroup, CocycleData, GradedTag};
use crate::formal_series::{binom_expand, q, sign_pow, VectorQ, Window};
use crate::linalg::Matrix;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn e(d: usize, i: usize) -> VectorQ {
    VectorQ::unit(d, i)
}

fn a3() -> AlgebraStructure {
    let entries = vec![
        (0, 0, -1, e(3, 0)),
        (0, 1, -1, e(3, 1)),
        (0, 2, -1, e(3, 2)),
        (1, 0, -1, e(3, 1)),
        (1, 1, -1, e(3, 2)),
        (1, 0, -2, e(3, 2)),
        (2, 0, -1, e(3, 2)),
    ];
    AlgebraStructure::new(names(&["1", "t", "t^2"]), e(3, 0), entries).unwrap()
}

fn ut2() -> AlgebraStructure {
    let entries = vec![(0, 0, -1, e(3, 0)), (0, 1, -1, e(3, 1)), (1, 2, -1, e(3, 1)), (2, 2, -1, e(3, 2))];
    AlgebraStructure::new(names(&["E11", "E12", "E22"]), VectorQ::from_ints(&[1, 0, 1]), entries).unwrap()
}

fn z22() -> AlgebraStructure {
    let g = AbelianGroup::new(vec![2, 2]).unwrap();
    let grading = GradedTag { group: g.clone(), degrees: g.elements().collect() };
    let eps = CocycleData::from_fn(g.clone(), |a, b| sign_pow(a[1] * b[0]));
    cocycle_twist(&group_algebra(&g).unwrap(), &grading, &eps).unwrap()
}

fn y(alg: &AlgebraStructure, i: usize) -> VertexOperator {
    VertexOperator::from_action(alg, &alg.unit(i))
}

fn win() -> Window {
    Window::uniform(&["x0", "x1", "x2", "x"], -6, 6)
}

fn matrix(rows: &[&[i64]]) -> Matrix {
    let r: Vec<VectorQ> = rows.iter().map(|x| VectorQ::from_ints(x)).collect();
    Matrix::from_rows(rows.len(), &r)
}

fn op(entries: &[(i64, Matrix)]) -> VertexOperator {
    let m: BTreeMap<i64, Matrix> = entries.iter().cloned().collect();
    VertexOperator::new(2, m).unwrap()
}

/// Residue of the two expansions, computed on a window with generic series
/// arithmetic, at the power `p` of `x`.
fn brute_force(a: &VertexOperator, b: &VertexOperator, n: i64, p: i64) -> Option<VectorQ> {
    let w = Window::uniform(&["x1", "x"], -10, 10);
    let f = operator_product(&[a.clone(), b.clone()], &["x1".to_string(), "x".to_string()]).unwrap();
    let first = binom_expand(n, "x1", "x", -1, &w).unwrap().mul(&f, &w).unwrap();
    let second = binom_expand(n, "x", "x1", -1, &w).unwrap().scale(&sign_pow(n)).mul(&f, &w).unwrap();
    first.sub(&second).unwrap().residue("x1").unwrap().coeff(&[p]).ok()
}

#[test]
fn residue_formula_matches_brute_force() {
    let a = op(&[(-1, matrix(&[&[0, 1], &[0, 0]])), (1, matrix(&[&[1, 2], &[3, 4]]))]);
    let b = op(&[(-2, matrix(&[&[1, 0], &[1, 1]])), (0, matrix(&[&[0, 0], &[5, 0]]))]);
    let mut checked = 0;
    for n in -4..=2 {
        let c = nth_product(&a, &b, n).unwrap();
        for p in -4..=4 {
            let Some(expected) = brute_force(&a, &b, n, p) else { continue };
            assert_eq!(VectorQ(c.mode(-p - 1).entries().to_vec()), expected, "n = {n}, p = {p}");
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn products_on_a3() {
    let a = a3();
    let (one, t, t2) = (VertexOperator::identity(3), y(&a, 1), y(&a, 2));
    assert_eq!(nth_product(&t, &t, -1).unwrap(), t2);
    for n in 0..4 {
        assert!(nth_product(&t, &t, n).unwrap().is_zero());
    }
    assert_eq!(nth_product(&t, &one, -2).unwrap(), t.derivative());
    for n in -3..3 {
        let c = nth_product(&one, &t, n).unwrap();
        assert_eq!(c, if n == -1 { t.clone() } else { VertexOperator::zero(3) });
    }
    assert_eq!(find_compat_order(&[one.clone(), t.clone()], 4, &win()).unwrap(), Search::Found(0));
    assert_eq!(find_compat_order(&[t.clone(), t2.clone(), t.clone()], 4, &win()).unwrap(), Search::Found(0));
}

#[test]
fn products_reproduce_the_algebra() {
    let m = matrix_algebra(&a3(), 2).unwrap();
    for alg in [a3(), ut2(), z22(), m] {
        for u in 0..alg.dim() {
            for v in 0..alg.dim() {
                for n in -4..2 {
                    let lhs = nth_product(&y(&alg, u), &y(&alg, v), n).unwrap();
                    let rhs = VertexOperator::from_action(&alg, &alg.product(u, v, n));
                    assert_eq!(lhs, rhs, "{:?} ({u}, {v}, {n})", alg.basis());
                }
            }
        }
    }
}

#[test]
fn reordering_operator() {
    let a = a3();
    let t = y(&a, 1);
    let t0 = truncated_t(&t, &t, 0).unwrap();
    for k in 1..=3 {
        assert_eq!(truncated_t(&t, &t, k).unwrap(), t0);
    }
    let mut ab: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    let mut ba: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for (ex, ma) in t.coeffs() {
        for (ey, mb) in t.coeffs() {
            ab.insert((*ex, *ey), ma.mul(mb));
            ba.insert((*ex, *ey), mb.mul(ma));
        }
    }
    ab.retain(|_, m| !m.is_zero());
    ba.retain(|_, m| !m.is_zero());
    assert_eq!(t0, ab);
    assert_eq!(t0, ba);
}

#[test]
fn local_products() {
    let a = a3();
    for (u, v) in [(1, 2), (1, 1), (2, 1)] {
        for n in -4..2 {
            assert_eq!(nth_product_local(&y(&a, u), &y(&a, v), n).unwrap(), nth_product(&y(&a, u), &y(&a, v), n).unwrap());
        }
    }
    // Constant operators never reach the reversed term: both products agree
    // even on the noncommuting pair (E11, E12).
    let u = ut2();
    let (e11, e12) = (y(&u, 0), y(&u, 1));
    for n in -3..2 {
        assert_eq!(nth_product_local(&e11, &e12, n).unwrap(), nth_product(&e11, &e12, n).unwrap());
    }
    // With a pole on the first operator the reversed product shows up.
    let mut shifted = BTreeMap::new();
    shifted.insert(-1, e11.mode(-1));
    let pole = VertexOperator::new(3, shifted).unwrap();
    let differs = (-3..2).any(|n| nth_product_local(&pole, &e12, n).unwrap() != nth_product(&pole, &e12, n).unwrap());
    assert!(differs);
}

#[test]
fn a3_closure() {
    let a = a3();
    let gens = vec![(String::from("Y(t)"), y(&a, 1))];
    let cr = closure(3, &gens, &ClosureOptions::default()).unwrap();
    assert_eq!(cr.status, ClosureStatus::Closed);
    assert_eq!(cr.span.names(), &names(&["1_W", "Y(t)", "Y(t)_(-2)1_W"])[..]);
    let s = cr.structure.clone().unwrap();
    assert_eq!(s.entries(), a.entries());
    assert_eq!(s.vacuum(), a.vacuum());

    let local = closure(3, &gens, &ClosureOptions { local: true, ..ClosureOptions::default() }).unwrap();
    assert_eq!(local.structure.unwrap(), s);

    let ctx = JacobiContext::new(&win()).unwrap();
    for u in 0..3 {
        for v in 0..3 {
            assert!(check_jacobi(&s, &s, u, v, &q(1), 8, &ctx).unwrap().is_pass());
        }
    }
    assert!(verify_module_structure(&cr, 8, &win()).unwrap().is_pass());
}

#[test]
fn empty_closure_is_the_vacuum() {
    let cr = closure(2, &[], &ClosureOptions::default()).unwrap();
    assert_eq!(cr.status, ClosureStatus::Closed);
    assert_eq!(cr.span.dim(), 1);
    assert!(verify_module_structure(&cr, 4, &win()).unwrap().is_pass());
}

#[test]
fn pole_generator_exhausts_the_index_range() {
    let a = op(&[(-1, matrix(&[&[0, 1], &[0, 0]]))]);
    let cr = closure(2, &[(String::from("a"), a.clone())], &ClosureOptions::default()).unwrap();
    assert_eq!(cr.status, ClosureStatus::IndexRangeExhausted);
    assert!(cr.structure.is_none());
    let wide = ClosureOptions { n_range: Some((-40, 0)), dim_cap: 10, ..ClosureOptions::default() };
    let cr = closure(2, &[(String::from("a"), a)], &wide).unwrap();
    assert_eq!(cr.status, ClosureStatus::CapExceeded(11));
}

#[test]
fn corrupted_span_fails_module_check() {
    let a = a3();
    let mut cr = closure(3, &[(String::from("Y(t)"), y(&a, 1))], &ClosureOptions::default()).unwrap();
    let mut coeffs = cr.span.ops[1].coeffs().clone();
    coeffs.remove(&1);
    cr.span.ops[1] = VertexOperator::new(3, coeffs).unwrap();
    let r = verify_module_structure(&cr, 8, &win()).unwrap();
    assert!(r.is_fail());
    assert!(!r.witnesses.is_empty());
}

#[test]
fn operator_associativity() {
    let a = a3();
    let t = y(&a, 1);
    let r = check_prop_assoc(&t, &t, &e(3, 0), 8, &win()).unwrap();
    assert!(r.is_pass());
    assert_eq!(r.found_order, Some(0));
    let one = VertexOperator::identity(3);
    assert_eq!(check_prop_assoc(&one, &t, &e(3, 1), 8, &win()).unwrap().found_order, Some(0));

    let m = matrix_algebra(&a, 2).unwrap();
    for (u, v) in [(0, 1), (4, 5), (5, 4)] {
        for w in 0..m.dim() {
            let r = check_prop_assoc(&y(&m, u), &y(&m, v), &e(12, w), 8, &win()).unwrap();
            assert!(r.is_pass());
            let global = find_weak_assoc_l(&m, &m, u, w, 8, &win()).unwrap().found().unwrap();
            assert!(r.found_order.unwrap() <= global);
        }
    }

    let pole = op(&[(-1, matrix(&[&[0, 1], &[0, 0]])), (0, Matrix::identity(2))]);
    let r = check_prop_assoc(&pole, &pole, &e(2, 1), 8, &win()).unwrap();
    assert!(r.is_pass());
    assert!(!r.exact);
}

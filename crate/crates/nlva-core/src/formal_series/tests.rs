use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::Error;

fn s(x: i64) -> VectorQ {
    VectorQ::scalar(q(x))
}

fn poly(vars: &[&str], terms: &[(&[i64], i64)], w: &Window) -> Distribution {
    Distribution::from_terms(vars, 1, terms.iter().map(|(e, c)| (e.to_vec(), s(*c))), w).unwrap()
}

#[test]
fn delta_has_unit_coefficients() {
    let w = Window::default_for(&["x"]);
    assert_eq!(delta("x", &w).unwrap().coeff(&[5]).unwrap(), s(1));
    let z = Distribution::zero(&["x1", "x2"], 1, &Window::default_for(&["x1", "x2"])).unwrap();
    assert_eq!(z.coeff(&[0, 0]).unwrap(), s(0));
    assert_eq!(z.coeff(&[40, 0]), Err(Error::ExponentOutsideWindow(vec![40, 0])));
}

#[test]
fn binomial_convention() {
    let w = Window::default_for(&["x1", "x2"]);
    let inv = binom_expand(-1, "x1", "x2", -1, &w).unwrap();
    assert_eq!(inv.coeff(&[-3, 2]).unwrap(), s(1));
    assert!(!inv.is_exact_complete());

    let sq = binom_expand(2, "x1", "x2", -1, &w).unwrap();
    let expected = poly(&["x1", "x2"], &[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)], &w);
    assert_eq!(window_equal(&sq, &expected, &w), WindowVerdict::Equal);

    let m2 = binom_expand(-2, "x1", "x2", 1, &w).unwrap();
    assert_eq!(m2.coeff(&[-4, 2]).unwrap(), s(3));
}

#[test]
fn three_term_delta_identity() {
    let w = Window::uniform(&["x0", "x1", "x2"], -8, 8);
    let left = delta_three_term(Side::Left, &w).unwrap();
    let right = delta_three_term(Side::Right, &w).unwrap();
    assert_eq!(window_equal(&left, &right, &w), WindowVerdict::EqualOnWindow);
    // Term n = 0, i = 0 of the right side is x2^-1.
    assert_eq!(right.coeff(&[0, 0, -1]).unwrap(), s(1));
    assert_eq!(right.coeff(&[-1, 0, 0]).unwrap(), s(0));
}

#[test]
fn residue_of_associator_delta_is_one() {
    let w = Window::uniform(&["x0", "x1", "x2"], -6, 6);
    let right = delta_three_term(Side::Right, &w).unwrap();
    let r = right.residue("x1").unwrap();
    for (e, v) in r.terms() {
        assert_eq!(e.as_slice(), &[0, 0]);
        assert_eq!(v, &s(1));
    }
    assert_eq!(r.coeff(&[0, 0]).unwrap(), s(1));
}

#[test]
fn product_with_inverse_expansion_is_one() {
    let w = Window::default_for(&["x1", "x2"]);
    for k in 0..4 {
        let p = binom_expand(k, "x1", "x2", -1, &w).unwrap();
        let inv = binom_expand(-k, "x1", "x2", -1, &w).unwrap();
        let prod = p.mul(&inv, &w).unwrap();
        let one = Distribution::constant(s(1));
        assert!(window_equal(&prod, &one, &prod.window()).matches(), "k = {k}");
        assert_eq!(prod.coeff(&[0, 0]).unwrap(), s(1));
    }
}

#[test]
fn delta_squared_is_not_summable() {
    let w = Window::default_for(&["x"]);
    let d = delta("x", &w).unwrap();
    assert_eq!(d.mul(&d, &w), Err(Error::NonSummableProduct("x".into())));
}

#[test]
fn delta_times_polynomial_matches_brute_force() {
    let w = Window::uniform(&["x0", "x1", "x2"], -6, 6);
    let fwd = delta_term(DeltaTerm::Forward, &w).unwrap();
    let sq = binom_expand(2, "x1", "x2", -1, &w).unwrap();
    let prod = fwd.mul(&sq, &w).unwrap();
    // Independent oracle: x0^-1 delta((x1-x2)/x0) (x1-x2)^2 = sum_n x0^(-n-1) (x1-x2)^(n+2).
    let (lo, hi) = prod.window().bounds("x0").unwrap();
    for e0 in lo..=hi {
        let n = -e0 - 1;
        let direct = binom_expand(n + 2, "x1", "x2", -1, &w).unwrap();
        for e1 in -4..=4 {
            for e2 in 0..=4 {
                let got = prod.coeff(&[e0, e1, e2]);
                let Ok(got) = got else { continue };
                assert_eq!(got, direct.coeff(&[e1, e2]).unwrap(), "at {:?}", (e0, e1, e2));
            }
        }
    }
}

#[test]
fn residues() {
    let w = Window::default_for(&["x", "x1", "x2"]);
    let d = delta("x", &w).unwrap();
    assert_eq!(d.residue("x").unwrap().coeff(&[]).unwrap(), s(1));
    let x2 = poly(&["x"], &[(&[2], 1)], &w);
    assert!(x2.residue("x").unwrap().is_zero());
    let inv = binom_expand(-1, "x1", "x2", -1, &w).unwrap();
    let r = inv.residue("x1").unwrap();
    let one = poly(&["x2"], &[(&[0], 1)], &w);
    assert!(window_equal(&r, &one, &w).matches());
}

#[test]
fn taylor_shift_orders() {
    let w = Window::default_for(&["x", "x0", "x2"]);
    let x3 = poly(&["x"], &[(&[3], 1)], &w);
    let shifted = x3.taylor_shift("x", "x0", "x2", &w).unwrap();
    let expected = binom_expand(3, "x0", "x2", 1, &w).unwrap();
    assert_eq!(window_equal(&shifted, &expected, &w), WindowVerdict::Equal);

    for l in 0..4 {
        let a = binom_expand(l, "x0", "x2", 1, &w).unwrap();
        let b = binom_expand(l, "x2", "x0", 1, &w).unwrap();
        assert_eq!(window_equal(&a, &b, &w), WindowVerdict::Equal);
    }

    let inv = poly(&["x"], &[(&[-1], 1)], &w);
    let a = inv.taylor_shift("x", "x0", "x2", &w).unwrap();
    let b = inv.taylor_shift("x", "x2", "x0", &w).unwrap();
    let a = a.align(&["x0".into(), "x2".into()]).unwrap();
    let b = b.align(&["x0".into(), "x2".into()]).unwrap();
    for i in 0..4 {
        assert_ne!(a.coeff(&[-1 - i, i]).unwrap(), b.coeff(&[-1 - i, i]).unwrap());
    }
}

#[test]
fn taylor_shift_into_existing_variable() {
    // (x0 + x2) * x2 from y * x2 with y -> x0 + x2.
    let w = Window::default_for(&["y", "x0", "x2"]);
    let d = poly(&["y", "x2"], &[(&[1, 1], 1)], &w);
    let out = d.taylor_shift("y", "x0", "x2", &w).unwrap();
    let expected = poly(&["x0", "x2"], &[(&[1, 1], 1), (&[0, 2], 1)], &w);
    assert_eq!(window_equal(&out, &expected, &w), WindowVerdict::Equal);
}

#[test]
fn derivatives() {
    let w = Window::default_for(&["x"]);
    let x3 = poly(&["x"], &[(&[3], 1)], &w);
    assert_eq!(window_equal(&x3.derivative("x").unwrap(), &poly(&["x"], &[(&[2], 3)], &w), &w), WindowVerdict::Equal);
    let d = delta("x", &w).unwrap().derivative("x").unwrap();
    for n in -5..5 {
        assert_eq!(d.coeff(&[n]).unwrap(), s(n + 1));
    }
    let c = poly(&["x"], &[(&[0], 7)], &w);
    assert!(c.derivative("x").unwrap().is_zero());
}

#[test]
fn window_comparisons() {
    let w = Window::new(&[("x", 0, 2)]);
    let a = poly(&["x"], &[(&[1], 1)], &w);
    let b = poly(&["x"], &[(&[1], 1), (&[2], 1)], &w);
    assert_eq!(window_equal(&a, &a, &w), WindowVerdict::Equal);
    assert_eq!(window_equal(&a, &b, &w), WindowVerdict::Differs(vec![2]));
}

#[test]
fn vector_coefficients_scale_by_scalars() {
    let w = Window::default_for(&["x"]);
    let v = Distribution::from_terms(&["x"], 2, [(vec![1], VectorQ::from_ints(&[1, 2]))], &w).unwrap();
    let c = poly(&["x"], &[(&[0], 2), (&[1], 1)], &w);
    let p = c.mul(&v, &w).unwrap();
    let terms: Vec<_> = p.terms().map(|(e, v)| (e.clone(), v.clone())).collect();
    assert_eq!(terms, vec![(vec![1], VectorQ::from_ints(&[2, 4])), (vec![2], VectorQ::from_ints(&[1, 2]))]);
    assert!(p.is_exact_complete());
}

use std::collections::BTreeMap;

use nlva_core::algebra_core::{Action, AlgebraStructure};
use nlva_core::constructions::tensor_product;
use nlva_core::formal_series::{binom_expand, binomial, q, sign_pow, window_equal, VectorQ, Window, WindowVerdict};
use nlva_core::linalg::Matrix;
use nlva_core::operator_space::{nth_product, operator_product, truncated_t, VertexOperator};
use proptest::prelude::*;

fn matrix(dim: usize, xs: &[i64]) -> Matrix {
    let rows: Vec<VectorQ> = xs.chunks(dim).map(VectorQ::from_ints).collect();
    Matrix::from_rows(dim, &rows)
}

/// Operators on Q^2 with up to three powers in `[-2, 2]`.
fn operator() -> impl Strategy<Value = VertexOperator> {
    prop::collection::btree_map(-2i64..=2, prop::collection::vec(-2i64..=2, 4), 0..=3).prop_map(|m| {
        let coeffs: BTreeMap<i64, Matrix> = m.into_iter().map(|(p, xs)| (p, matrix(2, &xs))).collect();
        VertexOperator::new(2, coeffs).unwrap()
    })
}

fn trivial() -> AlgebraStructure {
    AlgebraStructure::new(vec!["1".into()], VectorQ::unit(1, 0), vec![(0, 0, -1, VectorQ::unit(1, 0))]).unwrap()
}

/// Commutative constant algebra on `one, a` with `a a = c one`.
fn dual_numbers(c: i64) -> AlgebraStructure {
    let e = |i| VectorQ::unit(2, i);
    let mut entries = vec![(0, 0, -1, e(0)), (0, 1, -1, e(1)), (1, 0, -1, e(1))];
    if c != 0 {
        entries.push((1, 1, -1, e(0).scaled(&q(c))));
    }
    AlgebraStructure::new(vec!["one".into(), "a".into()], e(0), entries).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn binomial_powers_multiply(n in 0i64..5, m in 0i64..5) {
        let w = Window::uniform(&["x1", "x2"], -10, 10);
        let a = binom_expand(n, "x1", "x2", -1, &w).unwrap();
        let b = binom_expand(m, "x1", "x2", -1, &w).unwrap();
        let ab = binom_expand(n + m, "x1", "x2", -1, &w).unwrap();
        prop_assert_eq!(window_equal(&a.mul(&b, &w).unwrap(), &ab, &w), WindowVerdict::Equal);
    }

    #[test]
    fn negative_binomial_coefficients(n in -5i64..0, i in 0u64..6) {
        let w = Window::uniform(&["x1", "x2"], -12, 12);
        let d = binom_expand(n, "x1", "x2", 1, &w).unwrap();
        let c = d.coeff(&[n - i as i64, i as i64]).unwrap();
        prop_assert_eq!(&c[0], &binomial(n, i));
    }

    #[test]
    fn residue_formula_matches_series(a in operator(), b in operator(), n in -3i64..2, p in -3i64..3) {
        let w = Window::uniform(&["x1", "x"], -10, 10);
        let f = operator_product(&[a.clone(), b.clone()], &["x1".to_string(), "x".to_string()]).unwrap();
        let first = binom_expand(n, "x1", "x", -1, &w).unwrap().mul(&f, &w).unwrap();
        let second = binom_expand(n, "x", "x1", -1, &w).unwrap().scale(&sign_pow(n)).mul(&f, &w).unwrap();
        let expected = first.sub(&second).unwrap().residue("x1").unwrap().coeff(&[p]).unwrap();
        let c = nth_product(&a, &b, n).unwrap();
        prop_assert_eq!(VectorQ(c.mode(-p - 1).entries().to_vec()), expected);
    }

    #[test]
    fn reordering_does_not_depend_on_k(a in operator(), b in operator(), k in 1i64..4) {
        prop_assert_eq!(truncated_t(&a, &b, k).unwrap(), truncated_t(&a, &b, 0).unwrap());
    }

    #[test]
    fn tensoring_with_the_trivial_algebra(c in -3i64..3) {
        let a = dual_numbers(c);
        let t = tensor_product(&[a.clone(), trivial()]).unwrap();
        prop_assert_eq!(t.entries(), a.entries());
        prop_assert_eq!(t.vacuum(), a.vacuum());
        prop_assert_eq!(t.field(&t.unit(1)), a.field(&a.unit(1)));
    }
}

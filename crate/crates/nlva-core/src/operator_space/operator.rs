use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra_core::{Action, Field, Search};
use crate::error::{Error, Result};
use crate::formal_series::{binom_expand, binomial, q, sign_pow, Distribution, VectorQ, Window, Q};
use crate::linalg::Matrix;

/// Laurent polynomial `a(x) = sum_p A_p x^p` with `dim x dim` matrix
/// coefficients, keyed by the power `p` (the mode `a_n` sits at `p = -n-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexOperator {
    dim: usize,
    coeffs: BTreeMap<i64, Matrix>,
}

impl VertexOperator {
    pub fn new(dim: usize, coeffs: BTreeMap<i64, Matrix>) -> Result<Self> {
        if let Some(m) = coeffs.values().find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(m.rows(), dim));
        }
        let mut out = VertexOperator { dim, coeffs };
        out.coeffs.retain(|_, m| !m.is_zero());
        Ok(out)
    }

    pub fn zero(dim: usize) -> Self {
        VertexOperator { dim, coeffs: BTreeMap::new() }
    }

    /// The identity operator `1_W`.
    pub fn identity(dim: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, Matrix::identity(dim));
        VertexOperator { dim, coeffs }
    }

    /// `Y_W(v, x)` for an algebra vector acting through `act`.
    pub fn from_action<A: Action + ?Sized>(act: &A, v: &VectorQ) -> Self {
        Self::from_field(act.space_dim(), act.field(v))
    }

    pub fn from_field(dim: usize, f: Field) -> Self {
        let mut out = VertexOperator { dim, coeffs: f };
        out.coeffs.retain(|_, m| !m.is_zero());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Matrix> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Mode `a_n`, the coefficient of `x^(-n-1)`.
    pub fn mode(&self, n: i64) -> Matrix {
        self.coeffs.get(&(-n - 1)).cloned().unwrap_or_else(|| Matrix::zeros(self.dim, self.dim))
    }

    /// Range of powers of `x` carrying a nonzero coefficient.
    pub fn power_range(&self) -> Option<(i64, i64)> {
        Some((*self.coeffs.keys().next()?, *self.coeffs.keys().next_back()?))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(p, _)| **p != 0)
            .map(|(p, m)| (p - 1, m.scaled(&q(*p))))
            .collect();
        VertexOperator { dim: self.dim, coeffs }
    }

    pub fn add_scaled(&mut self, c: &Q, other: &VertexOperator) {
        for (p, m) in &other.coeffs {
            self.coeffs.entry(*p).or_insert_with(|| Matrix::zeros(self.dim, self.dim)).axpy(c, m);
        }
        self.coeffs.retain(|_, m| !m.is_zero());
    }

    pub fn apply(&self, w: &VectorQ) -> BTreeMap<i64, VectorQ> {
        crate::algebra_core::apply_field(&self.coeffs, w)
    }

    /// Sparse coefficients keyed by `(power, row, col)`, for span arithmetic.
    pub fn fingerprint(&self) -> BTreeMap<(i64, usize, usize), Q> {
        let mut out = BTreeMap::new();
        for (p, m) in &self.coeffs {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    let x = m.get(r, c);
                    if !x.is_zero() {
                        out.insert((*p, r, c), x.clone());
                    }
                }
            }
        }
        out
    }

    /// Inverse of `fingerprint`.
    pub fn from_fingerprint(dim: usize, fp: &BTreeMap<(i64, usize, usize), Q>) -> Self {
        let mut coeffs: BTreeMap<i64, Matrix> = BTreeMap::new();
        for ((p, r, c), x) in fp {
            coeffs.entry(*p).or_insert_with(|| Matrix::zeros(dim, dim)).set(*r, *c, x.clone());
        }
        VertexOperator { dim, coeffs }
    }
}

fn flatten(m: &Matrix) -> VectorQ {
    VectorQ(m.entries().to_vec())
}

/// `a1(x1) ... ar(xr)` with matrix coefficients flattened row-major.
pub fn operator_product(seq: &[VertexOperator], vars: &[String]) -> Result<Distribution> {
    let dim = seq.first().map_or(0, VertexOperator::dim);
    if let Some(a) = seq.iter().find(|a| a.dim() != dim) {
        return Err(Error::DimensionMismatch(a.dim(), dim));
    }
    let mut terms: BTreeMap<Vec<i64>, Matrix> = BTreeMap::new();
    terms.insert(vec![0; seq.len()], Matrix::identity(dim));
    for (pos, a) in seq.iter().enumerate() {
        let mut next: BTreeMap<Vec<i64>, Matrix> = BTreeMap::new();
        for (e, m) in &terms {
            for (p, c) in &a.coeffs {
                let prod = m.mul(c);
                if prod.is_zero() {
                    continue;
                }
                let mut ne = e.clone();
                ne[pos] = *p;
                let slot = next.entry(ne).or_insert_with(|| Matrix::zeros(dim, dim));
                *slot = slot.add(&prod);
            }
        }
        terms = next;
    }
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    Ok(crate::algebra_core::finite_dist(&names, dim * dim, terms.iter().map(|(e, m)| (e.clone(), flatten(m)))))
}

fn var_names(r: usize) -> Vec<String> {
    (1..=r).map(|i| alloc::format!("x{i}")).collect()
}

/// Least `k <= bound` with `prod_{i<j} (x_i - x_j)^k a1(x1) ... ar(xr)` lower
/// truncated in every variable, decided from exact supports.
pub fn find_compat_order(seq: &[VertexOperator], bound: i64, win: &Window) -> Result<Search> {
    let vars = var_names(seq.len());
    let base = operator_product(seq, &vars)?;
    let lower_bounded = |d: &Distribution| d.support().0.iter().all(|b| b.is_empty() || b.lo.is_some());
    for k in 0..=bound {
        let mut d = base.clone();
        if k > 0 {
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    d = binom_expand(k, &vars[i], &vars[j], -1, win)?.mul(&d, win)?;
                }
            }
        }
        if lower_bounded(&d) {
            return Ok(Search::Found(k));
        }
    }
    Ok(Search::NotFound { bound, witness: None, constant_witness: false })
}

fn require_compat(a: &VertexOperator, b: &VertexOperator) -> Result<i64> {
    let win = Window::uniform(&["x1", "x2"], -1, 1);
    find_compat_order(&[a.clone(), b.clone()], 0, &win)?
        .found()
        .ok_or_else(|| Error::NotCompatible(vec![0, 1]))
}

/// Exact quotient of `p(x, y)` by `(x - y)`; `None` when not divisible.
fn divide_by_difference(p: &BTreeMap<(i64, i64), Matrix>, dim: usize) -> Option<BTreeMap<(i64, i64), Matrix>> {
    // Group by the power of x: p = sum_e P_e(y) x^e; q_{e-1} = P_e + y q_e.
    let mut by_x: BTreeMap<i64, BTreeMap<i64, Matrix>> = BTreeMap::new();
    for ((ex, ey), m) in p {
        by_x.entry(*ex).or_default().insert(*ey, m.clone());
    }
    let (lo, hi) = match (by_x.keys().next(), by_x.keys().next_back()) {
        (Some(l), Some(h)) => (*l, *h),
        _ => return Some(BTreeMap::new()),
    };
    let mut out = BTreeMap::new();
    let mut qe: BTreeMap<i64, Matrix> = BTreeMap::new();
    for e in (lo..=hi).rev() {
        let mut next: BTreeMap<i64, Matrix> = by_x.get(&e).cloned().unwrap_or_default();
        for (ey, m) in &qe {
            let slot = next.entry(ey + 1).or_insert_with(|| Matrix::zeros(dim, dim));
            *slot = slot.add(m);
        }
        next.retain(|_, m| !m.is_zero());
        if e == lo {
            return next.is_empty().then_some(out);
        }
        for (ey, m) in &next {
            out.insert((e - 1, *ey), m.clone());
        }
        qe = next;
    }
    unreachable!()
}

/// `T(a(x) b(y)) = (-y+x)^{-k} ((x-y)^k a(x) b(y))`, computed by exact
/// division, keyed by `(power of x, power of y)`.
pub fn truncated_t(a: &VertexOperator, b: &VertexOperator, k: i64) -> Result<BTreeMap<(i64, i64), Matrix>> {
    let k0 = require_compat(a, b)?;
    if k < k0 {
        return Err(Error::NotCompatible(vec![0, 1]));
    }
    let dim = a.dim();
    let mut p: BTreeMap<(i64, i64), Matrix> = BTreeMap::new();
    for (ex, ma) in &a.coeffs {
        for (ey, mb) in &b.coeffs {
            let prod = ma.mul(mb);
            for i in 0..=k {
                // (x - y)^k = sum_i C(k, i) x^(k-i) (-y)^i
                let c = binomial(k, i as u64) * sign_pow(i);
                let slot = p.entry((ex + k - i, ey + i)).or_insert_with(|| Matrix::zeros(dim, dim));
                slot.axpy(&c, &prod);
            }
        }
    }
    p.retain(|_, m| !m.is_zero());
    for _ in 0..k {
        p = divide_by_difference(&p, dim).ok_or_else(|| Error::NotCompatible(vec![0, 1]))?;
    }
    Ok(p)
}

/// `Res_{x1} ((x1-x)^n - (-x+x1)^n) x1^e1`: pairs `(power of x, coefficient)`
/// from the two expansions (the second one already negated).
fn residue_terms(n: i64, e1: i64) -> [(i64, Q); 2] {
    let mut first = (0, Q::zero());
    let i = n + e1 + 1;
    if i >= 0 {
        first = (i, binomial(n, i as u64) * sign_pow(i));
    }
    let mut second = (0, Q::zero());
    let j = -e1 - 1;
    if j >= 0 {
        second = (n - j, -(binomial(n, j as u64) * sign_pow(n - j)));
    }
    [first, second]
}

fn residue_product(a: &VertexOperator, b: &VertexOperator, n: i64, local: bool) -> VertexOperator {
    let dim = a.dim();
    let mut out: BTreeMap<i64, Matrix> = BTreeMap::new();
    for (e1, ma) in &a.coeffs {
        let [(p1, c1), (p2, c2)] = residue_terms(n, *e1);
        for (e2, mb) in &b.coeffs {
            let ab = ma.mul(mb);
            if !c1.is_zero() {
                out.entry(p1 + e2).or_insert_with(|| Matrix::zeros(dim, dim)).axpy(&c1, &ab);
            }
            if !c2.is_zero() {
                let m = if local { mb.mul(ma) } else { ab.clone() };
                out.entry(p2 + e2).or_insert_with(|| Matrix::zeros(dim, dim)).axpy(&c2, &m);
            }
        }
    }
    out.retain(|_, m| !m.is_zero());
    VertexOperator { dim, coeffs: out }
}

/// `a(x)_n b(x) = Res_{x1} ((x1-x)^n a(x1) b(x) - (-x+x1)^n T(a(x1) b(x)))`.
pub fn nth_product(a: &VertexOperator, b: &VertexOperator, n: i64) -> Result<VertexOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    require_compat(a, b)?;
    // Laurent polynomial operators have compatibility order 0, so T(a b) = a b.
    Ok(residue_product(a, b, n, false))
}

/// `Res_{x1} ((x1-x)^n a(x1) b(x) - (-x+x1)^n b(x) a(x1))`.
pub fn nth_product_local(a: &VertexOperator, b: &VertexOperator, n: i64) -> Result<VertexOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(residue_product(a, b, n, true))
}

/// Range of `n` for which `a_n b` can be nonzero: bounded above by the
/// compatibility order and below by the top power of `a` when `a` has no
/// negative powers (`None` for the lower end otherwise).
pub fn product_index_range(a: &VertexOperator) -> (Option<i64>, i64) {
    match a.power_range() {
        None => (Some(0), -1),
        Some((lo, hi)) => ((lo >= 0).then_some(-hi - 1), -1),
    }
}

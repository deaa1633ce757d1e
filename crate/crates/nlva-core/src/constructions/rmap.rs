use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::cross::GroupActionData;
use super::twist::{CocycleData, GradedTag};
use crate::algebra_core::{
    associator_side, commutation_order, ordered_product, verdict_witness, weak_assoc_triple, witness, Action, AlgebraStructure,
    CheckReport, JacobiContext,
};
use crate::error::Result;
use crate::formal_series::{Distribution, VectorQ, Window, WindowVerdict, Q};

pub type Triple = [usize; 3];

/// Linear endomorphism of `V x V x V`, stored by its images on basis
/// triples. Triples without an entry are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMap {
    pub dim: usize,
    pub images: BTreeMap<Triple, Vec<(Triple, Q)>>,
}

impl RMap {
    pub fn identity(dim: usize) -> Self {
        RMap { dim, images: BTreeMap::new() }
    }

    /// `R(ua x vb x wc) = ub x va x wc` on `V x A` with `dim A = inner`.
    pub fn tensor_swap(dim: usize, inner: usize) -> Self {
        let mut images = BTreeMap::new();
        for x in 0..dim {
            for y in 0..dim {
                let (u, a, v, b) = (x / inner, x % inner, y / inner, y % inner);
                if a == b {
                    continue;
                }
                for z in 0..dim {
                    images.insert([x, y, z], vec![([u * inner + b, v * inner + a, z], Q::one())]);
                }
            }
        }
        RMap { dim, images }
    }

    /// `R(v x u x w) = c(g, h) (v x u x w)` for `u` of degree `g`, `v` of degree `h`.
    pub fn cocycle(grading: &GradedTag, eps: &CocycleData) -> Self {
        let dim = grading.degrees.len();
        let mut images = BTreeMap::new();
        for x in 0..dim {
            for y in 0..dim {
                let c = eps.commutation(&grading.degrees[y], &grading.degrees[x]);
                if c.is_one() {
                    continue;
                }
                for z in 0..dim {
                    images.insert([x, y, z], vec![([x, y, z], c.clone())]);
                }
            }
        }
        RMap { dim, images }
    }

    /// `R(v g2 x u g1 x w g3) = g1(v) g2 x g2^-1(u) g1 x k(w) k g3` with
    /// `k = g1^-1 g2^-1 g1 g2`, on the cross product basis `v*g`.
    pub fn cross(base_dim: usize, act: &GroupActionData) -> Self {
        let grp = &act.group;
        let m = grp.size();
        let dim = base_dim * m;
        let mut images = BTreeMap::new();
        for x in 0..dim {
            let (v, g2) = (x / m, x % m);
            for y in 0..dim {
                let (u, g1) = (y / m, y % m);
                let k = grp.mul(grp.mul(grp.inv(g1), grp.inv(g2)), grp.mul(g1, g2));
                let first = act.act(g1, &VectorQ::unit(base_dim, v));
                let second = act.act(grp.inv(g2), &VectorQ::unit(base_dim, u));
                for z in 0..dim {
                    let (w, g3) = (z / m, z % m);
                    let third = act.act(k, &VectorQ::unit(base_dim, w));
                    let mut out = Vec::new();
                    for (a, ca) in first.support() {
                        for (b, cb) in second.support() {
                            for (c, cc) in third.support() {
                                out.push(([a * m + g2, b * m + g1, c * m + grp.mul(k, g3)], ca * cb * cc));
                            }
                        }
                    }
                    if out != vec![([x, y, z], Q::one())] {
                        images.insert([x, y, z], out);
                    }
                }
            }
        }
        RMap { dim, images }
    }

    pub fn apply(&self, t: Triple) -> Vec<(Triple, Q)> {
        self.images.get(&t).cloned().unwrap_or_else(|| vec![(t, Q::one())])
    }
}

fn truncation_order(alg: &AlgebraStructure, u: usize, v: usize) -> i64 {
    alg.act(&alg.unit(u), &alg.unit(v)).keys().next().map_or(0, |e| (-e).max(0))
}

/// Jacobi-like identity with `(Y x Y)(x2, x1) R(v x u x w)` on every basis
/// triple, plus its two consequences: weak associativity and
/// `(x1-x2)^k`-commutation against the R-twisted product, `k` being the
/// truncation order of `Y(u,x)v`.
pub fn check_jacobi_like(alg: &AlgebraStructure, r: &RMap, bound: i64, ctx: &JacobiContext) -> Result<CheckReport> {
    let d = alg.dim();
    let mut report = CheckReport::pass();
    let mut exact = true;
    for u in 0..d {
        for v in 0..d {
            let c_trunc = truncation_order(alg, u, v);
            for w in 0..d {
                let idx = vec![u, v, w];
                let (eu, ev, ew) = (alg.unit(u), alg.unit(v), alg.unit(w));
                let a = ordered_product(alg, &eu, &ev, &ew, false);
                let mut b = Distribution::zero(&["x1", "x2"], d, &Window::uniform(&["x1", "x2"], 0, 0))?;
                for ([p, s, t], c) in r.apply([v, u, w]) {
                    let term = ordered_product(alg, &alg.unit(p), &alg.unit(s), &alg.unit(t), true);
                    b = b.add(&term.scale(&c))?;
                }
                let c = associator_side(alg, alg, &eu, &ev, &ew);
                let (verdict, lhs, rhs) = ctx.compare(&a, &b, &c)?;
                if let Some(wit) = verdict_witness("Jacobi-like identity", idx.clone(), &verdict, &lhs, &rhs) {
                    report.merge(CheckReport::fail(wit));
                    continue;
                }
                exact &= verdict == WindowVerdict::Equal;
                if !weak_assoc_triple(alg, alg, [u, v, w], bound, &ctx.window)?.is_found() {
                    report.merge(CheckReport::fail(witness(
                        "weak associativity from the Jacobi-like identity",
                        idx.clone(),
                        Vec::new(),
                        VectorQ::zeros(0),
                        VectorQ::zeros(0),
                    )));
                }
                if !commutation_order(&a, &b, idx.clone(), c_trunc, &ctx.window)?.is_found() {
                    report.merge(CheckReport::fail(witness(
                        "R-commutation",
                        idx,
                        vec![c_trunc],
                        VectorQ::zeros(0),
                        VectorQ::zeros(0),
                    )));
                }
            }
        }
    }
    Ok(if exact { report } else { report.window_sound() })
}

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::module::{wn_module, ModuleStructure};
use crate::algebra_core::{
    check_module_derivative, commutation_order, find_locality_k, find_weak_assoc_l, finite_dist, ordered_product,
    weak_assoc_triple, witness, Action, AlgebraStructure, CheckReport, Search, Verdict,
};
use crate::error::Result;
use crate::formal_series::{binom_expand, Distribution, VectorQ, Window, Q};
use crate::linalg::Matrix;

/// Outcome of the module axiom checks, part by part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleReport {
    pub identity: CheckReport,
    /// Associativity with `l` depending on all of `(u, v, w)`.
    pub weak_assoc: CheckReport,
    /// Associativity with `l` depending only on `(u, w)`; `None` when not requested.
    pub strong_assoc: Option<CheckReport>,
    pub d_property: CheckReport,
}

impl ModuleReport {
    pub fn overall(&self) -> CheckReport {
        let mut out = self.identity.clone();
        out.merge(self.weak_assoc.clone());
        if let Some(s) = &self.strong_assoc {
            out.merge(s.clone());
        }
        out.merge(self.d_property.clone());
        out
    }
}

fn search_report(s: Search, label: &str, idx: Vec<usize>) -> CheckReport {
    match s {
        Search::Found(l) => CheckReport::pass().with_order(Some(l)),
        Search::NotFound { bound, witness: wit, .. } => match wit {
            Some(w) => CheckReport::fail(w),
            None => {
                let mut r = CheckReport::pass();
                r.verdict = Verdict::Inconclusive(bound);
                r.witnesses.push(witness(label, idx, Vec::new(), VectorQ::zeros(0), VectorQ::zeros(0)));
                r
            }
        },
    }
}

/// Identity action of the vacuum, module weak associativity (both variants
/// when `strong`) and `Y_W(Dv, x) = d/dx Y_W(v, x)`. Truncation holds by
/// construction since the action data is finite.
pub fn check_module(
    alg: &AlgebraStructure,
    m: &ModuleStructure,
    bound: i64,
    strong: bool,
    win: &Window,
) -> Result<ModuleReport> {
    let dw = m.dim();
    let vac = m.field(alg.vacuum());
    let mut expected = BTreeMap::new();
    expected.insert(0, Matrix::identity(dw));
    let identity = if vac == expected {
        CheckReport::pass()
    } else {
        let got = vac.get(&0).map_or_else(|| VectorQ::zeros(dw), |x| x.column(0));
        CheckReport::fail(witness("vacuum acts as identity", vec![], vec![0], got, m.unit(0)))
    };

    let mut weak = CheckReport::pass();
    for u in 0..alg.dim() {
        for v in 0..alg.dim() {
            for w in 0..dw {
                let s = weak_assoc_triple(alg, m, [u, v, w], bound, win)?;
                weak.merge(search_report(s, "module weak associativity", vec![u, v, w]));
            }
        }
    }
    let strong_assoc = if strong {
        let mut r = CheckReport::pass();
        for u in 0..alg.dim() {
            for w in 0..dw {
                let s = find_weak_assoc_l(alg, m, u, w, bound, win)?;
                r.merge(search_report(s, "module weak associativity", vec![u, w]));
            }
        }
        Some(r)
    } else {
        None
    };
    Ok(ModuleReport { identity, weak_assoc: weak, strong_assoc, d_property: check_module_derivative(alg, m) })
}

/// Locality transfer between the algebra and a module for the pair `(u, v)`:
/// an algebra order `k` must work on the module, and on a faithful module a
/// module order must work on the algebra.
pub fn check_locality_transfer(
    alg: &AlgebraStructure,
    m: &ModuleStructure,
    u: usize,
    v: usize,
    qq: &Q,
    bound: i64,
    win: &Window,
) -> Result<CheckReport> {
    let on_alg = find_locality_k(alg, alg.dim(), u, v, qq, bound, win)?;
    let on_mod = find_locality_k(m, alg.dim(), u, v, qq, bound, win)?;
    let mut ws = Vec::new();
    let note = |label: &str, k: i64| witness(label, vec![u, v], vec![k], VectorQ::zeros(0), VectorQ::zeros(0));
    match (&on_alg, &on_mod) {
        (Search::Found(k), Search::Found(km)) if km > k => ws.push(note("algebra order fails on the module", *k)),
        (Search::Found(k), Search::NotFound { .. }) => ws.push(note("algebra order fails on the module", *k)),
        _ => {}
    }
    if m.is_faithful() {
        match (&on_alg, &on_mod) {
            (Search::Found(k), Search::Found(km)) if k > km => ws.push(note("module order fails on the algebra", *km)),
            (Search::NotFound { .. }, Search::Found(km)) => ws.push(note("module order fails on the algebra", *km)),
            _ => {}
        }
    }
    Ok(CheckReport::from_witnesses(ws).with_order(on_alg.found()))
}

fn pair_vars(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("x{i}")).collect()
}

/// `Y_W(v1, x1) ... Y_W(vr, xr) w` as a distribution in `x1, ..., xr`.
pub fn module_product(m: &ModuleStructure, alg_dim: usize, vs: &[usize], w: &VectorQ) -> Distribution {
    let dw = m.dim();
    let mut terms: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
    terms.insert(vec![0; vs.len()], w.clone());
    for (pos, &v) in vs.iter().enumerate().rev() {
        let f = m.field(&VectorQ::unit(alg_dim, v));
        let mut next: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
        for (e, x) in &terms {
            for (p, mat) in &f {
                let img = mat.mul_vec(x);
                if img.is_zero() {
                    continue;
                }
                let mut ne = e.clone();
                ne[pos] = *p;
                next.entry(ne).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&img);
            }
        }
        terms = next;
    }
    let vars = pair_vars(vs.len());
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    finite_dist(&names, dw, terms)
}

/// Least `k <= bound` with `prod_{i<j} (x_i - x_j)^k Y_W(v1, x1) ... Y_W(vr, xr)`
/// in `Hom(W, W((x1, ..., xr)))`, certified from the support of the product.
pub fn check_product_compatibility(
    m: &ModuleStructure,
    alg_dim: usize,
    vs: &[usize],
    bound: i64,
    win: &Window,
) -> Result<Search> {
    let vars = pair_vars(vs.len());
    let lower_bounded = |d: &Distribution| d.support().0.iter().all(|b| b.is_empty() || b.lo.is_some());
    let products: Vec<Distribution> = (0..m.dim()).map(|w| module_product(m, alg_dim, vs, &m.unit(w))).collect();
    for k in 0..=bound {
        let mut ok = true;
        for p in &products {
            let mut d = p.clone();
            if k > 0 {
                for i in 0..vars.len() {
                    for j in i + 1..vars.len() {
                        d = binom_expand(k, &vars[i], &vars[j], -1, win)?.mul(&d, win)?;
                    }
                }
            }
            ok &= lower_bounded(&d);
        }
        if ok {
            return Ok(Search::Found(k));
        }
    }
    Ok(Search::NotFound { bound, witness: None, constant_witness: false })
}

/// On a tensor product module, `Y(a x 1, x1)` and `Y(1 x b, x2)` commute for
/// every basis `a`, `b`.
pub fn check_factor_commutation(
    left: &AlgebraStructure,
    right: &AlgebraStructure,
    m: &ModuleStructure,
    win: &Window,
) -> Result<CheckReport> {
    let (da, db) = (left.dim(), right.dim());
    let lift_l = |a: usize| {
        let mut out = VectorQ::zeros(da * db);
        for (j, c) in right.vacuum().support() {
            out[a * db + j] = c.clone();
        }
        out
    };
    let lift_r = |b: usize| {
        let mut out = VectorQ::zeros(da * db);
        for (i, c) in left.vacuum().support() {
            out[i * db + b] = c.clone();
        }
        out
    };
    let mut report = CheckReport::pass();
    for a in 0..da {
        let ua = lift_l(a);
        for b in 0..db {
            let vb = lift_r(b);
            for w in 0..m.dim() {
                let ew = m.unit(w);
                let x = ordered_product(m, &ua, &vb, &ew, false);
                let y = ordered_product(m, &vb, &ua, &ew, true);
                if let Search::NotFound { witness: wit, .. } = commutation_order(&x, &y, vec![a, b, w], 0, win)? {
                    let wit = wit.unwrap_or_else(|| {
                        witness("factor actions commute", vec![a, b, w], vec![], VectorQ::zeros(0), VectorQ::zeros(0))
                    });
                    report.merge(CheckReport::fail(wit));
                }
            }
        }
    }
    Ok(report)
}

/// For every basis vector `w` of `W` and every row `r`: `w` generates `W`
/// exactly when `w` placed in row `r` generates `W^n` over `M(n, V)`.
pub fn check_generation_transfer(m: &ModuleStructure, n: usize) -> Result<CheckReport> {
    let wn = wn_module(m, n)?;
    let mut ws = Vec::new();
    for j in 0..m.dim() {
        let base = m.generates(&m.unit(j));
        for r in 0..n {
            let lifted = wn.unit(j * n + r);
            let up = wn.generates(&lifted);
            if up != base {
                let dim_up = wn.generated_submodule(&lifted).len() as i64;
                ws.push(witness("generation in W^n", vec![j, r], vec![dim_up], VectorQ::zeros(0), VectorQ::zeros(0)));
            }
        }
    }
    Ok(CheckReport::from_witnesses(ws))
}

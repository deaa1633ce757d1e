use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use super::report::{CheckReport, Search, Witness};
use super::structure::{apply_field, Action, AlgebraStructure, Field, VField};
use crate::error::{Error, Result};
use crate::formal_series::{
    binom_expand, delta_term, factorial, q, sign_pow, DEFAULT_RADIUS, window_equal, DeltaTerm, Distribution, VectorQ, Window,
    WindowVerdict, Q,
};
use crate::linalg::Matrix;

/// The map `v -> v_{-2} 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DOperator {
    pub matrix: Matrix,
}

impl DOperator {
    pub fn apply(&self, v: &VectorQ) -> VectorQ {
        self.matrix.mul_vec(v)
    }
}

/// Finite distribution from explicit terms, on a window fitted to the terms.
pub fn finite_dist<I>(vars: &[&str], dim: usize, terms: I) -> Distribution
where
    I: IntoIterator<Item = (Vec<i64>, VectorQ)>,
{
    let terms: Vec<(Vec<i64>, VectorQ)> = terms.into_iter().collect();
    let mut w = Window::new(&[]);
    for (k, v) in vars.iter().enumerate() {
        let lo = terms.iter().map(|(e, _)| e[k]).min().unwrap_or(0).min(0);
        let hi = terms.iter().map(|(e, _)| e[k]).max().unwrap_or(0).max(0);
        w.set(v, lo, hi);
    }
    Distribution::from_terms(vars, dim, terms, &w).expect("window fitted to the terms")
}

pub fn vfield_dist(var: &str, dim: usize, f: &VField) -> Distribution {
    finite_dist(&[var], dim, f.iter().map(|(e, v)| (vec![*e], v.clone())))
}

fn first_difference(a: &VField, b: &VField, dim: usize) -> Option<(i64, VectorQ, VectorQ)> {
    let zero = VectorQ::zeros(dim);
    let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().find_map(|e| {
        let x = a.get(&e).unwrap_or(&zero);
        let y = b.get(&e).unwrap_or(&zero);
        (x != y).then(|| (e, x.clone(), y.clone()))
    })
}

pub(crate) fn witness(label: &str, indices: Vec<usize>, exponent: Vec<i64>, lhs: VectorQ, rhs: VectorQ) -> Witness {
    Witness { label: label.to_string(), indices, exponent, lhs, rhs }
}

/// Truncation, vacuum and creation axioms on every basis pair.
pub fn validate_structure(alg: &AlgebraStructure) -> CheckReport {
    let d = alg.dim();
    let mut ws = Vec::new();
    let vac = alg.vacuum();
    let vac_field = alg.field(vac);
    for j in 0..d {
        let ej = alg.unit(j);
        let mut expected: VField = BTreeMap::new();
        expected.insert(0, ej.clone());
        let got: VField = apply_field(&vac_field, &ej);
        if let Some((e, l, r)) = first_difference(&got, &expected, d) {
            ws.push(witness("vacuum", vec![j], vec![-e - 1], l, r));
        }
    }
    for i in 0..d {
        let got = alg.act(&alg.unit(i), vac);
        for (e, v) in &got {
            if *e < 0 {
                ws.push(witness("creation", vec![i], vec![-e - 1], v.clone(), VectorQ::zeros(d)));
            }
        }
        let c = got.get(&0).cloned().unwrap_or_else(|| VectorQ::zeros(d));
        if c != alg.unit(i) {
            ws.push(witness("creation", vec![i], vec![-1], c, alg.unit(i)));
        }
    }
    CheckReport::from_witnesses(ws)
}

pub fn d_operator(alg: &AlgebraStructure) -> DOperator {
    let cols: Vec<VectorQ> = (0..alg.dim()).map(|j| alg.apply(&alg.unit(j), -2, alg.vacuum())).collect();
    DOperator { matrix: Matrix::from_columns(alg.dim(), &cols) }
}

/// `e^{xD} = sum_m x^m D^m / m!`, terminating at the nilpotency index of D.
pub fn exp_xd(d: &Matrix) -> Result<Field> {
    let idx = d.nilpotency_index().ok_or(Error::NonNilpotentD)?;
    let mut out = BTreeMap::new();
    let mut p = Matrix::identity(d.rows());
    for m in 0..idx {
        out.insert(m as i64, p.scaled(&(Q::one() / factorial(m as u64))));
        p = p.mul(d);
    }
    Ok(out)
}

fn apply_exp(exp: &Field, f: &VField) -> VField {
    let mut out: VField = BTreeMap::new();
    for (a, m) in exp {
        for (b, v) in f {
            let img = m.mul_vec(v);
            if img.is_zero() {
                continue;
            }
            let dim = img.dim();
            out.entry(a + b).or_insert_with(|| VectorQ::zeros(dim)).add_assign(&img);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn negate_x(f: &VField) -> VField {
    f.iter().map(|(e, v)| (*e, v.scaled(&sign_pow(*e)))).collect()
}

fn compare_1var(label: &str, idx: Vec<usize>, a: &Distribution, b: &Distribution, w: &Window) -> Option<Witness> {
    match window_equal(a, b, w) {
        WindowVerdict::Differs(e) => {
            let l = a.coeff(&e).unwrap_or_else(|_| VectorQ::zeros(a.dim()));
            let r = b.coeff(&e).unwrap_or_else(|_| VectorQ::zeros(b.dim()));
            Some(witness(label, idx, e, l, r))
        }
        _ => None,
    }
}

/// `[D, Y(v,x)] = Y(Dv, x) = d/dx Y(v, x)` on every basis pair.
pub fn check_d_bracket(alg: &AlgebraStructure, w: &Window) -> CheckReport {
    let d = alg.dim();
    let dop = d_operator(alg);
    let wx = restrict_x(w);
    let mut ws = Vec::new();
    for i in 0..d {
        let ei = alg.unit(i);
        let dei = dop.apply(&ei);
        for j in 0..d {
            let ej = alg.unit(j);
            let y = alg.act(&ei, &ej);
            let mut bracket: VField = y.iter().map(|(e, v)| (*e, dop.apply(v))).collect();
            for (e, v) in alg.act(&ei, &dop.apply(&ej)) {
                bracket.entry(e).or_insert_with(|| VectorQ::zeros(d)).sub_assign(&v);
            }
            bracket.retain(|_, v| !v.is_zero());
            let a = vfield_dist("x", d, &bracket);
            let b = vfield_dist("x", d, &alg.act(&dei, &ej));
            let c = vfield_dist("x", d, &y).derivative("x").expect("variable present");
            ws.extend(compare_1var("D-bracket", vec![i, j], &a, &b, &wx));
            ws.extend(compare_1var("D-derivative", vec![i, j], &b, &c, &wx));
        }
    }
    CheckReport::from_witnesses(ws)
}

fn restrict_x(w: &Window) -> Window {
    let (lo, hi) = w
        .bounds("x")
        .or_else(|| w.names().first().and_then(|n| w.bounds(n)))
        .unwrap_or((-DEFAULT_RADIUS, DEFAULT_RADIUS));
    Window::new(&[("x", lo, hi)])
}

/// `Y(v, x) 1 = e^{xD} v` for every basis vector.
pub fn check_creation_exp(alg: &AlgebraStructure) -> Result<CheckReport> {
    let exp = exp_xd(&d_operator(alg).matrix)?;
    let mut ws = Vec::new();
    for i in 0..alg.dim() {
        let lhs = alg.act(&alg.unit(i), alg.vacuum());
        let mut base = BTreeMap::new();
        base.insert(0, alg.unit(i));
        let rhs = apply_exp(&exp, &base);
        if let Some((e, l, r)) = first_difference(&lhs, &rhs, alg.dim()) {
            ws.push(witness("creation exponential", vec![i], vec![e], l, r));
        }
    }
    Ok(CheckReport::from_witnesses(ws))
}

/// `Y_W(Dv, x) = d/dx Y_W(v, x)` for every algebra basis vector, on the
/// module given by `act`.
pub fn check_module_derivative<A: Action + ?Sized>(alg: &AlgebraStructure, act: &A) -> CheckReport {
    let dop = d_operator(alg);
    let dw = act.space_dim();
    let mut ws = Vec::new();
    for i in 0..alg.dim() {
        let dv = dop.apply(&alg.unit(i));
        let lhs = act.field(&dv);
        let rhs = act.field(&alg.unit(i));
        for j in 0..dw {
            let wj = VectorQ::unit(dw, j);
            let l = apply_field(&lhs, &wj);
            let r: VField = apply_field(&rhs, &wj)
                .into_iter()
                .filter(|(e, _)| *e != 0)
                .map(|(e, v)| (e - 1, v.scaled(&q(e))))
                .collect();
            if let Some((e, a, b)) = first_difference(&l, &r, dw) {
                ws.push(witness("module D-derivative", vec![i, j], vec![e], a, b));
            }
        }
    }
    CheckReport::from_witnesses(ws)
}

/// Both sides of weak associativity for one triple at order `l`, as
/// distributions in `(x0, x2)`:
/// `(x0+x2)^l Y(u,x0+x2) Y(v,x2) w` and `(x0+x2)^l Y(Y(u,x0)v, x2) w`.
pub fn weak_assoc_sides<A: Action + ?Sized>(
    alg: &AlgebraStructure,
    act: &A,
    u: &VectorQ,
    v: &VectorQ,
    w: &VectorQ,
    l: i64,
    win: &Window,
) -> Result<(Distribution, Distribution)> {
    let dw = act.space_dim();
    let fu = act.field(u);
    let mut g: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
    for (e2, vec2) in act.act(v, w) {
        for (ey, m) in &fu {
            let img = m.mul_vec(&vec2);
            if !img.is_zero() {
                g.entry(vec![ey + l, e2]).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&img);
            }
        }
    }
    let g = finite_dist(&["y", "x2"], dw, g);
    let lhs = g.taylor_shift("y", "x0", "x2", win)?;

    let mut c: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
    for (e0, uv) in alg.act(u, v) {
        for (e2, out) in act.act(&uv, w) {
            c.entry(vec![e0, e2]).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&out);
        }
    }
    let c = finite_dist(&["x0", "x2"], dw, c);
    let rhs = binom_expand(l, "x0", "x2", 1, win)?.mul(&c, win)?;
    Ok((lhs, rhs))
}

pub(crate) fn verdict_witness(
    label: &str,
    idx: Vec<usize>,
    verdict: &WindowVerdict,
    a: &Distribution,
    b: &Distribution,
) -> Option<Witness> {
    match verdict {
        WindowVerdict::Differs(e) => {
            let vars = a.vars().to_vec();
            let b = b.align(&vars).ok()?;
            let l = a.coeff(e).unwrap_or_else(|_| VectorQ::zeros(a.dim()));
            let r = b.coeff(e).unwrap_or_else(|_| VectorQ::zeros(b.dim()));
            Some(witness(label, idx, e.clone(), l, r))
        }
        _ => None,
    }
}

/// Least `l <= bound` making weak associativity exact for the single triple.
pub fn weak_assoc_triple<A: Action + ?Sized>(
    alg: &AlgebraStructure,
    act: &A,
    idx: [usize; 3],
    bound: i64,
    win: &Window,
) -> Result<Search> {
    let (u, v, w) = (alg.unit(idx[0]), alg.unit(idx[1]), VectorQ::unit(act.space_dim(), idx[2]));
    let mut last = None;
    for l in 0..=bound {
        let (lhs, rhs) = weak_assoc_sides(alg, act, &u, &v, &w, l, win)?;
        let verdict = window_equal(&lhs, &rhs, win);
        if verdict == WindowVerdict::Equal {
            return Ok(Search::Found(l));
        }
        if l == 0 {
            last = verdict_witness("weak associativity", idx.to_vec(), &verdict, &lhs, &rhs);
        }
    }
    let constant_witness = last.as_ref().is_some_and(|w| w.exponent.iter().all(|&e| e == 0));
    Ok(Search::NotFound { bound, witness: last, constant_witness })
}

/// Least `l <= bound` that works for the pair `(u, w)` and every basis `v`.
pub fn find_weak_assoc_l<A: Action + ?Sized>(
    alg: &AlgebraStructure,
    act: &A,
    u: usize,
    w: usize,
    bound: i64,
    win: &Window,
) -> Result<Search> {
    let mut best = 0;
    for v in 0..alg.dim() {
        match weak_assoc_triple(alg, act, [u, v, w], bound, win)? {
            Search::Found(l) => best = best.max(l),
            nf => return Ok(nf),
        }
    }
    Ok(Search::Found(best))
}

/// `Y(u,x1) Y(v,x2) w`, or `Y(u,x2) Y(v,x1) w` when `swapped`, in `(x1, x2)`.
pub fn ordered_product<A: Action + ?Sized>(act: &A, u: &VectorQ, v: &VectorQ, w: &VectorQ, swapped: bool) -> Distribution {
    let dw = act.space_dim();
    let mut out: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
    let fu = act.field(u);
    for (ev, x) in act.act(v, w) {
        for (eu, m) in &fu {
            let img = m.mul_vec(&x);
            if !img.is_zero() {
                let key = if swapped { vec![ev, *eu] } else { vec![*eu, ev] };
                out.entry(key).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&img);
            }
        }
    }
    finite_dist(&["x1", "x2"], dw, out)
}

/// `Y(u,x1) Y(v,x2) w` and `q Y(v,x2) Y(u,x1) w` in `(x1, x2)`.
pub fn locality_sides<A: Action + ?Sized>(
    act: &A,
    u: &VectorQ,
    v: &VectorQ,
    w: &VectorQ,
    q: &Q,
) -> (Distribution, Distribution) {
    (ordered_product(act, u, v, w, false), ordered_product(act, v, u, w, true).scale(q))
}

/// Least `k <= bound` with `(x1-x2)^k q-commutator` vanishing on `w`.
pub fn locality_triple<A: Action + ?Sized>(
    act: &A,
    u: &VectorQ,
    v: &VectorQ,
    w: &VectorQ,
    q: &Q,
    idx: Vec<usize>,
    bound: i64,
    win: &Window,
) -> Result<Search> {
    let (a, b) = locality_sides(act, u, v, w, q);
    commutation_order(&a, &b, idx, bound, win)
}

/// Least `k <= bound` with `(x1-x2)^k a = (x1-x2)^k b` for `a`, `b` in `(x1, x2)`.
pub fn commutation_order(a: &Distribution, b: &Distribution, idx: Vec<usize>, bound: i64, win: &Window) -> Result<Search> {
    let mut first = None;
    for k in 0..=bound {
        let p = binom_expand(k, "x1", "x2", -1, win)?;
        let (pa, pb) = (p.mul(a, win)?, p.mul(b, win)?);
        let verdict = window_equal(&pa, &pb, win);
        if verdict == WindowVerdict::Equal {
            return Ok(Search::Found(k));
        }
        if k == 0 {
            first = verdict_witness("locality", idx.clone(), &verdict, &pa, &pb);
        }
    }
    let diff = a.sub(b)?;
    let constant_witness = !diff.is_zero() && diff.terms().all(|(e, _)| e.iter().all(|&x| x == 0));
    Ok(Search::NotFound { bound, witness: first, constant_witness })
}

/// Least `k <= bound` giving q-locality of `(u, v)` on every basis vector of
/// the space acted on.
pub fn find_locality_k<A: Action + ?Sized>(
    act: &A,
    dim_v: usize,
    u: usize,
    v: usize,
    q: &Q,
    bound: i64,
    win: &Window,
) -> Result<Search> {
    let (uu, vv) = (VectorQ::unit(dim_v, u), VectorQ::unit(dim_v, v));
    let mut best = 0;
    let mut refuted: Option<Search> = None;
    for w in 0..act.space_dim() {
        let ww = VectorQ::unit(act.space_dim(), w);
        match locality_triple(act, &uu, &vv, &ww, q, vec![u, v, w], bound, win)? {
            Search::Found(k) => best = best.max(k),
            Search::NotFound { bound, witness, constant_witness } => {
                // Prefer a constant witness when one exists.
                let better = match &refuted {
                    None => true,
                    Some(Search::NotFound { constant_witness: c, .. }) => !c && constant_witness,
                    _ => false,
                };
                if better {
                    refuted = Some(Search::NotFound { bound, witness, constant_witness });
                }
            }
        }
    }
    Ok(refuted.unwrap_or(Search::Found(best)))
}

/// Skew-symmetry `Y(u,x)v = q e^{xD} Y(v,-x)u` together with truncation
/// `x^k Y(u,x)v in V[[x]]` for the locality order `k` (or, when no order
/// exists, the least order making the truncation hold).
pub fn check_skew_symmetry(
    alg: &AlgebraStructure,
    u: usize,
    v: usize,
    q: &Q,
    bound: i64,
    win: &Window,
) -> Result<CheckReport> {
    let d = alg.dim();
    let exp = exp_xd(&d_operator(alg).matrix)?;
    let lhs = alg.act(&alg.unit(u), &alg.unit(v));
    let locality = find_locality_k(alg, d, u, v, q, bound, win)?;
    let k = match locality.found() {
        Some(k) => k,
        None => lhs.keys().next().map_or(0, |e| (-e).max(0)),
    };
    let mut ws = Vec::new();
    for (e, x) in &lhs {
        if e + k < 0 {
            ws.push(witness("truncation", vec![u, v], vec![*e], x.clone(), VectorQ::zeros(d)));
        }
    }
    let rhs: VField = apply_exp(&exp, &negate_x(&alg.act(&alg.unit(v), &alg.unit(u))))
        .into_iter()
        .map(|(e, x)| (e, x.scaled(q)))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    if let Some((e, l, r)) = first_difference(&lhs, &rhs, d) {
        ws.push(witness("skew-symmetry", vec![u, v], vec![e], l, r));
    }
    Ok(CheckReport::from_witnesses(ws).with_order(Some(k)))
}

/// Precomputed delta-function expressions for Jacobi-type identities.
#[derive(Clone, Debug)]
pub struct JacobiContext {
    pub window: Window,
    forward: Distribution,
    reversed: Distribution,
    associator: Distribution,
}

impl JacobiContext {
    pub fn new(window: &Window) -> Result<Self> {
        Ok(JacobiContext {
            window: window.clone(),
            forward: delta_term(DeltaTerm::Forward, window)?,
            reversed: delta_term(DeltaTerm::Reversed, window)?,
            associator: delta_term(DeltaTerm::Associator, window)?,
        })
    }

    /// Compares `fwd * a - rev * b` with `assoc * c`, where `a`, `b` live in
    /// `(x1, x2)` and `c` in `(x0, x2)`.
    pub fn compare(
        &self,
        a: &Distribution,
        b: &Distribution,
        c: &Distribution,
    ) -> Result<(WindowVerdict, Distribution, Distribution)> {
        let w = &self.window;
        let lhs = self.forward.mul(a, w)?.sub(&self.reversed.mul(b, w)?)?;
        let rhs = self.associator.mul(c, w)?;
        Ok((window_equal(&lhs, &rhs, w), lhs, rhs))
    }
}

/// `Y(Y(u,x0)v, x2) w` in `(x0, x2)`.
pub fn associator_side<A: Action + ?Sized>(alg: &AlgebraStructure, act: &A, u: &VectorQ, v: &VectorQ, w: &VectorQ) -> Distribution {
    let dw = act.space_dim();
    let mut c: BTreeMap<Vec<i64>, VectorQ> = BTreeMap::new();
    for (e0, uv) in alg.act(u, v) {
        for (e2, out) in act.act(&uv, w) {
            c.entry(vec![e0, e2]).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&out);
        }
    }
    finite_dist(&["x0", "x2"], dw, c)
}

/// q-Jacobi identity for one triple, with the equivalence to
/// (q-locality and weak associativity) checked alongside.
pub fn jacobi_triple<A: Action + ?Sized>(
    alg: &AlgebraStructure,
    act: &A,
    idx: [usize; 3],
    q: &Q,
    bound: i64,
    ctx: &JacobiContext,
) -> Result<CheckReport> {
    let (u, v, w) = (alg.unit(idx[0]), alg.unit(idx[1]), VectorQ::unit(act.space_dim(), idx[2]));
    let (a, b) = locality_sides(act, &u, &v, &w, q);
    let c = associator_side(alg, act, &u, &v, &w);
    let (verdict, lhs, rhs) = ctx.compare(&a, &b, &c)?;
    let mut ws = Vec::new();
    ws.extend(verdict_witness("Jacobi identity", idx.to_vec(), &verdict, &lhs, &rhs));
    let loc = locality_triple(act, &u, &v, &w, q, idx.to_vec(), bound, &ctx.window)?.is_found();
    let assoc = weak_assoc_triple(alg, act, idx, bound, &ctx.window)?.is_found();
    if verdict.matches() != (loc && assoc) {
        ws.push(witness("Jacobi versus locality and associativity", idx.to_vec(), Vec::new(), VectorQ::zeros(0), VectorQ::zeros(0)));
    }
    let report = CheckReport::from_witnesses(ws);
    Ok(if verdict == WindowVerdict::Equal { report } else { report.window_sound() })
}

/// q-Jacobi identity for `(u, v)` applied to every basis vector.
pub fn check_jacobi<A: Action + ?Sized>(
    alg: &AlgebraStructure,
    act: &A,
    u: usize,
    v: usize,
    q: &Q,
    bound: i64,
    ctx: &JacobiContext,
) -> Result<CheckReport> {
    let mut out = CheckReport::pass();
    for w in 0..act.space_dim() {
        out.merge(jacobi_triple(alg, act, [u, v, w], q, bound, ctx)?);
    }
    Ok(out)
}

/// Whether the locality search and the skew/truncation check agree for a pair.
pub fn skew_locality_agree(alg: &AlgebraStructure, u: usize, v: usize, q: &Q, bound: i64, win: &Window) -> Result<bool> {
    let loc = find_locality_k(alg, alg.dim(), u, v, q, bound, win)?.is_found();
    let skew = check_skew_symmetry(alg, u, v, q, bound, win)?.is_pass();
    Ok(loc == skew)
}

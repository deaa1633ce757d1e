use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::operator::{find_compat_order, nth_product, nth_product_local, product_index_range, VertexOperator};
use crate::algebra_core::{witness, AlgebraStructure, CheckReport, Search};
use crate::error::{Error, Result};
use crate::formal_series::{binomial, VectorQ, Window, Q};
use crate::linalg::Span;
use crate::modules_rep::{check_module, ModuleStructure};

type Key = (i64, usize, usize);

/// Operators kept together with a row-reduced copy of their fingerprints.
#[derive(Clone, Debug, Default)]
pub struct OperatorSpan {
    names: Vec<String>,
    pub(crate) ops: Vec<VertexOperator>,
    reduced: Span<Key>,
}

impl OperatorSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.ops.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn ops(&self) -> &[VertexOperator] {
        &self.ops
    }

    /// Adds `op` when it is independent of the current span.
    pub fn insert(&mut self, name: String, op: VertexOperator) -> bool {
        if !self.reduced.insert(&op.fingerprint()) {
            return false;
        }
        self.names.push(name);
        self.ops.push(op);
        true
    }

    /// Coordinates of `op` in the stored basis, if it lies in the span.
    pub fn coords(&self, op: &VertexOperator) -> Option<Vec<Q>> {
        self.reduced.coords(&op.fingerprint())
    }

    pub fn contains(&self, op: &VertexOperator) -> bool {
        self.reduced.contains(&op.fingerprint())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureStatus {
    Closed,
    /// The dimension cap or the round cap was hit at the given dimension.
    CapExceeded(usize),
    /// The span stopped growing inside the index range, but products outside
    /// it are nonzero and leave the span.
    IndexRangeExhausted,
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    /// Indices `n` tried in each round; derived from the generators when `None`.
    pub n_range: Option<(i64, i64)>,
    pub dim_cap: usize,
    pub depth_cap: usize,
    /// Bound for the compatibility order searches.
    pub bound: i64,
    /// Use the two-sided product for pairwise local sets.
    pub local: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions { n_range: None, dim_cap: 64, depth_cap: 8, bound: 8, local: false }
    }
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub span: OperatorSpan,
    /// Structure constants on the span basis, present when closed.
    pub structure: Option<AlgebraStructure>,
    pub status: ClosureStatus,
    pub n_range: (i64, i64),
    pub rounds: usize,
}

/// `[n_min - 2, k_max]` where `n_min` is the least mode index carried by a
/// generator and `k_max` the largest pairwise compatibility order.
pub fn default_n_range(gens: &[VertexOperator], k_max: i64) -> (i64, i64) {
    let n_min = gens.iter().filter_map(|g| g.power_range().map(|(_, hi)| -hi - 1)).min().unwrap_or(0);
    (n_min.min(-1) - 2, k_max)
}

fn compat(seq: &[VertexOperator], idx: Vec<usize>, bound: i64) -> Result<i64> {
    let names: Vec<String> = (1..=seq.len()).map(|i| format!("x{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let win = Window::uniform(&refs, -1, 1);
    match find_compat_order(seq, bound, &win)? {
        Search::Found(k) => Ok(k),
        Search::NotFound { .. } => Err(Error::NotCompatible(idx)),
    }
}

fn product_name(g: &str, n: i64, b: &str) -> String {
    if n == -1 && b == "1_W" {
        String::from(g)
    } else {
        format!("{g}_({n}){b}")
    }
}

/// Generates the span of all `a1_n1 ... ar_nr 1_W` with generators `a_i`
/// and `n_i` in the index range, round by round.
pub fn closure(dim_w: usize, gens: &[(String, VertexOperator)], opts: &ClosureOptions) -> Result<ClosureResult> {
    let ops: Vec<VertexOperator> = gens.iter().map(|(_, g)| g.clone()).collect();
    if let Some(g) = ops.iter().find(|g| g.dim() != dim_w) {
        return Err(Error::DimensionMismatch(g.dim(), dim_w));
    }
    let one = VertexOperator::identity(dim_w);
    let mut k_max = 0;
    let mut all = vec![one.clone()];
    all.extend(ops.iter().cloned());
    for i in 0..all.len() {
        for j in 0..all.len() {
            k_max = k_max.max(compat(&[all[i].clone(), all[j].clone()], vec![i, j], opts.bound)?);
        }
    }
    let n_range = opts.n_range.unwrap_or_else(|| default_n_range(&ops, k_max));
    let product = |a: &VertexOperator, b: &VertexOperator, n: i64| {
        if opts.local {
            nth_product_local(a, b, n)
        } else {
            nth_product(a, b, n)
        }
    };

    let mut span = OperatorSpan::new();
    span.insert(String::from("1_W"), one);
    let mut frontier = vec![0usize];
    let mut rounds = 0;
    let status = loop {
        if frontier.is_empty() {
            break ClosureStatus::Closed;
        }
        if rounds == opts.depth_cap {
            break ClosureStatus::CapExceeded(span.dim());
        }
        rounds += 1;
        let mut next = Vec::new();
        for (gi, (gname, g)) in gens.iter().enumerate() {
            for &b in &frontier {
                let base = span.ops()[b].clone();
                compat(&[g.clone(), ops[0].clone(), base.clone()], vec![gi, 0, b], opts.bound)?;
                for n in (n_range.0..=n_range.1).rev() {
                    let c = product(g, &base, n)?;
                    if c.is_zero() {
                        continue;
                    }
                    let name = product_name(gname, n, &span.names()[b]);
                    if span.insert(name, c) {
                        next.push(span.dim() - 1);
                        if span.dim() > opts.dim_cap {
                            let status = ClosureStatus::CapExceeded(span.dim());
                            return Ok(ClosureResult { span, structure: None, status, n_range, rounds });
                        }
                    }
                }
            }
        }
        frontier = next;
    };
    if status != ClosureStatus::Closed {
        return Ok(ClosureResult { span, structure: None, status, n_range, rounds });
    }
    match read_off(&span, &product)? {
        Some(structure) => Ok(ClosureResult { span, structure: Some(structure), status, n_range, rounds }),
        None => Ok(ClosureResult { span, structure: None, status: ClosureStatus::IndexRangeExhausted, n_range, rounds }),
    }
}

/// Structure constants `(b_i)_n b_j` over the full nonzero range of `n`;
/// `None` when that range is unbounded or a product leaves the span.
fn read_off<F>(span: &OperatorSpan, product: &F) -> Result<Option<AlgebraStructure>>
where
    F: Fn(&VertexOperator, &VertexOperator, i64) -> Result<VertexOperator>,
{
    let d = span.dim();
    let mut entries = Vec::new();
    for (i, a) in span.ops().iter().enumerate() {
        let (Some(lo), hi) = product_index_range(a) else {
            return Ok(None);
        };
        for (j, b) in span.ops().iter().enumerate() {
            for n in lo..=hi {
                let c = product(a, b, n)?;
                if c.is_zero() {
                    continue;
                }
                let Some(coords) = span.coords(&c) else {
                    return Ok(None);
                };
                entries.push((i, j, n, VectorQ(coords)));
            }
        }
    }
    Ok(Some(AlgebraStructure::new(span.names().to_vec(), VectorQ::unit(d, 0), entries)?))
}

/// `W` as a module over the closed algebra through `Y_W(a(x), x0) = a(x0)`.
pub fn closure_module(cr: &ClosureResult) -> Result<ModuleStructure> {
    let alg = cr.structure.as_ref().ok_or_else(|| Error::MalformedStructure("closure is not closed".into()))?;
    let dw = cr.span.ops().first().map_or(0, VertexOperator::dim);
    let mut entries = Vec::new();
    for (i, op) in cr.span.ops().iter().enumerate() {
        for (p, m) in op.coeffs() {
            for j in 0..dw {
                entries.push((i, j, -p - 1, m.column(j)));
            }
        }
    }
    ModuleStructure::new((0..dw).map(|j| format!("w{}", j + 1)).collect(), alg.dim(), entries)
}

/// Module axioms for `W` over the closed algebra, plus faithfulness.
pub fn verify_module_structure(cr: &ClosureResult, bound: i64, win: &Window) -> Result<CheckReport> {
    let alg = cr.structure.as_ref().ok_or_else(|| Error::MalformedStructure("closure is not closed".into()))?;
    let m = closure_module(cr)?;
    let mut report = check_module(alg, &m, bound, true, win)?.overall();
    if !m.is_faithful() {
        report.merge(CheckReport::fail(witness("faithful module", vec![], vec![], VectorQ::zeros(0), VectorQ::zeros(0))));
    }
    Ok(report)
}

/// Terms of `(x0+x2)^m x2^e2 v`, `m >= 0`, keyed by `(power of x0, power of x2)`.
fn add_shifted(out: &mut BTreeMap<(i64, i64), VectorQ>, m: i64, e2: i64, v: &VectorQ) {
    for i in 0..=m {
        let c = binomial(m, i as u64);
        out.entry((m - i, e2 + i)).or_insert_with(|| VectorQ::zeros(v.dim())).add_assign(&v.scaled(&c));
    }
}

/// Associativity of the operator products on a module vector: least `l` with
/// `(x0+x2)^l a(x0+x2) b(x2) w` polynomial in `x0`, then equality with
/// `(x2+x0)^l (Y_E(a, x0) b)(x2) w`. When `a` has negative powers the right
/// side is an infinite series and is compared for powers of `x0` up to the
/// window bound only.
pub fn check_prop_assoc(a: &VertexOperator, b: &VertexOperator, w: &VectorQ, bound: i64, win: &Window) -> Result<CheckReport> {
    compat(&[a.clone(), b.clone()], vec![0, 1], bound)?;
    let dw = a.dim();
    let mut prods = Vec::new();
    for (p1, ma) in a.coeffs() {
        for (p2, mb) in b.coeffs() {
            let v = ma.mul_vec(&mb.mul_vec(w));
            if !v.is_zero() {
                prods.push((*p1, *p2, v));
            }
        }
    }
    let l = prods.iter().map(|(p1, _, _)| -p1).max().unwrap_or(0).max(0);
    if l > bound {
        let mut r = CheckReport::pass();
        r.verdict = crate::algebra_core::Verdict::Inconclusive(bound);
        return Ok(r);
    }
    let mut lhs = BTreeMap::new();
    for (p1, p2, v) in &prods {
        add_shifted(&mut lhs, p1 + l, *p2, v);
    }

    let (lo, hi) = product_index_range(a);
    let x0_hi = win.bounds("x0").map_or(crate::formal_series::DEFAULT_RADIUS, |(_, h)| h);
    let exact = lo.is_some();
    let n_lo = lo.unwrap_or(-x0_hi - 1);
    let mut rhs = BTreeMap::new();
    for n in n_lo..=hi {
        let c = nth_product(a, b, n)?;
        for (e2, m) in c.coeffs() {
            let v = m.mul_vec(w);
            if v.is_zero() {
                continue;
            }
            // (x2+x0)^l x0^(-n-1): expand (x0+x2)^l and shift the x0 power.
            let mut part = BTreeMap::new();
            add_shifted(&mut part, l, *e2, &v);
            for ((p0, p2), x) in part {
                rhs.entry((p0 - n - 1, p2)).or_insert_with(|| VectorQ::zeros(dw)).add_assign(&x);
            }
        }
    }
    let keep = |e: &(i64, i64)| exact || e.0 <= x0_hi;
    let zero = VectorQ::zeros(dw);
    let mut keys: Vec<(i64, i64)> = lhs.keys().chain(rhs.keys()).copied().filter(keep).collect();
    keys.sort_unstable();
    keys.dedup();
    for e in keys {
        let x = lhs.get(&e).unwrap_or(&zero);
        let y = rhs.get(&e).unwrap_or(&zero);
        if x != y {
            let wit = witness("associativity of operator products", vec![], vec![e.0, e.1], x.clone(), y.clone());
            return Ok(CheckReport::fail(wit).with_order(Some(l)));
        }
    }
    let r = CheckReport::pass().with_order(Some(l));
    Ok(if exact { r } else { r.window_sound() })
}

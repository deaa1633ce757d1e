use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::scalar::{binomial, sign_pow, VectorQ, Q};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Sentinels standing in for the infinite ends of an interval.
pub const NEG_INF: i64 = i64::MIN / 4;
pub const POS_INF: i64 = i64::MAX / 4;

/// Default per-variable exponent interval.
pub const DEFAULT_RADIUS: i64 = 12;

/// Per-variable exponent box on which coefficients are observed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    names: Vec<String>,
    bounds: Vec<(i64, i64)>,
}

impl Window {
    pub fn new(spec: &[(&str, i64, i64)]) -> Self {
        let mut w = Window { names: Vec::new(), bounds: Vec::new() };
        for &(name, lo, hi) in spec {
            w.set(name, lo, hi);
        }
        w
    }

    pub fn uniform(names: &[&str], lo: i64, hi: i64) -> Self {
        let spec: Vec<(&str, i64, i64)> = names.iter().map(|&n| (n, lo, hi)).collect();
        Self::new(&spec)
    }

    /// The default `[-12, 12]` box over the given variables.
    pub fn default_for(names: &[&str]) -> Self {
        Self::uniform(names, -DEFAULT_RADIUS, DEFAULT_RADIUS)
    }

    pub fn set(&mut self, name: &str, lo: i64, hi: i64) {
        assert!(lo <= hi, "window interval for `{name}` is empty");
        match self.names.iter().position(|n| n == name) {
            Some(k) => self.bounds[k] = (lo, hi),
            None => {
                self.names.push(name.to_string());
                self.bounds.push((lo, hi));
            }
        }
    }

    pub fn bounds(&self, name: &str) -> Option<(i64, i64)> {
        self.names.iter().position(|n| n == name).map(|k| self.bounds[k])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn require(&self, name: &str) -> Result<(i64, i64)> {
        self.bounds(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

/// How a variable enters the ambient series space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKind {
    Polynomial,
    LowerBounded,
    Unrestricted,
}

/// Ordered list of variables with their kinds; the order records the nesting
/// of iterated series spaces such as `U((x1))((x2))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionTag(pub Vec<(String, VarKind)>);

/// Closed exponent interval; `None` marks an unbounded side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Bound {
    pub const EMPTY: Bound = Bound { lo: Some(1), hi: Some(0) };
    pub const FREE: Bound = Bound { lo: None, hi: None };

    pub fn exact(lo: i64, hi: i64) -> Self {
        Bound { lo: Some(lo), hi: Some(hi) }
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    fn lo_or_inf(&self) -> i64 {
        self.lo.unwrap_or(NEG_INF)
    }

    fn hi_or_inf(&self) -> i64 {
        self.hi.unwrap_or(POS_INF)
    }

    fn hull(&self, other: &Bound) -> Bound {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Bound {
            lo: self.lo.zip(other.lo).map(|(a, b)| a.min(b)),
            hi: self.hi.zip(other.hi).map(|(a, b)| a.max(b)),
        }
    }

    fn sum(&self, other: &Bound) -> Bound {
        if self.is_empty() || other.is_empty() {
            return Bound::EMPTY;
        }
        Bound {
            lo: self.lo.zip(other.lo).map(|(a, b)| a + b),
            hi: self.hi.zip(other.hi).map(|(a, b)| a + b),
        }
    }

    fn within(&self, lo: i64, hi: i64) -> bool {
        if self.is_empty() {
            return true;
        }
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l >= lo && h <= hi)
    }

    fn kind(&self) -> VarKind {
        match (self.lo, self.hi) {
            _ if self.is_empty() => VarKind::Polynomial,
            (Some(_), Some(_)) => VarKind::Polynomial,
            (Some(_), None) => VarKind::LowerBounded,
            _ => VarKind::Unrestricted,
        }
    }
}

/// Per-variable support bounds of a distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportDescriptor(pub Vec<Bound>);

/// Outcome of comparing two distributions on a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowVerdict {
    /// Coefficients agree and both supports lie inside the compared box.
    Equal,
    /// Coefficients agree on the box but some support escapes it.
    EqualOnWindow,
    /// First exponent (in the first argument's variable order) where they differ.
    Differs(Vec<i64>),
}

impl WindowVerdict {
    pub fn matches(&self) -> bool {
        !matches!(self, WindowVerdict::Differs(_))
    }
}

/// Multi-variable formal series with vector coefficients, stored exactly on a
/// window, together with support bounds describing what lies outside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    vars: Vec<String>,
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, VectorQ>,
    support: Vec<Bound>,
    window: Vec<(i64, i64)>,
    kinds: Vec<VarKind>,
}

fn var_list(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|v| v.to_string()).collect()
}

fn in_box(e: &[i64], window: &[(i64, i64)]) -> bool {
    e.iter().zip(window).all(|(x, (lo, hi))| lo <= x && x <= hi)
}

impl Distribution {
    fn build(vars: Vec<String>, dim: usize, window: Vec<(i64, i64)>, support: Vec<Bound>) -> Self {
        let kinds = support.iter().map(Bound::kind).collect();
        Distribution { vars, dim, coeffs: BTreeMap::new(), support, window, kinds }
    }

    pub fn zero(vars: &[&str], dim: usize, w: &Window) -> Result<Self> {
        let window = vars.iter().map(|v| w.require(v)).collect::<Result<Vec<_>>>()?;
        Ok(Self::build(var_list(vars), dim, window, vec![Bound::EMPTY; vars.len()]))
    }

    /// Finite (Laurent polynomial) distribution; its support is read off the terms.
    pub fn from_terms<I>(vars: &[&str], dim: usize, terms: I, w: &Window) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, VectorQ)>,
    {
        let mut d = Self::zero(vars, dim, w)?;
        for (e, v) in terms {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch(v.dim(), dim));
            }
            if e.len() != vars.len() || !in_box(&e, &d.window) {
                return Err(Error::ExponentOutsideWindow(e));
            }
            d.accumulate(e, &Q::one(), &v);
        }
        d.tighten_support();
        Ok(d)
    }

    /// Constant distribution with no variables.
    pub fn constant(v: VectorQ) -> Self {
        let mut d = Self::build(Vec::new(), v.dim(), Vec::new(), Vec::new());
        if !v.is_zero() {
            d.coeffs.insert(Vec::new(), v);
        }
        d
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn window(&self) -> Window {
        Window {
            names: self.vars.clone(),
            bounds: self.window.clone(),
        }
    }

    pub fn support(&self) -> SupportDescriptor {
        SupportDescriptor(self.support.clone())
    }

    pub fn region(&self) -> RegionTag {
        RegionTag(self.vars.iter().cloned().zip(self.kinds.iter().copied()).collect())
    }

    /// Overrides the region tag (the support descriptor is left untouched).
    pub fn with_region(mut self, kinds: &[VarKind]) -> Self {
        assert_eq!(kinds.len(), self.vars.len());
        self.kinds = kinds.to_vec();
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &VectorQ)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    fn accumulate(&mut self, e: Vec<i64>, c: &Q, v: &VectorQ) {
        if v.is_zero() || c.is_zero() {
            return;
        }
        let dim = self.dim;
        let slot = self.coeffs.entry(e.clone()).or_insert_with(|| VectorQ::zeros(dim));
        slot.axpy(c, v);
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Replaces the support descriptor by the hull of the stored terms, which
    /// is exact only when the caller knows the distribution is finite.
    fn tighten_support(&mut self) {
        let n = self.vars.len();
        let mut support = vec![Bound::EMPTY; n];
        for e in self.coeffs.keys() {
            for k in 0..n {
                support[k] = support[k].hull(&Bound::exact(e[k], e[k]));
            }
        }
        self.kinds = support.iter().map(Bound::kind).collect();
        self.support = support;
    }

    /// Interval on which the coefficients of variable `k` are known, extended to
    /// infinity on any side where the support ends inside the window.
    fn known(&self, k: usize) -> (i64, i64) {
        let (wlo, whi) = self.window[k];
        let s = self.support[k];
        if s.is_empty() {
            return (NEG_INF, POS_INF);
        }
        let lo = match s.lo {
            Some(l) if l >= wlo => NEG_INF,
            _ => wlo,
        };
        let hi = match s.hi {
            Some(h) if h <= whi => POS_INF,
            _ => whi,
        };
        (lo, hi)
    }

    /// True when every variable's support is bounded and inside the window, so
    /// the stored terms are the whole distribution.
    pub fn is_exact_complete(&self) -> bool {
        self.support.iter().zip(&self.window).all(|(s, &(lo, hi))| s.within(lo, hi))
    }

    pub fn coeff(&self, e: &[i64]) -> Result<VectorQ> {
        if e.len() != self.vars.len() || !in_box(e, &self.window) {
            return Err(Error::ExponentOutsideWindow(e.to_vec()));
        }
        Ok(self.coeffs.get(e).cloned().unwrap_or_else(|| VectorQ::zeros(self.dim)))
    }

    /// Re-expresses the distribution over `vars`, which must contain every
    /// current variable; new variables carry exponent 0.
    pub fn align(&self, vars: &[String]) -> Result<Self> {
        let map: Vec<Option<usize>> = vars.iter().map(|v| self.vars.iter().position(|x| x == v)).collect();
        for v in &self.vars {
            if !vars.contains(v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        let window = map.iter().map(|m| m.map_or((NEG_INF, POS_INF), |k| self.window[k])).collect();
        let support = map.iter().map(|m| m.map_or(Bound::exact(0, 0), |k| self.support[k])).collect();
        let mut out = Self::build(vars.to_vec(), self.dim, window, support);
        out.kinds = map.iter().map(|m| m.map_or(VarKind::Polynomial, |k| self.kinds[k])).collect();
        for (e, v) in &self.coeffs {
            let ne = map.iter().map(|m| m.map_or(0, |k| e[k])).collect();
            out.coeffs.insert(ne, v.clone());
        }
        Ok(out)
    }

    fn union_vars(&self, other: &Self) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn combine(&self, other: &Self, sign: &Q) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let vars = self.union_vars(other);
        let a = self.align(&vars)?;
        let b = other.align(&vars)?;
        let support: Vec<Bound> = a.support.iter().zip(&b.support).map(|(x, y)| x.hull(y)).collect();
        // Known where both are known; where both are complete, the hull of the
        // two windows and the joint support.
        let window: Vec<(i64, i64)> = (0..vars.len())
            .map(|k| {
                let (ka, kb) = (a.known(k), b.known(k));
                let (mut lo, mut hi) = (ka.0.max(kb.0), ka.1.min(kb.1));
                if lo == NEG_INF {
                    let lows = [a.window[k].0, b.window[k].0].into_iter().filter(|&x| x > NEG_INF);
                    lo = lows.chain(support[k].lo).min().unwrap_or(0);
                }
                if hi == POS_INF {
                    let highs = [a.window[k].1, b.window[k].1].into_iter().filter(|&x| x < POS_INF);
                    hi = highs.chain(support[k].hi).max().unwrap_or(0);
                }
                (lo, hi)
            })
            .collect();
        let mut out = Self::build(vars, self.dim, window, support);
        out.kinds = a.kinds.iter().zip(&b.kinds).map(|(x, y)| *x.max(y)).collect();
        for (e, v) in &a.coeffs {
            if in_box(e, &out.window) {
                out.accumulate(e.clone(), &Q::one(), v);
            }
        }
        for (e, v) in &b.coeffs {
            if in_box(e, &out.window) {
                out.accumulate(e.clone(), sign, v);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Q::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
            out.support = vec![Bound::EMPTY; out.vars.len()];
            return out;
        }
        for v in out.coeffs.values_mut() {
            *v = v.scaled(c);
        }
        out
    }

    /// Applies a linear map to every coefficient vector.
    pub fn apply(&self, m: &Matrix) -> Result<Self> {
        if m.cols() != self.dim {
            return Err(Error::DimensionMismatch(m.cols(), self.dim));
        }
        let mut out = self.clone();
        out.dim = m.rows();
        out.coeffs = BTreeMap::new();
        for (e, v) in &self.coeffs {
            let image = m.mul_vec(v);
            if !image.is_zero() {
                out.coeffs.insert(e.clone(), image);
            }
        }
        Ok(out)
    }

    /// Formal product, defined only when every output coefficient is a finite
    /// sum as certified by the support descriptors. The result window is the
    /// part of `w` on which all contributing coefficients were known.
    pub fn mul(&self, other: &Self, w: &Window) -> Result<Self> {
        let dim = match (self.dim, other.dim) {
            (1, d) | (d, 1) => d,
            (a, b) => return Err(Error::DimensionMismatch(a, b)),
        };
        let vars = self.union_vars(other);
        let a = self.align(&vars)?;
        let b = other.align(&vars)?;
        let mut window = Vec::with_capacity(vars.len());
        let mut support = Vec::with_capacity(vars.len());
        for (k, name) in vars.iter().enumerate() {
            let (p1, p2) = (a.support[k], b.support[k]);
            support.push(p1.sum(&p2));
            if p1.is_empty() || p2.is_empty() {
                window.push(w.require(name)?);
                continue;
            }
            let lower_ok = p1.hi.is_some() || p2.lo.is_some();
            let upper_ok = p1.lo.is_some() || p2.hi.is_some();
            if !(lower_ok && upper_ok) {
                return Err(Error::NonSummableProduct(name.clone()));
            }
            let (wlo, whi) = w.require(name)?;
            let k1 = a.known(k);
            let k2 = b.known(k);
            let valid = |e: i64| {
                let bl = p2.lo_or_inf().max(e - p1.hi_or_inf());
                let bh = p2.hi_or_inf().min(e - p1.lo_or_inf());
                bl > bh || (bl >= k2.0 && bh <= k2.1 && e - bh >= k1.0 && e - bl <= k1.1)
            };
            let mut lo = None;
            let mut hi = None;
            for e in wlo..=whi {
                if valid(e) {
                    if lo.is_none() {
                        lo = Some(e);
                    }
                    hi = Some(e);
                } else if lo.is_some() {
                    break;
                }
            }
            match lo.zip(hi) {
                Some(pair) => window.push(pair),
                None => return Err(Error::EmptyWindow(name.clone())),
            }
        }
        let mut out = Self::build(vars, dim, window, support);
        out.kinds = a.kinds.iter().zip(&b.kinds).map(|(x, y)| *x.max(y)).collect();
        let n = out.vars.len();
        for (e1, v1) in &a.coeffs {
            for (e2, v2) in &b.coeffs {
                let e: Vec<i64> = (0..n).map(|k| e1[k] + e2[k]).collect();
                if !in_box(&e, &out.window) {
                    continue;
                }
                if a.dim == 1 {
                    out.accumulate(e, &v1[0], v2);
                } else {
                    out.accumulate(e, &v2[0], v1);
                }
            }
        }
        Ok(out)
    }

    /// Coefficient slice at exponent `-1` of `var`.
    pub fn residue(&self, var: &str) -> Result<Self> {
        let k = self.var_index(var)?;
        let (lo, hi) = self.window[k];
        let s = self.support[k];
        let outside_support = s.is_empty() || s.lo.is_some_and(|l| l > -1) || s.hi.is_some_and(|h| h < -1);
        if !(lo <= -1 && -1 <= hi) && !outside_support {
            return Err(Error::ExponentOutsideWindow(vec![-1]));
        }
        let mut vars = self.vars.clone();
        vars.remove(k);
        let mut window = self.window.clone();
        window.remove(k);
        let mut support = self.support.clone();
        support.remove(k);
        let mut kinds = self.kinds.clone();
        kinds.remove(k);
        let mut out = Self::build(vars, self.dim, window, support);
        out.kinds = kinds;
        for (e, v) in &self.coeffs {
            if e[k] == -1 {
                let mut ne = e.clone();
                ne.remove(k);
                out.coeffs.insert(ne, v.clone());
            }
        }
        Ok(out)
    }

    /// Term-wise derivative in `var`; the window loses its top exponent.
    pub fn derivative(&self, var: &str) -> Result<Self> {
        let k = self.var_index(var)?;
        let mut out = self.clone();
        out.coeffs = BTreeMap::new();
        let (lo, hi) = self.window[k];
        out.window[k] = (lo - 1, hi - 1);
        let s = self.support[k];
        if !s.is_empty() {
            out.support[k] = Bound { lo: s.lo.map(|l| l - 1), hi: s.hi.map(|h| h - 1) };
        }
        for (e, v) in &self.coeffs {
            if e[k] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[k] -= 1;
            out.accumulate(ne, &super::scalar::q(e[k]), v);
        }
        Ok(out)
    }

    /// Substitutes `x -> -x` in `var`.
    pub fn negate_var(&self, var: &str) -> Result<Self> {
        let k = self.var_index(var)?;
        let mut out = self.clone();
        for (e, v) in out.coeffs.iter_mut() {
            if e[k].rem_euclid(2) == 1 {
                *v = v.neg();
            }
        }
        Ok(out)
    }

    pub fn rename(&self, from: &str, to: &str) -> Result<Self> {
        let k = self.var_index(from)?;
        if from != to && self.vars.iter().any(|v| v == to) {
            return Err(Error::UnknownVariable(to.to_string()));
        }
        let mut out = self.clone();
        out.vars[k] = to.to_string();
        Ok(out)
    }

    /// Substitutes `var = var_a + var_b`, expanding every power in nonnegative
    /// powers of `var_b` (so `(x0+x2)^n` and `(x2+x0)^n` are different calls).
    /// `var_a` may equal `var`; `var_b` may already occur, in which case both
    /// `var` and `var_b` must have exact-complete support.
    pub fn taylor_shift(&self, var: &str, var_a: &str, var_b: &str, w: &Window) -> Result<Self> {
        let k = self.var_index(var)?;
        if var_b == var || var_a == var_b {
            return Err(Error::UnknownVariable(var_b.to_string()));
        }
        if var_a != var && self.vars.iter().any(|v| v == var_a) {
            return Err(Error::UnknownVariable(var_a.to_string()));
        }
        let s = self.support[k];
        if !s.is_empty() && s.lo.is_none() {
            return Err(Error::NonSummableProduct(var.to_string()));
        }
        let merged = self.vars.iter().position(|v| v == var_b);
        let (alo, ahi) = w.require(var_a)?;
        let (blo, bhi) = w.require(var_b)?;

        let mut vars = self.vars.clone();
        vars[k] = var_a.to_string();
        let mut window = self.window.clone();
        let mut support = self.support.clone();
        let mut kinds = self.kinds.clone();
        let kb = match merged {
            Some(kb) => {
                let sb = self.support[kb];
                let complete_var = s.within(self.window[k].0, self.window[k].1);
                let complete_b = sb.within(self.window[kb].0, self.window[kb].1);
                if !complete_var {
                    return Err(Error::WindowUnsupported(var.to_string()));
                }
                if !complete_b {
                    return Err(Error::WindowUnsupported(var_b.to_string()));
                }
                window[k] = (alo, ahi);
                window[kb] = (blo, bhi);
                kb
            }
            None => {
                vars.push(var_b.to_string());
                support.push(Bound::EMPTY);
                kinds.push(VarKind::LowerBounded);
                let (klo, khi) = self.known(k);
                let lo = alo.max(klo.saturating_sub(blo));
                let hi = ahi.min(khi.saturating_sub(bhi));
                if lo > hi {
                    return Err(Error::EmptyWindow(var_a.to_string()));
                }
                window[k] = (lo, hi);
                window.push((blo, bhi));
                vars.len() - 1
            }
        };
        // Support of the substituted pair: a term var^e spreads to
        // var_a^(e-i) var_b^i with 0 <= i (<= e when e >= 0).
        let (sa, sb_new) = if s.is_empty() {
            (Bound::EMPTY, Bound::EMPTY)
        } else {
            let nonneg = s.lo.is_some_and(|l| l >= 0);
            (
                Bound { lo: nonneg.then_some(0), hi: s.hi },
                Bound { lo: Some(0), hi: if nonneg { s.hi } else { None } },
            )
        };
        support[k] = sa;
        support[kb] = match merged {
            Some(_) => self.support[kb].sum(&sb_new),
            None => sb_new,
        };
        kinds[k] = kinds[k].max(sa.kind());
        let mut out = Self::build(vars, self.dim, window, support);
        out.kinds = kinds;
        for (e, v) in &self.coeffs {
            let n = e[k];
            let base_b = if merged.is_some() { e[kb] } else { 0 };
            let mut i: i64 = 0;
            loop {
                if n >= 0 && i > n {
                    break;
                }
                let ea = n - i;
                let eb = base_b + i;
                if eb > out.window[kb].1 || ea < out.window[k].0 {
                    break;
                }
                if ea <= out.window[k].1 && eb >= out.window[kb].0 {
                    let mut ne = e.clone();
                    if merged.is_none() {
                        ne.push(0);
                    }
                    ne[k] = ea;
                    ne[kb] = eb;
                    if in_box(&ne, &out.window) {
                        out.accumulate(ne, &binomial(n, i as u64), v);
                    }
                }
                i += 1;
            }
        }
        Ok(out)
    }
}

/// `(var_a + sign*var_b)^n = sum_{i>=0} C(n,i) sign^i var_a^(n-i) var_b^i`,
/// truncated to the window.
pub fn binom_expand(n: i64, var_a: &str, var_b: &str, sign: i64, w: &Window) -> Result<Distribution> {
    let (alo, ahi) = w.require(var_a)?;
    let (blo, bhi) = w.require(var_b)?;
    let window = vec![(alo, ahi), (blo, bhi)];
    let support = if n >= 0 {
        vec![Bound::exact(0, n), Bound::exact(0, n)]
    } else {
        vec![Bound { lo: None, hi: Some(n) }, Bound { lo: Some(0), hi: None }]
    };
    let mut d = Distribution::build(var_list(&[var_a, var_b]), 1, window, support);
    d.kinds = vec![VarKind::Unrestricted, VarKind::LowerBounded];
    let sgn = if sign < 0 { -1 } else { 1 };
    let mut i: i64 = 0;
    loop {
        if n >= 0 && i > n {
            break;
        }
        let ea = n - i;
        if i > bhi || ea < alo {
            break;
        }
        if ea <= ahi && i >= blo {
            let mut c = binomial(n, i as u64);
            if sgn < 0 {
                c *= sign_pow(i);
            }
            d.accumulate(vec![ea, i], &Q::one(), &VectorQ::scalar(c));
        }
        i += 1;
    }
    Ok(d)
}

/// `delta(x) = sum_n x^n` on the window.
pub fn delta(var: &str, w: &Window) -> Result<Distribution> {
    let (lo, hi) = w.require(var)?;
    let mut d = Distribution::build(var_list(&[var]), 1, vec![(lo, hi)], vec![Bound::FREE]);
    for n in lo..=hi {
        d.coeffs.insert(vec![n], VectorQ::scalar(Q::one()));
    }
    Ok(d)
}

/// The three delta-function expressions of the three-term identity, all in
/// variables `x0, x1, x2` (in that order).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaTerm {
    /// `x0^-1 delta((x1 - x2)/x0)`
    Forward,
    /// `x0^-1 delta((x2 - x1)/(-x0))`
    Reversed,
    /// `x2^-1 delta((x1 - x0)/x2)`
    Associator,
}

pub fn delta_term(term: DeltaTerm, w: &Window) -> Result<Distribution> {
    let names = ["x0", "x1", "x2"];
    let window: Vec<(i64, i64)> = names.iter().map(|v| w.require(v)).collect::<Result<_>>()?;
    let support = match term {
        DeltaTerm::Associator => vec![Bound { lo: Some(0), hi: None }, Bound::FREE, Bound::FREE],
        _ => vec![Bound::FREE, Bound::FREE, Bound { lo: Some(0), hi: None }],
    };
    let mut out = Distribution::build(var_list(&names), 1, window.clone(), support);
    out.kinds = vec![VarKind::Unrestricted; 3];
    // The outer sum runs over the exponent of the prefactor variable.
    let (outer, pre) = match term {
        DeltaTerm::Associator => (2usize, window[2]),
        _ => (0usize, window[0]),
    };
    for e_pre in pre.0..=pre.1 {
        let n = -e_pre - 1;
        let (a, b, ia, ib) = match term {
            DeltaTerm::Forward => ("x1", "x2", 1usize, 2usize),
            DeltaTerm::Reversed => ("x2", "x1", 2, 1),
            DeltaTerm::Associator => ("x1", "x0", 1, 0),
        };
        let inner = binom_expand(n, a, b, -1, w)?;
        let factor = match term {
            DeltaTerm::Reversed => sign_pow(n),
            _ => Q::one(),
        };
        for (e, v) in &inner.coeffs {
            let mut ne = vec![0i64; 3];
            ne[outer] = e_pre;
            ne[ia] = e[0];
            ne[ib] = e[1];
            if in_box(&ne, &window) {
                out.accumulate(ne, &factor, v);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Left: `x0^-1 delta((x1-x2)/x0) - x0^-1 delta((x2-x1)/(-x0))`;
/// right: `x2^-1 delta((x1-x0)/x2)`.
pub fn delta_three_term(side: Side, w: &Window) -> Result<Distribution> {
    match side {
        Side::Left => delta_term(DeltaTerm::Forward, w)?.sub(&delta_term(DeltaTerm::Reversed, w)?),
        Side::Right => delta_term(DeltaTerm::Associator, w),
    }
}

/// Compares on `w` intersected with both windows; differing variable sets are
/// reconciled by treating a missing variable as exponent 0.
pub fn window_equal(d1: &Distribution, d2: &Distribution, w: &Window) -> WindowVerdict {
    let vars = d1.union_vars(d2);
    let (a, b) = match (d1.align(&vars), d2.align(&vars)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => unreachable!("union of variables always aligns"),
    };
    let region: Vec<(i64, i64)> = vars
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (lo, hi) = w.bounds(v).unwrap_or((NEG_INF, POS_INF));
            (lo.max(a.window[k].0).max(b.window[k].0), hi.min(a.window[k].1).min(b.window[k].1))
        })
        .collect();
    let zero = VectorQ::zeros(a.dim.max(b.dim));
    let mut keys: Vec<&Vec<i64>> = a.coeffs.keys().chain(b.coeffs.keys()).filter(|e| in_box(e, &region)).collect();
    keys.sort();
    keys.dedup();
    for e in keys {
        let x = a.coeffs.get(e).unwrap_or(&zero);
        let y = b.coeffs.get(e).unwrap_or(&zero);
        if x != y {
            return WindowVerdict::Differs(e.clone());
        }
    }
    let contained = |d: &Distribution| {
        d.support.iter().zip(&region).all(|(s, &(lo, hi))| lo <= hi && s.within(lo, hi))
    };
    if contained(&a) && contained(&b) {
        WindowVerdict::Equal
    } else {
        WindowVerdict::EqualOnWindow
    }
}

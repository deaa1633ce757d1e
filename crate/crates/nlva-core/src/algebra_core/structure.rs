use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formal_series::VectorQ;
use crate::linalg::Matrix;

/// Laurent polynomial with matrix coefficients, keyed by the power of `x`.
pub type Field = BTreeMap<i64, Matrix>;

/// Laurent polynomial with vector coefficients, keyed by the power of `x`.
pub type VField = BTreeMap<i64, VectorQ>;

/// Anything on which an algebra acts through vertex operators: the algebra
/// itself (adjoint action) or a module.
pub trait Action {
    /// Dimension of the space acted on.
    fn space_dim(&self) -> usize;
    /// Modes `(e_i)_n` of the `i`-th algebra basis vector, keyed by `n`.
    fn modes(&self, i: usize) -> &BTreeMap<i64, Matrix>;

    /// `Y(u, x)` keyed by the power of `x` (`u_n` sits at `x^(-n-1)`).
    fn field(&self, u: &VectorQ) -> Field {
        let d = self.space_dim();
        let mut out: Field = BTreeMap::new();
        for (i, c) in u.support() {
            for (n, m) in self.modes(i) {
                out.entry(-n - 1).or_insert_with(|| Matrix::zeros(d, d)).axpy(c, m);
            }
        }
        out.retain(|_, m| !m.is_zero());
        out
    }

    /// `Y(u, x) w` keyed by the power of `x`.
    fn act(&self, u: &VectorQ, w: &VectorQ) -> VField {
        apply_field(&self.field(u), w)
    }
}

pub fn apply_field(field: &Field, w: &VectorQ) -> VField {
    let mut out = BTreeMap::new();
    for (e, m) in field {
        let v = m.mul_vec(w);
        if !v.is_zero() {
            out.insert(*e, v);
        }
    }
    out
}

/// Finite-dimensional weak axiomatic vertex algebra given by its structure
/// constants `(e_i)_n e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraStructure {
    basis: Vec<String>,
    vacuum: VectorQ,
    ops: Vec<BTreeMap<i64, Matrix>>,
}

impl AlgebraStructure {
    /// Builds the structure from entries `(i, j, n, (e_i)_n e_j)`; repeated
    /// entries add up. Zero-dimensional spaces and a zero vacuum are rejected.
    pub fn new<I>(basis: Vec<String>, vacuum: VectorQ, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64, VectorQ)>,
    {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::MalformedStructure("empty basis".into()));
        }
        if vacuum.dim() != dim {
            return Err(Error::DimensionMismatch(vacuum.dim(), dim));
        }
        if vacuum.is_zero() {
            return Err(Error::MalformedStructure("zero vacuum vector".into()));
        }
        let mut ops: Vec<BTreeMap<i64, Matrix>> = (0..dim).map(|_| BTreeMap::new()).collect();
        for (i, j, n, v) in entries {
            if i >= dim || j >= dim {
                return Err(Error::MalformedStructure(format!("entry ({i}, {j}, {n}) out of range")));
            }
            if v.dim() != dim {
                return Err(Error::DimensionMismatch(v.dim(), dim));
            }
            let m = ops[i].entry(n).or_insert_with(|| Matrix::zeros(dim, dim));
            for (k, x) in v.support() {
                let cur = m.get(k, j).clone();
                m.set(k, j, cur + x);
            }
        }
        for modes in ops.iter_mut() {
            modes.retain(|_, m| !m.is_zero());
        }
        Ok(AlgebraStructure { basis, vacuum, ops })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn vacuum(&self) -> &VectorQ {
        &self.vacuum
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn unit(&self, i: usize) -> VectorQ {
        VectorQ::unit(self.dim(), i)
    }

    /// `(e_i)_n e_j`.
    pub fn product(&self, i: usize, j: usize, n: i64) -> VectorQ {
        self.ops[i].get(&n).map_or_else(|| VectorQ::zeros(self.dim()), |m| m.column(j))
    }

    /// `u_n v` for arbitrary vectors.
    pub fn apply(&self, u: &VectorQ, n: i64, v: &VectorQ) -> VectorQ {
        let mut out = VectorQ::zeros(self.dim());
        for (i, c) in u.support() {
            if let Some(m) = self.ops[i].get(&n) {
                out.axpy(c, &m.mul_vec(v));
            }
        }
        out
    }

    /// All nonzero entries `(i, j, n, (e_i)_n e_j)` in `(i, j, n)` order.
    pub fn entries(&self) -> Vec<(usize, usize, i64, VectorQ)> {
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                for (n, m) in &self.ops[i] {
                    let v = m.column(j);
                    if !v.is_zero() {
                        out.push((i, j, *n, v));
                    }
                }
            }
        }
        out
    }

    /// Range of `n` with `(e_i)_n e_j` nonzero.
    pub fn n_bounds(&self, i: usize, j: usize) -> Option<(i64, i64)> {
        let ns: Vec<i64> = self.ops[i].iter().filter(|(_, m)| !m.column(j).is_zero()).map(|(n, _)| *n).collect();
        Some((*ns.first()?, *ns.last()?))
    }

    /// Range of `n` over all basis pairs.
    pub fn global_n_bounds(&self) -> Option<(i64, i64)> {
        let lo = self.ops.iter().filter_map(|m| m.keys().next()).min()?;
        let hi = self.ops.iter().filter_map(|m| m.keys().next_back()).max()?;
        Some((*lo, *hi))
    }

    /// Default search bound `2 (n_max - n_min) + 4`.
    pub fn default_bound(&self) -> i64 {
        self.global_n_bounds().map_or(4, |(lo, hi)| 2 * (hi - lo) + 4)
    }

    /// Copy with one structure constant replaced (for corruption oracles).
    pub fn with_product(&self, i: usize, j: usize, n: i64, v: &VectorQ) -> Self {
        let mut out = self.clone();
        let dim = self.dim();
        let m = out.ops[i].entry(n).or_insert_with(|| Matrix::zeros(dim, dim));
        for k in 0..dim {
            m.set(k, j, v[k].clone());
        }
        out.ops[i].retain(|_, m| !m.is_zero());
        out
    }

    /// Same structure under new basis names.
    pub fn renamed(&self, basis: Vec<String>) -> Self {
        assert_eq!(basis.len(), self.dim());
        AlgebraStructure { basis, ..self.clone() }
    }

    /// Modes `u_n` available for `u`, i.e. the union of the supports of its components.
    pub fn mode_range(&self, u: &VectorQ) -> Vec<i64> {
        let mut ns: Vec<i64> = u.support().flat_map(|(i, _)| self.ops[i].keys().copied()).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Matrix of `u_n`.
    pub fn mode_matrix(&self, u: &VectorQ, n: i64) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (i, c) in u.support() {
            if let Some(x) = self.ops[i].get(&n) {
                m.axpy(c, x);
            }
        }
        m
    }
}

impl Action for AlgebraStructure {
    fn space_dim(&self) -> usize {
        self.dim()
    }

    fn modes(&self, i: usize) -> &BTreeMap<i64, Matrix> {
        &self.ops[i]
    }
}

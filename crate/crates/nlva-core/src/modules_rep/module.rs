use alloc::collections::{BTreeMap, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra_core::{Action, AlgebraStructure};
use crate::error::{Error, Result};
use crate::formal_series::{VectorQ, Q};
use crate::linalg::{rref, sparse, Matrix, Span};

/// Module over an algebra of dimension `alg_dim`, given by the mode matrices
/// of every algebra basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleStructure {
    basis: Vec<String>,
    alg_dim: usize,
    ops: Vec<BTreeMap<i64, Matrix>>,
}

impl ModuleStructure {
    /// Builds the action from entries `(i, j, n, (e_i)_n w_j)`; repeated entries add up.
    pub fn new<I>(basis: Vec<String>, alg_dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64, VectorQ)>,
    {
        let dim = basis.len();
        if dim == 0 {
            return Err(Error::MalformedStructure("empty module basis".into()));
        }
        let mut ops: Vec<BTreeMap<i64, Matrix>> = (0..alg_dim).map(|_| BTreeMap::new()).collect();
        for (i, j, n, v) in entries {
            if i >= alg_dim || j >= dim {
                return Err(Error::MalformedStructure(format!("module entry ({i}, {j}, {n}) out of range")));
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
        Ok(ModuleStructure { basis, alg_dim, ops })
    }

    /// The algebra acting on itself.
    pub fn adjoint(alg: &AlgebraStructure) -> Self {
        let ops = (0..alg.dim()).map(|i| alg.modes(i).clone()).collect();
        ModuleStructure { basis: alg.basis().to_vec(), alg_dim: alg.dim(), ops }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self, j: usize) -> VectorQ {
        VectorQ::unit(self.dim(), j)
    }

    /// All nonzero entries `(i, j, n, (e_i)_n w_j)`.
    pub fn entries(&self) -> Vec<(usize, usize, i64, VectorQ)> {
        let mut out = Vec::new();
        for (i, modes) in self.ops.iter().enumerate() {
            for j in 0..self.dim() {
                for (n, m) in modes {
                    let v = m.column(j);
                    if !v.is_zero() {
                        out.push((i, j, *n, v));
                    }
                }
            }
        }
        out.sort_by_key(|e| (e.0, e.1, e.2));
        out
    }

    /// Copy with every mode of algebra basis vector `i` removed.
    pub fn without_action(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.ops[i].clear();
        out
    }

    /// Whether `v -> Y_W(v, x)` is injective, by rank of the stacked mode data.
    pub fn is_faithful(&self) -> bool {
        let ns: Vec<i64> = {
            let mut ns: Vec<i64> = self.ops.iter().flat_map(|m| m.keys().copied()).collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        };
        let d = self.dim();
        let rows: Vec<VectorQ> = (0..self.alg_dim)
            .map(|i| {
                let mut row = Vec::with_capacity(ns.len() * d * d);
                for n in &ns {
                    match self.ops[i].get(n) {
                        Some(m) => row.extend(m.entries().iter().cloned()),
                        None => row.extend(core::iter::repeat_n(Q::zero(), d * d)),
                    }
                }
                VectorQ(row)
            })
            .collect();
        rref(&rows).iter().filter(|r| !r.is_zero()).count() == self.alg_dim
    }

    /// Submodule generated by `w`: the span of all `u_n ... w`.
    pub fn generated_submodule(&self, w: &VectorQ) -> Vec<VectorQ> {
        let mut span = Span::new();
        let mut found = Vec::new();
        let mut queue = VecDeque::new();
        if span.insert(&sparse(w)) {
            found.push(w.clone());
            queue.push_back(w.clone());
        }
        while let Some(x) = queue.pop_front() {
            for modes in &self.ops {
                for m in modes.values() {
                    let y = m.mul_vec(&x);
                    if !y.is_zero() && span.insert(&sparse(&y)) {
                        found.push(y.clone());
                        queue.push_back(y);
                    }
                }
            }
        }
        rref(&found).into_iter().filter(|v| !v.is_zero()).collect()
    }

    pub fn generates(&self, w: &VectorQ) -> bool {
        self.generated_submodule(w).len() == self.dim()
    }
}

impl Action for ModuleStructure {
    fn space_dim(&self) -> usize {
        self.dim()
    }

    fn modes(&self, i: usize) -> &BTreeMap<i64, Matrix> {
        &self.ops[i]
    }
}

/// Column vectors `W^n` as a module over `M(n, V)`; basis `w[r]`, W index major.
pub fn wn_module(m: &ModuleStructure, n: usize) -> Result<ModuleStructure> {
    if n == 0 {
        return Err(Error::MalformedStructure("matrix size must be positive".into()));
    }
    let dw = m.dim();
    let mut basis = Vec::with_capacity(dw * n);
    for w in m.basis() {
        for r in 0..n {
            basis.push(format!("{w}[{}]", r + 1));
        }
    }
    let lift = |x: &VectorQ, r: usize| {
        let mut out = VectorQ::zeros(dw * n);
        for (k, c) in x.support() {
            out[k * n + r] = c.clone();
        }
        out
    };
    let mut entries = Vec::new();
    for (v, w, p, x) in m.entries() {
        for i in 0..n {
            for j in 0..n {
                // (v Eij) acting on w in row j lands in row i.
                entries.push((v * n * n + i * n + j, w * n + j, p, lift(&x, i)));
            }
        }
    }
    ModuleStructure::new(basis, m.alg_dim() * n * n, entries)
}

fn kron(a: &VectorQ, b: &VectorQ) -> VectorQ {
    let mut out = VectorQ::zeros(a.dim() * b.dim());
    for (i, x) in a.support() {
        for (j, y) in b.support() {
            out[i * b.dim() + j] = x * y;
        }
    }
    out
}

fn tensor_pair(a: &ModuleStructure, b: &ModuleStructure) -> Result<ModuleStructure> {
    let mut basis = Vec::with_capacity(a.dim() * b.dim());
    for x in a.basis() {
        for y in b.basis() {
            basis.push(format!("{x}*{y}"));
        }
    }
    let ea = a.entries();
    let eb = b.entries();
    let mut entries = Vec::with_capacity(ea.len() * eb.len());
    for (i, j, n1, va) in &ea {
        for (k, l, n2, vb) in &eb {
            entries.push((i * b.alg_dim() + k, j * b.dim() + l, n1 + n2 + 1, kron(va, vb)));
        }
    }
    ModuleStructure::new(basis, a.alg_dim() * b.alg_dim(), entries)
}

/// `W1 x ... x Wr` over the tensor product of the algebras, acting factor-wise.
pub fn tensor_module(mods: &[ModuleStructure]) -> Result<ModuleStructure> {
    let (first, rest) = mods.split_first().ok_or_else(|| Error::MalformedStructure("no tensor factors".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| tensor_pair(&acc, f))
}

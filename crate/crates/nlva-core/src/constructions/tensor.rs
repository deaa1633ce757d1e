use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra_core::{Action, AlgebraStructure};
use crate::error::{Error, Result};
use crate::formal_series::VectorQ;

fn kron(a: &VectorQ, b: &VectorQ) -> VectorQ {
    let mut out = VectorQ::zeros(a.dim() * b.dim());
    for (i, x) in a.support() {
        for (j, y) in b.support() {
            out[i * b.dim() + j] = x * y;
        }
    }
    out
}

fn tensor_pair(a: &AlgebraStructure, b: &AlgebraStructure) -> Result<AlgebraStructure> {
    let (da, db) = (a.dim(), b.dim());
    let mut basis: Vec<String> = Vec::with_capacity(da * db);
    for x in a.basis() {
        for y in b.basis() {
            basis.push(format!("{x}*{y}"));
        }
    }
    let mut entries = Vec::new();
    for i in 0..da {
        for k in 0..db {
            for j in 0..da {
                let ya = a.act(&a.unit(i), &a.unit(j));
                for l in 0..db {
                    let yb = b.act(&b.unit(k), &b.unit(l));
                    for (p, va) in &ya {
                        for (r, vb) in &yb {
                            // x^p x^r = x^{-n-1} with n = -(p + r) - 1.
                            entries.push((i * db + k, j * db + l, -(p + r) - 1, kron(va, vb)));
                        }
                    }
                }
            }
        }
    }
    AlgebraStructure::new(basis, kron(a.vacuum(), b.vacuum()), entries)
}

/// `Y(v1 x ... x vn, x) = Y(v1, x) x ... x Y(vn, x)` on the lexicographic tensor basis.
pub fn tensor_product(factors: &[AlgebraStructure]) -> Result<AlgebraStructure> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::MalformedStructure("no tensor factors".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| tensor_pair(&acc, f))
}

/// `M(n, V)`: basis `v*Eij` (V index major), with `Y(A, x) B` the formal
/// matrix product of the entries.
pub fn matrix_algebra(alg: &AlgebraStructure, n: usize) -> Result<AlgebraStructure> {
    if n == 0 {
        return Err(Error::MalformedStructure("matrix size must be positive".into()));
    }
    let d = alg.dim();
    let nn = n * n;
    let idx = |v: usize, i: usize, j: usize| v * nn + i * n + j;
    let mut basis = Vec::with_capacity(d * nn);
    for v in alg.basis() {
        for i in 0..n {
            for j in 0..n {
                basis.push(format!("{v}*E{}{}", i + 1, j + 1));
            }
        }
    }
    let lift = |x: &VectorQ, i: usize, j: usize| {
        let mut out = VectorQ::zeros(d * nn);
        for (v, c) in x.support() {
            out[idx(v, i, j)] = c.clone();
        }
        out
    };
    let mut vacuum = VectorQ::zeros(d * nn);
    for i in 0..n {
        vacuum.add_assign(&lift(alg.vacuum(), i, i));
    }
    let mut entries = Vec::new();
    for u in 0..d {
        for w in 0..d {
            let y = alg.act(&alg.unit(u), &alg.unit(w));
            for (p, val) in &y {
                for i in 0..n {
                    for j in 0..n {
                        for l in 0..n {
                            // (u Eij)(w Ejl) = (uw) Eil
                            entries.push((idx(u, i, j), idx(w, j, l), -p - 1, lift(val, i, l)));
                        }
                    }
                }
            }
        }
    }
    AlgebraStructure::new(basis, vacuum, entries)
}

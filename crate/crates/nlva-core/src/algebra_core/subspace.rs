use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::checks::{d_operator, exp_xd};
use super::structure::{Action, AlgebraStructure};
use crate::error::{Error, Result};
use crate::formal_series::{sign_pow, VectorQ};
use crate::linalg::{nullspace_of_rows, rref, sparse, Span};

/// Row-reduced basis of the span of `vs`.
pub fn reduced_basis(vs: &[VectorQ]) -> Vec<VectorQ> {
    rref(vs).into_iter().filter(|v| !v.is_zero()).collect()
}

fn span_of(vs: &[VectorQ]) -> Span<usize> {
    let mut s = Span::new();
    for v in vs {
        s.insert(&sparse(v));
    }
    s
}

/// Subalgebra generated by `gens`: the span of all words
/// `u1_{n1} ... ur_{nr} 1` with every `ui` in `gens`.
pub fn generate_subalgebra(alg: &AlgebraStructure, gens: &[VectorQ]) -> Result<Vec<VectorQ>> {
    let mut span = Span::new();
    let mut found = Vec::new();
    let mut queue = VecDeque::new();
    span.insert(&sparse(alg.vacuum()));
    found.push(alg.vacuum().clone());
    queue.push_back(alg.vacuum().clone());
    let fields: Vec<_> = gens.iter().map(|u| alg.field(u)).collect();
    while let Some(x) = queue.pop_front() {
        for f in &fields {
            for m in f.values() {
                let y = m.mul_vec(&x);
                if !y.is_zero() && span.insert(&sparse(&y)) {
                    if span.dim() > alg.dim() {
                        return Err(Error::CapExceeded(alg.dim()));
                    }
                    found.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    Ok(reduced_basis(&found))
}

/// Whether `basis` spans a subspace containing the vacuum and closed under
/// every product `a_n b`.
pub fn is_subalgebra(alg: &AlgebraStructure, basis: &[VectorQ]) -> bool {
    let span = span_of(basis);
    if !span.contains(&sparse(alg.vacuum())) {
        return false;
    }
    basis.iter().all(|a| {
        let f = alg.field(a);
        basis.iter().all(|b| f.values().all(|m| span.contains(&sparse(&m.mul_vec(b)))))
    })
}

/// `{v : v_n U in U for all n}`.
pub fn stabilizer(alg: &AlgebraStructure, u: &[VectorQ]) -> Vec<VectorQ> {
    let d = alg.dim();
    // Functionals vanishing on U.
    let ann = nullspace_of_rows(d, u);
    let mut rows = Vec::new();
    let (lo, hi) = alg.global_n_bounds().unwrap_or((0, -1));
    for b in u {
        for n in lo..=hi {
            let imgs: Vec<VectorQ> = (0..d).map(|i| alg.apply(&alg.unit(i), n, b)).collect();
            for a in &ann {
                let row: Vec<_> = imgs.iter().map(|img| dot(a, img)).collect();
                let row = VectorQ(row);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    reduced_basis(&nullspace_of_rows(d, &rows))
}

/// `{v : Y(v,x)w = e^{xD} Y(w,-x)v for all w in S}`.
pub fn localizer(alg: &AlgebraStructure, s: &[VectorQ]) -> Result<Vec<VectorQ>> {
    let d = alg.dim();
    let exp = exp_xd(&d_operator(alg).matrix)?;
    let mut rows = Vec::new();
    for w in s {
        // Column i holds the coefficients of the discrepancy for v = e_i.
        let mut cols: alloc::collections::BTreeMap<(i64, usize), VectorQ> = Default::default();
        for i in 0..d {
            let ei = alg.unit(i);
            for (e, x) in alg.act(&ei, w) {
                for (k, c) in x.support() {
                    cols.entry((e, k)).or_insert_with(|| VectorQ::zeros(d))[i] += c;
                }
            }
            for (e, x) in alg.act(w, &ei) {
                let x = x.scaled(&sign_pow(e));
                for (a, m) in &exp {
                    for (k, c) in m.mul_vec(&x).support() {
                        cols.entry((a + e, k)).or_insert_with(|| VectorQ::zeros(d))[i] -= c;
                    }
                }
            }
        }
        rows.extend(cols.into_values().filter(|r| !r.is_zero()));
    }
    Ok(reduced_basis(&nullspace_of_rows(d, &rows)))
}

fn dot(a: &VectorQ, b: &VectorQ) -> crate::formal_series::Q {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

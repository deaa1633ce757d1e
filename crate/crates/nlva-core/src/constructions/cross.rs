use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra_core::AlgebraStructure;
use crate::error::{Error, Result};
use crate::formal_series::VectorQ;
use crate::linalg::Matrix;

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    /// `table[g][h] = gh`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        let bad = |m: &str| Err(Error::MalformedStructure(format!("group table: {m}")));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("wrong shape");
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return bad("element 0 is not the identity");
        }
        for g in 0..n {
            if !(0..n).any(|h| table[g][h] == 0) {
                return bad("missing inverse");
            }
            for h in 0..n {
                for k in 0..n {
                    if table[table[g][h]][k] != table[g][table[h][k]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { names, table })
    }

    /// Cyclic group of order `n` with elements `e, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|k| match k {
                0 => "e".into(),
                1 => "g".into(),
                _ => format!("g^{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { names, table }
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        (0..self.size()).find(|&h| self.table[g][h] == 0).expect("validated group")
    }
}

/// A finite group acting on an algebra by the given matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupActionData {
    pub group: FiniteGroup,
    pub matrices: Vec<Matrix>,
}

impl GroupActionData {
    /// Checks that the matrices form an action by algebra automorphisms.
    pub fn validate(&self, alg: &AlgebraStructure) -> Result<()> {
        let d = alg.dim();
        let g = &self.group;
        if self.matrices.len() != g.size() || self.matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
            return Err(Error::NotAnAutomorphism("one d x d matrix per group element required".into()));
        }
        if self.matrices[0] != Matrix::identity(d) {
            return Err(Error::NotAnAutomorphism("identity element does not act trivially".into()));
        }
        for a in 0..g.size() {
            for b in 0..g.size() {
                if self.matrices[a].mul(&self.matrices[b]) != self.matrices[g.mul(a, b)] {
                    return Err(Error::NotAnAutomorphism(format!("{} {} is not compatible with the product", g.names[a], g.names[b])));
                }
            }
        }
        let (lo, hi) = alg.global_n_bounds().unwrap_or((0, -1));
        for (k, psi) in self.matrices.iter().enumerate() {
            let name = &g.names[k];
            if psi.mul_vec(alg.vacuum()) != *alg.vacuum() {
                return Err(Error::NotAnAutomorphism(format!("{name} moves the vacuum")));
            }
            for i in 0..d {
                let pu = psi.column(i);
                for j in 0..d {
                    let pv = psi.column(j);
                    for n in lo..=hi {
                        if psi.mul_vec(&alg.product(i, j, n)) != alg.apply(&pu, n, &pv) {
                            return Err(Error::NotAnAutomorphism(format!(
                                "{name} does not preserve ({})_{n} {}",
                                alg.basis()[i],
                                alg.basis()[j]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn act(&self, g: usize, v: &VectorQ) -> VectorQ {
        self.matrices[g].mul_vec(v)
    }
}

/// `V[G]` with `Y(ug, x)(vh) = Y(u, x) g(v) gh`; basis `v*g`, V index major.
pub fn cross_product(alg: &AlgebraStructure, act: &GroupActionData) -> Result<AlgebraStructure> {
    act.validate(alg)?;
    let d = alg.dim();
    let grp = &act.group;
    let m = grp.size();
    let mut basis = Vec::with_capacity(d * m);
    for v in alg.basis() {
        for g in &grp.names {
            basis.push(format!("{v}*{g}"));
        }
    }
    let lift = |x: &VectorQ, g: usize| {
        let mut out = VectorQ::zeros(d * m);
        for (v, c) in x.support() {
            out[v * m + g] = c.clone();
        }
        out
    };
    let (lo, hi) = alg.global_n_bounds().unwrap_or((0, -1));
    let mut entries = Vec::new();
    for u in 0..d {
        for g in 0..m {
            for v in 0..d {
                let gv = act.act(g, &alg.unit(v));
                for h in 0..m {
                    for n in lo..=hi {
                        let x = alg.apply(&alg.unit(u), n, &gv);
                        if !x.is_zero() {
                            entries.push((u * m + g, v * m + h, n, lift(&x, grp.mul(g, h))));
                        }
                    }
                }
            }
        }
    }
    AlgebraStructure::new(basis, lift(alg.vacuum(), 0), entries)
}

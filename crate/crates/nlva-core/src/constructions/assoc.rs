use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra_core::AlgebraStructure;
use crate::error::{Error, Result};
use crate::formal_series::{factorial, VectorQ, Q};
use crate::linalg::Matrix;

/// Finite-dimensional unital associative algebra with a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebraData {
    pub basis: Vec<String>,
    /// `mult[i][j] = e_i e_j`.
    pub mult: Vec<Vec<VectorQ>>,
    /// Identity element; a vector since it need not be a basis element.
    pub identity: VectorQ,
    pub derivation: Matrix,
}

impl AssocAlgebraData {
    /// Associative algebra with zero derivation.
    pub fn plain(basis: Vec<String>, mult: Vec<Vec<VectorQ>>, identity: VectorQ) -> Self {
        let d = basis.len();
        AssocAlgebraData { basis, mult, identity, derivation: Matrix::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Product of arbitrary vectors.
    pub fn product(&self, a: &VectorQ, b: &VectorQ) -> VectorQ {
        let mut out = VectorQ::zeros(self.dim());
        for (i, x) in a.support() {
            for (j, y) in b.support() {
                out.axpy(&(x * y), &self.mult[i][j]);
            }
        }
        out
    }

    /// Full matrix algebra `M_n(Q)` on `E11, E12, ..., Enn`.
    pub fn matrix_units(n: usize) -> Self {
        let d = n * n;
        let mut basis = Vec::new();
        for i in 0..n {
            for j in 0..n {
                basis.push(format!("E{}{}", i + 1, j + 1));
            }
        }
        let mult = (0..d)
            .map(|a| {
                (0..d)
                    .map(|b| {
                        let (i, j, k, l) = (a / n, a % n, b / n, b % n);
                        if j == k { VectorQ::unit(d, i * n + l) } else { VectorQ::zeros(d) }
                    })
                    .collect()
            })
            .collect();
        let mut one = VectorQ::zeros(d);
        for i in 0..n {
            one[i * n + i] = Q::one();
        }
        Self::plain(basis, mult, one)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 {
            return Err(Error::MalformedStructure("empty basis".into()));
        }
        if self.mult.len() != d || self.mult.iter().any(|r| r.len() != d || r.iter().any(|v| v.dim() != d)) {
            return Err(Error::MalformedStructure("multiplication table has the wrong shape".into()));
        }
        if self.derivation.rows() != d || self.derivation.cols() != d {
            return Err(Error::DimensionMismatch(self.derivation.rows(), d));
        }
        let one = &self.identity;
        if one.dim() != d {
            return Err(Error::DimensionMismatch(one.dim(), d));
        }
        for j in 0..d {
            let ej = VectorQ::unit(d, j);
            if self.product(one, &ej) != ej || self.product(&ej, one) != ej {
                return Err(Error::MalformedStructure(format!("identity fails on {}", self.basis[j])));
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let l = self.product(&self.mult[i][j], &VectorQ::unit(d, k));
                    let r = self.product(&VectorQ::unit(d, i), &self.mult[j][k]);
                    if l != r {
                        return Err(Error::MalformedStructure(format!(
                            "not associative on ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        let dm = &self.derivation;
        for i in 0..d {
            for j in 0..d {
                let lhs = dm.mul_vec(&self.mult[i][j]);
                let rhs = self
                    .product(&dm.column(i), &VectorQ::unit(d, j))
                    .add(&self.product(&VectorQ::unit(d, i), &dm.column(j)));
                if lhs != rhs {
                    return Err(Error::NotADerivation(format!("Leibniz rule fails on ({}, {})", self.basis[i], self.basis[j])));
                }
            }
        }
        Ok(())
    }
}

/// `Y(a, x) b = (e^{xd} a) b`, i.e. `(e_i)_{-1-m} e_j = (d^m e_i) e_j / m!`.
pub fn from_assoc_with_derivation(a: &AssocAlgebraData) -> Result<AlgebraStructure> {
    a.validate()?;
    let d = a.dim();
    let idx = a.derivation.nilpotency_index().ok_or(Error::NonNilpotentD)?;
    let mut entries = Vec::new();
    for i in 0..d {
        let mut dm = VectorQ::unit(d, i);
        for m in 0..idx {
            let scaled = dm.scaled(&(Q::one() / factorial(m as u64)));
            for j in 0..d {
                let v = a.product(&scaled, &VectorQ::unit(d, j));
                if !v.is_zero() {
                    entries.push((i, j, -1 - m as i64, v));
                }
            }
            dm = a.derivation.mul_vec(&dm);
        }
    }
    AlgebraStructure::new(a.basis.clone(), a.identity.clone(), entries)
}

//! Dense rational matrices and deterministic row reduction.
//!
//! Pivots are always taken at the first nonzero column in canonical order, so
//! bases and witnesses come out identical on every run.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::formal_series::{VectorQ, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[VectorQ]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), rows);
            for i in 0..rows {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[VectorQ]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dim(), cols);
            for j in 0..cols {
                m.set(i, j, r[j].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> VectorQ {
        VectorQ((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row(&self, i: usize) -> VectorQ {
        VectorQ(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &VectorQ) -> VectorQ {
        assert_eq!(v.dim(), self.cols);
        let mut out = VectorQ::zeros(self.rows);
        for (j, x) in v.support() {
            for i in 0..self.rows {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[i] += a * x;
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Q, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<VectorQ> = (0..self.rows).map(|i| self.row(i)).collect();
        rref(&rows).len()
    }

    /// Smallest `m` with `self^m = 0`, if it exists (checked up to the size).
    pub fn nilpotency_index(&self) -> Option<usize> {
        assert_eq!(self.rows, self.cols);
        let mut p = Matrix::identity(self.rows);
        for m in 0..=self.rows {
            if p.is_zero() {
                return Some(m);
            }
            p = p.mul(self);
        }
        None
    }

    /// Exact solution set of `self * x = 0`, as a basis in reduced form.
    pub fn nullspace(&self) -> Vec<VectorQ> {
        let rows: Vec<VectorQ> = (0..self.rows).map(|i| self.row(i)).collect();
        nullspace_of_rows(self.cols, &rows)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Reduced row echelon basis of the row space (zero rows dropped).
pub fn rref(rows: &[VectorQ]) -> Vec<VectorQ> {
    rref_with_pivots(rows).0
}

pub fn rref_with_pivots(rows: &[VectorQ]) -> (Vec<VectorQ>, Vec<usize>) {
    let mut m: Vec<VectorQ> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let cols = m.first().map_or(0, VectorQ::dim);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        m[r] = m[r].scaled(&inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = -m[i][c].clone();
                let pivot_row = m[r].clone();
                m[i].axpy(&f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn nullspace_of_rows(cols: usize, rows: &[VectorQ]) -> Vec<VectorQ> {
    let (red, pivots) = rref_with_pivots(rows);
    let mut out = Vec::new();
    for f in 0..cols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = VectorQ::zeros(cols);
        v[f] = Q::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        out.push(v);
    }
    rref(&out)
}

/// Incrementally maintained span of sparse vectors with ordered keys. Each
/// stored row remembers how it combines the vectors inserted so far, so
/// coordinates with respect to the insertion basis are available.
#[derive(Clone, Debug)]
pub struct Span<K: Ord + Clone> {
    rows: Vec<(K, BTreeMap<K, Q>, Vec<Q>)>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Span<K> {
    fn default() -> Self {
        Span { rows: Vec::new(), inserted: 0 }
    }
}

impl<K: Ord + Clone> Span<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the stored rows, returning the remainder and the
    /// combination of inserted vectors that was subtracted.
    fn reduce(&self, v: &BTreeMap<K, Q>) -> (BTreeMap<K, Q>, Vec<Q>) {
        let mut rem = v.clone();
        let mut combo = vec![Q::zero(); self.inserted];
        for (pivot, row, row_combo) in &self.rows {
            let Some(c) = rem.get(pivot).cloned() else {
                continue;
            };
            for (k, x) in row {
                let entry = rem.entry(k.clone()).or_insert_with(Q::zero);
                *entry -= &c * x;
                if entry.is_zero() {
                    rem.remove(k);
                }
            }
            for (a, b) in combo.iter_mut().zip(row_combo) {
                if !b.is_zero() {
                    *a += &c * b;
                }
            }
        }
        (rem, combo)
    }

    pub fn contains(&self, v: &BTreeMap<K, Q>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates of `v` in the insertion basis, if `v` lies in the span.
    pub fn coords(&self, v: &BTreeMap<K, Q>) -> Option<Vec<Q>> {
        let (rem, combo) = self.reduce(v);
        rem.is_empty().then_some(combo)
    }

    /// Inserts `v` if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: &BTreeMap<K, Q>) -> bool {
        let (rem, combo) = self.reduce(v);
        let Some((pivot, lead)) = rem.iter().next().map(|(k, x)| (k.clone(), x.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        let row: BTreeMap<K, Q> = rem.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        // row = (v - combo . inserted) / lead
        let mut row_combo: Vec<Q> = combo.iter().map(|c| -c * &inv).collect();
        row_combo.push(inv);
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(Q::zero());
        }
        self.inserted += 1;
        // Keep earlier rows reduced against the new pivot.
        let mut updated = Vec::with_capacity(self.rows.len());
        for (p, r, rc) in self.rows.drain(..) {
            if let Some(c) = r.get(&pivot).cloned() {
                let mut r2 = r;
                for (k, x) in &row {
                    let e = r2.entry(k.clone()).or_insert_with(Q::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        r2.remove(k);
                    }
                }
                let rc2: Vec<Q> = rc.iter().zip(&row_combo).map(|(a, b)| a - &c * b).collect();
                updated.push((p, r2, rc2));
            } else {
                updated.push((p, r, rc));
            }
        }
        updated.push((pivot, row, row_combo));
        updated.sort_by(|a, b| a.0.cmp(&b.0));
        self.rows = updated;
        true
    }
}

pub fn sparse(v: &VectorQ) -> BTreeMap<usize, Q> {
    v.support().map(|(i, x)| (i, x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_series::q;

    #[test]
    fn rref_is_canonical() {
        let rows = [VectorQ::from_ints(&[0, 2, 4]), VectorQ::from_ints(&[1, 1, 1]), VectorQ::from_ints(&[1, 2, 3])];
        let red = rref(&rows);
        assert_eq!(red, vec![VectorQ::from_ints(&[1, 0, -1]), VectorQ::from_ints(&[0, 1, 2])]);
    }

    #[test]
    fn nullspace_solves_system() {
        let m = Matrix::from_rows(3, &[VectorQ::from_ints(&[1, 1, 1])]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn span_tracks_coordinates() {
        let mut s: Span<usize> = Span::new();
        let a = sparse(&VectorQ::from_ints(&[1, 1, 0]));
        let b = sparse(&VectorQ::from_ints(&[0, 1, 1]));
        assert!(s.insert(&a));
        assert!(s.insert(&b));
        assert!(!s.insert(&sparse(&VectorQ::from_ints(&[1, 2, 1]))));
        let c = sparse(&VectorQ::from_ints(&[2, 5, 3]));
        assert_eq!(s.coords(&c), Some(vec![q(2), q(3)]));
        assert_eq!(s.coords(&sparse(&VectorQ::from_ints(&[0, 0, 1]))), None);
    }

    #[test]
    fn nilpotency() {
        let mut n = Matrix::zeros(3, 3);
        n.set(0, 1, q(1));
        n.set(1, 2, q(1));
        assert_eq!(n.nilpotency_index(), Some(3));
        assert_eq!(Matrix::identity(2).nilpotency_index(), None);
    }
}

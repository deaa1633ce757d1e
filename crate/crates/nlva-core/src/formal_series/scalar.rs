use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar, always reduced with a positive denominator.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` for any integer `e`.
pub fn sign_pow(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Generalized binomial coefficient `n(n-1)...(n+1-i)/i!`, defined for every integer `n`.
pub fn binomial(n: i64, i: u64) -> Q {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..i {
        num *= BigInt::from(n - j as i64);
        den *= BigInt::from(j + 1);
    }
    Q::from_integer(num / den)
}

pub fn factorial(m: u64) -> Q {
    let mut acc = BigInt::one();
    for j in 2..=m {
        acc *= BigInt::from(j);
    }
    Q::from_integer(acc)
}

/// Canonical `p/q` rendering (integers print without a denominator).
pub fn fmt_q(x: &Q) -> alloc::string::String {
    use alloc::string::ToString;
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        alloc::format!("{}/{}", x.numer(), x.denom())
    }
}

/// Vector of a fixed-dimension space, coordinates in the declared basis order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorQ(pub Vec<Q>);

impl VectorQ {
    pub fn zeros(dim: usize) -> Self {
        VectorQ(vec![Q::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Q::one();
        v
    }

    pub fn scalar(c: Q) -> Self {
        VectorQ(vec![c])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        VectorQ(xs.iter().map(|&x| q(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Q> {
        self.0.iter()
    }

    /// `self += c * other`, skipping zero entries of `other`.
    pub fn axpy(&mut self, c: &Q, other: &VectorQ) {
        debug_assert_eq!(self.dim(), other.dim());
        if c.is_zero() {
            return;
        }
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
    }

    pub fn add_assign(&mut self, other: &VectorQ) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn sub_assign(&mut self, other: &VectorQ) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }

    pub fn scaled(&self, c: &Q) -> VectorQ {
        VectorQ(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> VectorQ {
        VectorQ(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, other: &VectorQ) -> VectorQ {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn add(&self, other: &VectorQ) -> VectorQ {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Indices and values of the nonzero coordinates.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.0.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }
}

impl Index<usize> for VectorQ {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl IndexMut<usize> for VectorQ {
    fn index_mut(&mut self, i: usize) -> &mut Q {
        &mut self.0[i]
    }
}

impl fmt::Debug for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&fmt_q(x))?;
        }
        f.write_str("]")
    }
}

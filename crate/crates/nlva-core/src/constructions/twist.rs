use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra_core::{Action, AlgebraStructure};
use crate::error::{Error, Result};
use crate::formal_series::{VectorQ, Q};

/// Element of `Z_{m1} x ... x Z_{mr}` as a tuple of residues.
pub type Degree = Vec<i64>;

/// Finite abelian group `Z_{m1} x ... x Z_{mr}`; elements are enumerated
/// with the first component varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub orders: Vec<i64>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        if orders.iter().any(|&m| m < 1) {
            return Err(Error::GradingInvalid("group orders must be positive".into()));
        }
        Ok(AbelianGroup { orders })
    }

    pub fn size(&self) -> usize {
        self.orders.iter().product::<i64>() as usize
    }

    pub fn zero(&self) -> Degree {
        alloc::vec![0; self.orders.len()]
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Degree {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect()
    }

    pub fn index(&self, a: &[i64]) -> usize {
        a.iter().zip(&self.orders).rev().fold(0, |acc, (x, m)| acc * (*m as usize) + x.rem_euclid(*m) as usize)
    }

    pub fn element(&self, mut k: usize) -> Degree {
        let mut out = alloc::vec![0; self.orders.len()];
        for (slot, m) in out.iter_mut().zip(&self.orders) {
            *slot = (k % *m as usize) as i64;
            k /= *m as usize;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Degree> + '_ {
        (0..self.size()).map(|k| self.element(k))
    }

    fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.orders.len() && a.iter().zip(&self.orders).all(|(x, m)| (0..*m).contains(x))
    }
}

/// A degree for every basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedTag {
    pub group: AbelianGroup,
    pub degrees: Vec<Degree>,
}

impl GradedTag {
    /// Checks that the vacuum has degree 0 and `u_n v` has degree `g + h`.
    pub fn validate(&self, alg: &AlgebraStructure) -> Result<()> {
        let g = &self.group;
        if self.degrees.len() != alg.dim() {
            return Err(Error::GradingInvalid(format!("{} degrees for dimension {}", self.degrees.len(), alg.dim())));
        }
        if let Some(d) = self.degrees.iter().find(|d| !g.contains(d)) {
            return Err(Error::GradingInvalid(format!("degree {d:?} is not a group element")));
        }
        let zero = g.zero();
        if alg.vacuum().support().any(|(i, _)| self.degrees[i] != zero) {
            return Err(Error::GradingInvalid("vacuum is not of degree 0".into()));
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let want = g.add(&self.degrees[i], &self.degrees[j]);
                for v in alg.act(&alg.unit(i), &alg.unit(j)).values() {
                    if let Some((k, _)) = v.support().find(|(k, _)| self.degrees[*k] != want) {
                        return Err(Error::GradingInvalid(format!(
                            "product of {} and {} has a component on {}",
                            alg.basis()[i],
                            alg.basis()[j],
                            alg.basis()[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Table `eps(a, b)` over the enumerated group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleData {
    pub group: AbelianGroup,
    pub table: Vec<Vec<Q>>,
}

impl CocycleData {
    /// Cocycle from a closure on group elements.
    pub fn from_fn(group: AbelianGroup, f: impl Fn(&[i64], &[i64]) -> Q) -> Self {
        let els: Vec<Degree> = group.elements().collect();
        let table = els.iter().map(|a| els.iter().map(|b| f(a, b)).collect()).collect();
        CocycleData { group, table }
    }

    pub fn eps(&self, a: &[i64], b: &[i64]) -> &Q {
        &self.table[self.group.index(a)][self.group.index(b)]
    }

    /// `c(g, h) = eps(g, h) / eps(h, g)`.
    pub fn commutation(&self, g: &[i64], h: &[i64]) -> Q {
        self.eps(g, h) / self.eps(h, g)
    }

    /// Nonzero entries, normalization and the 2-cocycle identity.
    pub fn validate(&self) -> Result<()> {
        let g = &self.group;
        let n = g.size();
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return Err(Error::CocycleInvalid(format!("table must be {n} x {n}")));
        }
        if self.table.iter().flatten().any(|x| x.is_zero()) {
            return Err(Error::CocycleInvalid("zero entry".into()));
        }
        let zero = g.zero();
        for a in g.elements() {
            if !self.eps(&a, &zero).is_one() || !self.eps(&zero, &a).is_one() {
                return Err(Error::CocycleInvalid(format!("not normalized at {a:?}")));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                for c in g.elements() {
                    let l = self.eps(&a, &g.add(&b, &c)) * self.eps(&b, &c);
                    let r = self.eps(&a, &b) * self.eps(&g.add(&a, &b), &c);
                    if l != r {
                        return Err(Error::CocycleInvalid(format!("cocycle identity fails at {a:?}, {b:?}, {c:?}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Y_eps(u, x) v = eps(g, h) Y(u, x) v` for `u` of degree `g`, `v` of degree `h`.
pub fn cocycle_twist(alg: &AlgebraStructure, grading: &GradedTag, eps: &CocycleData) -> Result<AlgebraStructure> {
    if grading.group != eps.group {
        return Err(Error::CocycleInvalid("cocycle and grading use different groups".into()));
    }
    eps.validate()?;
    grading.validate(alg)?;
    let entries = alg.entries().into_iter().map(|(i, j, n, v)| {
        let c = eps.eps(&grading.degrees[i], &grading.degrees[j]);
        (i, j, n, v.scaled(c))
    });
    AlgebraStructure::new(alg.basis().to_vec(), alg.vacuum().clone(), entries)
}

/// Group algebra `Q[G]` as an algebra with zero derivation, basis `e_(a,b,..)`.
pub fn group_algebra(group: &AbelianGroup) -> Result<AlgebraStructure> {
    let els: Vec<Degree> = group.elements().collect();
    let n = els.len();
    let basis = els
        .iter()
        .map(|a| {
            let parts: Vec<String> = a.iter().map(|x| format!("{x}")).collect();
            format!("e_({})", parts.join(","))
        })
        .collect();
    let mut entries = Vec::new();
    for (i, a) in els.iter().enumerate() {
        for (j, b) in els.iter().enumerate() {
            let k = group.index(&group.add(a, b));
            entries.push((i, j, -1, VectorQ::unit(n, k)));
        }
    }
    AlgebraStructure::new(basis, VectorQ::unit(n, 0), entries)
}

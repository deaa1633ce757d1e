use alloc::string::String;
use alloc::vec::Vec;

use crate::formal_series::VectorQ;

/// Overall outcome of a check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing was refuted, but the search ran out at the given bound.
    Inconclusive(i64),
}

/// A concrete disagreement: basis indices involved, the exponent tuple, and
/// the two sides at that exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub label: String,
    pub indices: Vec<usize>,
    pub exponent: Vec<i64>,
    pub lhs: VectorQ,
    pub rhs: VectorQ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    /// Order found by a search (`k` or `l`), when the check involves one.
    pub found_order: Option<i64>,
    /// True when every comparison behind a Pass was exact-complete; false when
    /// some equality only holds on the observation window.
    pub exact: bool,
}

impl CheckReport {
    pub fn pass() -> Self {
        CheckReport { verdict: Verdict::Pass, witnesses: Vec::new(), found_order: None, exact: true }
    }

    pub fn fail(w: Witness) -> Self {
        CheckReport { verdict: Verdict::Fail, witnesses: alloc::vec![w], found_order: None, exact: true }
    }

    pub fn from_witnesses(witnesses: Vec<Witness>) -> Self {
        if witnesses.is_empty() {
            Self::pass()
        } else {
            CheckReport { verdict: Verdict::Fail, witnesses, found_order: None, exact: true }
        }
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    pub fn with_order(mut self, k: Option<i64>) -> Self {
        self.found_order = k;
        self
    }

    pub fn window_sound(mut self) -> Self {
        self.exact = false;
        self
    }

    /// Merges another report: any Fail wins, witnesses accumulate.
    pub fn merge(&mut self, other: CheckReport) {
        if other.verdict == Verdict::Fail {
            self.verdict = Verdict::Fail;
        } else if let (Verdict::Pass, Verdict::Inconclusive(b)) = (&self.verdict, &other.verdict) {
            self.verdict = Verdict::Inconclusive(*b);
        }
        self.exact &= other.exact;
        self.witnesses.extend(other.witnesses);
        if self.found_order.is_none() {
            self.found_order = other.found_order;
        } else if let (Some(a), Some(b)) = (self.found_order, other.found_order) {
            self.found_order = Some(a.max(b));
        }
    }
}

/// Result of a bounded search for an order `k` or `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(i64),
    /// No order up to the bound works; the witness is the order-0 discrepancy.
    NotFound { bound: i64, witness: Option<Witness>, constant_witness: bool },
}

impl Search {
    pub fn found(&self) -> Option<i64> {
        match self {
            Search::Found(k) => Some(*k),
            Search::NotFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }
}

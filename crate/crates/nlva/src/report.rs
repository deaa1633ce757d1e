use std::collections::BTreeMap;
use std::fmt::Write as _;

use nlva_core::algebra_core::{CheckReport, Verdict, Witness};
use nlva_core::formal_series::{fmt_q, VectorQ};
use serde::{Deserialize, Serialize};

use crate::format::AlgebraFile;

pub const REPORT_VERSION: u32 = 1;

/// At most this many witnesses are kept per record; `witness_count` has the total.
pub const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordVerdict {
    Pass,
    Fail,
    /// Nothing refuted, but a search ran out at its bound.
    Inconclusive,
    /// The identity does not hold, consistently with the other checks: a
    /// classification of the algebra, not an error.
    NotSatisfied,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub label: String,
    pub indices: Vec<usize>,
    pub exponent: Vec<i64>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let render = |v: &VectorQ| v.iter().map(fmt_q).collect();
        WitnessRecord {
            label: w.label.clone(),
            indices: w.indices.clone(),
            exponent: w.exponent.clone(),
            lhs: render(&w.lhs),
            rhs: render(&w.rhs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub check: String,
    pub anchor: String,
    pub verdict: RecordVerdict,
    /// Order found by a search (`k` or `l`), largest over all tuples.
    pub order: Option<i64>,
    /// Search bound, when the check searched.
    pub bound: Option<i64>,
    /// False when some equality was only established on the window.
    pub exact: bool,
    pub witness_count: usize,
    pub witnesses: Vec<WitnessRecord>,
    pub notes: BTreeMap<String, String>,
}

impl Record {
    pub fn new(check: &str, anchor: &str) -> Self {
        Record {
            check: check.into(),
            anchor: anchor.into(),
            verdict: RecordVerdict::Pass,
            order: None,
            bound: None,
            exact: true,
            witness_count: 0,
            witnesses: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    /// Record taking verdict, order, exactness and witnesses from a check.
    pub fn from_check(check: &str, anchor: &str, r: &CheckReport) -> Self {
        let mut out = Record::new(check, anchor);
        out.verdict = match r.verdict {
            Verdict::Pass => RecordVerdict::Pass,
            Verdict::Fail => RecordVerdict::Fail,
            Verdict::Inconclusive(b) => {
                out.bound = Some(b);
                RecordVerdict::Inconclusive
            }
        };
        out.order = r.found_order;
        out.exact = r.exact;
        out.add_witnesses(&r.witnesses);
        out
    }

    pub fn add_witnesses<'a>(&mut self, ws: impl IntoIterator<Item = &'a Witness>) {
        for w in ws {
            self.witness_count += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w.into());
            }
        }
    }

    pub fn note(mut self, key: &str, value: impl Into<String>) -> Self {
        self.notes.insert(key.into(), value.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureSection {
    pub status: String,
    pub dim: usize,
    pub n_range: [i64; 2],
    pub rounds: usize,
    pub basis: Vec<String>,
    /// The closed algebra, when the status is `closed`.
    pub algebra: Option<AlgebraFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub not_satisfied: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub report_version: u32,
    pub target: String,
    pub suite: String,
    pub options: BTreeMap<String, String>,
    pub classification: BTreeMap<String, String>,
    pub records: Vec<Record>,
    pub closure: Option<ClosureSection>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(target: &str, suite: &str, options: BTreeMap<String, String>) -> Self {
        SuiteReport {
            report_version: REPORT_VERSION,
            target: target.into(),
            suite: suite.into(),
            options,
            classification: BTreeMap::new(),
            records: Vec::new(),
            closure: None,
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, r: Record) {
        let s = &mut self.summary;
        s.checks += 1;
        match r.verdict {
            RecordVerdict::Pass => s.passed += 1,
            RecordVerdict::Fail => s.failures += 1,
            RecordVerdict::Inconclusive => s.inconclusive += 1,
            RecordVerdict::NotSatisfied => s.not_satisfied += 1,
        }
        self.records.push(r);
    }

    pub fn has_failures(&self) -> bool {
        self.summary.failures > 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn parse_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "target: {}  suite: {}", self.target, self.suite);
        if !self.options.is_empty() {
            let opts: Vec<String> = self.options.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "options: {}", opts.join(" "));
        }
        for (k, v) in &self.classification {
            let _ = writeln!(out, "classification: {k} = {v}");
        }
        let width = self.records.iter().map(|r| r.check.len()).max().unwrap_or(0);
        for r in &self.records {
            let verdict = match r.verdict {
                RecordVerdict::Pass => "PASS",
                RecordVerdict::Fail => "FAIL",
                RecordVerdict::Inconclusive => "INCONCLUSIVE",
                RecordVerdict::NotSatisfied => "NOT SATISFIED",
            };
            let mut line = format!("{:<width$}  {:<13}  {}", r.check, verdict, r.anchor);
            if let Some(k) = r.order {
                let _ = write!(line, "  order={k}");
            }
            if let Some(b) = r.bound {
                let _ = write!(line, "  bound={b}");
            }
            if !r.exact {
                line.push_str("  (window)");
            }
            let _ = writeln!(out, "{line}");
            for (k, v) in &r.notes {
                let _ = writeln!(out, "    {k}: {v}");
            }
            for w in &r.witnesses {
                let _ = writeln!(
                    out,
                    "    witness {} at {:?} exponent {:?}: lhs [{}] rhs [{}]",
                    w.label,
                    w.indices,
                    w.exponent,
                    w.lhs.join(", "),
                    w.rhs.join(", ")
                );
            }
            if r.witness_count > r.witnesses.len() {
                let _ = writeln!(out, "    ({} more witnesses)", r.witness_count - r.witnesses.len());
            }
        }
        if let Some(c) = &self.closure {
            let _ = writeln!(
                out,
                "closure: {} dim={} rounds={} n-range={}:{}",
                c.status, c.dim, c.rounds, c.n_range[0], c.n_range[1]
            );
            let _ = writeln!(out, "    basis: {}", c.basis.join(", "));
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} checks, {} passed, {} failures, {} inconclusive, {} not satisfied",
            s.checks, s.passed, s.failures, s.inconclusive, s.not_satisfied
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nlva_core::formal_series::VectorQ;

    fn wit(k: usize) -> Witness {
        Witness { label: "w".into(), indices: vec![k], exponent: vec![0], lhs: VectorQ::from_ints(&[1]), rhs: VectorQ::zeros(1) }
    }

    #[test]
    fn summary_counts_verdicts() {
        let mut r = SuiteReport::new("t", "all", BTreeMap::new());
        r.push(Record::new("a", "x"));
        let mut f = Record::new("b", "y");
        f.verdict = RecordVerdict::Fail;
        r.push(f);
        let mut n = Record::new("c", "z");
        n.verdict = RecordVerdict::NotSatisfied;
        r.push(n);
        assert_eq!(r.summary, Summary { checks: 3, passed: 1, failures: 1, inconclusive: 0, not_satisfied: 1 });
        assert!(r.has_failures());
        assert!(r.to_json().contains("\"verdict\": \"not-satisfied\""));
    }

    #[test]
    fn witnesses_are_capped_and_rendered() {
        let ws: Vec<Witness> = (0..20).map(wit).collect();
        let rec = Record::from_check("c", "a", &CheckReport::from_witnesses(ws));
        assert_eq!(rec.verdict, RecordVerdict::Fail);
        assert_eq!((rec.witness_count, rec.witnesses.len()), (20, MAX_WITNESSES));
        assert_eq!(rec.witnesses[0].lhs, ["1"]);
        let mut r = SuiteReport::new("t", "axioms", BTreeMap::new());
        r.push(rec);
        let text = r.to_text();
        assert!(text.contains("witness w at [0] exponent [0]: lhs [1] rhs [0]"));
        assert!(text.contains("(4 more witnesses)"));
    }
}

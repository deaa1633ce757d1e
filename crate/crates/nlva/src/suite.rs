use std::collections::BTreeMap;

use nlva_core::algebra_core::{
    check_creation_exp, check_d_bracket, check_skew_symmetry, find_locality_k, find_weak_assoc_l, jacobi_triple,
    validate_structure, weak_assoc_triple, AlgebraStructure, CheckReport, JacobiContext, Search, Witness,
};
use nlva_core::constructions::check_jacobi_like;
use nlva_core::formal_series::{fmt_q, q, Window, Q};
use nlva_core::modules_rep::{check_locality_transfer, check_module, ModuleStructure};
use nlva_core::operator_space::{closure, verify_module_structure, ClosureOptions, ClosureStatus, VertexOperator};

use crate::error::{CliError, CliResult};
use crate::format::AlgebraFile;
use crate::report::{ClosureSection, Record, RecordVerdict, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Axioms,
    Locality,
    Jacobi,
    Skew,
    Modules,
    JacobiLike,
    Closure,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Locality => "locality",
            Suite::Jacobi => "jacobi",
            Suite::Skew => "skew",
            Suite::Modules => "modules",
            Suite::JacobiLike => "jacobi-like",
            Suite::Closure => "closure",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QChoice {
    Value(Q),
    /// `q = c(deg u, deg v)` from the grading and cocycle sections.
    FromCocycle,
}

impl QChoice {
    pub fn parse(s: &str) -> CliResult<Self> {
        if s == "from-cocycle" {
            Ok(QChoice::FromCocycle)
        } else {
            Ok(QChoice::Value(crate::format::parse_q(s, "--q")?))
        }
    }

    fn render(&self) -> String {
        match self {
            QChoice::Value(x) => fmt_q(x),
            QChoice::FromCocycle => "from-cocycle".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub bound: i64,
    pub window: Window,
    pub q: QChoice,
    pub closure: ClosureOptions,
}

pub const WINDOW_VARS: [&str; 3] = ["x0", "x1", "x2"];

pub fn default_window() -> Window {
    Window::uniform(&WINDOW_VARS, -6, 6)
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { bound: 8, window: default_window(), q: QChoice::Value(q(1)), closure: ClosureOptions::default() }
    }
}

/// Parses `lo:hi` (all variables) or `x0=lo:hi,x1=lo:hi,...`.
pub fn parse_window(s: &str) -> CliResult<Window> {
    let range = |r: &str| -> CliResult<(i64, i64)> {
        let (lo, hi) = r.split_once(':').ok_or_else(|| CliError::Usage(format!("window range `{r}` is not lo:hi")))?;
        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad window bound `{x}`")));
        let (lo, hi) = (p(lo)?, p(hi)?);
        if lo > hi {
            return Err(CliError::Usage(format!("empty window range `{r}`")));
        }
        Ok((lo, hi))
    };
    if !s.contains('=') {
        let (lo, hi) = range(s)?;
        return Ok(Window::uniform(&WINDOW_VARS, lo, hi));
    }
    let mut w = default_window();
    for part in s.split(',') {
        let (name, r) = part.split_once('=').ok_or_else(|| CliError::Usage(format!("bad window part `{part}`")))?;
        let name = name.trim();
        if !WINDOW_VARS.contains(&name) {
            return Err(CliError::Usage(format!("unknown window variable `{name}`")));
        }
        let (lo, hi) = range(r)?;
        w.set(name, lo, hi);
    }
    Ok(w)
}

fn render_window(w: &Window) -> String {
    WINDOW_VARS
        .iter()
        .filter_map(|v| w.bounds(v).map(|(lo, hi)| format!("{v}={lo}:{hi}")))
        .collect::<Vec<_>>()
        .join(",")
}

/// Everything the checkers need from one file.
struct Target {
    alg: AlgebraStructure,
    file: AlgebraFile,
}

impl Target {
    fn name(&self, i: usize) -> &str {
        &self.alg.basis()[i]
    }

    fn pair(&self, u: usize, v: usize) -> String {
        format!("{},{}", self.name(u), self.name(v))
    }
}

/// Scalar `q` for the basis pair `(u, v)`.
struct QTable(Vec<Vec<Q>>);

impl QTable {
    fn new(t: &Target, choice: &QChoice) -> CliResult<Self> {
        let d = t.alg.dim();
        match choice {
            QChoice::Value(x) => Ok(QTable(vec![vec![x.clone(); d]; d])),
            QChoice::FromCocycle => {
                let grading = t.file.grading()?.ok_or_else(|| CliError::Usage("--q from-cocycle needs a grading section".into()))?;
                let eps = t.file.cocycle()?.ok_or_else(|| CliError::Usage("--q from-cocycle needs a cocycle section".into()))?;
                grading.validate(&t.alg)?;
                let g = &grading.degrees;
                Ok(QTable((0..d).map(|u| (0..d).map(|v| eps.commutation(&g[u], &g[v])).collect()).collect()))
            }
        }
    }

    fn get(&self, u: usize, v: usize) -> &Q {
        &self.0[u][v]
    }

    /// `u,v=c` for every pair with `c != 1`.
    fn non_trivial(&self, t: &Target) -> String {
        let mut out = Vec::new();
        for (u, row) in self.0.iter().enumerate() {
            for (v, c) in row.iter().enumerate() {
                if *c != q(1) {
                    out.push(format!("{}={}", t.pair(u, v), fmt_q(c)));
                }
            }
        }
        out.join("; ")
    }
}

fn not_found_witness(s: &Search) -> Option<&Witness> {
    match s {
        Search::NotFound { witness, .. } => witness.as_ref(),
        Search::Found(_) => None,
    }
}

/// Aggregates order searches: Pass with the largest order, or `miss` when
/// some search ran out.
fn search_record(check: &str, anchor: &str, searches: &[Search], bound: i64, miss: RecordVerdict) -> Record {
    let mut r = Record::new(check, anchor);
    r.order = searches.iter().filter_map(Search::found).max();
    if searches.iter().any(|s| !s.is_found()) {
        r.verdict = miss;
        r.bound = Some(bound);
        r.add_witnesses(searches.iter().filter_map(not_found_witness));
    }
    r
}

fn axioms(report: &mut SuiteReport, prefix: &str, alg: &AlgebraStructure, opts: &SuiteOptions) -> CliResult<()> {
    let id = |s: &str| format!("{prefix}axioms.{s}");
    let d = alg.dim();
    report.push(Record::from_check(&id("structure"), "truncation, vacuum and creation axioms", &validate_structure(alg)));
    report.push(Record::from_check(&id("d-bracket"), "D-bracket and D-derivative", &check_d_bracket(alg, &opts.window)));
    let creation = match check_creation_exp(alg) {
        Ok(r) => Record::from_check(&id("creation-exp"), "creation as the exponential of D", &r),
        Err(e) => {
            let mut r = Record::new(&id("creation-exp"), "creation as the exponential of D");
            r.verdict = RecordVerdict::Fail;
            r.note("error", e.to_string())
        }
    };
    report.push(creation);
    let mut triples = Vec::new();
    for u in 0..d {
        for v in 0..d {
            for w in 0..d {
                triples.push(weak_assoc_triple(alg, alg, [u, v, w], opts.bound, &opts.window)?);
            }
        }
    }
    report.push(search_record(&id("weak-associativity"), "weak associativity", &triples, opts.bound, RecordVerdict::Inconclusive));
    let mut pairs = Vec::new();
    for u in 0..d {
        for w in 0..d {
            pairs.push(find_weak_assoc_l(alg, alg, u, w, opts.bound, &opts.window)?);
        }
    }
    report.push(search_record(
        &id("strong-associativity"),
        "weak associativity with l depending only on (u, w)",
        &pairs,
        opts.bound,
        RecordVerdict::Inconclusive,
    ));
    Ok(())
}

fn locality(report: &mut SuiteReport, t: &Target, qt: &QTable, opts: &SuiteOptions) -> CliResult<bool> {
    let d = t.alg.dim();
    let mut all = Vec::new();
    let mut misses = Vec::new();
    for u in 0..d {
        for v in 0..d {
            let s = find_locality_k(&t.alg, d, u, v, qt.get(u, v), opts.bound, &opts.window)?;
            if let Search::NotFound { constant_witness, .. } = &s {
                let mut r = Record::new("locality.pair", "weak commutativity (locality)")
                    .note("pair", t.pair(u, v))
                    .note("search", "not-found-within-bound")
                    .note("constant_witness", constant_witness.to_string());
                r.verdict = RecordVerdict::NotSatisfied;
                r.bound = Some(opts.bound);
                r.add_witnesses(not_found_witness(&s));
                misses.push(r);
            }
            all.push(s);
        }
    }
    let local = misses.is_empty();
    let mut agg = search_record("locality", "weak commutativity (locality)", &all, opts.bound, RecordVerdict::NotSatisfied);
    agg.witnesses.clear();
    agg.witness_count = 0;
    report.push(agg.note("pairs_without_order", misses.len().to_string()));
    for r in misses {
        report.push(r);
    }
    report.classification.insert("locality".into(), if local { "local" } else { "nonlocal" }.into());
    Ok(local)
}

fn skew(report: &mut SuiteReport, t: &Target, qt: &QTable, opts: &SuiteOptions) -> CliResult<()> {
    let d = t.alg.dim();
    let mut sym = CheckReport::pass();
    let mut ws = Vec::new();
    let mut mismatches = Vec::new();
    for u in 0..d {
        for v in 0..d {
            let c = qt.get(u, v);
            let r = check_skew_symmetry(&t.alg, u, v, c, opts.bound, &opts.window)?;
            let loc = find_locality_k(&t.alg, d, u, v, c, opts.bound, &opts.window)?.is_found();
            if loc != r.is_pass() {
                mismatches.push(t.pair(u, v));
            }
            ws.extend(r.witnesses.clone());
            sym.merge(r);
        }
    }
    let mut r = Record::new("skew.symmetry", "skew-symmetry");
    r.order = sym.found_order;
    if !ws.is_empty() {
        r.verdict = RecordVerdict::NotSatisfied;
        r.add_witnesses(&ws);
    }
    report.push(r);
    let mut eq = Record::new("skew.equivalence", "skew-symmetry versus locality");
    if !mismatches.is_empty() {
        eq.verdict = RecordVerdict::Fail;
        eq = eq.note("mismatched_pairs", mismatches.join("; "));
    }
    report.push(eq);
    Ok(())
}

const JACOBI_EQUIVALENCE: &str = "Jacobi versus locality and associativity";

fn jacobi(report: &mut SuiteReport, t: &Target, qt: &QTable, choice: &QChoice, opts: &SuiteOptions) -> CliResult<()> {
    let d = t.alg.dim();
    let ctx = JacobiContext::new(&opts.window)?;
    let mut identity = Vec::new();
    let mut equivalence = Vec::new();
    let mut exact = true;
    for u in 0..d {
        for v in 0..d {
            for w in 0..d {
                let r = jacobi_triple(&t.alg, &t.alg, [u, v, w], qt.get(u, v), opts.bound, &ctx)?;
                exact &= r.exact;
                for wit in r.witnesses {
                    if wit.label == JACOBI_EQUIVALENCE {
                        equivalence.push(wit);
                    } else {
                        identity.push(wit);
                    }
                }
            }
        }
    }
    let mut r = Record::new("jacobi.identity", "Jacobi identity");
    r.exact = exact;
    if !identity.is_empty() {
        r.verdict = RecordVerdict::NotSatisfied;
        r.add_witnesses(&identity);
    }
    if *choice == QChoice::FromCocycle {
        r = r.note("c_values", qt.non_trivial(t));
    }
    report.push(r);
    let mut eq = Record::new("jacobi.equivalence", "Jacobi identity versus locality and weak associativity");
    if !equivalence.is_empty() {
        eq.verdict = RecordVerdict::Fail;
        eq.add_witnesses(&equivalence);
    }
    report.push(eq);
    Ok(())
}

fn modules(report: &mut SuiteReport, t: &Target, qt: &QTable, opts: &SuiteOptions) -> CliResult<()> {
    let (m, which) = match t.file.module()? {
        Some(m) => (m, "file"),
        None => (ModuleStructure::adjoint(&t.alg), "adjoint"),
    };
    let mr = check_module(&t.alg, &m, opts.bound, true, &opts.window)?;
    let faithful = m.is_faithful();
    let note = |r: Record| r.note("module", which);
    report.push(note(Record::from_check("modules.identity", "vacuum acts as the identity", &mr.identity)));
    report.push(note(Record::from_check("modules.weak-associativity", "module weak associativity", &mr.weak_assoc)));
    if let Some(s) = &mr.strong_assoc {
        report.push(note(Record::from_check(
            "modules.strong-associativity",
            "module weak associativity with l depending only on (u, w)",
            s,
        )));
    }
    report.push(note(Record::from_check("modules.d-derivative", "module D-derivative property", &mr.d_property)));
    let mut transfer = CheckReport::pass();
    for u in 0..t.alg.dim() {
        for v in 0..t.alg.dim() {
            transfer.merge(check_locality_transfer(&t.alg, &m, u, v, qt.get(u, v), opts.bound, &opts.window)?);
        }
    }
    let r = Record::from_check("modules.locality-transfer", "locality transfer between algebra and module", &transfer);
    report.push(note(r).note("faithful", faithful.to_string()));
    let stuck: Vec<&str> = (0..m.dim()).filter(|&j| !m.generates(&m.unit(j))).map(|j| m.basis()[j].as_str()).collect();
    let generation = if stuck.is_empty() { "every basis vector".to_string() } else { format!("not by {}", stuck.join(", ")) };
    report.classification.insert("module_generation".into(), generation);
    Ok(())
}

fn jacobi_like(report: &mut SuiteReport, t: &Target, opts: &SuiteOptions) -> CliResult<bool> {
    let Some(r) = t.file.rmap()? else { return Ok(false) };
    let ctx = JacobiContext::new(&opts.window)?;
    let rep = check_jacobi_like(&t.alg, &r, opts.bound, &ctx)?;
    report.push(Record::from_check("jacobi-like", "Jacobi-like identity with an R map", &rep));
    Ok(true)
}

fn closure_generators(file: &AlgebraFile, alg: Option<&AlgebraStructure>) -> CliResult<(usize, Vec<(String, VertexOperator)>)> {
    if let Some(ops) = file.operators()? {
        return Ok(ops);
    }
    let alg = alg.ok_or_else(|| CliError::Usage("closure needs an algebra or an operators section".into()))?;
    let gens = (0..alg.dim()).map(|i| (format!("Y({})", alg.basis()[i]), VertexOperator::from_action(alg, &alg.unit(i)))).collect();
    Ok((alg.dim(), gens))
}

fn status_name(s: &ClosureStatus) -> &'static str {
    match s {
        ClosureStatus::Closed => "closed",
        ClosureStatus::CapExceeded(_) => "cap-exceeded",
        ClosureStatus::IndexRangeExhausted => "index-range-exhausted",
    }
}

fn run_closure(report: &mut SuiteReport, file: &AlgebraFile, alg: Option<&AlgebraStructure>, opts: &SuiteOptions) -> CliResult<()> {
    let (dim_w, gens) = closure_generators(file, alg)?;
    let cr = closure(dim_w, &gens, &opts.closure)?;
    let mut r = Record::new("closure", "closure of vertex operators")
        .note("status", status_name(&cr.status))
        .note("dim", cr.span.dim().to_string())
        .note("generators", gens.len().to_string());
    if cr.status != ClosureStatus::Closed {
        r.verdict = RecordVerdict::Inconclusive;
    }
    report.push(r);
    let algebra = match &cr.structure {
        Some(s) => {
            let m = verify_module_structure(&cr, opts.bound, &opts.window)?;
            report.push(Record::from_check("closure.module", "the space as a faithful module of the closure", &m));
            axioms(report, "closure.", s, opts)?;
            Some(AlgebraFile::from_algebra(s))
        }
        None => None,
    };
    report.closure = Some(ClosureSection {
        status: status_name(&cr.status).into(),
        dim: cr.span.dim(),
        n_range: [cr.n_range.0, cr.n_range.1],
        rounds: cr.rounds,
        basis: cr.span.names().to_vec(),
        algebra,
    });
    Ok(())
}

fn option_map(suite: Suite, opts: &SuiteOptions) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("bound".into(), opts.bound.to_string());
    m.insert("window".into(), render_window(&opts.window));
    m.insert("q".into(), opts.q.render());
    if matches!(suite, Suite::Closure | Suite::All) {
        let c = &opts.closure;
        m.insert("dim_cap".into(), c.dim_cap.to_string());
        m.insert("depth_cap".into(), c.depth_cap.to_string());
        if let Some((lo, hi)) = c.n_range {
            m.insert("n_range".into(), format!("{lo}:{hi}"));
        }
    }
    m
}

/// Runs `suite` on a parsed file. Classification outcomes (nonlocal,
/// inconclusive searches) are recorded but never count as failures.
pub fn run_suite(target: &str, file: &AlgebraFile, suite: Suite, opts: &SuiteOptions) -> CliResult<SuiteReport> {
    let mut opts = opts.clone();
    opts.closure.bound = opts.bound;
    let mut report = SuiteReport::new(target, suite.name(), option_map(suite, &opts));
    if !file.has_algebra() {
        if matches!(suite, Suite::Closure | Suite::All) {
            run_closure(&mut report, file, None, &opts)?;
            return Ok(report);
        }
        return Err(CliError::Usage(format!("suite {} needs an algebra", suite.name())));
    }
    let t = Target { alg: file.algebra()?, file: file.clone() };
    let needs_q = matches!(suite, Suite::Locality | Suite::Skew | Suite::Jacobi | Suite::Modules | Suite::All);
    let qt = if needs_q { Some(QTable::new(&t, &opts.q)?) } else { None };
    let qt = qt.as_ref();
    let run = |s: Suite| suite == s || suite == Suite::All;
    if run(Suite::Axioms) {
        axioms(&mut report, "", &t.alg, &opts)?;
    }
    if run(Suite::Locality) {
        locality(&mut report, &t, qt.expect("q table"), &opts)?;
    }
    if run(Suite::Skew) {
        skew(&mut report, &t, qt.expect("q table"), &opts)?;
    }
    if run(Suite::Jacobi) {
        jacobi(&mut report, &t, qt.expect("q table"), &opts.q, &opts)?;
    }
    if run(Suite::Modules) {
        modules(&mut report, &t, qt.expect("q table"), &opts)?;
    }
    if run(Suite::JacobiLike) && !jacobi_like(&mut report, &t, &opts)? && suite == Suite::JacobiLike {
        return Err(CliError::Usage("suite jacobi-like needs an rmap section".into()));
    }
    if run(Suite::Closure) {
        run_closure(&mut report, file, Some(&t.alg), &opts)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        let w = parse_window("-3:4").unwrap();
        assert_eq!(render_window(&w), "x0=-3:4,x1=-3:4,x2=-3:4");
        let w = parse_window("x1=-2:2,x2=0:9").unwrap();
        assert_eq!(render_window(&w), "x0=-6:6,x1=-2:2,x2=0:9");
        for bad in ["3:1", "x3=0:1", "1", "a:b", "x0=1"] {
            assert!(parse_window(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn q_choices() {
        assert_eq!(QChoice::parse("from-cocycle").unwrap(), QChoice::FromCocycle);
        assert_eq!(QChoice::parse("-2/4").unwrap().render(), "-1/2");
        assert!(QChoice::parse("cocycle").is_err());
    }

    #[test]
    fn search_records() {
        let miss = Search::NotFound { bound: 3, witness: None, constant_witness: false };
        let r = search_record("c", "a", &[Search::Found(2), Search::Found(1)], 3, RecordVerdict::Inconclusive);
        assert_eq!((r.verdict, r.order, r.bound), (RecordVerdict::Pass, Some(2), None));
        let r = search_record("c", "a", &[Search::Found(2), miss], 3, RecordVerdict::Inconclusive);
        assert_eq!((r.verdict, r.order, r.bound), (RecordVerdict::Inconclusive, Some(2), Some(3)));
    }
}

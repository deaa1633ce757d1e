//! The JSON algebra file: basis, vacuum and structure constants, plus
//! optional sections for gradings, cocycles, group actions, associative
//! data, modules, vertex operators and R maps. Rationals are strings `p/q`.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use nlva_core::algebra_core::AlgebraStructure;
use nlva_core::constructions::{
    AbelianGroup, AssocAlgebraData, CocycleData, FiniteGroup, GradedTag, GroupActionData, RMap, Triple,
};
use nlva_core::formal_series::{fmt_q, VectorQ, Q};
use nlva_core::linalg::Matrix;
use nlva_core::modules_rep::ModuleStructure;
use nlva_core::operator_space::VertexOperator;
use nlva_core::Error;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

/// Operators with their names, in file order.
pub type NamedOperators = Vec<(String, VertexOperator)>;

/// Sparse vector: basis name to rational string; omitted names are zero.
pub type Sparse = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorSpec {
    Name(String),
    Sparse(Sparse),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub u: String,
    pub v: String,
    pub n: i64,
    pub result: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradingSpec {
    /// Orders of the cyclic factors of the grading group.
    pub orders: Vec<i64>,
    /// Degree of every basis vector.
    pub degrees: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleSpec {
    /// `table[a][b] = eps(a, b)`, group elements listed first component fastest.
    pub table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub elements: Vec<String>,
    /// `table[g][h]` names the product `gh`.
    pub table: Vec<Vec<String>>,
    /// Matrix (rows) of every element acting on `acts_on`.
    pub action: BTreeMap<String, Vec<Vec<String>>>,
    /// Basis the action matrices refer to; the file basis when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acts_on: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub a: String,
    pub b: String,
    pub result: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssocSpec {
    pub basis: Vec<String>,
    pub products: Vec<ProductSpec>,
    pub identity: VectorSpec,
    /// Images of basis vectors under the derivation; omitted images are zero.
    #[serde(default)]
    pub derivation: BTreeMap<String, Sparse>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleEntrySpec {
    pub u: String,
    pub w: String,
    pub n: i64,
    pub result: Sparse,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub basis: Vec<String>,
    pub entries: Vec<ModuleEntrySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSpec {
    pub power: i64,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub name: String,
    pub coeffs: Vec<PowerSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorsSpec {
    pub space_dim: usize,
    pub items: Vec<OperatorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RTermSpec {
    pub triple: [String; 3],
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RImageSpec {
    pub from: [String; 3],
    pub to: Vec<RTermSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RMapSpec {
    Identity,
    /// `ua x vb x wc -> ub x va x wc` on `V x A` with `dim A = inner`.
    TensorSwap { inner: usize },
    /// Scalar commutation factors from the grading and cocycle sections.
    Cocycle,
    /// Cross product map built from the group section.
    Cross,
    Explicit { images: Vec<RImageSpec> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum: Option<VectorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntrySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<GradingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assoc: Option<AssocSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operators: Option<OperatorsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rmap: Option<RMapSpec>,
}

pub fn parse_q(s: &str, location: &str) -> CliResult<Q> {
    let ok = !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '/');
    if !ok {
        return Err(CliError::parse(location, format!("`{s}` is not a rational p/q")));
    }
    s.parse::<Q>().map_err(|e| CliError::parse(location, format!("`{s}`: {e}")))
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(Error::MalformedStructure(msg))
}

struct Names<'a> {
    names: &'a [String],
    index: HashMap<&'a str, usize>,
}

impl<'a> Names<'a> {
    fn new(names: &'a [String], what: &str) -> CliResult<Self> {
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.as_str(), i).is_some() {
                return Err(invalid(format!("duplicate {what} name `{n}`")));
            }
        }
        Ok(Names { names, index })
    }

    fn dim(&self) -> usize {
        self.names.len()
    }

    fn get(&self, name: &str, location: &str) -> CliResult<usize> {
        self.index.get(name).copied().ok_or_else(|| invalid(format!("{location}: unknown basis name `{name}`")))
    }

    fn vector(&self, sp: &Sparse, location: &str) -> CliResult<VectorQ> {
        let mut v = VectorQ::zeros(self.dim());
        for (name, x) in sp {
            let i = self.get(name, location)?;
            v[i] = parse_q(x, &format!("{location}.{name}"))?;
        }
        Ok(v)
    }

    fn vector_spec(&self, spec: &VectorSpec, location: &str) -> CliResult<VectorQ> {
        match spec {
            VectorSpec::Name(n) => Ok(VectorQ::unit(self.dim(), self.get(n, location)?)),
            VectorSpec::Sparse(sp) => self.vector(sp, location),
        }
    }
}

fn sparse(v: &VectorQ, basis: &[String]) -> Sparse {
    v.support().map(|(i, x)| (basis[i].clone(), fmt_q(x))).collect()
}

fn vector_spec(v: &VectorQ, basis: &[String]) -> VectorSpec {
    let support: Vec<(usize, &Q)> = v.support().collect();
    match support.as_slice() {
        [(i, x)] if **x == Q::from_integer(1.into()) => VectorSpec::Name(basis[*i].clone()),
        _ => VectorSpec::Sparse(sparse(v, basis)),
    }
}

fn parse_matrix(rows: &[Vec<String>], dim: usize, location: &str) -> CliResult<Matrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(invalid(format!("{location}: matrix must be {dim} x {dim}")));
    }
    let mut m = Matrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, parse_q(x, &format!("{location}[{i}][{j}]"))?);
        }
    }
    Ok(m)
}

fn emit_matrix(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| fmt_q(m.get(i, j))).collect()).collect()
}

impl AlgebraFile {
    pub fn empty() -> Self {
        AlgebraFile {
            format_version: FORMAT_VERSION,
            basis: Vec::new(),
            dim: None,
            vacuum: None,
            entries: Vec::new(),
            grading: None,
            cocycle: None,
            group: None,
            assoc: None,
            module: None,
            operators: None,
            rmap: None,
        }
    }

    pub fn parse_str(text: &str) -> CliResult<Self> {
        let file: AlgebraFile = serde_json::from_str(text).map_err(|e| {
            CliError::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        if file.format_version != FORMAT_VERSION {
            return Err(CliError::parse("format_version", format!("unsupported version {}", file.format_version)));
        }
        Ok(file)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse_str(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("algebra files always serialize");
        s.push('\n');
        s
    }

    /// The algebra part of a file, built from its structure constants.
    pub fn from_algebra(alg: &AlgebraStructure) -> Self {
        let basis = alg.basis().to_vec();
        let entries = alg
            .entries()
            .into_iter()
            .map(|(i, j, n, v)| EntrySpec { u: basis[i].clone(), v: basis[j].clone(), n, result: sparse(&v, &basis) })
            .collect();
        AlgebraFile {
            dim: Some(basis.len()),
            vacuum: Some(vector_spec(alg.vacuum(), &basis)),
            entries,
            basis,
            ..Self::empty()
        }
    }

    pub fn has_algebra(&self) -> bool {
        !self.basis.is_empty()
    }

    pub fn algebra(&self) -> CliResult<AlgebraStructure> {
        if self.basis.is_empty() {
            return Err(CliError::Usage("the file has no algebra basis".into()));
        }
        if let Some(d) = self.dim {
            if d != self.basis.len() {
                return Err(invalid(format!("dim {d} does not match {} basis names", self.basis.len())));
            }
        }
        let names = Names::new(&self.basis, "basis")?;
        let vac = self.vacuum.as_ref().ok_or_else(|| invalid("missing vacuum".into()))?;
        let vacuum = names.vector_spec(vac, "vacuum")?;
        let mut entries = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            let loc = format!("entries[{k}]");
            let u = names.get(&e.u, &loc)?;
            let v = names.get(&e.v, &loc)?;
            entries.push((u, v, e.n, names.vector(&e.result, &format!("{loc}.result"))?));
        }
        Ok(AlgebraStructure::new(self.basis.clone(), vacuum, entries)?)
    }

    pub fn grading(&self) -> CliResult<Option<GradedTag>> {
        let Some(g) = &self.grading else { return Ok(None) };
        let group = AbelianGroup::new(g.orders.clone())?;
        let names = Names::new(&self.basis, "basis")?;
        for name in g.degrees.keys() {
            names.get(name, "grading.degrees")?;
        }
        let degrees = self
            .basis
            .iter()
            .map(|b| g.degrees.get(b).cloned().ok_or_else(|| invalid(format!("grading.degrees: no degree for `{b}`"))))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Some(GradedTag { group, degrees }))
    }

    pub fn cocycle(&self) -> CliResult<Option<CocycleData>> {
        let Some(c) = &self.cocycle else { return Ok(None) };
        let g = self.grading.as_ref().ok_or_else(|| invalid("cocycle section needs a grading section".into()))?;
        let group = AbelianGroup::new(g.orders.clone())?;
        let table = c
            .table
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter().enumerate().map(|(j, x)| parse_q(x, &format!("cocycle.table[{i}][{j}]"))).collect()
            })
            .collect::<CliResult<Vec<Vec<Q>>>>()?;
        let data = CocycleData { group, table };
        data.validate()?;
        Ok(Some(data))
    }

    pub fn group_action(&self) -> CliResult<Option<GroupActionData>> {
        let Some(g) = &self.group else { return Ok(None) };
        let els = Names::new(&g.elements, "group element")?;
        let table = g
            .table
            .iter()
            .map(|row| row.iter().map(|x| els.get(x, "group.table")).collect())
            .collect::<CliResult<Vec<Vec<usize>>>>()?;
        let group = FiniteGroup::new(g.elements.clone(), table)?;
        let dim = g.acts_on.as_ref().map_or(self.basis.len(), Vec::len);
        let matrices = g
            .elements
            .iter()
            .map(|e| {
                let rows = g.action.get(e).ok_or_else(|| invalid(format!("group.action: no matrix for `{e}`")))?;
                parse_matrix(rows, dim, &format!("group.action.{e}"))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Some(GroupActionData { group, matrices }))
    }

    pub fn set_group_action(&mut self, act: &GroupActionData, acts_on: Option<Vec<String>>) {
        let names = &act.group.names;
        self.group = Some(GroupSpec {
            elements: names.clone(),
            table: act.group.table.iter().map(|r| r.iter().map(|&k| names[k].clone()).collect()).collect(),
            action: names.iter().cloned().zip(act.matrices.iter().map(emit_matrix)).collect(),
            acts_on,
        });
    }

    pub fn set_grading(&mut self, grading: &GradedTag, eps: &CocycleData) {
        self.grading = Some(GradingSpec {
            orders: grading.group.orders.clone(),
            degrees: self.basis.iter().cloned().zip(grading.degrees.iter().cloned()).collect(),
        });
        self.cocycle = Some(CocycleSpec { table: eps.table.iter().map(|r| r.iter().map(fmt_q).collect()).collect() });
    }

    pub fn assoc(&self) -> CliResult<Option<AssocAlgebraData>> {
        let Some(a) = &self.assoc else { return Ok(None) };
        let names = Names::new(&a.basis, "assoc basis")?;
        let d = names.dim();
        let mut mult = vec![vec![VectorQ::zeros(d); d]; d];
        for (k, p) in a.products.iter().enumerate() {
            let loc = format!("assoc.products[{k}]");
            let (i, j) = (names.get(&p.a, &loc)?, names.get(&p.b, &loc)?);
            mult[i][j] = names.vector(&p.result, &format!("{loc}.result"))?;
        }
        let identity = names.vector_spec(&a.identity, "assoc.identity")?;
        let mut cols = vec![VectorQ::zeros(d); d];
        for (name, img) in &a.derivation {
            let loc = format!("assoc.derivation.{name}");
            cols[names.get(name, &loc)?] = names.vector(img, &loc)?;
        }
        let mut data = AssocAlgebraData::plain(a.basis.clone(), mult, identity);
        data.derivation = Matrix::from_columns(d, &cols);
        Ok(Some(data))
    }

    pub fn set_assoc(&mut self, a: &AssocAlgebraData) {
        let b = &a.basis;
        let mut products = Vec::new();
        for (i, row) in a.mult.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    products.push(ProductSpec { a: b[i].clone(), b: b[j].clone(), result: sparse(v, b) });
                }
            }
        }
        let derivation = (0..b.len())
            .filter_map(|j| {
                let img = a.derivation.column(j);
                (!img.is_zero()).then(|| (b[j].clone(), sparse(&img, b)))
            })
            .collect();
        self.assoc =
            Some(AssocSpec { basis: b.clone(), products, identity: vector_spec(&a.identity, b), derivation });
    }

    pub fn module(&self) -> CliResult<Option<ModuleStructure>> {
        let Some(m) = &self.module else { return Ok(None) };
        let alg = Names::new(&self.basis, "basis")?;
        let wn = Names::new(&m.basis, "module basis")?;
        let mut entries = Vec::with_capacity(m.entries.len());
        for (k, e) in m.entries.iter().enumerate() {
            let loc = format!("module.entries[{k}]");
            entries.push((alg.get(&e.u, &loc)?, wn.get(&e.w, &loc)?, e.n, wn.vector(&e.result, &format!("{loc}.result"))?));
        }
        Ok(Some(ModuleStructure::new(m.basis.clone(), alg.dim(), entries)?))
    }

    pub fn set_module(&mut self, m: &ModuleStructure) {
        let entries = m
            .entries()
            .into_iter()
            .map(|(i, j, n, v)| ModuleEntrySpec {
                u: self.basis[i].clone(),
                w: m.basis()[j].clone(),
                n,
                result: sparse(&v, m.basis()),
            })
            .collect();
        self.module = Some(ModuleSpec { basis: m.basis().to_vec(), entries });
    }

    /// Named vertex operators on a space of dimension `space_dim`.
    pub fn operators(&self) -> CliResult<Option<(usize, NamedOperators)>> {
        let Some(o) = &self.operators else { return Ok(None) };
        let d = o.space_dim;
        let mut out = Vec::with_capacity(o.items.len());
        for (k, item) in o.items.iter().enumerate() {
            let mut coeffs = BTreeMap::new();
            for c in &item.coeffs {
                let loc = format!("operators.items[{k}].power[{}]", c.power);
                if coeffs.insert(c.power, parse_matrix(&c.matrix, d, &loc)?).is_some() {
                    return Err(invalid(format!("{loc}: repeated power")));
                }
            }
            out.push((item.name.clone(), VertexOperator::new(d, coeffs)?));
        }
        Ok(Some((d, out)))
    }

    pub fn set_operators(&mut self, space_dim: usize, ops: &[(String, VertexOperator)]) {
        let items = ops
            .iter()
            .map(|(name, op)| OperatorSpec {
                name: name.clone(),
                coeffs: op.coeffs().iter().map(|(p, m)| PowerSpec { power: *p, matrix: emit_matrix(m) }).collect(),
            })
            .collect();
        self.operators = Some(OperatorsSpec { space_dim, items });
    }

    pub fn rmap(&self) -> CliResult<Option<RMap>> {
        let Some(r) = &self.rmap else { return Ok(None) };
        let d = self.basis.len();
        let map = match r {
            RMapSpec::Identity => RMap::identity(d),
            RMapSpec::TensorSwap { inner } => {
                if *inner == 0 || !d.is_multiple_of(*inner) {
                    return Err(invalid(format!("rmap: inner dimension {inner} does not divide {d}")));
                }
                RMap::tensor_swap(d, *inner)
            }
            RMapSpec::Cocycle => {
                let grading = self.grading()?.ok_or_else(|| invalid("rmap cocycle needs a grading section".into()))?;
                let eps = self.cocycle()?.ok_or_else(|| invalid("rmap cocycle needs a cocycle section".into()))?;
                RMap::cocycle(&grading, &eps)
            }
            RMapSpec::Cross => {
                let act = self.group_action()?.ok_or_else(|| invalid("rmap cross needs a group section".into()))?;
                let m = act.group.size();
                if !d.is_multiple_of(m) {
                    return Err(invalid(format!("rmap: group order {m} does not divide {d}")));
                }
                RMap::cross(d / m, &act)
            }
            RMapSpec::Explicit { images } => {
                let names = Names::new(&self.basis, "basis")?;
                let triple = |t: &[String; 3], loc: &str| -> CliResult<Triple> {
                    Ok([names.get(&t[0], loc)?, names.get(&t[1], loc)?, names.get(&t[2], loc)?])
                };
                let mut map = RMap::identity(d);
                for (k, img) in images.iter().enumerate() {
                    let loc = format!("rmap.images[{k}]");
                    let from = triple(&img.from, &loc)?;
                    let to = img
                        .to
                        .iter()
                        .map(|t| Ok((triple(&t.triple, &loc)?, parse_q(&t.coeff, &format!("{loc}.coeff"))?)))
                        .collect::<CliResult<Vec<_>>>()?;
                    map.images.insert(from, to);
                }
                map
            }
        };
        Ok(Some(map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(fmt_q(&parse_q("4/6", "x").unwrap()), "2/3");
        assert_eq!(fmt_q(&parse_q("-7", "x").unwrap()), "-7");
        assert!(matches!(parse_q("1/0", "here"), Err(CliError::Parse { location, .. }) if location == "here"));
        assert!(parse_q("0.5", "x").is_err());
    }

    #[test]
    fn vacuum_may_be_a_vector() {
        let f = AlgebraFile::parse_str(
            r#"{"format_version": 1, "basis": ["a", "b"], "vacuum": {"a": "1", "b": "1"},
                "entries": [{"u": "a", "v": "a", "n": -1, "result": {"a": "1"}},
                            {"u": "b", "v": "b", "n": -1, "result": {"b": "1"}}]}"#,
        )
        .unwrap();
        let a = f.algebra().unwrap();
        assert_eq!(a.vacuum(), &VectorQ::from_ints(&[1, 1]));
        assert_eq!(AlgebraFile::from_algebra(&a).vacuum, f.vacuum);
    }

    #[test]
    fn empty_file_has_no_algebra() {
        let f = AlgebraFile::parse_str(r#"{"format_version": 1}"#).unwrap();
        assert!(!f.has_algebra());
        assert!(matches!(f.algebra(), Err(CliError::Usage(_))));
        assert_eq!(f.to_json(), "{\n  \"format_version\": 1\n}\n");
    }
}

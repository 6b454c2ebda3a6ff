//! Matrix semantics: truth tables, models, validity and conservative
//! translations between matrix logics.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{enumerate_formulas, Constructor, Formula, FormulaKind, Signature};
use crate::translation::{ConstructorTranslation, Identification};

/// Truth values `A` with the designated subset `D`. Values are referred to by
/// their index in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    values: Vec<String>,
    designated: Vec<bool>,
}

impl Matrix {
    pub fn new(values: Vec<String>, designated: &[&str]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Matrix("no truth values".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if values[..i].contains(v) {
                return Err(Error::Matrix(format!("truth value `{v}` listed twice")));
            }
        }
        if designated.is_empty() {
            return Err(Error::Matrix("no designated values".into()));
        }
        if let Some(d) = designated.iter().find(|d| !values.iter().any(|v| v == *d)) {
            return Err(Error::Matrix(format!(
                "designated `{d}` is not a truth value"
            )));
        }
        let flags = values
            .iter()
            .map(|v| designated.contains(&v.as_str()))
            .collect();
        Ok(Matrix {
            values,
            designated: flags,
        })
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.values[v]
    }

    pub fn value(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }

    pub fn labels(&self) -> &[String] {
        &self.values
    }

    pub fn is_designated(&self, v: usize) -> bool {
        self.designated[v]
    }
}

/// A signature with a matrix and a total truth table per constructor.
/// Table rows are stored row-major over `A^arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixLogic {
    name: String,
    signature: Signature,
    matrix: Matrix,
    tables: BTreeMap<Constructor, Vec<usize>>,
}

/// A constructor token with its table as a function on value indices.
pub type TableFn<'a> = (&'a str, &'a dyn Fn(&[usize]) -> usize);

impl MatrixLogic {
    /// Tables are given as functions on value indices.
    pub fn from_fns(
        name: &str,
        signature: Signature,
        matrix: Matrix,
        fns: &[TableFn],
    ) -> Result<Self> {
        let mut tables = BTreeMap::new();
        for (token, f) in fns {
            let c = find(&signature, token)?;
            let n = matrix.size();
            let rows = (0..n.pow(c.arity() as u32))
                .map(|r| f(&digits(r, n, c.arity())))
                .collect();
            tables.insert(c, rows);
        }
        MatrixLogic::new(name, signature, matrix, tables)
    }

    pub fn new(
        name: &str,
        signature: Signature,
        matrix: Matrix,
        tables: BTreeMap<Constructor, Vec<usize>>,
    ) -> Result<Self> {
        let n = matrix.size();
        for c in signature.constructors() {
            let rows = tables
                .get(c)
                .ok_or_else(|| Error::MissingTable(format!("{} in {name}", c.token())))?;
            if rows.len() != n.pow(c.arity() as u32) || rows.iter().any(|&v| v >= n) {
                return Err(Error::Matrix(format!(
                    "table for `{}` is not total",
                    c.token()
                )));
            }
        }
        Ok(MatrixLogic {
            name: name.to_string(),
            signature,
            matrix,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn table(&self, c: &Constructor) -> Option<&[usize]> {
        self.tables.get(c).map(Vec::as_slice)
    }

    pub fn apply(&self, c: &Constructor, args: &[usize]) -> Result<usize> {
        let rows = self
            .tables
            .get(c)
            .ok_or_else(|| Error::MissingTable(c.token()))?;
        let n = self.matrix.size();
        Ok(rows[args.iter().fold(0, |acc, &a| acc * n + a)])
    }

    /// Homomorphic evaluation under `v`.
    pub fn eval(&self, v: &Valuation, f: &Formula) -> Result<usize> {
        match f.kind() {
            FormulaKind::Prop(k) => v.get(*k).ok_or(Error::MissingValuation(*k)),
            FormulaKind::App(c, args) => {
                let vals = args
                    .iter()
                    .map(|a| self.eval(v, a))
                    .collect::<Result<Vec<_>>>()?;
                self.apply(c, &vals)
            }
        }
    }

    pub fn satisfies(&self, v: &Valuation, f: &Formula) -> Result<bool> {
        Ok(self.matrix.is_designated(self.eval(v, f)?))
    }

    /// Satisfied under every valuation of its prop symbols.
    pub fn valid(&self, f: &Formula) -> Result<bool> {
        let props: Vec<u32> = f.props().into_iter().collect();
        for v in Valuation::all(&props, self.matrix.size()) {
            if !self.satisfies(&v, f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `M ⊨ Ψ => Λ`: some formula of `right` holds whenever all of `left` do.
    pub fn satisfies_sequent(
        &self,
        v: &Valuation,
        left: &[Formula],
        right: &[Formula],
    ) -> Result<bool> {
        for f in left {
            if !self.satisfies(v, f)? {
                return Ok(true);
            }
        }
        for f in right {
            if self.satisfies(v, f)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn find(sig: &Signature, token: &str) -> Result<Constructor> {
    let (base, tag) = match token.split_once('.') {
        Some((b, t)) => (b, Some(t)),
        None => (token, None),
    };
    sig.lookup(base, tag)
        .map_err(|_| Error::Matrix(format!("`{token}` is not in signature {}", sig.name())))
}

fn digits(mut r: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = r % base;
        r /= base;
    }
    out
}

/// Truth values of prop symbols, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<u32, usize>);

impl Valuation {
    pub fn new(pairs: impl IntoIterator<Item = (u32, usize)>) -> Self {
        Valuation(pairs.into_iter().collect())
    }

    pub fn get(&self, k: u32) -> Option<usize> {
        self.0.get(&k).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// Pointwise image under a value map.
    pub fn map(&self, f: &[usize]) -> Valuation {
        Valuation(self.0.iter().map(|(k, v)| (*k, f[*v])).collect())
    }

    /// Every valuation of `props` into `n` values.
    pub fn all(props: &[u32], n: usize) -> impl Iterator<Item = Valuation> + '_ {
        (0..n.pow(props.len() as u32)).map(move |r| {
            Valuation(
                props
                    .iter()
                    .copied()
                    .zip(digits(r, n, props.len()))
                    .collect(),
            )
        })
    }

    pub fn render(&self, m: &Matrix) -> String {
        self.0
            .iter()
            .map(|(k, v)| format!("p{k}={}", m.label(*v)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A matrix model: a logic's matrix and tables with a valuation.
#[derive(Clone, Debug)]
pub struct MatrixModel {
    pub logic: Arc<MatrixLogic>,
    pub valuation: Valuation,
}

impl MatrixModel {
    pub fn new(logic: Arc<MatrixLogic>, valuation: Valuation) -> Self {
        MatrixModel { logic, valuation }
    }

    pub fn eval(&self, f: &Formula) -> Result<usize> {
        self.logic.eval(&self.valuation, f)
    }

    pub fn satisfies(&self, f: &Formula) -> Result<bool> {
        self.logic.satisfies(&self.valuation, f)
    }

    /// `M′ ⊨ φ` for a combined formula, through flattening.
    pub fn satisfies_combined(&self, f: &Formula, ident: &Identification) -> Result<bool> {
        self.satisfies(&ident.flatten(f)?)
    }
}

/// Syntactic translation with pointwise model maps between two matrix
/// logics. `forward[v]` is the host value of a source value, `backward[v]`
/// the source value of a host value.
#[derive(Clone, Debug)]
pub struct ConservativeTriple {
    pub translation: ConstructorTranslation,
    pub source: Arc<MatrixLogic>,
    pub host: Arc<MatrixLogic>,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

impl ConservativeTriple {
    pub fn forward_model(&self, m: &MatrixModel) -> MatrixModel {
        MatrixModel::new(self.host.clone(), m.valuation.map(&self.forward))
    }

    pub fn backward_model(&self, m: &MatrixModel) -> MatrixModel {
        MatrixModel::new(self.source.clone(), m.valuation.map(&self.backward))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `τ→(M″) ⊨ τ(φ)` but not `M″ ⊨ φ`.
    Forward,
    /// `τ←(M′) ⊨ φ` but not `M′ ⊨ τ(φ)`.
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub formula: Formula,
    pub condition: Condition,
    /// The valuation of the model the condition quantifies over.
    pub valuation: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let which = match self.condition {
            Condition::Forward => "forward",
            Condition::Backward => "backward",
        };
        write!(f, "{which} at {} under {}", self.formula, self.valuation)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConservativeReport {
    pub formulas: usize,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

/// Checks both conditions of a conservative translation on every source
/// formula over `vars` up to `depth`, under every valuation of `vars`.
pub fn check_conservative_translation(
    t: &ConservativeTriple,
    vars: &[u32],
    depth: usize,
) -> Result<ConservativeReport> {
    let mut report = ConservativeReport::default();
    let src = &t.source;
    let host = &t.host;
    let src_vals: Vec<Valuation> = Valuation::all(vars, src.matrix().size()).collect();
    let host_vals: Vec<Valuation> = Valuation::all(vars, host.matrix().size()).collect();
    for phi in enumerate_formulas(src.signature(), vars, depth) {
        let image = t.translation.translate(&phi)?;
        report.formulas += 1;
        for v in &src_vals {
            report.checks += 1;
            if host.satisfies(&v.map(&t.forward), &image)? && !src.satisfies(v, &phi)? {
                report.counterexamples.push(Counterexample {
                    formula: phi.clone(),
                    condition: Condition::Forward,
                    valuation: v.render(src.matrix()),
                });
            }
        }
        for v in &host_vals {
            report.checks += 1;
            if src.satisfies(&v.map(&t.backward), &phi)? && !host.satisfies(v, &image)? {
                report.counterexamples.push(Counterexample {
                    formula: phi.clone(),
                    condition: Condition::Backward,
                    valuation: v.render(host.matrix()),
                });
            }
        }
    }
    Ok(report)
}

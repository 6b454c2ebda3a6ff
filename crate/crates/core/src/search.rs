//! Backward proof search with set-contraction loop checking.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::calculus::{
    match_backward_with, Derivation, DerivationLine, GentzenCalculus, RuleSchema, Sequent, Splits,
};
use crate::error::Result;
use crate::formula::Formula;
use crate::translation::Identification;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximal height of a derivation.
    pub max_depth: usize,
    pub loop_check: bool,
    /// Rules tried first, in this order; the rest follow the default order.
    pub rule_order: Vec<String>,
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_depth: 50,
            loop_check: true,
            rule_order: Vec::new(),
            trace: false,
        }
    }
}

impl SearchConfig {
    pub fn with_depth(max_depth: usize) -> Self {
        SearchConfig {
            max_depth,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Derivation),
    /// Every branch closed without a proof and without hitting the bound.
    NotProvable,
    /// Some branch hit the depth bound.
    DepthExhausted,
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::DepthExhausted)
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Proved(_) => "proved",
            SearchOutcome::NotProvable => "not provable",
            SearchOutcome::DepthExhausted => "depth exhausted",
        }
    }
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Rule applications attempted.
    pub expansions: usize,
    /// `depth rule goal`, one line per expansion, when tracing.
    pub trace: Vec<String>,
}

struct Node {
    sequent: Sequent,
    rule: usize,
    children: Vec<Rc<Node>>,
}

#[derive(Clone)]
struct Fail {
    cut: bool,
    /// Ancestors, by set id, whose loop prunes the failure depends on.
    refs: Vec<u32>,
}

impl Fail {
    fn clean() -> Fail {
        Fail {
            cut: false,
            refs: Vec::new(),
        }
    }

    fn cut() -> Fail {
        Fail {
            cut: true,
            refs: Vec::new(),
        }
    }

    fn merge(&mut self, other: Fail) {
        self.cut |= other.cut;
        for r in other.refs {
            if let Err(at) = self.refs.binary_search(&r) {
                self.refs.insert(at, r);
            }
        }
    }
}

/// A failure that holds again while `refs` are all ancestors and, when it
/// came from a depth cut, the budget is at most `budget`.
struct Cached {
    refs: Vec<u32>,
    budget: Option<usize>,
}

type Key = (Vec<Formula>, Vec<Formula>);

const CACHED_PER_SEQUENT: usize = 8;

struct Searcher<'a> {
    g: &'a GentzenCalculus,
    cfg: &'a SearchConfig,
    axioms: Vec<usize>,
    rules: Vec<usize>,
    ids: HashMap<Key, u32>,
    on_stack: Vec<bool>,
    proved: HashMap<Key, Rc<Node>>,
    failed: HashMap<Key, Vec<Cached>>,
    expansions: usize,
    trace: Vec<String>,
}

fn group(s: &RuleSchema) -> u8 {
    let branching = s.premises().len() > 1;
    match (s.is_invertible(), branching, s.erases_context()) {
        (_, _, true) => 4,
        (true, false, _) => 1,
        (true, true, _) => 2,
        (false, _, _) => 3,
    }
}

impl<'a> Searcher<'a> {
    fn new(g: &'a GentzenCalculus, cfg: &'a SearchConfig) -> Self {
        let schemas = g.schemas();
        let axioms = (0..schemas.len())
            .filter(|&i| schemas[i].is_axiom())
            .collect();
        let mut rules: Vec<usize> = (0..schemas.len())
            .filter(|&i| !schemas[i].is_axiom())
            .collect();
        let rank = |i: &usize| {
            let s = &schemas[*i];
            match cfg.rule_order.iter().position(|n| n == s.name()) {
                Some(p) => (0, p),
                None => (1, group(s) as usize),
            }
        };
        rules.sort_by_key(rank);
        Searcher {
            g,
            cfg,
            axioms,
            rules,
            ids: HashMap::new(),
            on_stack: Vec::new(),
            proved: HashMap::new(),
            failed: HashMap::new(),
            expansions: 0,
            trace: Vec::new(),
        }
    }

    fn note(&mut self, depth: usize, rule: usize, goal: &Sequent) {
        self.expansions += 1;
        if self.cfg.trace {
            let name = self.g.schemas()[rule].name();
            self.trace.push(format!("{depth} {name} {goal}"));
        }
    }

    fn id(&mut self, set: Key) -> u32 {
        let next = self.ids.len() as u32;
        let id = *self.ids.entry(set).or_insert(next);
        if id == next {
            self.on_stack.push(false);
        }
        id
    }

    fn cached_failure(&self, exact: &Key, budget: usize) -> Option<Fail> {
        self.failed.get(exact)?.iter().find_map(|c| {
            let fits = c.budget.is_none_or(|b| budget <= b);
            let holds = c.refs.iter().all(|&r| self.on_stack[r as usize]);
            (fits && holds).then(|| Fail {
                cut: c.budget.is_some(),
                refs: c.refs.clone(),
            })
        })
    }

    fn prove(&mut self, goal: &Sequent, depth: usize) -> Result<Rc<Node>, Fail> {
        let exact = goal.canonical();
        if let Some(n) = self.proved.get(&exact) {
            return Ok(n.clone());
        }
        let budget = self.cfg.max_depth.saturating_sub(depth);
        if let Some(f) = self.cached_failure(&exact, budget) {
            return Err(f);
        }
        let id = self.id(goal.set_key());
        if self.cfg.loop_check && self.on_stack[id as usize] {
            return Err(Fail {
                cut: false,
                refs: vec![id],
            });
        }
        if budget == 0 {
            return Err(Fail::cut());
        }
        for &i in &self.axioms {
            let ax = &self.g.schemas()[i];
            if !match_backward_with(ax, goal, Splits::Maximal).is_empty() {
                self.note(depth, i, goal);
                let node = Rc::new(Node {
                    sequent: goal.clone(),
                    rule: i,
                    children: Vec::new(),
                });
                self.proved.insert(exact, node.clone());
                return Ok(node);
            }
        }
        if budget == 1 {
            return Err(Fail::cut());
        }
        let pushed = self.cfg.loop_check && !self.on_stack[id as usize];
        if pushed {
            self.on_stack[id as usize] = true;
        }
        let result = self.expand(goal, depth, id);
        if pushed {
            self.on_stack[id as usize] = false;
        }
        match result {
            Ok(node) => {
                self.proved.insert(exact, node.clone());
                Ok(node)
            }
            Err(mut f) => {
                f.refs.retain(|&r| r != id);
                let entries = self.failed.entry(exact).or_default();
                if entries.len() < CACHED_PER_SEQUENT {
                    entries.push(Cached {
                        refs: f.refs.clone(),
                        budget: f.cut.then_some(budget),
                    });
                }
                Err(f)
            }
        }
    }

    fn expand(&mut self, goal: &Sequent, depth: usize, id: u32) -> Result<Rc<Node>, Fail> {
        let set = goal.set_key();
        let mut fail = Fail::clean();
        for k in 0..self.rules.len() {
            let i = self.rules[k];
            let rule = &self.g.schemas()[i];
            let invertible = rule.is_invertible();
            for inst in match_backward_with(rule, goal, Splits::Maximal) {
                if inst.premises.iter().any(|p| p.set_key() == set) {
                    continue;
                }
                self.note(depth, i, goal);
                match self.premises(&inst.premises, depth + 1) {
                    Ok(children) => {
                        return Ok(Rc::new(Node {
                            sequent: goal.clone(),
                            rule: i,
                            children,
                        }))
                    }
                    Err(f) => {
                        let independent = f.refs.iter().all(|&r| r == id);
                        fail.merge(f);
                        if invertible && independent {
                            return Err(fail);
                        }
                    }
                }
            }
        }
        Err(fail)
    }

    fn premises(&mut self, premises: &[Sequent], depth: usize) -> Result<Vec<Rc<Node>>, Fail> {
        premises.iter().map(|p| self.prove(p, depth)).collect()
    }
}

fn to_derivation(g: &GentzenCalculus, root: &Rc<Node>) -> Derivation {
    fn walk(g: &GentzenCalculus, n: &Node, lines: &mut Vec<DerivationLine>) {
        let number = lines.len() + 1;
        lines.push(DerivationLine {
            number,
            sequent: n.sequent.clone(),
            rule: g.schemas()[n.rule].name().to_string(),
            premises: Vec::new(),
        });
        let mut premises = Vec::new();
        for c in &n.children {
            premises.push(lines.len() + 1);
            walk(g, c, lines);
        }
        lines[number - 1].premises = premises;
    }
    let mut lines = Vec::new();
    walk(g, root, &mut lines);
    Derivation::new(lines)
}

/// Searches for a derivation of `goal`, reporting effort and the optional
/// trace.
pub fn search(g: &GentzenCalculus, goal: &Sequent, cfg: &SearchConfig) -> SearchReport {
    let mut s = Searcher::new(g, cfg);
    let outcome = match s.prove(goal, 0) {
        Ok(root) => SearchOutcome::Proved(to_derivation(g, &root)),
        Err(f) if f.cut => SearchOutcome::DepthExhausted,
        Err(_) => SearchOutcome::NotProvable,
    };
    SearchReport {
        outcome,
        expansions: s.expansions,
        trace: s.trace,
    }
}

pub fn prove(g: &GentzenCalculus, goal: &Sequent, cfg: &SearchConfig) -> SearchOutcome {
    search(g, goal, cfg).outcome
}

/// `=> φ`
pub fn prove_formula(g: &GentzenCalculus, f: &Formula, cfg: &SearchConfig) -> SearchOutcome {
    prove(g, &Sequent::goal(f.clone()), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
    /// A side hit the depth bound.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub formula: Formula,
    pub flattened: Formula,
    pub combined: SearchOutcome,
    pub host: SearchOutcome,
}

impl TransferReport {
    pub fn agreement(&self) -> Agreement {
        if self.combined.is_exhausted() || self.host.is_exhausted() {
            Agreement::Inconclusive
        } else if self.combined.is_proved() == self.host.is_proved() {
            Agreement::Agree
        } else {
            Agreement::Disagree
        }
    }
}

impl fmt::Display for TransferReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: combined {}, host {} on {}",
            self.formula, self.combined, self.host, self.flattened
        )
    }
}

/// Proves `phi` in the combined calculus and its flattening in the host
/// calculus (over the renamed host signature).
pub fn theoremhood_transfer(
    combined: &GentzenCalculus,
    host: &GentzenCalculus,
    ident: &Identification,
    phi: &Formula,
    cfg: &SearchConfig,
) -> Result<TransferReport> {
    let flattened = ident.flatten(phi)?;
    Ok(TransferReport {
        formula: phi.clone(),
        combined: prove_formula(combined, phi, cfg),
        host: prove_formula(host, &flattened, cfg),
        flattened,
    })
}

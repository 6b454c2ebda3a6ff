use std::collections::HashSet;
use std::sync::Arc;

use super::{ContextVar, Item, RuleSchema, Sequent, SequentPattern, Side};
use crate::formula::{Bindings, Formula, Pattern};

/// How leftover formulas are spread over the context variables of a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Splits {
    /// Every assignment a guarded variable admits.
    All,
    /// Guarded variables take every formula they can.
    Maximal,
}

/// One way a schema's conclusion matches a sequent.
#[derive(Clone, Debug)]
pub struct Instance {
    pub bindings: Bindings,
    pub contexts: Vec<(Arc<str>, Vec<Formula>)>,
    pub premises: Vec<Sequent>,
}

impl Instance {
    fn context(&self, name: &str) -> &[Formula] {
        self.contexts
            .iter()
            .find(|(n, _)| &**n == name)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    /// Instantiates a sequent pattern under this match.
    pub fn instantiate(&self, p: &SequentPattern) -> Option<Sequent> {
        let side = |items: &[Item]| -> Option<Vec<Formula>> {
            let mut out = Vec::new();
            for i in items {
                match i {
                    Item::Formula(p) => out.push(p.instantiate(&self.bindings)?),
                    Item::Context(c) => out.extend_from_slice(self.context(&c.name)),
                }
            }
            Some(out)
        };
        Some(Sequent::new(side(&p.left)?, side(&p.right)?))
    }

    /// The schema's conclusion under this match, which reproduces the goal.
    pub fn conclusion(&self, schema: &RuleSchema) -> Sequent {
        self.instantiate(schema.conclusion())
            .expect("conclusion variables are bound by matching")
    }
}

/// Every distinct list of premises obtained by applying `schema` backwards
/// to `goal`.
pub fn match_backward(schema: &RuleSchema, goal: &Sequent) -> Vec<Vec<Sequent>> {
    match_backward_with(schema, goal, Splits::All)
        .into_iter()
        .map(|i| i.premises)
        .collect()
}

/// Backward matches in a deterministic order, collapsing those whose premise
/// lists coincide as multisets.
pub fn match_backward_with(schema: &RuleSchema, goal: &Sequent, splits: Splits) -> Vec<Instance> {
    let c = schema.conclusion();
    let mut pats: Vec<(Side, &Pattern)> = Vec::new();
    let mut ctx: [Vec<&ContextVar>; 2] = [Vec::new(), Vec::new()];
    for (side, items) in [(Side::Left, &c.left), (Side::Right, &c.right)] {
        for i in items {
            match i {
                Item::Formula(p) => pats.push((side, p)),
                Item::Context(v) => ctx[side as usize].push(v),
            }
        }
    }
    if ctx[0].is_empty() && c.left.len() != goal.left().len()
        || ctx[1].is_empty() && c.right.len() != goal.right().len()
    {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<Sequent>> = HashSet::new();
    let mut used = [
        vec![false; goal.left().len()],
        vec![false; goal.right().len()],
    ];
    let mut b = Bindings::default();
    place(&pats, goal, &mut used, &mut b, &mut |used, b| {
        let rest = |side: usize, formulas: &[Formula]| -> Vec<Formula> {
            formulas
                .iter()
                .zip(&used[side])
                .filter(|(_, u)| !**u)
                .map(|(f, _)| f.clone())
                .collect()
        };
        let left = distribute(&ctx[0], &rest(0, goal.left()), splits);
        let right = distribute(&ctx[1], &rest(1, goal.right()), splits);
        for l in &left {
            for r in &right {
                let contexts = ctx[0]
                    .iter()
                    .zip(l)
                    .chain(ctx[1].iter().zip(r))
                    .map(|(v, fs)| (v.name.clone(), fs.clone()))
                    .collect();
                let mut inst = Instance {
                    bindings: b.clone(),
                    contexts,
                    premises: Vec::new(),
                };
                let Some(premises) = schema
                    .premises()
                    .iter()
                    .map(|p| inst.instantiate(p))
                    .collect::<Option<Vec<_>>>()
                else {
                    continue;
                };
                let mut key = premises.clone();
                key.sort_by_cached_key(|s| s.canonical());
                if seen.insert(key) {
                    inst.premises = premises;
                    out.push(inst);
                }
            }
        }
    });
    out
}

fn place(
    pats: &[(Side, &Pattern)],
    goal: &Sequent,
    used: &mut [Vec<bool>; 2],
    b: &mut Bindings,
    leaf: &mut dyn FnMut(&[Vec<bool>; 2], &Bindings),
) {
    let Some(((side, p), more)) = pats.split_first() else {
        leaf(used, b);
        return;
    };
    let s = *side as usize;
    let formulas = match side {
        Side::Left => goal.left(),
        Side::Right => goal.right(),
    };
    let mut tried: Vec<&Formula> = Vec::new();
    for (j, f) in formulas.iter().enumerate() {
        if used[s][j] || tried.contains(&f) {
            continue;
        }
        tried.push(f);
        let mark = b.mark();
        if p.matches(f, b) {
            used[s][j] = true;
            place(more, goal, used, b, leaf);
            used[s][j] = false;
            b.reset(mark);
        }
    }
}

/// Assignments of `rest` to the context variables, one formula list per
/// variable.
fn distribute(ctx: &[&ContextVar], rest: &[Formula], splits: Splits) -> Vec<Vec<Vec<Formula>>> {
    let mut options: Vec<Vec<usize>> = Vec::with_capacity(rest.len());
    for f in rest {
        let guarded: Vec<usize> = (0..ctx.len())
            .filter(|&i| matches!(&ctx[i].guard, Some(g) if f.head() == Some(g)))
            .collect();
        let free: Vec<usize> = (0..ctx.len()).filter(|&i| ctx[i].guard.is_none()).collect();
        let opts = match splits {
            Splits::Maximal if !guarded.is_empty() => vec![guarded[0]],
            _ => guarded.into_iter().chain(free).collect(),
        };
        if opts.is_empty() {
            return Vec::new();
        }
        options.push(opts);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut pick = vec![0usize; rest.len()];
    loop {
        let mut parts = vec![Vec::new(); ctx.len()];
        for (k, f) in rest.iter().enumerate() {
            parts[options[k][pick[k]]].push(f.clone());
        }
        let key: Vec<Vec<Formula>> = parts
            .iter()
            .map(|p| {
                let mut p = p.clone();
                p.sort();
                p
            })
            .collect();
        if seen.insert(key) {
            out.push(parts);
        }
        let mut k = rest.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
        }
    }
}

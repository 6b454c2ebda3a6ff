use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Constructor, Formula, Signature};

/// Depth-0 formulas: the given prop symbols, the 0-ary constructors, then the
/// source prop constants for the same indices.
fn atoms(sig: &Signature, vars: &[u32]) -> Vec<Formula> {
    let mut out: Vec<Formula> = vars.iter().map(|&k| Formula::prop(k)).collect();
    out.extend(sig.of_arity(0).map(|c| Formula::constant(c.clone())));
    if let Some(tag) = sig.source_props() {
        out.extend(
            vars.iter()
                .map(|&k| Formula::constant(Constructor::prop_constant(k, tag.clone()))),
        );
    }
    out
}

fn compound(sig: &Signature) -> Vec<&Constructor> {
    sig.constructors()
        .iter()
        .filter(|c| c.arity() > 0)
        .collect()
}

/// All formulas over `vars` of depth at most `max_depth`, by increasing depth.
///
/// Within a depth level, constructors follow signature order and argument
/// tuples are lexicographic in the order of the earlier levels.
pub fn enumerate_formulas(sig: &Signature, vars: &[u32], max_depth: usize) -> Vec<Formula> {
    let mut all = atoms(sig, vars);
    let ctors = compound(sig);
    let mut prev_start = 0;
    for _ in 0..max_depth {
        let below = all.len();
        if below == 0 {
            break;
        }
        let mut level = Vec::new();
        for c in &ctors {
            let n = c.arity();
            let mut idx = vec![0usize; n];
            loop {
                if idx.iter().any(|&i| i >= prev_start) {
                    level.push(Formula::app(
                        (*c).clone(),
                        idx.iter().map(|&i| all[i].clone()).collect(),
                    ));
                }
                if !advance(&mut idx, below) {
                    break;
                }
            }
        }
        prev_start = below;
        all.extend(level);
    }
    all
}

/// Odometer step over `0..bound` with the last position fastest.
fn advance(idx: &mut [usize], bound: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < bound {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Number of formulas [`enumerate_formulas`] returns, computed by recursion
/// on depth without building them.
pub fn count_formulas(sig: &Signature, vars: &[u32], max_depth: usize) -> u128 {
    let base = atoms(sig, vars).len() as u128;
    let arities: Vec<u32> = compound(sig).iter().map(|c| c.arity() as u32).collect();
    let mut upto = base;
    for _ in 0..max_depth {
        upto = base + arities.iter().map(|&n| upto.pow(n)).sum::<u128>();
    }
    upto
}

/// One random formula of depth at most `max_depth`. Each node picks uniformly
/// among the atoms and the constructors of positive arity; at the depth limit
/// only atoms are eligible.
pub fn random_formula<R: Rng + ?Sized>(
    sig: &Signature,
    vars: &[u32],
    max_depth: usize,
    rng: &mut R,
) -> Formula {
    let atoms = atoms(sig, vars);
    let ctors = compound(sig);
    grow(&atoms, &ctors, max_depth, rng)
}

fn grow<R: Rng + ?Sized>(
    atoms: &[Formula],
    ctors: &[&Constructor],
    budget: usize,
    rng: &mut R,
) -> Formula {
    let choices = if budget == 0 {
        atoms.len()
    } else {
        atoms.len() + ctors.len()
    };
    let pick = rng.gen_range(0..choices);
    if pick < atoms.len() {
        return atoms[pick].clone();
    }
    let c = ctors[pick - atoms.len()];
    let args = (0..c.arity())
        .map(|_| grow(atoms, ctors, budget - 1, rng))
        .collect();
    Formula::app(c.clone(), args)
}

/// `count` distinct random formulas drawn from a ChaCha8 stream seeded with
/// `seed`. Fewer are returned if the space is too small to supply them.
pub fn sample_formulas(
    sig: &Signature,
    vars: &[u32],
    max_depth: usize,
    count: usize,
    seed: u64,
) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = atoms(sig, vars);
    let ctors = compound(sig);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count.saturating_mul(200).max(1000) {
        attempts += 1;
        let f = grow(&atoms, &ctors, max_depth, &mut rng);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::LogicTag;

    fn frag() -> Signature {
        let pl = LogicTag::new("pl");
        Signature::new(
            "PLfrag",
            vec![
                Constructor::new("neg", pl.clone(), 1),
                Constructor::new("imp", pl, 2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn depth_one_over_one_var() {
        let got: Vec<String> = enumerate_formulas(&frag(), &[1], 1)
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(got, ["p1", "(neg.pl p1)", "(imp.pl p1 p1)"]);
    }

    #[test]
    fn enumeration_matches_counter_and_has_no_duplicates() {
        for depth in 0..=2 {
            let all = enumerate_formulas(&frag(), &[1, 2], depth);
            let set: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            assert_eq!(all.len() as u128, count_formulas(&frag(), &[1, 2], depth));
            assert!(all.iter().all(|f| f.depth() <= depth));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_formulas(&frag(), &[1, 2], 3, 20, 7);
        let b = sample_formulas(&frag(), &[1, 2], 3, 20, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|f| f.depth() <= 3));
    }
}

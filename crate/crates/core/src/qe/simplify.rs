use std::collections::{HashMap, HashSet};

use crate::formula::{Atom, Formula, LinearTerm};

/// Merges atoms over the same term up to sign. In a conjunction the sets
/// of admitted signs are intersected, in a disjunction they are joined.
/// Returns `None` when the merge decides the whole connective.
fn merge_literals(parts: Vec<Formula>, conjunction: bool) -> Option<Vec<Formula>> {
    let mut masks: HashMap<LinearTerm, (usize, u8)> = HashMap::new();
    let mut order: Vec<Option<Formula>> = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            Formula::Atom(a) => {
                let (key, mask) = a.sign_class();
                let next = order.len();
                let slot = masks.entry(key).or_insert((next, if conjunction { 7 } else { 0 }));
                slot.1 = if conjunction { slot.1 & mask } else { slot.1 | mask };
                if slot.0 == next {
                    order.push(None);
                }
            }
            other => order.push(Some(other)),
        }
    }
    let decided = if conjunction { 0 } else { 7 };
    let mut atoms: Vec<(usize, Formula)> = Vec::with_capacity(masks.len());
    for (key, (at, mask)) in masks {
        match mask {
            m if m == decided => return None,
            7 | 0 => {}
            m => atoms.push((at, Formula::Atom(Atom::from_sign_class(&key, m)))),
        }
    }
    for (at, f) in atoms {
        order[at] = Some(f);
    }
    Some(order.into_iter().flatten().collect())
}

/// Folds ground atoms, absorbs `true`/`false`, flattens nested connectives
/// of the same kind and removes duplicate conjuncts and disjuncts.
pub fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) => match a.ground_truth() {
            Some(true) => Formula::True,
            Some(false) => Formula::False,
            None => f.clone(),
        },
        Formula::PiLt(..) => simplify(&f.unfold_primitives()),
        Formula::Not(g) => match simplify(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(h) => *h,
            h => Formula::not(h),
        },
        Formula::And(gs) => {
            let mut out = Vec::with_capacity(gs.len());
            let mut seen = HashSet::new();
            let mut push = |h: Formula, out: &mut Vec<Formula>| {
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            };
            for g in gs {
                match simplify(g) {
                    Formula::True => {}
                    Formula::False => return Formula::False,
                    Formula::And(hs) => hs.into_iter().for_each(|h| push(h, &mut out)),
                    h => push(h, &mut out),
                }
            }
            merge_literals(out, true).map_or(Formula::False, Formula::and)
        }
        Formula::Or(gs) => {
            let mut out = Vec::with_capacity(gs.len());
            let mut seen = HashSet::new();
            let mut push = |h: Formula, out: &mut Vec<Formula>| {
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            };
            for g in gs {
                match simplify(g) {
                    Formula::False => {}
                    Formula::True => return Formula::True,
                    Formula::Or(hs) => hs.into_iter().for_each(|h| push(h, &mut out)),
                    h => push(h, &mut out),
                }
            }
            merge_literals(out, false).map_or(Formula::True, Formula::or)
        }
        Formula::Implies(a, b) => match (simplify(a), simplify(b)) {
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (Formula::True, h) => h,
            (h, Formula::False) => simplify(&Formula::not(h)),
            (x, y) => Formula::implies(x, y),
        },
        Formula::Iff(a, b) => match (simplify(a), simplify(b)) {
            (Formula::True, h) | (h, Formula::True) => h,
            (Formula::False, h) | (h, Formula::False) => simplify(&Formula::not(h)),
            (x, y) if x == y => Formula::True,
            (x, y) => Formula::iff(x, y),
        },
        Formula::Exists(v, g) => match simplify(g) {
            h @ (Formula::True | Formula::False) => h,
            h => Formula::exists(v.clone(), h),
        },
        Formula::ForAll(v, g) => match simplify(g) {
            h @ (Formula::True | Formula::False) => h,
            h => Formula::forall(v.clone(), h),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn ground_atoms_fold() {
        assert_eq!(simplify(&parse("pi < 22/7 /\\ 3 < pi").unwrap()), Formula::True);
        assert_eq!(simplify(&parse("x < 1 /\\ pi > 4").unwrap()), Formula::False);
        assert_eq!(simplify(&parse("x < 1 \\/ pi*pi > 9").unwrap()), Formula::True);
    }

    #[test]
    fn literals_over_one_term_merge() {
        let s = |t: &str| simplify(&parse(t).unwrap());
        assert_eq!(s("x < 1 /\\ x > 1"), Formula::False);
        assert_eq!(s("x < 1 \\/ x >= 1"), Formula::True);
        assert_eq!(s("x <= 1 /\\ 1 <= x /\\ y < 0"), s("x = 1 /\\ y < 0"));
        assert_eq!(s("x < 1 \\/ 1 < x"), s("x != 1"));
        assert_eq!(s("x < 1 /\\ x <= 1"), s("x < 1"));
        assert_eq!(s("2*x < 2 \\/ x = 1"), s("x <= 1"));
    }

    #[test]
    fn duplicates_and_nesting_collapse() {
        let f = parse("x < 1 /\\ (x < 1 /\\ (y = 2 /\\ 0 = 0))").unwrap();
        assert_eq!(simplify(&f), parse("x < 1 /\\ y = 2").unwrap());
    }
}

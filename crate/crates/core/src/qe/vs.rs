//! Elimination by virtual substitution of test points.
//!
//! For `EX x. f` with `f` quantifier-free, the candidate points are `-inf`,
//! every root `r` of an atom mentioning `x`, and `r + eps` for an
//! infinitesimal `eps`. Substituting `r` needs the extra condition that `r`
//! is rational because `x` ranges over the rationals; the other two test
//! points stand for open intervals, which always contain rationals.

use crate::formula::{Atom, Formula, LinearTerm, Rel};

use super::rational::rationality_constraint;
use super::simplify;

#[derive(Clone, Copy)]
enum Point<'a> {
    MinusInfinity,
    At(&'a LinearTerm),
    JustAbove(&'a LinearTerm),
}

/// `EX x. f` for a quantifier-free `f` in negation normal form.
pub(crate) fn exists(x: &str, f: &Formula) -> Formula {
    match f {
        Formula::Or(gs) => {
            let mut out = Vec::with_capacity(gs.len());
            for g in gs {
                let e = exists(x, g);
                if e == Formula::True {
                    return e;
                }
                out.push(e);
            }
            simplify(&Formula::or(out))
        }
        Formula::And(gs) => {
            let (free, bound): (Vec<Formula>, Vec<Formula>) =
                gs.iter().cloned().partition(|g| !g.free_vars().contains(x));
            if free.is_empty() {
                return test_points(x, f);
            }
            let mut parts = free;
            parts.push(test_points(x, &Formula::and(bound)));
            simplify(&Formula::and(parts))
        }
        _ => test_points(x, f),
    }
}

fn test_points(x: &str, f: &Formula) -> Formula {
    let mut roots: Vec<LinearTerm> = Vec::new();
    for a in f.atoms() {
        if !a.contains(x) {
            continue;
        }
        let (b, rest) = a.term().split(x);
        let r = rest.scale(&(-b.recip().expect("atom mentions x")));
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    if roots.is_empty() {
        return f.clone();
    }
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    let mut push = |g: Formula| -> bool {
        let g = simplify(&g);
        let done = g == Formula::True;
        out.push(g);
        done
    };
    if push(substitute(f, x, Point::MinusInfinity)) {
        return Formula::True;
    }
    for r in &roots {
        if push(substitute(f, x, Point::JustAbove(r))) {
            return Formula::True;
        }
        let at = simplify(&substitute(f, x, Point::At(r)));
        if at != Formula::False && push(Formula::and(vec![at, rationality_constraint(r)])) {
            return Formula::True;
        }
    }
    simplify(&Formula::or(out))
}

fn substitute(f: &Formula, x: &str, p: Point<'_>) -> Formula {
    match f {
        Formula::Atom(a) if a.contains(x) => substitute_atom(a, x, p),
        Formula::And(gs) => Formula::and(gs.iter().map(|g| substitute(g, x, p)).collect()),
        Formula::Or(gs) => Formula::or(gs.iter().map(|g| substitute(g, x, p)).collect()),
        _ => f.clone(),
    }
}

fn substitute_atom(a: &Atom, x: &str, p: Point<'_>) -> Formula {
    let (b, _) = a.term().split(x);
    let b_sign = b.sign();
    match p {
        Point::At(r) => Formula::atom(a.term().substitute(x, r), a.rel()),
        Point::MinusInfinity => match a.rel() {
            Rel::Lt | Rel::Le => bool_formula(b_sign > 0),
            Rel::Eq => Formula::False,
            Rel::Ne => Formula::True,
        },
        Point::JustAbove(r) => match a.rel() {
            Rel::Lt | Rel::Le => {
                // b*(r + eps) + s < 0 holds iff w < 0, or w = 0 and b < 0
                let w = a.term().substitute(x, r);
                Formula::atom(w, if b_sign < 0 { Rel::Le } else { Rel::Lt })
            }
            Rel::Eq => Formula::False,
            Rel::Ne => Formula::True,
        },
    }
}

fn bool_formula(b: bool) -> Formula {
    if b {
        Formula::True
    } else {
        Formula::False
    }
}

//! Quantifier elimination and sentence decision.
//!
//! Bound variables range over the rationals while coefficients live in
//! `Q(pi)`. Two independent procedures are provided: Fourier–Motzkin over a
//! lazily distributed normal form ([`eliminate`]) and virtual substitution
//! ([`eliminate_vs`]). Both return quantifier-free formulas in negation
//! normal form.

mod fm;
mod rational;
mod simplify;
mod vs;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;

pub use fm::Bounds;
pub use rational::rationality_constraint;
pub use simplify::simplify;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QeError {
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("sentence has free variables: {}", .0.iter().cloned().collect::<Vec<_>>().join(", "))]
    FreeVariables(BTreeSet<String>),
    #[error("could not reduce to a truth value: {0}")]
    Undecided(String),
}

/// Which elimination procedure to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    FourierMotzkin,
    VirtualSubstitution,
}

/// `EX x. f` for a quantifier-free `f`, by Fourier–Motzkin.
pub fn eliminate_one(f: &Formula, x: &str) -> Result<Formula, QeError> {
    if !f.is_quantifier_free() {
        return Err(QeError::NotQuantifierFree);
    }
    Ok(exists_with(Strategy::FourierMotzkin, x, f))
}

/// Quantifier-free equivalent of `f`, eliminating innermost quantifiers first.
pub fn eliminate(f: &Formula) -> Result<Formula, QeError> {
    eliminate_with(f, Strategy::FourierMotzkin)
}

/// As [`eliminate`], by virtual substitution.
pub fn eliminate_vs(f: &Formula) -> Result<Formula, QeError> {
    eliminate_with(f, Strategy::VirtualSubstitution)
}

pub fn eliminate_with(f: &Formula, strategy: Strategy) -> Result<Formula, QeError> {
    Ok(simplify(&elim(f, strategy).nnf()))
}

/// Truth value of a sentence.
pub fn decide(s: &Formula) -> Result<bool, QeError> {
    decide_with(s, Strategy::FourierMotzkin)
}

pub fn decide_with(s: &Formula, strategy: Strategy) -> Result<bool, QeError> {
    let free = s.free_vars();
    if !free.is_empty() {
        return Err(QeError::FreeVariables(free));
    }
    match eliminate_with(s, strategy)? {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        other => Err(QeError::Undecided(other.to_string())),
    }
}

fn exists_with(strategy: Strategy, x: &str, body: &Formula) -> Formula {
    let body = simplify(&body.nnf());
    let out = match strategy {
        Strategy::FourierMotzkin => fm::exists(x, &body),
        Strategy::VirtualSubstitution => vs::exists(x, &body),
    };
    simplify(&out)
}

fn elim(f: &Formula, strategy: Strategy) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::PiLt(..) => f.unfold_primitives(),
        Formula::Not(g) => Formula::not(elim(g, strategy)),
        Formula::And(gs) => Formula::and(gs.iter().map(|g| elim(g, strategy)).collect()),
        Formula::Or(gs) => Formula::or(gs.iter().map(|g| elim(g, strategy)).collect()),
        Formula::Implies(a, b) => Formula::implies(elim(a, strategy), elim(b, strategy)),
        Formula::Iff(a, b) => Formula::iff(elim(a, strategy), elim(b, strategy)),
        Formula::Exists(v, g) => exists_with(strategy, v, &elim(g, strategy)),
        Formula::ForAll(v, g) => {
            let negated = Formula::not(elim(g, strategy));
            simplify(&Formula::not(exists_with(strategy, v, &negated)).nnf())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn both(text: &str) -> (Formula, Formula) {
        let f = parse(text).unwrap();
        (eliminate(&f).unwrap(), eliminate_vs(&f).unwrap())
    }

    fn equivalent(a: &Formula, b: &Formula) -> bool {
        let mut s = Formula::iff(a.clone(), b.clone());
        for v in a.free_vars().union(&b.free_vars()) {
            s = Formula::forall(v.clone(), s);
        }
        decide(&s).unwrap()
    }

    #[test]
    fn upper_and_lower_bound_meet() {
        let target = parse("pi*x < 1").unwrap();
        let (a, b) = both("EX y. x < y /\\ pi*y < 1");
        assert!(!a.free_vars().contains("y") && !b.free_vars().contains("y"));
        assert!(equivalent(&a, &target), "{a}");
        assert!(equivalent(&b, &target), "{b}");
    }

    #[test]
    fn no_lower_bound_is_true() {
        assert_eq!(both("EX y. y < x"), (Formula::True, Formula::True));
    }

    #[test]
    fn equality_substitutes() {
        let target = parse("pi*x < 1").unwrap();
        let (a, b) = both("EX y. y = x /\\ pi*y < 1");
        assert_eq!(a, target);
        assert!(equivalent(&b, &target));
    }

    #[test]
    fn irrational_point_is_not_a_witness() {
        let s = parse("EX x. pi*x = 1").unwrap();
        assert!(!decide(&s).unwrap());
        assert!(!decide_with(&s, Strategy::VirtualSubstitution).unwrap());
        assert!(decide(&parse("EX x. x = x").unwrap()).unwrap());
    }

    #[test]
    fn density_sentence_holds() {
        let s = parse("ALL x. x > 0 -> EX y. pi*y < 1 /\\ ~(pi*(x + y) < 1)").unwrap();
        assert!(decide(&s).unwrap());
        assert!(decide_with(&s, Strategy::VirtualSubstitution).unwrap());
    }

    #[test]
    fn small_sentences() {
        for (text, expected) in [
            ("ALL x. x < x", false),
            ("EX y. pi*y < 1 /\\ y > 0", true),
            ("EX y. pi*y < 1 /\\ 1 < 3*y /\\ y < 1/3", false),
            ("EX y. 3*y < 1 /\\ 1 < pi*y", true),
            ("EX y. pi*y < 1 /\\ 3*y > 1", false),
            ("EX x. x <= 1 /\\ x >= 1", true),
            ("EX x. pi*x <= 1 /\\ pi*x >= 1", false),
            ("ALL x. EX y. x < y", true),
            ("EX x. ALL y. x <= y", false),
            ("ALL x. ALL y. x < y -> EX z. x < z /\\ z < y", true),
            ("EX x. EX y. pi*x = y /\\ x != 0", false),
            ("EX x. EX y. pi*x + y = 2*pi + 3", true),
        ] {
            let s = parse(text).unwrap();
            assert_eq!(decide(&s).unwrap(), expected, "{text}");
            assert_eq!(decide_with(&s, Strategy::VirtualSubstitution).unwrap(), expected, "{text} (vs)");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(
            eliminate_one(&parse("EX y. y < x").unwrap(), "x"),
            Err(QeError::NotQuantifierFree)
        );
        assert!(matches!(decide(&parse("x < 1").unwrap()), Err(QeError::FreeVariables(_))));
    }

    #[test]
    fn quantifier_free_input_is_kept() {
        let f = parse("x < 1 /\\ pi*y != 2").unwrap();
        assert_eq!(eliminate(&f).unwrap(), f);
    }
}

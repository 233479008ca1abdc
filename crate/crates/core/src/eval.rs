//! Ground evaluation of formulas, and a one-quantifier oracle that does not
//! go through quantifier elimination.
//!
//! Bound variables range over the rationals. Assignments may map free
//! variables to arbitrary elements of `Q(pi)`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cuts::{decompose, CutError};
use crate::formula::Formula;
use crate::qe::{eliminate, QeError};
use crate::scalar::PiScalar;

pub type Assignment = BTreeMap<String, PiScalar>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Cut(#[from] CutError),
}

/// Truth of a quantifier-free formula under `a`.
pub fn eval_qf(f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(at) => {
            let v = at.term().eval(a).map_err(EvalError::MissingVariable)?;
            at.rel().holds(v.sign())
        }
        Formula::PiLt(..) => eval_qf(&f.unfold_primitives(), a)?,
        Formula::Not(g) => !eval_qf(g, a)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_qf(g, a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_qf(g, a)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(p, q) => !eval_qf(p, a)? || eval_qf(q, a)?,
        Formula::Iff(p, q) => eval_qf(p, a)? == eval_qf(q, a)?,
        Formula::Exists(..) | Formula::ForAll(..) => return Err(EvalError::NotQuantifierFree),
    })
}

/// Truth of an arbitrary formula: eliminates quantifiers, then evaluates.
pub fn eval(f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    for v in f.free_vars() {
        if !a.contains_key(&v) {
            return Err(EvalError::MissingVariable(v));
        }
    }
    eval_qf(&eliminate(f)?, a)
}

/// Whether some rational `y` satisfies `f` once the other variables are set
/// by `a`, decided by decomposing the one-variable set.
pub fn oracle_exists(f: &Formula, y: &str, a: &Assignment) -> Result<bool, EvalError> {
    if !f.is_quantifier_free() {
        return Err(EvalError::NotQuantifierFree);
    }
    let mut g = f.clone();
    for v in f.free_vars() {
        if v == y {
            continue;
        }
        let value = a.get(&v).ok_or_else(|| EvalError::MissingVariable(v.clone()))?;
        g = g.substitute(&v, &crate::formula::LinearTerm::constant(value.clone()));
    }
    let set = decompose(&g, y)?;
    Ok(!set.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::scalar::rational;

    fn asg(pairs: &[(&str, PiScalar)]) -> Assignment {
        pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
    }

    fn q(n: i64, d: i64) -> PiScalar {
        PiScalar::from_rational(rational(n, d))
    }

    #[test]
    fn ground_evaluation() {
        let f = parse("pi*x + 1/2*z - 1 < 0").unwrap();
        assert!(eval_qf(&f, &asg(&[("x", q(1, 4)), ("z", q(1, 3))])).unwrap());
        assert!(eval_qf(&parse("x = x").unwrap(), &asg(&[("x", q(-9, 2))])).unwrap());
        let inv_pi = PiScalar::pi().recip().unwrap();
        assert!(!eval_qf(&parse("pi*x < 1").unwrap(), &asg(&[("x", inv_pi)])).unwrap());
    }

    #[test]
    fn missing_variable() {
        assert_eq!(
            eval_qf(&parse("x < y").unwrap(), &asg(&[("x", q(1, 1))])),
            Err(EvalError::MissingVariable("y".into()))
        );
    }

    #[test]
    fn quantified_evaluation() {
        let phi = parse("x > 0 /\\ EX y. pi*y < 1 /\\ ~(pi*(x + y) < 1)").unwrap();
        assert!(eval(&phi, &asg(&[("x", q(1, 100))])).unwrap());
        assert!(!eval(&phi, &asg(&[("x", q(-1, 1))])).unwrap());
        let g = parse("EX y. x < y /\\ pi*y < 1").unwrap();
        assert!(!eval(&g, &asg(&[("x", q(1, 1))])).unwrap());
    }

    #[test]
    fn oracle_examples() {
        let f = parse("x < y /\\ pi*y < 1").unwrap();
        assert!(oracle_exists(&f, "y", &asg(&[("x", q(0, 1))])).unwrap());
        assert!(!oracle_exists(&f, "y", &asg(&[("x", q(1, 1))])).unwrap());
        assert!(!oracle_exists(&parse("pi*y = 1").unwrap(), "y", &Assignment::new()).unwrap());
        assert!(oracle_exists(&parse("3*y = 1").unwrap(), "y", &Assignment::new()).unwrap());
    }
}

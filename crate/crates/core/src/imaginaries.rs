//! Canonical codes for classes of definable equivalence relations on the
//! line.
//!
//! The class of `a` under `E(x, y)` is a one-variable definable set. Its
//! closure in `Q(pi)`, written as finitely many closed intervals, is a
//! complete invariant of the class: two classes with the same closure
//! intersect, hence coincide.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cuts::{decompose, Component, CutError, ExtPoint, IntervalSet};
use crate::eval::{eval_qf, Assignment, EvalError};
use crate::formula::{Formula, LinearTerm};
use crate::qe::{eliminate, QeError};
use crate::scalar::{PiScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EiError {
    #[error("{0} is not in the domain of the relation")]
    NotInDomain(String),
    #[error("relation may only mention the variables x and y, found {0:?}")]
    Arity(Vec<String>),
    #[error(transparent)]
    Qe(#[from] QeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Cut(#[from] CutError),
}

/// Closed components of a closure in `Q(pi)`, sorted with strict gaps.
/// Serialized like an [`IntervalSet`] whose finite endpoints are included.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CutCode {
    components: Vec<Component>,
}

impl CutCode {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The code read back as a set of rationals.
    pub fn as_interval_set(&self) -> IntervalSet {
        IntervalSet::from_components(self.components.clone())
    }

    pub fn contains(&self, x: &PiScalar) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }
}

impl fmt::Display for CutCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.as_interval_set().fmt(f)
    }
}

/// Closes every finite endpoint and merges components that touch.
pub fn closure_code(s: &IntervalSet) -> CutCode {
    let mut out: Vec<Component> = Vec::new();
    for c in s.components() {
        let closed = Component {
            lo_in: matches!(c.lo, ExtPoint::Finite(_)),
            hi_in: matches!(c.hi, ExtPoint::Finite(_)),
            lo: c.lo.clone(),
            hi: c.hi.clone(),
        };
        match out.last_mut() {
            Some(prev) if prev.hi >= closed.lo => {
                if closed.hi > prev.hi {
                    prev.hi = closed.hi;
                    prev.hi_in = closed.hi_in;
                }
            }
            _ => out.push(closed),
        }
    }
    CutCode { components: out }
}

fn check_arity(e: &Formula) -> Result<(), EiError> {
    let extra: Vec<String> = e.free_vars().into_iter().filter(|v| v != "x" && v != "y").collect();
    if extra.is_empty() {
        Ok(())
    } else {
        Err(EiError::Arity(extra))
    }
}

fn constant(q: &Rational) -> LinearTerm {
    LinearTerm::constant(PiScalar::from_rational(q.clone()))
}

fn holds(e: &Formula, a: &Rational, b: &Rational) -> Result<bool, EiError> {
    let g = e.substitute("x", &constant(a)).substitute("y", &constant(b));
    Ok(eval_qf(&eliminate(&g)?, &Assignment::new())?)
}

/// Whether `a` lies in the domain `{a : E(a, a)}`.
pub fn in_domain(e: &Formula, a: &Rational) -> Result<bool, EiError> {
    check_arity(e)?;
    holds(e, a, a)
}

/// The closure code of the class of `a`.
pub fn ei_code(e: &Formula, a: &Rational) -> Result<CutCode, EiError> {
    if !in_domain(e, a)? {
        return Err(EiError::NotInDomain(a.to_string()));
    }
    let fiber = eliminate(&e.substitute("x", &constant(a)))?;
    Ok(closure_code(&decompose(&fiber, "y")?))
}

/// Direct evaluation of `E(a, b)`, the reference for [`ei_code`].
pub fn same_class(e: &Formula, a: &Rational, b: &Rational) -> Result<bool, EiError> {
    for p in [a, b] {
        if !in_domain(e, p)? {
            return Err(EiError::NotInDomain(p.to_string()));
        }
    }
    holds(e, a, b)
}

/// A single point standing for the code: its leftmost finite endpoint, or
/// zero when the code is the whole line.
pub fn representative(code: &CutCode) -> Option<PiScalar> {
    let first = code.components.first()?;
    match (&first.lo, &first.hi) {
        (ExtPoint::Finite(s), _) | (ExtPoint::NegInf, ExtPoint::Finite(s)) => Some(s.clone()),
        _ => Some(PiScalar::zero()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Reflexivity,
    Symmetry,
    Transitivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub property: Property,
    #[serde(with = "rational_list")]
    pub samples: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub violations: Vec<Violation>,
    pub pass: bool,
}

mod rational_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|q| format!("{}/{}", q.numer(), q.denom())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse::<Rational>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Checks the equivalence axioms of `E` on every pair and triple of samples.
pub fn validate_equivalence(e: &Formula, samples: &[Rational]) -> Result<EquivalenceReport, EiError> {
    check_arity(e)?;
    let e = eliminate(e)?;
    let n = samples.len();
    let mut table = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            table[i][j] = holds(&e, &samples[i], &samples[j])?;
        }
    }
    let mut violations = Vec::new();
    let mut report = |property, idx: &[usize]| {
        violations.push(Violation { property, samples: idx.iter().map(|&i| samples[i].clone()).collect() });
    };
    for i in 0..n {
        if !table[i][i] {
            report(Property::Reflexivity, &[i]);
        }
        for j in 0..n {
            if table[i][j] && !table[j][i] {
                report(Property::Symmetry, &[i, j]);
            }
            for k in 0..n {
                if table[i][j] && table[j][k] && !table[i][k] {
                    report(Property::Transitivity, &[i, j, k]);
                }
            }
        }
    }
    let pass = violations.is_empty();
    Ok(EquivalenceReport { violations, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_scalar};
    use crate::scalar::rational;

    fn fin(t: &str) -> ExtPoint {
        ExtPoint::Finite(parse_scalar(t).unwrap())
    }

    fn closed(lo: ExtPoint, hi: ExtPoint) -> Component {
        let lo_in = matches!(lo, ExtPoint::Finite(_));
        let hi_in = matches!(hi, ExtPoint::Finite(_));
        Component { lo, hi, lo_in, hi_in }
    }

    #[test]
    fn closure_examples() {
        let s = decompose(&parse("x > 0 /\\ pi*x < 1").unwrap(), "x").unwrap();
        assert_eq!(closure_code(&s).components(), &[closed(fin("0"), fin("1/pi"))]);
        let s = decompose(&parse("x > 0 /\\ x < 1 \\/ x >= 1 /\\ x < 2 /\\ x != 1").unwrap(), "x").unwrap();
        assert_eq!(s.components().len(), 2);
        assert_eq!(closure_code(&s).components(), &[closed(fin("0"), fin("2"))]);
        assert!(closure_code(&IntervalSet::empty()).is_empty());
    }

    #[test]
    fn two_class_relation() {
        let e = parse("pi*x < 1 <-> pi*y < 1").unwrap();
        let c0 = ei_code(&e, &rational(0, 1)).unwrap();
        assert_eq!(c0.components(), &[closed(ExtPoint::NegInf, fin("1/pi"))]);
        let c1 = ei_code(&e, &rational(1, 1)).unwrap();
        assert_eq!(c1.components(), &[closed(fin("1/pi"), ExtPoint::PosInf)]);
        assert_eq!(ei_code(&e, &rational(1, 4)).unwrap(), c0);
        assert!(same_class(&e, &rational(0, 1), &rational(1, 4)).unwrap());
        assert!(!same_class(&e, &rational(0, 1), &rational(1, 1)).unwrap());
        assert_eq!(representative(&c0), Some(parse_scalar("1/pi").unwrap()));
    }

    #[test]
    fn interval_class_and_singletons() {
        let e = parse("x = y \\/ (0 < x /\\ pi*x < 1 /\\ 0 < y /\\ pi*y < 1)").unwrap();
        assert_eq!(ei_code(&e, &rational(1, 8)).unwrap().components(), &[closed(fin("0"), fin("1/pi"))]);
        assert_eq!(ei_code(&e, &rational(2, 1)).unwrap().components(), &[closed(fin("2"), fin("2"))]);
    }

    #[test]
    fn domain_is_enforced() {
        let e = parse("x = y /\\ x > 0").unwrap();
        assert!(matches!(ei_code(&e, &rational(-1, 1)), Err(EiError::NotInDomain(_))));
        assert!(matches!(ei_code(&parse("x < z").unwrap(), &rational(0, 1)), Err(EiError::Arity(_))));
    }

    #[test]
    fn validation_examples() {
        let samples: Vec<Rational> = [(0, 1), (1, 4), (1, 1), (7, 1)].iter().map(|&(n, d)| rational(n, d)).collect();
        assert!(validate_equivalence(&parse("pi*x < 1 <-> pi*y < 1").unwrap(), &samples).unwrap().pass);
        let r = validate_equivalence(&parse("x < y").unwrap(), &[rational(0, 1), rational(1, 1)]).unwrap();
        assert!(!r.pass);
        assert!(r.violations.iter().any(|v| v.property == Property::Symmetry));
        assert!(validate_equivalence(&parse("x = x /\\ y = y").unwrap(), &samples).unwrap().pass);
    }
}

//! Definable cuts and one-variable definable sets.
//!
//! A one-variable quantifier-free set of rationals is a finite union of
//! convex pieces whose endpoints are roots of its atoms, hence elements of
//! `Q(pi)`. A cut is stored by its value `c`, standing for the lower set
//! `{x in Q : x < c}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{eval_qf, Assignment};
use crate::formula::{Atom, Formula, LinearTerm, Rel};
use crate::qe::decide;
use crate::scalar::{simplest_rational_between, PiScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("expected at most the single free variable `{expected}`, found {found:?}")]
    Arity { expected: String, found: Vec<String> },
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
}

/// A point of `Q(pi)` or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtPoint {
    NegInf,
    Finite(PiScalar),
    PosInf,
}

impl ExtPoint {
    pub fn finite(&self) -> Option<&PiScalar> {
        match self {
            ExtPoint::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.finite().is_some_and(|s| s.is_rational().is_some())
    }
}

impl Ord for ExtPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtPoint::*;
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.compare(b),
        }
    }
}

impl PartialOrd for ExtPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtPoint::NegInf => write!(f, "-inf"),
            ExtPoint::PosInf => write!(f, "+inf"),
            ExtPoint::Finite(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtRepr {
    Infinite(String),
    Finite(PiScalar),
}

impl Serialize for ExtPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtPoint::NegInf => serializer.serialize_str("-inf"),
            ExtPoint::PosInf => serializer.serialize_str("+inf"),
            ExtPoint::Finite(s) => s.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ExtPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match ExtRepr::deserialize(deserializer)? {
            ExtRepr::Finite(s) => Ok(ExtPoint::Finite(s)),
            ExtRepr::Infinite(t) if t == "-inf" => Ok(ExtPoint::NegInf),
            ExtRepr::Infinite(t) if t == "+inf" => Ok(ExtPoint::PosInf),
            ExtRepr::Infinite(t) => Err(serde::de::Error::custom(format!("unknown endpoint `{t}`"))),
        }
    }
}

/// A convex set of rationals. Included endpoints are always rational and a
/// degenerate component is a single rational point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub lo: ExtPoint,
    pub hi: ExtPoint,
    pub lo_in: bool,
    pub hi_in: bool,
}

impl Component {
    pub fn point(q: Rational) -> Self {
        let p = ExtPoint::Finite(PiScalar::from_rational(q));
        Component { lo: p.clone(), hi: p, lo_in: true, hi_in: true }
    }

    pub fn open(lo: ExtPoint, hi: ExtPoint) -> Self {
        Component { lo, hi, lo_in: false, hi_in: false }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// Whether the component is well formed: ordered endpoints, infinities
    /// excluded, and only rational endpoints included.
    pub fn is_valid(&self) -> bool {
        let order = match self.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_in && self.hi_in && self.lo.is_rational(),
            Ordering::Greater => false,
        };
        order && (!self.lo_in || self.lo.is_rational()) && (!self.hi_in || self.hi.is_rational())
    }

    pub fn contains(&self, x: &PiScalar) -> bool {
        let p = ExtPoint::Finite(x.clone());
        let above = match self.lo.cmp(&p) {
            Ordering::Less => true,
            Ordering::Equal => self.lo_in,
            Ordering::Greater => false,
        };
        let below = match p.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_in,
            Ordering::Greater => false,
        };
        above && below
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            return write!(f, "{{{}}}", self.lo);
        }
        let open = if self.lo_in { "[" } else { "(" };
        let close = if self.hi_in { "]" } else { ")" };
        write!(f, "{open}{}, {}{close}", self.lo, self.hi)
    }
}

/// A finite union of components, sorted and pairwise separated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    components: Vec<Component>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        IntervalSet { components: vec![Component::open(ExtPoint::NegInf, ExtPoint::PosInf)] }
    }

    /// Wraps components that are already sorted and separated.
    pub fn from_components(components: Vec<Component>) -> Self {
        IntervalSet { components }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, x: &PiScalar) -> bool {
        self.components.iter().any(|c| c.contains(x))
    }

    /// Whether the components are valid, sorted, and no two of them could be
    /// merged into one convex set of rationals.
    pub fn is_canonical(&self) -> bool {
        self.components.iter().all(Component::is_valid)
            && self.components.windows(2).all(|w| match w[0].hi.cmp(&w[1].lo) {
                Ordering::Less => true,
                // a shared rational endpoint must be excluded on both sides
                Ordering::Equal => !w[0].hi_in && !w[1].lo_in && w[0].hi.is_rational(),
                Ordering::Greater => false,
            })
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

/// The set of rationals `q` with `f(x := q)` true, as canonical components.
///
/// `f` may have no free variable, in which case the set is empty or full.
pub fn decompose(f: &Formula, x: &str) -> Result<IntervalSet, CutError> {
    if !f.is_quantifier_free() {
        return Err(CutError::NotQuantifierFree);
    }
    let free = f.free_vars();
    if free.iter().any(|v| v != x) {
        return Err(CutError::Arity { expected: x.to_string(), found: free.into_iter().collect() });
    }

    let mut roots: Vec<PiScalar> = Vec::new();
    for a in f.atoms() {
        if a.contains(x) {
            let (b, rest) = a.term().split(x);
            let r = &-rest.constant_term() / &b;
            roots.push(r);
        }
    }
    roots.sort();
    roots.dedup();

    let holds = |v: &PiScalar| -> bool {
        let mut a = Assignment::new();
        a.insert(x.to_string(), v.clone());
        eval_qf(f, &a).expect("only free variable is assigned")
    };
    let sample = |lo: Option<&PiScalar>, hi: Option<&PiScalar>| -> bool {
        let q = simplest_rational_between(lo, hi).expect("roots are strictly increasing");
        holds(&PiScalar::from_rational(q))
    };

    // gaps[i] lies below roots[i]; gaps[n] is above the last root
    let n = roots.len();
    let gaps: Vec<bool> = (0..=n)
        .map(|i| sample(i.checked_sub(1).map(|j| &roots[j]), roots.get(i)))
        .collect();
    let points: Vec<bool> = (0..n)
        .map(|i| {
            if roots[i].is_rational().is_some() {
                holds(&roots[i])
            } else {
                // no rational sits here, so only the neighbouring gaps matter
                gaps[i] && gaps[i + 1]
            }
        })
        .collect();

    // walk gap 0, point 0, gap 1, ..., gap n and cut maximal runs
    let mut components = Vec::new();
    let mut start: Option<(ExtPoint, bool)> = None;
    for slot in 0..(2 * n + 1) {
        let (inside, is_point, idx) = if slot % 2 == 0 { (gaps[slot / 2], false, slot / 2) } else { (points[slot / 2], true, slot / 2) };
        match (&start, inside) {
            (None, true) => {
                start = Some(if is_point {
                    (ExtPoint::Finite(roots[idx].clone()), true)
                } else if idx == 0 {
                    (ExtPoint::NegInf, false)
                } else {
                    (ExtPoint::Finite(roots[idx - 1].clone()), false)
                });
            }
            (Some(_), false) => {
                let (lo, lo_in) = start.take().unwrap();
                // the run ended at the slot just before this one
                let (hi, hi_in) = if is_point {
                    (ExtPoint::Finite(roots[idx].clone()), false)
                } else {
                    (ExtPoint::Finite(roots[idx - 1].clone()), true)
                };
                components.push(Component { lo, hi, lo_in, hi_in });
            }
            _ => {}
        }
    }
    if let Some((lo, lo_in)) = start {
        components.push(Component { lo, hi: ExtPoint::PosInf, lo_in, hi_in: false });
    }
    Ok(IntervalSet { components })
}

/// The cut whose lower set is `{x in Q : x < value}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub value: PiScalar,
}

impl Cut {
    pub fn new(value: PiScalar) -> Self {
        Cut { value }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CutKind {
    Rational,
    Irrational,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Rational => "rational",
            CutKind::Irrational => "irrational",
        })
    }
}

/// A cut is rational when its upper set has a least element, which happens
/// exactly when the value itself is rational.
pub fn classify_cut(c: &Cut) -> CutKind {
    if c.value.is_rational().is_some() {
        CutKind::Rational
    } else {
        CutKind::Irrational
    }
}

/// The atom `x < value` with denominators cleared, in the variable `var`.
pub fn cut_formula_in(c: &Cut, var: &str) -> Formula {
    let term = &LinearTerm::var(var) - &LinearTerm::constant(c.value.clone());
    Formula::Atom(Atom::new(term, Rel::Lt))
}

/// [`cut_formula_in`] for the variable `x`.
pub fn cut_formula(c: &Cut) -> Formula {
    cut_formula_in(c, "x")
}

/// The sentence saying that the cut has elements on both sides arbitrarily
/// close together.
pub fn closeness_sentence(c: &Cut) -> Formula {
    let in_c = cut_formula_in(c, "x");
    let y_in_c = cut_formula_in(c, "y");
    let gap = Formula::lt(&(&LinearTerm::var("y") - &LinearTerm::var("x")), &LinearTerm::var("e"));
    let positive = Formula::lt(&LinearTerm::zero(), &LinearTerm::var("e"));
    let witness = Formula::exists("x", Formula::exists("y", Formula::and(vec![in_c, Formula::not(y_in_c), gap])));
    Formula::forall("e", Formula::implies(positive, witness))
}

/// Whether the cut is valuational, i.e. the distances between its two sides
/// have a positive infimum. Decided through [`closeness_sentence`].
pub fn is_valuational(c: &Cut) -> bool {
    !decide(&closeness_sentence(c)).expect("closeness sentence is closed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_scalar};
    use crate::scalar::rational;

    fn s(text: &str) -> PiScalar {
        parse_scalar(text).unwrap()
    }

    fn fin(text: &str) -> ExtPoint {
        ExtPoint::Finite(s(text))
    }

    #[test]
    fn open_interval_below_reciprocal_pi() {
        let set = decompose(&parse("pi*x < 1 /\\ x > 0").unwrap(), "x").unwrap();
        assert_eq!(set.components(), &[Component::open(fin("0"), fin("1/pi"))]);
        assert!(set.is_canonical());
    }

    #[test]
    fn point_and_ray() {
        let set = decompose(&parse("x = 1 \\/ x > 2").unwrap(), "x").unwrap();
        assert_eq!(
            set.components(),
            &[Component::point(rational(1, 1)), Component::open(fin("2"), ExtPoint::PosInf)]
        );
    }

    #[test]
    fn contradictory_bounds_are_empty() {
        assert!(decompose(&parse("pi*x < 1 /\\ ~(2*x < 1)").unwrap(), "x").unwrap().is_empty());
    }

    #[test]
    fn irrational_points_do_not_split() {
        let set = decompose(&parse("pi*x != 1").unwrap(), "x").unwrap();
        assert_eq!(set, IntervalSet::full());
        assert!(decompose(&parse("pi*x = 1").unwrap(), "x").unwrap().is_empty());
    }

    #[test]
    fn closed_rational_endpoints() {
        let set = decompose(&parse("x >= 0 /\\ x <= 1 \\/ x >= 1 /\\ pi*x < 4").unwrap(), "x").unwrap();
        assert_eq!(set.components(), &[Component { lo: fin("0"), hi: fin("4/pi"), lo_in: true, hi_in: false }]);
        let set = decompose(&parse("x != 0").unwrap(), "x").unwrap();
        assert_eq!(set.components().len(), 2);
        assert!(set.is_canonical());
    }

    #[test]
    fn arity_is_checked() {
        assert!(matches!(decompose(&parse("x < y").unwrap(), "x"), Err(CutError::Arity { .. })));
        assert_eq!(decompose(&parse("1 < 2").unwrap(), "x").unwrap(), IntervalSet::full());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_cut(&Cut::new(s("3/7"))), CutKind::Rational);
        assert_eq!(classify_cut(&Cut::new(s("1/pi"))), CutKind::Irrational);
        assert_eq!(classify_cut(&Cut::new(s("(2*pi + 2)/(pi + 1)"))), CutKind::Rational);
    }

    #[test]
    fn cut_formulas_clear_denominators() {
        assert_eq!(cut_formula(&Cut::new(s("1/pi"))).to_string(), "pi*x - 1 < 0");
        assert_eq!(cut_formula(&Cut::new(s("3/7"))).to_string(), "7*x - 3 < 0");
        let f = cut_formula(&Cut::new(s("(pi - 3)/(pi - 4)")));
        assert_eq!(f, parse("(4 - pi)*x + pi - 3 < 0").unwrap());
    }

    #[test]
    fn sample_cuts_are_not_valuational() {
        for v in ["1/pi", "5", "pi^2 - 3"] {
            assert!(!is_valuational(&Cut::new(s(v))), "{v}");
        }
    }

    #[test]
    fn serialization_uses_infinity_markers() {
        let set = decompose(&parse("x = 1 \\/ x > 2").unwrap(), "x").unwrap();
        let json = serde_json::to_string(&set).unwrap();
        assert!(json.contains("\"+inf\""), "{json}");
        assert!(json.contains("\"lo_in\":true"), "{json}");
        let back: IntervalSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, set);
    }
}

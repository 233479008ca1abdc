//! Limits of definable unary functions and refutation of candidate Skolem
//! functions for the formula `phi_C`.
//!
//! Definable functions from the rationals to the rationals are modelled as
//! piecewise affine maps with rational slope and intercept on each piece
//! and breakpoints in `Q(pi)`. This is the shape that quantifier elimination
//! forces on unary definable functions; it is an assumption of this module,
//! not something it checks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cuts::{classify_cut, cut_formula_in, decompose, Component, Cut, CutKind, ExtPoint, IntervalSet};
use crate::eval::{eval_qf, Assignment};
use crate::formula::{parse_scalar, Atom, Formula, LinearTerm, Rel};
use crate::scalar::{rational_text, simplest_rational_between, PiScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitError {
    #[error("{point} is not approached from the {side} within the domain")]
    NotAccumulationPoint { point: String, side: Side },
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("cut at {0} is rational; the Skolem check needs an irrational cut")]
    RationalCut(String),
    #[error("counterexample at {0} failed independent verification")]
    Unverified(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// `x -> slope * x + intercept` on a nondegenerate convex domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePiece {
    pub domain: Component,
    #[serde(with = "rational_text")]
    pub slope: Rational,
    #[serde(with = "rational_text")]
    pub intercept: Rational,
}

impl AffinePiece {
    pub fn apply(&self, x: &PiScalar) -> PiScalar {
        &(x * &PiScalar::from_rational(self.slope.clone())) + &PiScalar::from_rational(self.intercept.clone())
    }

    /// The image term `slope * v + intercept`.
    fn image_term(&self, v: &str) -> LinearTerm {
        &LinearTerm::var(v).scale_rational(&self.slope) + &LinearTerm::constant(PiScalar::from_rational(self.intercept.clone()))
    }
}

/// A piecewise affine function with pairwise disjoint, sorted pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinableFunction {
    pieces: Vec<AffinePiece>,
}

impl DefinableFunction {
    pub fn new(mut pieces: Vec<AffinePiece>) -> Result<Self, LimitError> {
        for p in &pieces {
            if !p.domain.is_valid() || p.domain.is_degenerate() {
                return Err(LimitError::InvalidFunction(format!("bad piece domain {}", p.domain)));
            }
        }
        pieces.sort_by(|a, b| a.domain.lo.cmp(&b.domain.lo));
        for w in pieces.windows(2) {
            let (a, b) = (&w[0].domain, &w[1].domain);
            let overlap = match a.hi.cmp(&b.lo) {
                Ordering::Less => false,
                Ordering::Equal => a.hi_in && b.lo_in,
                Ordering::Greater => true,
            };
            if overlap {
                return Err(LimitError::InvalidFunction(format!("pieces {a} and {b} overlap")));
            }
        }
        Ok(DefinableFunction { pieces })
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn piece_at(&self, x: &PiScalar) -> Option<&AffinePiece> {
        self.pieces.iter().find(|p| p.domain.contains(x))
    }

    pub fn apply(&self, x: &PiScalar) -> Option<PiScalar> {
        self.piece_at(x).map(|p| p.apply(x))
    }
}

/// Input record for one piece, in the scalar text syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub lo: String,
    pub hi: String,
    pub lo_in: bool,
    pub hi_in: bool,
    pub slope: String,
    pub intercept: String,
}

fn parse_ext(text: &str) -> Result<ExtPoint, LimitError> {
    match text.trim() {
        "-inf" => Ok(ExtPoint::NegInf),
        "+inf" | "inf" => Ok(ExtPoint::PosInf),
        t => parse_scalar(t)
            .map(ExtPoint::Finite)
            .map_err(|e| LimitError::InvalidFunction(format!("endpoint `{t}`: {e}"))),
    }
}

fn parse_rational(text: &str) -> Result<Rational, LimitError> {
    parse_scalar(text)
        .ok()
        .and_then(|s| s.is_rational())
        .ok_or_else(|| LimitError::InvalidFunction(format!("`{text}` is not a rational number")))
}

impl TryFrom<&PieceRecord> for AffinePiece {
    type Error = LimitError;

    fn try_from(r: &PieceRecord) -> Result<Self, LimitError> {
        Ok(AffinePiece {
            domain: Component { lo: parse_ext(&r.lo)?, hi: parse_ext(&r.hi)?, lo_in: r.lo_in, hi_in: r.hi_in },
            slope: parse_rational(&r.slope)?,
            intercept: parse_rational(&r.intercept)?,
        })
    }
}

impl TryFrom<&[PieceRecord]> for DefinableFunction {
    type Error = LimitError;

    fn try_from(records: &[PieceRecord]) -> Result<Self, LimitError> {
        DefinableFunction::new(records.iter().map(AffinePiece::try_from).collect::<Result<_, _>>()?)
    }
}

impl fmt::Display for DefinableFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} x + {} on {}", p.slope, p.intercept, p.domain)?;
        }
        Ok(())
    }
}

fn approaches(domain: &Component, p: &ExtPoint, side: Side) -> bool {
    match side {
        Side::Left => domain.lo < *p && *p <= domain.hi,
        Side::Right => domain.lo <= *p && *p < domain.hi,
    }
}

/// One-sided limit of `f` at `p`, which may be an infinity or an element of
/// `Q(pi)` outside the rationals.
pub fn limit_at(f: &DefinableFunction, p: &ExtPoint, side: Side) -> Result<ExtPoint, LimitError> {
    let piece = f
        .pieces
        .iter()
        .find(|pc| approaches(&pc.domain, p, side))
        .ok_or_else(|| LimitError::NotAccumulationPoint { point: p.to_string(), side })?;
    Ok(match p {
        ExtPoint::Finite(x) => ExtPoint::Finite(piece.apply(x)),
        inf => {
            let toward_pos = matches!(inf, ExtPoint::PosInf);
            match (piece.slope.cmp(&Rational::from_integer(0.into())), toward_pos) {
                (Ordering::Equal, _) => ExtPoint::Finite(PiScalar::from_rational(piece.intercept.clone())),
                (Ordering::Greater, true) | (Ordering::Less, false) => ExtPoint::PosInf,
                _ => ExtPoint::NegInf,
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitEntry {
    pub endpoint: ExtPoint,
    pub side: Side,
    pub limit: ExtPoint,
    /// Endpoints outside the rationals and the infinities are not constrained.
    pub exempt: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub entries: Vec<LimitEntry>,
    pub pass: bool,
}

fn in_m_or_infinite(p: &ExtPoint) -> bool {
    !matches!(p, ExtPoint::Finite(_)) || p.is_rational()
}

/// Computes the limit at every domain endpoint from inside the piece and
/// checks that endpoints in the rationals or at infinity have limits there too.
pub fn check_no_external_limits(f: &DefinableFunction) -> LimitReport {
    let mut entries = Vec::new();
    for piece in &f.pieces {
        for (endpoint, side) in [(&piece.domain.lo, Side::Right), (&piece.domain.hi, Side::Left)] {
            let limit = limit_at(f, endpoint, side).expect("endpoint of a nondegenerate piece");
            let exempt = !in_m_or_infinite(endpoint);
            let ok = exempt || in_m_or_infinite(&limit);
            entries.push(LimitEntry { endpoint: endpoint.clone(), side, limit, exempt, ok });
        }
    }
    let pass = entries.iter().all(|e| e.ok);
    LimitReport { entries, pass }
}

/// `EX y. x > 0 /\ y in C /\ ~(x + y in C)`.
pub fn phi_c(c: &Cut) -> Formula {
    Formula::exists("y", phi_c_matrix(c))
}

/// The matrix of [`phi_c`], with free variables `x` and `y`.
pub fn phi_c_matrix(c: &Cut) -> Formula {
    let x_pos = Formula::lt(&LinearTerm::zero(), &LinearTerm::var("x"));
    let y_in = cut_formula_in(c, "y");
    let sum = &LinearTerm::var("x") + &LinearTerm::var("y");
    let shifted_in = cut_formula_in(c, "y").substitute("y", &sum);
    Formula::and(vec![x_pos, y_in, Formula::not(shifted_in)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum FailureReason {
    /// The candidate has no value at `x`.
    Undefined,
    /// `f(x)` fails the matrix of `phi_C`: the two conjunct truth values
    /// `f(x) in C` and `x + f(x) not in C` are reported.
    NotWitness { value_in_c: bool, shifted_outside_c: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SkolemVerdict {
    Valid,
    Counterexample {
        #[serde(with = "rational_text")]
        x: Rational,
        reason: FailureReason,
    },
}

/// A rational inside the leftmost component of a nonempty set: the point
/// itself when degenerate, otherwise the simplest interior rational.
pub fn leftmost_witness(set: &IntervalSet) -> Option<Rational> {
    let c = set.components().first()?;
    if c.is_degenerate() {
        return c.lo.finite().and_then(|s| s.is_rational());
    }
    Some(simplest_rational_between(c.lo.finite(), c.hi.finite()).expect("nondegenerate component"))
}

fn membership(c: &Component, v: &str) -> Formula {
    let x = LinearTerm::var(v);
    let mut parts = Vec::new();
    if let ExtPoint::Finite(lo) = &c.lo {
        let t = &LinearTerm::constant(lo.clone()) - &x;
        parts.push(Formula::Atom(Atom::new(t, if c.lo_in { Rel::Le } else { Rel::Lt })));
    }
    if let ExtPoint::Finite(hi) = &c.hi {
        let t = &x - &LinearTerm::constant(hi.clone());
        parts.push(Formula::Atom(Atom::new(t, if c.hi_in { Rel::Le } else { Rel::Lt })));
    }
    Formula::and(parts)
}

/// Looks for a positive rational at which `f` fails to pick a witness for
/// `phi_C`. Every counterexample is re-checked by direct evaluation.
pub fn check_skolem(c: &Cut, f: &DefinableFunction) -> Result<SkolemVerdict, LimitError> {
    if classify_cut(c) == CutKind::Rational {
        return Err(LimitError::RationalCut(c.value.to_string()));
    }
    let positive = Formula::lt(&LinearTerm::zero(), &LinearTerm::var("x"));

    let mut uncovered = vec![positive.clone()];
    uncovered.extend(f.pieces.iter().map(|p| Formula::not(membership(&p.domain, "x"))));
    let gaps = decompose(&Formula::and(uncovered), "x").expect("one variable");
    if let Some(x) = leftmost_witness(&gaps) {
        return verified(c, f, x, FailureReason::Undefined);
    }

    for piece in &f.pieces {
        let value_in = cut_formula_in(c, "y").substitute("y", &piece.image_term("x"));
        let shifted = &LinearTerm::var("x") + &piece.image_term("x");
        let shifted_in = cut_formula_in(c, "y").substitute("y", &shifted);
        let bad = Formula::and(vec![
            positive.clone(),
            membership(&piece.domain, "x"),
            Formula::or(vec![Formula::not(value_in.clone()), shifted_in.clone()]),
        ]);
        let set = decompose(&bad, "x").expect("one variable");
        if let Some(x) = leftmost_witness(&set) {
            let mut a = Assignment::new();
            a.insert("x".into(), PiScalar::from_rational(x.clone()));
            let reason = FailureReason::NotWitness {
                value_in_c: eval_qf(&value_in, &a).expect("assigned"),
                shifted_outside_c: !eval_qf(&shifted_in, &a).expect("assigned"),
            };
            return verified(c, f, x, reason);
        }
    }
    Ok(SkolemVerdict::Valid)
}

fn verified(c: &Cut, f: &DefinableFunction, x: Rational, reason: FailureReason) -> Result<SkolemVerdict, LimitError> {
    let xs = PiScalar::from_rational(x.clone());
    let ok = x > Rational::from_integer(0.into())
        && match (&reason, f.apply(&xs)) {
            (FailureReason::Undefined, None) => true,
            (FailureReason::NotWitness { .. }, Some(y)) => {
                let mut a = Assignment::new();
                a.insert("x".into(), xs);
                a.insert("y".into(), y);
                !eval_qf(&phi_c_matrix(c), &a).expect("assigned")
            }
            _ => false,
        };
    if ok {
        Ok(SkolemVerdict::Counterexample { x, reason })
    } else {
        Err(LimitError::Unverified(x.to_string()))
    }
}

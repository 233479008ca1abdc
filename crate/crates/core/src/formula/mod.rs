//! First-order syntax over `Q(pi)`-linear atoms: terms, canonical atoms,
//! formulas, parsing, printing and the structural transformations the
//! elimination procedures need.

mod atom;
mod parse;
mod print;
mod term;

use std::collections::BTreeSet;

pub use atom::{Atom, Rel};
pub use parse::{parse, parse_scalar, parse_term, ParseError};
pub use term::LinearTerm;

use crate::scalar::PiScalar;

/// A formula of the language. `PiLt(s, t)` is the primitive binary relation
/// `pi * s < t`, kept as its own node so compiled formulas can be inspected.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    PiLt(LinearTerm, LinearTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    ForAll(String, Box<Formula>),
}

impl Formula {
    pub fn atom(term: LinearTerm, rel: Rel) -> Formula {
        Formula::Atom(Atom::new(term, rel))
    }

    /// `lhs < rhs`.
    pub fn lt(lhs: &LinearTerm, rhs: &LinearTerm) -> Formula {
        Formula::atom(lhs - rhs, Rel::Lt)
    }

    /// `lhs = rhs`.
    pub fn eq(lhs: &LinearTerm, rhs: &LinearTerm) -> Formula {
        Formula::atom(lhs - rhs, Rel::Eq)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }

    /// Conjunction that collapses the empty and singleton cases.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::True,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction that collapses the empty and singleton cases.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::False,
            1 => parts.pop().unwrap(),
            _ => Formula::Or(parts),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::PiLt(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Exists(..) | Formula::ForAll(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add_term = |t: &LinearTerm, bound: &Vec<String>| {
            for v in t.vars() {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => add_term(a.term(), bound),
            Formula::PiLt(s, t) => {
                add_term(s, bound);
                add_term(t, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::ForAll(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| out.extend(t.vars().cloned()));
        self.visit_binders(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&LinearTerm)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => f(a.term()),
            Formula::PiLt(s, t) => {
                f(s);
                f(t);
            }
            Formula::Not(g) | Formula::Exists(_, g) | Formula::ForAll(_, g) => g.visit_terms(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_terms(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::PiLt(..) => {}
            Formula::Not(g) => g.visit_binders(f),
            Formula::Exists(v, g) | Formula::ForAll(v, g) => {
                f(v);
                g.visit_binders(f);
            }
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit_binders(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
        }
    }

    /// All atoms (after unfolding `PiLt`) in left-to-right order.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a.clone()),
            Formula::PiLt(s, t) => out.push(pi_lt_atom(s, t)),
            Formula::Not(g) | Formula::Exists(_, g) | Formula::ForAll(_, g) => g.collect_atoms(out),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::PiLt(..) => 1,
            Formula::Not(g) | Formula::Exists(_, g) | Formula::ForAll(_, g) => 1 + g.size(),
            Formula::And(gs) | Formula::Or(gs) => 1 + gs.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Capture-avoiding substitution of the term `t` for the free variable `v`.
    /// Atoms are re-canonicalized; bound variables clashing with `t` are renamed
    /// by appending primes.
    pub fn substitute(&self, v: &str, t: &LinearTerm) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => {
                if a.contains(v) {
                    Formula::atom(a.term().substitute(v, t), a.rel())
                } else {
                    self.clone()
                }
            }
            Formula::PiLt(s, u) => Formula::PiLt(s.substitute(v, t), u.substitute(v, t)),
            Formula::Not(g) => Formula::not(g.substitute(v, t)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| g.substitute(v, t)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| g.substitute(v, t)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.substitute(v, t), b.substitute(v, t)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(v, t), b.substitute(v, t)),
            Formula::Exists(w, g) | Formula::ForAll(w, g) => {
                let rebuild = |w: String, body: Formula| match self {
                    Formula::Exists(..) => Formula::exists(w, body),
                    _ => Formula::forall(w, body),
                };
                if w == v || !g.free_vars().contains(v) {
                    return self.clone();
                }
                if t.contains(w) {
                    let mut avoid = t.var_set();
                    avoid.extend(g.all_vars());
                    avoid.insert(v.to_string());
                    let fresh = fresh_name(w, &avoid);
                    let renamed = g.substitute(w, &LinearTerm::var(fresh.clone()));
                    rebuild(fresh, renamed.substitute(v, t))
                } else {
                    rebuild(w.clone(), g.substitute(v, t))
                }
            }
        }
    }

    /// Negation normal form: implications and biconditionals are expanded,
    /// negations are pushed onto atoms and absorbed into the relation set,
    /// quantifiers are dualized and `PiLt` nodes are unfolded into atoms.
    pub fn nnf(&self) -> Formula {
        self.nnf_polarity(true)
    }

    fn nnf_polarity(&self, positive: bool) -> Formula {
        match (self, positive) {
            (Formula::True, true) | (Formula::False, false) => Formula::True,
            (Formula::True, false) | (Formula::False, true) => Formula::False,
            (Formula::Atom(a), true) => Formula::Atom(a.clone()),
            (Formula::Atom(a), false) => negate_atom(a),
            (Formula::PiLt(s, t), p) => Formula::Atom(pi_lt_atom(s, t)).nnf_polarity(p),
            (Formula::Not(g), p) => g.nnf_polarity(!p),
            (Formula::And(gs), true) | (Formula::Or(gs), false) => {
                Formula::and(gs.iter().map(|g| g.nnf_polarity(positive)).collect())
            }
            (Formula::Or(gs), true) | (Formula::And(gs), false) => {
                Formula::or(gs.iter().map(|g| g.nnf_polarity(positive)).collect())
            }
            (Formula::Implies(a, b), true) => Formula::or(vec![a.nnf_polarity(false), b.nnf_polarity(true)]),
            (Formula::Implies(a, b), false) => Formula::and(vec![a.nnf_polarity(true), b.nnf_polarity(false)]),
            (Formula::Iff(a, b), p) => Formula::or(vec![
                Formula::and(vec![a.nnf_polarity(true), b.nnf_polarity(p)]),
                Formula::and(vec![a.nnf_polarity(false), b.nnf_polarity(!p)]),
            ]),
            (Formula::Exists(v, g), true) | (Formula::ForAll(v, g), false) => {
                Formula::exists(v.clone(), g.nnf_polarity(positive))
            }
            (Formula::ForAll(v, g), true) | (Formula::Exists(v, g), false) => {
                Formula::forall(v.clone(), g.nnf_polarity(positive))
            }
        }
    }

    /// Replaces every `PiLt` node by the equivalent atom.
    pub fn unfold_primitives(&self) -> Formula {
        match self {
            Formula::PiLt(s, t) => Formula::Atom(pi_lt_atom(s, t)),
            Formula::True | Formula::False | Formula::Atom(_) => self.clone(),
            Formula::Not(g) => Formula::not(g.unfold_primitives()),
            Formula::And(gs) => Formula::And(gs.iter().map(Formula::unfold_primitives).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(Formula::unfold_primitives).collect()),
            Formula::Implies(a, b) => Formula::implies(a.unfold_primitives(), b.unfold_primitives()),
            Formula::Iff(a, b) => Formula::iff(a.unfold_primitives(), b.unfold_primitives()),
            Formula::Exists(v, g) => Formula::exists(v.clone(), g.unfold_primitives()),
            Formula::ForAll(v, g) => Formula::forall(v.clone(), g.unfold_primitives()),
        }
    }
}

/// The atom `pi * s - t < 0`.
pub fn pi_lt_atom(s: &LinearTerm, t: &LinearTerm) -> Atom {
    Atom::new(&s.scale(&PiScalar::pi()) - t, Rel::Lt)
}

/// Negation of an atom inside the relation set:
/// `~(t < 0)` becomes `t = 0 \/ -t < 0`, `~(t <= 0)` becomes `-t < 0`,
/// and `=`/`!=` swap.
pub fn negate_atom(a: &Atom) -> Formula {
    let t = a.term();
    match a.rel() {
        Rel::Lt => Formula::Or(vec![Formula::atom(t.clone(), Rel::Eq), Formula::atom(-t, Rel::Lt)]),
        Rel::Le => Formula::atom(-t, Rel::Lt),
        Rel::Eq => Formula::atom(t.clone(), Rel::Ne),
        Rel::Ne => Formula::atom(t.clone(), Rel::Eq),
    }
}

/// `base` followed by enough primes to avoid every name in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

//! Fourier–Motzkin elimination over a lazily built disjunctive normal form.

use crate::formula::{Atom, Formula, LinearTerm, Rel};

use super::rational::rationality_constraint;
use super::simplify;

/// The constraints one conjunct places on the eliminated variable `x`.
///
/// Every stored term has already been solved for `x`, so none mentions it.
#[derive(Clone, Debug, Default)]
pub struct Bounds {
    /// `x > l`
    pub lowers: Vec<LinearTerm>,
    /// `x < u`
    pub uppers: Vec<LinearTerm>,
    /// `x = e`
    pub equals: Vec<LinearTerm>,
    /// `x != d`
    pub disequals: Vec<LinearTerm>,
    /// Conjuncts not mentioning `x`.
    pub residue: Vec<Formula>,
}

impl Bounds {
    /// Sorts the atoms of a conjunction. Non-strict inequalities are read as
    /// strict ones, which is sound once at most one side has any.
    fn collect(x: &str, atoms: &[Atom], residue: Vec<Formula>) -> Bounds {
        let mut b = Bounds { residue, ..Bounds::default() };
        for a in atoms {
            let (c, rest) = a.term().split(x);
            // c*x + rest rel 0  <=>  x rel' -rest/c
            let solved = rest.scale(&(-c.recip().expect("atom mentions x")));
            match a.rel() {
                Rel::Lt | Rel::Le if c.sign() > 0 => b.uppers.push(solved),
                Rel::Lt | Rel::Le => b.lowers.push(solved),
                Rel::Eq => b.equals.push(solved),
                Rel::Ne => b.disequals.push(solved),
            }
        }
        b
    }

    /// The quantifier-free equivalent of `EX x` of this conjunct.
    fn eliminate(self, x: &str, atoms: &[Atom]) -> Formula {
        let mut out = self.residue;
        if let Some(e) = self.equals.first() {
            out.push(rationality_constraint(e));
            for a in atoms {
                out.push(Formula::atom(a.term().substitute(x, e), a.rel()));
            }
        } else {
            for l in &self.lowers {
                for u in &self.uppers {
                    out.push(Formula::lt(l, u));
                }
            }
        }
        simplify(&Formula::and(out))
    }
}

/// `EX x. f` for a quantifier-free `f` in negation normal form.
pub(crate) fn exists(x: &str, f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(a) if !a.contains(x) => f.clone(),
        Formula::Atom(a) => conjunct(x, vec![a.clone()], Vec::new()),
        Formula::Or(gs) => {
            let mut out = Vec::with_capacity(gs.len());
            for g in gs {
                let e = exists(x, g);
                if e == Formula::True {
                    return Formula::True;
                }
                out.push(e);
            }
            simplify(&Formula::or(out))
        }
        Formula::And(gs) => {
            let mut residue = Vec::new();
            let mut atoms = Vec::new();
            let mut compound: Option<&Vec<Formula>> = None;
            let mut others = Vec::new();
            for g in gs {
                match g {
                    _ if !g.free_vars().contains(x) => residue.push(g.clone()),
                    Formula::Atom(a) => atoms.push(a.clone()),
                    Formula::Or(hs) if compound.is_none() => compound = Some(hs),
                    _ => others.push(g.clone()),
                }
            }
            match compound {
                None if others.is_empty() => conjunct(x, atoms, residue),
                None => unreachable!("negation normal form conjunct {f}"),
                Some(branches) => {
                    // distribute the first disjunction and recurse
                    let base: Vec<Formula> = atoms.into_iter().map(Formula::Atom).chain(others).collect();
                    let mut alts = Vec::with_capacity(branches.len());
                    for d in branches {
                        let mut parts = base.clone();
                        parts.push(d.clone());
                        let e = exists(x, &simplify(&Formula::and(parts)));
                        if e == Formula::True {
                            alts = vec![Formula::True];
                            break;
                        }
                        alts.push(e);
                    }
                    residue.push(Formula::or(alts));
                    simplify(&Formula::and(residue))
                }
            }
        }
        _ => unreachable!("quantifier-free negation normal form expected, got {f}"),
    }
}

/// Eliminates `x` from a conjunction of atoms that all mention it.
///
/// When both sides carry non-strict bounds, a rational solution either lies
/// strictly above every non-strict lower bound (say) or equals one of them,
/// so the smaller side is split into one strict case and one equation per bound.
fn conjunct(x: &str, atoms: Vec<Atom>, residue: Vec<Formula>) -> Formula {
    let nonstrict = |upper: bool| -> Vec<usize> {
        (0..atoms.len())
            .filter(|&i| atoms[i].rel() == Rel::Le && (atoms[i].term().coeff(x).sign() > 0) == upper)
            .collect()
    };
    let (lowers, uppers) = (nonstrict(false), nonstrict(true));
    let has_equation = atoms.iter().any(|a| a.rel() == Rel::Eq);
    if has_equation || lowers.is_empty() || uppers.is_empty() {
        return Bounds::collect(x, &atoms, residue).eliminate(x, &atoms);
    }
    let side = if lowers.len() <= uppers.len() { lowers } else { uppers };
    let mut strict = atoms.clone();
    for &i in &side {
        strict[i] = Atom::new(atoms[i].term().clone(), Rel::Lt);
    }
    let mut alts = vec![conjunct(x, strict, residue.clone())];
    for &i in &side {
        if alts.last() == Some(&Formula::True) {
            return Formula::True;
        }
        let mut pinned = atoms.clone();
        pinned[i] = Atom::new(atoms[i].term().clone(), Rel::Eq);
        alts.push(conjunct(x, pinned, residue.clone()));
    }
    simplify(&Formula::or(alts))
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LinearTerm;
use crate::scalar::{PiPoly, PiScalar, Rational};

/// Relation of an atom `term rel 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
}

impl Rel {
    /// Whether the relation is invariant only under positive rescaling.
    pub fn is_order(self) -> bool {
        matches!(self, Rel::Lt | Rel::Le)
    }

    pub fn holds(self, sign: i8) -> bool {
        match self {
            Rel::Lt => sign < 0,
            Rel::Le => sign <= 0,
            Rel::Eq => sign == 0,
            Rel::Ne => sign != 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
        }
    }
}

/// An atom `term rel 0` in canonical scaling.
///
/// Denominators are cleared, the common polynomial factor of the
/// coefficients is divided out, and the remaining rational content is made
/// integral and primitive. Only positive factors are used for `<` and `<=`;
/// `=` and `!=` additionally fix the sign of the leading coefficient (first
/// variable, else the constant) to be positive. Two atoms define the same
/// relation exactly when they are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    term: LinearTerm,
    rel: Rel,
}

impl Atom {
    pub fn new(term: LinearTerm, rel: Rel) -> Self {
        Atom { term: canonical_term(&term, rel), rel }
    }

    pub fn term(&self) -> &LinearTerm {
        &self.term
    }

    pub fn rel(&self) -> Rel {
        self.rel
    }

    /// Truth value of a variable-free atom.
    pub fn ground_truth(&self) -> Option<bool> {
        self.term.is_ground().then(|| self.rel.holds(self.term.constant_term().sign()))
    }

    pub fn contains(&self, v: &str) -> bool {
        self.term.contains(v)
    }

    /// The term `k` shared by all atoms comparing `+-k` with zero, and the
    /// set of signs of `k` on which this atom holds, as a bit mask
    /// (`1` negative, `2` zero, `4` positive).
    pub fn sign_class(&self) -> (LinearTerm, u8) {
        let lead = self.term.coeffs().values().next().unwrap_or(self.term.constant_term());
        let positive = self.rel.is_order() && lead.sign() < 0;
        let key = if positive { -&self.term } else { self.term.clone() };
        let mask = match (self.rel, positive) {
            (Rel::Lt, false) => 1,
            (Rel::Lt, true) => 4,
            (Rel::Le, false) => 3,
            (Rel::Le, true) => 6,
            (Rel::Eq, _) => 2,
            (Rel::Ne, _) => 5,
        };
        (key, mask)
    }

    /// The atom holding exactly on the signs of `key` in `mask`, which must
    /// be neither empty nor full.
    pub fn from_sign_class(key: &LinearTerm, mask: u8) -> Atom {
        let (term, rel) = match mask {
            1 => (key.clone(), Rel::Lt),
            2 => (key.clone(), Rel::Eq),
            3 => (key.clone(), Rel::Le),
            4 => (-key, Rel::Lt),
            5 => (key.clone(), Rel::Ne),
            6 => (-key, Rel::Le),
            _ => panic!("sign mask {mask} does not describe an atom"),
        };
        Atom::new(term, rel)
    }
}

fn canonical_term(term: &LinearTerm, rel: Rel) -> LinearTerm {
    if term.is_zero() {
        return LinearTerm::zero();
    }
    let names: Vec<String> = term.vars().cloned().collect();
    let mut scalars: Vec<PiScalar> = names.iter().map(|v| term.coeff(v)).collect();
    scalars.push(term.constant_term().clone());
    let mut flip = false;

    // clear denominators
    let mut polys: Vec<PiPoly> = if scalars.iter().all(|s| s.is_polynomial()) {
        scalars.iter().map(|s| s.num().clone()).collect()
    } else {
        let d = scalars.iter().fold(PiPoly::one(), |acc, s| PiPoly::lcm(&acc, s.den()));
        if rel.is_order() && PiScalar::from_poly(d.clone()).sign() < 0 {
            flip = !flip;
        }
        scalars
            .iter()
            .map(|s| if s.is_zero() { PiPoly::zero() } else { s.num() * &d.div_exact(s.den()) })
            .collect()
    };

    // divide out the common polynomial factor
    let mut g = PiPoly::zero();
    for p in polys.iter().filter(|p| !p.is_zero()) {
        g = if g.is_zero() { p.monic() } else { PiPoly::gcd(&g, p) };
        if g.is_one() {
            break;
        }
    }
    if !g.is_constant() {
        if rel.is_order() && PiScalar::from_poly(g.clone()).sign() < 0 {
            flip = !flip;
        }
        polys = polys.iter().map(|p| p.div_exact(&g)).collect();
    }

    // integral, primitive content
    let den_lcm = polys.iter().fold(BigInt::one(), |acc, p| acc.lcm(&p.denominator_lcm()));
    let mut num_gcd = BigInt::zero();
    for p in &polys {
        for c in p.coeffs() {
            num_gcd = num_gcd.gcd(&(c.numer() * (&den_lcm / c.denom())));
        }
    }
    let factor = Rational::new(den_lcm, num_gcd);
    let factor = if flip { -factor } else { factor };
    let mut scalars: Vec<PiScalar> = polys.iter().map(|p| PiScalar::from_poly(p.scale(&factor))).collect();

    if !rel.is_order() {
        let lead = scalars.iter().find(|s| !s.is_zero()).expect("nonzero term");
        if lead.sign() < 0 {
            scalars = scalars.iter().map(|s| -s).collect();
        }
    }
    let constant = scalars.pop().unwrap();
    LinearTerm::from_parts(names.into_iter().zip(scalars), constant)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.term, self.rel.symbol())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({self})")
    }
}

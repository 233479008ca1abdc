use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::scalar::{PiScalar, Rational};

/// `sum_i coeff_i * x_i + constant` with coefficients in `Q(pi)`.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// linear forms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearTerm {
    coeffs: BTreeMap<String, PiScalar>,
    constant: PiScalar,
}

impl LinearTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::monomial(name, PiScalar::one())
    }

    pub fn monomial(name: impl Into<String>, c: PiScalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(name.into(), c);
        }
        LinearTerm { coeffs, constant: PiScalar::zero() }
    }

    pub fn constant(c: PiScalar) -> Self {
        LinearTerm { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (String, PiScalar)>, constant: PiScalar) -> Self {
        let mut t = LinearTerm::constant(constant);
        for (v, c) in coeffs {
            t.add_monomial(&v, &c);
        }
        t
    }

    pub fn coeffs(&self) -> &BTreeMap<String, PiScalar> {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &PiScalar {
        &self.constant
    }

    pub fn coeff(&self, v: &str) -> PiScalar {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &String> {
        self.coeffs.keys()
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn is_ground(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    /// True when every coefficient and the constant are rational.
    pub fn is_rational(&self) -> bool {
        self.constant.is_rational().is_some() && self.coeffs.values().all(|c| c.is_rational().is_some())
    }

    fn add_monomial(&mut self, v: &str, c: &PiScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(v) {
            Some(old) => {
                let sum = &*old + c;
                if sum.is_zero() {
                    self.coeffs.remove(v);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.coeffs.insert(v.to_string(), c.clone());
            }
        }
    }

    pub fn scale(&self, c: &PiScalar) -> LinearTerm {
        if c.is_zero() {
            return LinearTerm::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, a)| (v.clone(), a * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> LinearTerm {
        self.scale(&PiScalar::from_rational(q.clone()))
    }

    /// Splits off `v`: returns `(a, rest)` with `self = a * v + rest`.
    pub fn split(&self, v: &str) -> (PiScalar, LinearTerm) {
        let mut rest = self.clone();
        let a = rest.coeffs.remove(v).unwrap_or_default();
        (a, rest)
    }

    /// Replaces `v` by the term `t`.
    pub fn substitute(&self, v: &str, t: &LinearTerm) -> LinearTerm {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(a) => {
                let (_, rest) = self.split(v);
                &rest + &t.scale(a)
            }
        }
    }

    pub fn rename(&self, from: &str, to: &str) -> LinearTerm {
        self.substitute(from, &LinearTerm::var(to))
    }

    /// Value under an assignment, or the first unassigned variable.
    pub fn eval(&self, assignment: &BTreeMap<String, PiScalar>) -> Result<PiScalar, String> {
        let mut acc = self.constant.clone();
        for (v, a) in &self.coeffs {
            let x = assignment.get(v).ok_or_else(|| v.clone())?;
            acc = &acc + &(a * x);
        }
        Ok(acc)
    }
}

impl Add for &LinearTerm {
    type Output = LinearTerm;
    fn add(self, rhs: &LinearTerm) -> LinearTerm {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            out.add_monomial(v, c);
        }
        out.constant = &out.constant + &rhs.constant;
        out
    }
}

impl Sub for &LinearTerm {
    type Output = LinearTerm;
    fn sub(self, rhs: &LinearTerm) -> LinearTerm {
        self + &(-rhs)
    }
}

impl Neg for &LinearTerm {
    type Output = LinearTerm;
    fn neg(self) -> LinearTerm {
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), -c)).collect(),
            constant: -&self.constant,
        }
    }
}

/// Whether a scalar prints with a leading minus sign that can be pulled into
/// the separating operator.
fn pulls_sign(c: &PiScalar) -> bool {
    c.is_polynomial() && c.num().term_count() == 1 && c.num().leading().is_some_and(|l| l.is_negative())
}

fn is_simple(c: &PiScalar) -> bool {
    c.is_polynomial() && c.num().term_count() == 1
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let sep = |f: &mut fmt::Formatter<'_>, neg: bool, first: &mut bool| -> fmt::Result {
            match (*first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            *first = false;
            Ok(())
        };
        for (v, c) in &self.coeffs {
            if is_simple(c) {
                let neg = pulls_sign(c);
                let mag = if neg { -c } else { c.clone() };
                sep(f, neg, &mut first)?;
                if mag.is_one() {
                    write!(f, "{v}")?;
                } else {
                    write!(f, "{mag}*{v}")?;
                }
            } else {
                sep(f, false, &mut first)?;
                write!(f, "({c})*{v}")?;
            }
        }
        let c = &self.constant;
        if c.is_zero() {
            if first {
                write!(f, "0")?;
            }
        } else if c.is_polynomial() {
            for (k, q) in c.num().coeffs().iter().enumerate().rev() {
                if q.is_zero() {
                    continue;
                }
                let mono = PiScalar::from_poly(crate::scalar::PiPoly::monomial(q.abs(), k));
                sep(f, q.is_negative(), &mut first)?;
                write!(f, "{mono}")?;
            }
        } else {
            sep(f, false, &mut first)?;
            write!(f, "({c})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearTerm({self})")
    }
}

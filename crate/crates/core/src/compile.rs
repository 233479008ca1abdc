//! Compilation of `Q(pi)`-linear atoms into the primitive signature with
//! rational coefficients and the single relation `P1(x, y) :<=> pi*x < y`.
//!
//! `pi^n * u < v` is built by composing `P1` (and its reverse for negative
//! powers), sums of monomials are split across existential witnesses, and a
//! general atom is reduced to a `Q`-linearly independent family of
//! coefficients before the universal characterization is emitted.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::formula::{Atom, Formula, LinearTerm, Rel};
use crate::qe::{decide, QeError};
use crate::scalar::{PiPoly, PiScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("scalar {0} is not a polynomial in pi")]
    NotPolynomial(String),
    #[error(transparent)]
    Qe(#[from] QeError),
}

/// A formula over the primitive signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveFormula(Formula);

impl PrimitiveFormula {
    /// Wraps `f` if it passes [`is_primitive`].
    pub fn new(f: Formula) -> Option<Self> {
        is_primitive(&f).then_some(PrimitiveFormula(f))
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }
}

impl std::fmt::Display for PrimitiveFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// No scalar of positive `pi`-degree occurs outside the arguments of `P1`,
/// and those arguments have rational coefficients too.
pub fn is_primitive(f: &Formula) -> bool {
    match f {
        Formula::True | Formula::False => true,
        Formula::Atom(a) => a.term().is_rational(),
        Formula::PiLt(s, t) => s.is_rational() && t.is_rational(),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::ForAll(_, g) => is_primitive(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().all(is_primitive),
        Formula::Implies(a, b) | Formula::Iff(a, b) => is_primitive(a) && is_primitive(b),
    }
}

/// Hands out witness names that avoid the variables of the input.
struct Names {
    avoid: BTreeSet<String>,
    next: usize,
}

impl Names {
    fn new(avoid: BTreeSet<String>) -> Self {
        Names { avoid, next: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        loop {
            self.next += 1;
            let name = format!("{base}{}", self.next);
            if !self.avoid.contains(&name) {
                self.avoid.insert(name.clone());
                return name;
            }
        }
    }
}

fn power(n: i64, u: &LinearTerm, v: &LinearTerm, names: &mut Names) -> Formula {
    match n {
        0 => Formula::lt(u, v),
        1 => Formula::PiLt(u.clone(), v.clone()),
        // pi^-1 u < v  <=>  u < pi v  <=>  pi (-v) < -u
        -1 => Formula::PiLt(-v, -u),
        _ => {
            let z = names.fresh("z");
            let zt = LinearTerm::var(&z);
            let (inner, outer) = if n > 1 { (n - 1, 1) } else { (n + 1, -1) };
            let body = Formula::and(vec![power(inner, u, &zt, names), power(outer, &zt, v, names)]);
            Formula::exists(z, body)
        }
    }
}

/// `pi^n * x < y` in the primitive signature.
pub fn compile_power(n: i64) -> PrimitiveFormula {
    let mut names = Names::new(["x", "y"].map(String::from).into());
    PrimitiveFormula(power(n, &LinearTerm::var("x"), &LinearTerm::var("y"), &mut names))
}

fn scalar(alpha: &PiPoly, u: &LinearTerm, v: &LinearTerm, names: &mut Names) -> Formula {
    let monomials: Vec<(i64, &Rational)> = alpha
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as i64, c))
        .collect();
    match monomials.as_slice() {
        [] => Formula::lt(&LinearTerm::zero(), v),
        [(k, q)] => power(*k, &u.scale_rational(q), v, names),
        _ => {
            let zs: Vec<String> = monomials.iter().map(|_| names.fresh("z")).collect();
            let mut parts: Vec<Formula> = monomials
                .iter()
                .zip(&zs)
                .map(|((k, q), z)| power(*k, &u.scale_rational(q), &LinearTerm::var(z), names))
                .collect();
            let total = zs.iter().fold(LinearTerm::zero(), |acc, z| &acc + &LinearTerm::var(z));
            parts.push(Formula::lt(&total, v));
            zs.into_iter().rev().fold(Formula::and(parts), |body, z| Formula::exists(z, body))
        }
    }
}

/// `alpha * x < y` for `alpha` a polynomial in `pi`.
pub fn compile_scalar(alpha: &PiScalar) -> Result<PrimitiveFormula, CompileError> {
    if !alpha.is_polynomial() {
        return Err(CompileError::NotPolynomial(alpha.to_string()));
    }
    let mut names = Names::new(["x", "y"].map(String::from).into());
    Ok(PrimitiveFormula(scalar(alpha.num(), &LinearTerm::var("x"), &LinearTerm::var("y"), &mut names)))
}

/// Solves `sum_b c_b * basis[b] = target` over the rationals, if possible.
fn solve(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let rows = target.len();
    let cols = basis.len();
    // augmented matrix: one row per coefficient of pi^k
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|k| basis.iter().map(|b| b[k].clone()).chain([target[k].clone()]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !m[i][cols].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][cols].clone();
    }
    Some(sol)
}

/// `t` rewritten as `sum_b alpha_b * u_b` with the `alpha_b` linearly
/// independent over the rationals and every `u_b` rational-linear.
///
/// The constant of `t` is treated as the coefficient of a slot whose value
/// is pinned to one, so the `u_b` may carry constants.
pub fn independent_family(t: &LinearTerm) -> Vec<(PiPoly, LinearTerm)> {
    let cleared = Atom::new(t.clone(), Rel::Lt).term().clone();
    let mut slots: Vec<(LinearTerm, PiPoly)> =
        cleared.coeffs().iter().map(|(v, c)| (LinearTerm::var(v), c.num().clone())).collect();
    if !cleared.constant_term().is_zero() {
        slots.push((LinearTerm::constant(PiScalar::one()), cleared.constant_term().num().clone()));
    }
    let width = slots.iter().filter_map(|(_, p)| p.degree()).max().unwrap_or(0) + 1;
    let vector = |p: &PiPoly| -> Vec<Rational> { (0..width).map(|k| p.coeff(k)).collect() };

    let mut basis: Vec<PiPoly> = Vec::new();
    for (_, p) in &slots {
        let vs: Vec<Vec<Rational>> = basis.iter().map(vector).collect();
        if solve(&vs, &vector(p)).is_none() {
            basis.push(p.clone());
        }
    }
    let vs: Vec<Vec<Rational>> = basis.iter().map(vector).collect();
    let mut us = vec![LinearTerm::zero(); basis.len()];
    for (slot, p) in &slots {
        let c = solve(&vs, &vector(p)).expect("basis spans every slot");
        for (u, q) in us.iter_mut().zip(&c) {
            *u = &*u + &slot.scale_rational(q);
        }
    }
    basis.into_iter().zip(us).collect()
}

/// The primitive formula equivalent to `t < 0`.
pub fn compile_atom(t: &LinearTerm) -> PrimitiveFormula {
    let mut names = Names::new(t.var_set());
    PrimitiveFormula(atom_lt(t, &mut names))
}

fn atom_lt(t: &LinearTerm, names: &mut Names) -> Formula {
    if t.is_rational() {
        return Formula::atom(t.clone(), Rel::Lt);
    }
    let family = independent_family(t);
    if let [(alpha, u)] = family.as_slice() {
        return scalar(alpha, u, &LinearTerm::zero(), names);
    }
    // sum alpha_b u_b < 0  <=>  some u_b != 0 and every rational choice of
    // x'_b < alpha_b u_b has a negative sum
    let guard = Formula::or(family.iter().map(|(_, u)| Formula::atom(u.clone(), Rel::Ne)).collect());
    let primed: Vec<String> = family.iter().map(|_| names.fresh("w")).collect();
    let below = Formula::and(
        family
            .iter()
            .zip(&primed)
            .map(|((alpha, u), w)| scalar(alpha, &-u, &-&LinearTerm::var(w), names))
            .collect(),
    );
    let total = primed.iter().fold(LinearTerm::zero(), |acc, w| &acc + &LinearTerm::var(w));
    let body = Formula::implies(below, Formula::atom(total, Rel::Lt));
    let universal = primed.into_iter().rev().fold(body, |b, w| Formula::forall(w, b));
    Formula::and(vec![guard, universal])
}

/// Compiles an atom of any relation by reducing it to strict inequalities.
pub fn compile_relation(t: &LinearTerm, rel: Rel) -> PrimitiveFormula {
    let mut names = Names::new(t.var_set());
    let neg = -t;
    let f = match rel {
        Rel::Lt => atom_lt(t, &mut names),
        Rel::Le => Formula::not(atom_lt(&neg, &mut names)),
        Rel::Eq => Formula::and(vec![
            Formula::not(atom_lt(t, &mut names)),
            Formula::not(atom_lt(&neg, &mut names)),
        ]),
        Rel::Ne => Formula::or(vec![atom_lt(t, &mut names), atom_lt(&neg, &mut names)]),
    };
    PrimitiveFormula(f)
}

/// Replaces every atom of `f` by its compiled form.
pub fn compile_formula(f: &Formula) -> PrimitiveFormula {
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::PiLt(..) => f.clone(),
            Formula::Atom(a) => compile_relation(a.term(), a.rel()).into_formula(),
            Formula::Not(g) => Formula::not(go(g)),
            Formula::And(gs) => Formula::and(gs.iter().map(go).collect()),
            Formula::Or(gs) => Formula::or(gs.iter().map(go).collect()),
            Formula::Implies(a, b) => Formula::implies(go(a), go(b)),
            Formula::Iff(a, b) => Formula::iff(go(a), go(b)),
            Formula::Exists(v, g) => Formula::exists(v.clone(), go(g)),
            Formula::ForAll(v, g) => Formula::forall(v.clone(), go(g)),
        }
    }
    PrimitiveFormula(go(f))
}

/// Decides that the compiled formula agrees with `t < 0` everywhere.
pub fn verify_compile(t: &LinearTerm) -> Result<bool, CompileError> {
    let compiled = compile_atom(t).into_formula();
    let native = Formula::atom(t.clone(), Rel::Lt);
    let closed = t
        .var_set()
        .into_iter()
        .rev()
        .fold(Formula::iff(compiled, native), |body, v| Formula::forall(v, body));
    Ok(decide(&closed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_scalar, parse_term};

    fn equivalent(a: &Formula, b: &Formula) -> bool {
        let vars: BTreeSet<String> = a.free_vars().union(&b.free_vars()).cloned().collect();
        let s = vars.into_iter().fold(Formula::iff(a.clone(), b.clone()), |f, v| Formula::forall(v, f));
        decide(&s).unwrap()
    }

    #[test]
    fn powers() {
        assert_eq!(compile_power(0).formula(), &parse("x < y").unwrap());
        assert_eq!(compile_power(1).formula(), &parse("P1(x, y)").unwrap());
        assert_eq!(compile_power(2).formula(), &parse("EX z1. P1(x, z1) /\\ P1(z1, y)").unwrap());
        assert_eq!(compile_power(-1).formula(), &parse("P1(-y, -x)").unwrap());
        for n in -3..=3 {
            let f = compile_power(n);
            assert!(is_primitive(f.formula()));
            let alpha = (0..n.abs()).fold(PiScalar::one(), |acc, _| &acc * &PiScalar::pi());
            let alpha = if n < 0 { alpha.recip().unwrap() } else { alpha };
            let native = Formula::lt(&LinearTerm::monomial("x", alpha), &LinearTerm::var("y"));
            assert!(equivalent(f.formula(), &native), "n = {n}");
        }
    }

    #[test]
    fn scalars() {
        let f = compile_scalar(&parse_scalar("pi + 1").unwrap()).unwrap();
        assert_eq!(f.formula(), &parse("EX z1. EX z2. x < z1 /\\ P1(x, z2) /\\ z1 + z2 < y").unwrap());
        assert_eq!(compile_scalar(&PiScalar::from_int(3)).unwrap().formula(), &parse("3*x < y").unwrap());
        let f = compile_scalar(&parse_scalar("2*pi^2").unwrap()).unwrap();
        assert!(equivalent(f.formula(), &parse("2*pi^2*x < y").unwrap()));
        assert!(matches!(compile_scalar(&parse_scalar("1/pi").unwrap()), Err(CompileError::NotPolynomial(_))));
    }

    #[test]
    fn family_reduction() {
        let fam = independent_family(&parse_term("pi*a + (1 - pi)*b").unwrap());
        assert_eq!(fam.len(), 2);
        let fam = independent_family(&parse_term("pi*a + 2*pi*b - 3").unwrap());
        assert_eq!(fam.len(), 2);
        assert!(fam.iter().any(|(_, u)| *u == parse_term("a + 2*b").unwrap()));
    }

    #[test]
    fn atoms_verify() {
        for t in ["pi*x - y", "pi*x - 1", "(pi^2 - 1)*x + y", "pi*a + (1 - pi)*b", "x/(pi - 4) + 1"] {
            let term = parse_term(t).unwrap();
            assert!(is_primitive(compile_atom(&term).formula()), "{t}");
            assert!(verify_compile(&term).unwrap(), "{t}");
        }
        let plain = compile_atom(&parse_term("2*a + 3*b").unwrap());
        assert!(plain.formula().is_quantifier_free());
    }

    #[test]
    fn other_relations() {
        for (t, rel) in [("pi*x - 1", Rel::Le), ("pi*x - y", Rel::Eq), ("pi*x + y - 2", Rel::Ne)] {
            let term = parse_term(t).unwrap();
            let f = compile_relation(&term, rel);
            assert!(equivalent(f.formula(), &Formula::atom(term, rel)), "{t} {rel:?}");
        }
    }
}

use num_traits::Zero;

use crate::formula::{Formula, LinearTerm, Rel};
use crate::scalar::{PiPoly, PiScalar, Rational};

/// A quantifier-free formula, with rational coefficients, that holds at a
/// rational assignment exactly when the value of `e` is rational.
///
/// Writing `e = P(pi) / D(pi)` with `D` monic of degree `m`, the value is a
/// rational `r` iff `P = r * D` as polynomials, and then `r` is the
/// coefficient of `pi^m` in `P`. Each other coefficient of `P - r * D` gives
/// one rational linear equation in the variables of `e`.
pub fn rationality_constraint(e: &LinearTerm) -> Formula {
    if e.is_rational() {
        return Formula::True;
    }
    let names: Vec<String> = e.vars().cloned().collect();
    let mut scalars: Vec<PiScalar> = names.iter().map(|v| e.coeff(v)).collect();
    scalars.push(e.constant_term().clone());

    let d = scalars.iter().fold(PiPoly::one(), |acc, s| PiPoly::lcm(&acc, s.den()));
    let polys: Vec<PiPoly> = scalars
        .iter()
        .map(|s| if s.is_zero() { PiPoly::zero() } else { s.num() * &d.div_exact(s.den()) })
        .collect();
    let m = d.degree().unwrap_or(0);
    let top = polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0).max(m);

    let mut parts = Vec::new();
    for k in (0..=top).filter(|&k| k != m) {
        let dk = d.coeff(k);
        let coeff_of = |p: &PiPoly| -> Rational { p.coeff(k) - p.coeff(m) * &dk };
        let mut row: Vec<Rational> = polys.iter().map(coeff_of).collect();
        let constant = row.pop().unwrap();
        if constant.is_zero() && row.iter().all(|c| c.is_zero()) {
            continue;
        }
        let term = LinearTerm::from_parts(
            names.iter().cloned().zip(row.into_iter().map(PiScalar::from_rational)),
            PiScalar::from_rational(constant),
        );
        parts.push(Formula::atom(term, Rel::Eq));
    }
    super::simplify(&Formula::and(parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, parse_term};

    #[test]
    fn reciprocal_of_pi_is_never_rational() {
        assert_eq!(rationality_constraint(&parse_term("1/pi").unwrap()), Formula::False);
    }

    #[test]
    fn rational_terms_need_nothing() {
        assert_eq!(rationality_constraint(&parse_term("1/2*x - 3").unwrap()), Formula::True);
    }

    #[test]
    fn pi_multiple_is_rational_only_at_zero() {
        assert_eq!(rationality_constraint(&parse_term("pi*x").unwrap()), parse("x = 0").unwrap());
    }

    #[test]
    fn quotient_constraint() {
        // (x + pi*y) / (pi + 1) is rational iff x = y
        let c = rationality_constraint(&parse_term("(1/(pi + 1))*x + (pi/(pi + 1))*y").unwrap());
        assert_eq!(c, parse("x - y = 0").unwrap());
    }
}

//! Stern–Brocot simplest rational strictly inside an open interval.
//!
//! Runs the continued-fraction descent directly on exact `Q(pi)` endpoints:
//! each step only needs the floor of an endpoint and one reciprocal, both of
//! which are exact in the field.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::{PiScalar, Rational, ScalarError};

/// The simplest rational `q` (smallest denominator, then smallest absolute
/// numerator) with `lo < q < hi`. `None` stands for the matching infinity.
pub fn simplest_rational_between(
    lo: Option<&PiScalar>,
    hi: Option<&PiScalar>,
) -> Result<Rational, ScalarError> {
    if let (Some(a), Some(b)) = (lo, hi) {
        if a.compare(b) != Ordering::Less {
            return Err(ScalarError::EmptyInterval);
        }
    }
    Ok(descend(lo.cloned(), hi.cloned()))
}

fn descend(lo: Option<PiScalar>, hi: Option<PiScalar>) -> Rational {
    let lo_neg = lo.as_ref().is_none_or(|l| l.sign() < 0);
    let hi_pos = hi.as_ref().is_none_or(|h| h.sign() > 0);
    if lo_neg && hi_pos {
        return Rational::zero();
    }
    if !hi_pos {
        // (lo, hi) lies in (-inf, 0]: mirror it
        return -descend(hi.map(|h| -h), lo.map(|l| -l));
    }
    // 0 <= lo < hi
    let lo = lo.expect("finite lower endpoint");
    let m = lo.floor();
    let next = Rational::from_integer(&m + 1);
    let next_fits = match &hi {
        None => true,
        Some(h) => PiScalar::from_rational(next.clone()).compare(h) == Ordering::Less,
    };
    if next_fits {
        return next;
    }
    // m <= lo < hi <= m + 1: recurse on (1 / (hi - m), 1 / (lo - m))
    let m_s = PiScalar::from_rational(Rational::from_integer(m.clone()));
    let hi = hi.expect("finite upper endpoint");
    let new_lo = (&hi - &m_s).recip().expect("hi > m");
    let lo_off = &lo - &m_s;
    let new_hi = if lo_off.is_zero() { None } else { Some(lo_off.recip().expect("nonzero")) };
    let inner = descend(Some(new_lo), new_hi);
    Rational::from_integer(m) + Rational::one() / inner
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> PiScalar {
        text.parse().unwrap()
    }

    fn q(text: &str) -> Rational {
        text.parse().unwrap()
    }

    #[test]
    fn whole_line_gives_zero() {
        assert_eq!(simplest_rational_between(None, None).unwrap(), Rational::zero());
    }

    #[test]
    fn between_three_and_pi() {
        let r = simplest_rational_between(Some(&s("3")), Some(&PiScalar::pi())).unwrap();
        assert_eq!(r, q("25/8"));
    }

    #[test]
    fn between_inverse_pi_and_third() {
        let r = simplest_rational_between(Some(&s("1/pi")), Some(&s("1/3"))).unwrap();
        let v = PiScalar::from_rational(r.clone());
        assert!(s("1/pi") < v && v < s("1/3"));
        assert_eq!(r, brute_force(&s("1/pi"), &s("1/3")));
    }

    /// Smallest denominator first, then smallest numerator, by enumeration.
    fn brute_force(lo: &PiScalar, hi: &PiScalar) -> Rational {
        for d in 1i64.. {
            let start = (lo.clone() * PiScalar::from_int(d)).floor();
            let mut n = start;
            loop {
                let cand = Rational::new(n.clone(), d.into());
                let v = PiScalar::from_rational(cand.clone());
                if &v >= hi {
                    break;
                }
                if &v > lo {
                    return cand;
                }
                n += 1;
            }
        }
        unreachable!()
    }

    #[test]
    fn agrees_with_enumeration() {
        let cases = [("3", "pi"), ("0", "1/10"), ("1/pi - 1/100", "1/pi"), ("pi^2/4", "pi^2/4 + 1/1000"), ("22/7 - 1/500", "pi")];
        for (a, b) in cases {
            let (a, b) = (s(a), s(b));
            assert_eq!(simplest_rational_between(Some(&a), Some(&b)).unwrap(), brute_force(&a, &b), "({a}, {b})");
        }
    }

    #[test]
    fn rational_endpoints() {
        let r = simplest_rational_between(Some(&s("0")), Some(&s("1/10"))).unwrap();
        assert_eq!(r, q("1/11"));
        let r = simplest_rational_between(Some(&s("-7/2")), Some(&s("-3"))).unwrap();
        assert_eq!(r, q("-10/3"));
        let r = simplest_rational_between(Some(&s("5/2")), None).unwrap();
        assert_eq!(r, q("3"));
        let r = simplest_rational_between(None, Some(&s("-pi"))).unwrap();
        assert_eq!(r, q("-4"));
    }

    #[test]
    fn empty_interval() {
        assert_eq!(
            simplest_rational_between(Some(&PiScalar::pi()), Some(&s("3"))),
            Err(ScalarError::EmptyInterval)
        );
        assert_eq!(
            simplest_rational_between(Some(&PiScalar::pi()), Some(&PiScalar::pi())),
            Err(ScalarError::EmptyInterval)
        );
    }
}

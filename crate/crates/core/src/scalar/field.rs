//! Exact elements of the field `Q(pi)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::pi::{interval_sign, pi_cell, precision_policy};
use super::{PiPoly, Rational, ScalarError};

/// A reduced rational function `num(pi) / den(pi)`.
///
/// `gcd(num, den) = 1` in `Q[X]` and `den` is monic, so two values are equal
/// exactly when their representations are equal (`pi` is transcendental).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiScalar {
    num: PiPoly,
    den: PiPoly,
}

impl PiScalar {
    pub fn new(num: PiPoly, den: PiPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: PiPoly, den: PiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = den.coeff(0);
            return PiScalar { num: num.scale(&c.recip()), den: PiPoly::one() };
        }
        let g = PiPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let lc = den.leading().unwrap().recip();
        PiScalar { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn zero() -> Self {
        PiScalar { num: PiPoly::zero(), den: PiPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn pi() -> Self {
        PiScalar { num: PiPoly::x(), den: PiPoly::one() }
    }

    pub fn from_rational(q: Rational) -> Self {
        PiScalar { num: PiPoly::constant(q), den: PiPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_poly(p: PiPoly) -> Self {
        PiScalar { num: p, den: PiPoly::one() }
    }

    pub fn num(&self) -> &PiPoly {
        &self.num
    }

    pub fn den(&self) -> &PiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    /// True when the denominator is constant, i.e. the value lies in `Q[pi]`.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The rational value, if the reduced form has no `pi` in it.
    pub fn is_rational(&self) -> Option<Rational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Degree of the reduced form: the larger of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn checked_div(&self, rhs: &PiScalar) -> Result<PiScalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<PiScalar, ScalarError> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, q: &Rational) -> PiScalar {
        if q.is_zero() {
            return Self::zero();
        }
        PiScalar { num: self.num.scale(q), den: self.den.clone() }
    }

    /// Sign of the real number `num(pi) / den(pi)`.
    ///
    /// The zero test is symbolic; nonzero values are separated from zero by
    /// refining the enclosure of `pi`, which terminates because `pi` is not
    /// algebraic.
    pub fn sign(&self) -> i8 {
        if self.num.is_zero() {
            return 0;
        }
        poly_sign(&self.num) * poly_sign(&self.den)
    }

    pub fn compare(&self, other: &PiScalar) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        if let (Some(a), Some(b)) = (self.is_rational(), other.is_rational()) {
            return a.cmp(&b);
        }
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> PiScalar {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// A rational interval containing the value, computed with a `pi`
    /// enclosure of the given precision. `None` if the denominator cannot be
    /// separated from zero at that precision.
    pub fn enclose(&self, bits: u32) -> Option<(Rational, Rational)> {
        if let Some(q) = self.is_rational() {
            return Some((q.clone(), q));
        }
        let (lo, hi, n) = pi_cell(bits);
        let (n_lo, n_hi) = poly_range(&self.num, &lo, &hi, n);
        let (d_lo, d_hi) = poly_range(&self.den, &lo, &hi, n);
        if !(d_lo.is_positive() || d_hi.is_negative()) {
            return None;
        }
        let cands = [&n_lo / &d_lo, &n_lo / &d_hi, &n_hi / &d_lo, &n_hi / &d_hi];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Some((lo, hi))
    }

    /// `floor` of the real value.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.is_rational() {
            return q.floor().to_integer();
        }
        let (start, growth) = precision_policy();
        let mut bits = start;
        loop {
            if let Some((lo, hi)) = self.enclose(bits) {
                let a = lo.floor().to_integer();
                // irrational values never sit on an integer, so the floors eventually agree
                if a == hi.floor().to_integer() && Rational::from_integer(a.clone()) < lo {
                    return a;
                }
            }
            bits = bits.saturating_mul(growth);
        }
    }

    /// Approximate value for diagnostics only; never used for decisions.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.enclose(64)
            .and_then(|(lo, hi)| ((lo + hi) / Rational::from_integer(2.into())).to_f64())
            .unwrap_or(f64::NAN)
    }
}

/// Rational interval containing `p(pi)` for `pi` in the cell `(lo, hi) / 2^n`.
fn poly_range(p: &PiPoly, lo: &BigInt, hi: &BigInt, n: u64) -> (Rational, Rational) {
    let l = p.denominator_lcm();
    let coeffs = p.integer_coeffs();
    let d = coeffs.len().saturating_sub(1);
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut lo_pow = BigInt::one();
    let mut hi_pow = BigInt::one();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let shift = n * (d - i) as u64;
            let x = (c * &lo_pow) << shift;
            let y = (c * &hi_pow) << shift;
            if c.is_positive() {
                a += x;
                b += y;
            } else {
                a += y;
                b += x;
            }
        }
        lo_pow *= lo;
        hi_pow *= hi;
    }
    // undo the integer scaling of the coefficients and the fixed-point shift
    let scale = l << (n * d as u64);
    (Rational::new(a, scale.clone()), Rational::new(b, scale))
}

/// Sign of a nonzero polynomial evaluated at `pi`.
pub(crate) fn poly_sign(p: &PiPoly) -> i8 {
    let coeffs = p.coeffs();
    if coeffs.is_empty() {
        return 0;
    }
    if coeffs.len() == 1 {
        return if coeffs[0].is_positive() { 1 } else { -1 };
    }
    // pi > 0, so uniformly signed coefficients settle it
    if coeffs.iter().all(|c| !c.is_negative()) {
        return 1;
    }
    if coeffs.iter().all(|c| !c.is_positive()) {
        return -1;
    }
    let ints = p.integer_coeffs();
    let (start, growth) = precision_policy();
    let mut bits = start;
    loop {
        let (lo, hi, n) = pi_cell(bits);
        if let Some(s) = interval_sign(&ints, &lo, &hi, n) {
            return s;
        }
        bits = bits.saturating_mul(growth);
    }
}

impl PartialOrd for PiScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PiScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl Default for PiScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for PiScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for PiScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Add for &PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return PiScalar { num: &self.num + &rhs.num, den: PiPoly::one() };
        }
        if self.den == rhs.den {
            return PiScalar::normalize(&self.num + &rhs.num, self.den.clone());
        }
        PiScalar::normalize(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        self + &(-rhs)
    }
}

impl Mul for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        if self.is_zero() || rhs.is_zero() {
            return PiScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return PiScalar { num: &self.num * &rhs.num, den: PiPoly::one() };
        }
        PiScalar::normalize(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &PiScalar {
    type Output = PiScalar;
    /// Panics on division by zero; use [`PiScalar::checked_div`] for fallible division.
    fn div(self, rhs: &PiScalar) -> PiScalar {
        self.checked_div(rhs).expect("division by zero in Q(pi)")
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr for PiScalar {
            type Output = PiScalar;
            fn $f(self, rhs: PiScalar) -> PiScalar {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&PiScalar> for PiScalar {
            type Output = PiScalar;
            fn $f(self, rhs: &PiScalar) -> PiScalar {
                (&self).$f(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.write_text(f);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiScalar({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> PiScalar {
        text.parse().unwrap()
    }

    fn poly(cs: &[i64]) -> PiPoly {
        PiPoly::from_coeffs(cs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    #[test]
    fn normalize_common_constant() {
        let v = PiScalar::new(poly(&[2, 2]), poly(&[2])).unwrap();
        assert_eq!(v, PiScalar::new(poly(&[1, 1]), PiPoly::one()).unwrap());
    }

    #[test]
    fn normalize_polynomial_gcd() {
        let v = PiScalar::new(poly(&[-1, 0, 1]), poly(&[-1, 1])).unwrap();
        assert_eq!(v, s("pi + 1"));
    }

    #[test]
    fn normalize_sign() {
        let v = PiScalar::new(poly(&[0, -1]), poly(&[-1])).unwrap();
        assert_eq!(v, PiScalar::pi());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(PiScalar::new(poly(&[1]), PiPoly::zero()), Err(ScalarError::ZeroDenominator));
        assert_eq!(PiScalar::one().checked_div(&PiScalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn field_operations() {
        assert_eq!(&PiScalar::pi() + &s("1 - pi"), PiScalar::one());
        assert_eq!(&PiScalar::pi() * &s("1/pi"), PiScalar::one());
        let d = &s("22/7") - &PiScalar::pi();
        assert_eq!(d, PiScalar::new(poly(&[22, -7]), poly(&[7])).unwrap());
    }

    #[test]
    fn signs() {
        assert_eq!(PiScalar::zero().sign(), 0);
        assert_eq!(s("pi - 22/7").sign(), -1);
        assert_eq!(s("pi^2 - 10").sign(), -1);
        assert_eq!(s("355/113 - pi").sign(), 1);
        assert_eq!(s("(pi - 3)/(pi - 4)").sign(), -1);
    }

    #[test]
    fn comparisons() {
        assert_eq!(s("1/pi").compare(&s("31/100")), Ordering::Greater);
        assert_eq!(PiScalar::pi().compare(&PiScalar::pi()), Ordering::Equal);
        assert_eq!(s("3").compare(&PiScalar::pi()), Ordering::Less);
    }

    #[test]
    fn rationality() {
        assert_eq!(s("3/7").is_rational(), Some("3/7".parse().unwrap()));
        assert_eq!(PiScalar::pi().is_rational(), None);
        assert_eq!(s("(2*pi + 2)/(pi + 1)").is_rational(), Some(Rational::from_integer(2.into())));
    }

    #[test]
    fn floors() {
        assert_eq!(PiScalar::pi().floor(), BigInt::from(3));
        assert_eq!(s("-pi").floor(), BigInt::from(-4));
        assert_eq!(s("1/(pi - 3)").floor(), BigInt::from(7));
        assert_eq!(s("-5/2").floor(), BigInt::from(-3));
        assert_eq!(s("10/21/(pi + 5/12)").floor(), BigInt::from(0));
    }

    #[test]
    fn enclosures_tighten_with_fractional_coefficients() {
        let v = s("10/21/(pi + 5/12)");
        let (lo, hi) = v.enclose(200).unwrap();
        assert!(&hi - &lo < Rational::new(BigInt::one(), BigInt::one() << 190u32));
        let (lo, hi) = s("1/3*pi - 1/7").enclose(100).unwrap();
        assert!(lo < hi && &hi - &lo < Rational::new(BigInt::one(), BigInt::one() << 95u32));
    }

    #[test]
    fn display_round_trips() {
        for text in ["(3*pi^2 - 1/2)/(pi + 2)", "pi", "-1/2*pi + 3", "1/(pi)", "0"] {
            let v = s(text);
            assert_eq!(s(&v.to_string()), v, "{text}");
        }
    }
}

//! The ordered scalar field `Q(pi)`: exact arithmetic, rigorous `pi`
//! enclosures, sign determination and simplest-rational witnesses.

mod field;
mod pi;
mod poly;
mod simplest;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::PiScalar;
pub use pi::{pi_enclosure, precision_policy, set_precision_policy, tamper_for_testing, Enclosure, TamperGuard};
pub use poly::PiPoly;
pub use simplest::simplest_rational_between;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("empty interval: lower endpoint is not below upper endpoint")]
    EmptyInterval,
    #[error("malformed scalar serialization: {0}")]
    Malformed(String),
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact wire form of a scalar: coefficient lists (lowest degree first) of the
/// reduced numerator and denominator, each coefficient written `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarRepr {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

fn coeff_text(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl From<&PiScalar> for ScalarRepr {
    fn from(s: &PiScalar) -> Self {
        ScalarRepr {
            num: s.num().coeffs().iter().map(coeff_text).collect(),
            den: s.den().coeffs().iter().map(coeff_text).collect(),
        }
    }
}

impl TryFrom<&ScalarRepr> for PiScalar {
    type Error = ScalarError;

    fn try_from(r: &ScalarRepr) -> Result<Self, ScalarError> {
        let parse = |v: &[String]| -> Result<PiPoly, ScalarError> {
            v.iter()
                .map(|c| c.parse::<Rational>().map_err(|_| ScalarError::Malformed(c.clone())))
                .collect::<Result<Vec<_>, _>>()
                .map(PiPoly::from_coeffs)
        };
        PiScalar::new(parse(&r.num)?, parse(&r.den)?)
    }
}

impl Serialize for PiScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PiScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        PiScalar::try_from(&repr).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a [`Rational`] as the exact string `p/q`.
pub mod rational_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::coeff_text(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.trim().parse::<Rational>().map_err(serde::de::Error::custom)
    }
}

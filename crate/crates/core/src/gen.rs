//! Seeded random generators for scalars, terms, formulas, functions and
//! equivalence relations, used by the self-test suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cuts::{Component, Cut, ExtPoint};
use crate::formula::{parse, Formula, LinearTerm, Rel};
use crate::limits::{AffinePiece, DefinableFunction};
use crate::scalar::{PiPoly, PiScalar, Rational};

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// A child generator with its own stream, so suites stay independent.
    pub fn fork(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Gen { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// `p/q` with `|p| <= num_max` and `1 <= q <= den_max`.
    pub fn rational(&mut self, num_max: i64, den_max: i64) -> Rational {
        let p = self.rng.gen_range(-num_max..=num_max);
        let q = self.rng.gen_range(1..=den_max);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    pub fn nonzero_rational(&mut self, num_max: i64, den_max: i64) -> Rational {
        loop {
            let r = self.rational(num_max, den_max);
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// A nonzero polynomial of degree at most `deg`, with a few zero
    /// coefficients mixed in.
    pub fn poly(&mut self, deg: usize) -> PiPoly {
        loop {
            let d = self.rng.gen_range(0..=deg);
            let coeffs: Vec<Rational> = (0..=d)
                .map(|_| if self.chance(0.3) { Rational::zero() } else { self.rational(9, 4) })
                .collect();
            let p = PiPoly::from_coeffs(coeffs);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A scalar whose numerator and denominator have degree at most `deg`.
    pub fn scalar(&mut self, deg: usize) -> PiScalar {
        let num = self.poly(deg);
        let den = if self.chance(0.5) { PiPoly::one() } else { self.poly(deg) };
        PiScalar::new(num, den).expect("nonzero denominator")
    }

    /// A polynomial scalar of degree at most `deg`, rational half the time.
    pub fn coefficient(&mut self, deg: usize) -> PiScalar {
        if self.chance(0.5) {
            PiScalar::from_rational(self.nonzero_rational(6, 3))
        } else {
            PiScalar::from_poly(self.poly(deg))
        }
    }

    pub fn irrational_scalar(&mut self, deg: usize) -> PiScalar {
        loop {
            let s = self.scalar(deg);
            if s.is_rational().is_none() {
                return s;
            }
        }
    }

    /// A term over a nonempty random subset of `vars`.
    pub fn term(&mut self, vars: &[&str], deg: usize) -> LinearTerm {
        let mut chosen: Vec<&str> = vars.iter().copied().filter(|_| self.chance(0.6)).collect();
        if chosen.is_empty() {
            chosen.push(vars[self.below(vars.len())]);
        }
        let coeffs: Vec<(String, PiScalar)> =
            chosen.into_iter().map(|v| (v.to_string(), self.coefficient(deg))).collect();
        let constant = if self.chance(0.7) { self.coefficient(deg) } else { PiScalar::zero() };
        LinearTerm::from_parts(coeffs, constant)
    }

    /// A term that mentions `v` and possibly the other variables.
    pub fn term_with(&mut self, v: &str, others: &[&str], deg: usize) -> LinearTerm {
        let mut t = if others.is_empty() { LinearTerm::zero() } else { self.term(others, deg) };
        if self.chance(0.3) && !others.is_empty() {
            t = LinearTerm::from_parts(Vec::new(), t.constant_term().clone());
        }
        &t + &LinearTerm::monomial(v, self.coefficient(deg))
    }

    pub fn rel(&mut self) -> Rel {
        *[Rel::Lt, Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne].choose(&mut self.rng).unwrap()
    }

    /// A random boolean combination of the given atoms.
    pub fn combine(&mut self, mut parts: Vec<Formula>) -> Formula {
        parts.shuffle(&mut self.rng);
        while parts.len() > 1 {
            let a = parts.pop().unwrap();
            let b = parts.pop().unwrap();
            let joined = match self.below(6) {
                0 | 1 => Formula::and(vec![a, b]),
                2 | 3 => Formula::or(vec![a, b]),
                4 => Formula::implies(a, b),
                _ => Formula::and(vec![Formula::not(a), b]),
            };
            let at = self.below(parts.len() + 1);
            parts.insert(at, joined);
        }
        let f = parts.pop().unwrap_or(Formula::True);
        if self.chance(0.15) {
            Formula::not(f)
        } else {
            f
        }
    }

    /// A quantifier-free formula with `n_atoms` atoms over `vars`, each atom
    /// mentioning `focus` when given.
    pub fn qf_formula(&mut self, vars: &[&str], focus: Option<&str>, n_atoms: usize, deg: usize) -> Formula {
        let atoms = (0..n_atoms)
            .map(|_| {
                let t = match focus {
                    Some(v) if self.chance(0.8) => {
                        let others: Vec<&str> = vars.iter().copied().filter(|w| *w != v).collect();
                        self.term_with(v, &others, deg)
                    }
                    _ => self.term(vars, deg),
                };
                let rel = self.rel();
                Formula::atom(t, rel)
            })
            .collect();
        self.combine(atoms)
    }

    /// A sentence with one to `max_q` quantified variables and at most
    /// `max_atoms` atoms. Some quantifiers are pushed inside the matrix.
    pub fn sentence(&mut self, max_q: usize, max_atoms: usize, deg: usize) -> Formula {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let q = self.rng.gen_range(1..=max_q.min(NAMES.len()));
        let vars = &NAMES[..q];
        let n_atoms = self.rng.gen_range(1..=max_atoms);
        let mut f = self.qf_formula(vars, None, n_atoms, deg);
        let mut order: Vec<&str> = vars.to_vec();
        order.shuffle(&mut self.rng);
        for v in order {
            f = match &f {
                Formula::And(parts) | Formula::Or(parts) if parts.len() > 1 && self.chance(0.3) => {
                    // scope the quantifier over a single branch when the others do not use v
                    let i = self.below(parts.len());
                    if parts.iter().enumerate().all(|(j, p)| j == i || !p.free_vars().contains(v)) {
                        let mut ps = parts.clone();
                        ps[i] = self.quantify(v, ps[i].clone());
                        if matches!(f, Formula::And(_)) {
                            Formula::and(ps)
                        } else {
                            Formula::or(ps)
                        }
                    } else {
                        self.quantify(v, f.clone())
                    }
                }
                _ => self.quantify(v, f.clone()),
            };
        }
        f
    }

    fn quantify(&mut self, v: &str, body: Formula) -> Formula {
        if self.chance(0.5) {
            Formula::exists(v, body)
        } else {
            Formula::forall(v, body)
        }
    }

    /// A rational near a random element of `points`, or a random small
    /// rational.
    pub fn probe(&mut self, points: &[PiScalar]) -> Rational {
        if !points.is_empty() && self.chance(0.6) {
            let p = &points[self.below(points.len())];
            if let Some(q) = p.is_rational() {
                if self.chance(0.5) {
                    return q;
                }
            }
            // a rational within 2^-k of p, from a floor at random scale
            let k = self.rng.gen_range(1..12u32);
            let scale = PiScalar::from_int(1 << k);
            let fl = (p * &scale).floor() + BigInt::from(self.rng.gen_range(-1..=1i64));
            return Rational::new(fl, BigInt::from(1i64 << k));
        }
        self.rational(20, 8)
    }

    /// A piecewise affine function on at most `max_pieces` pieces with
    /// breakpoints of degree at most `deg`.
    pub fn function(&mut self, max_pieces: usize, deg: usize) -> DefinableFunction {
        let n = self.rng.gen_range(1..=max_pieces);
        let mut breaks: Vec<PiScalar> = (0..n + 1).map(|_| self.scalar(deg)).collect();
        breaks.sort();
        breaks.dedup();
        let mut ends: Vec<ExtPoint> = breaks.into_iter().map(ExtPoint::Finite).collect();
        if self.chance(0.3) {
            ends[0] = ExtPoint::NegInf;
        }
        if ends.len() > 1 && self.chance(0.3) {
            *ends.last_mut().unwrap() = ExtPoint::PosInf;
        }
        if ends.len() == 1 {
            ends.push(ExtPoint::PosInf);
        }
        let mut pieces = Vec::new();
        let mut prev_hi_in = false;
        for w in ends.windows(2) {
            let lo_in = w[0].is_rational() && !prev_hi_in && self.chance(0.5);
            let hi_in = w[1].is_rational() && self.chance(0.5);
            prev_hi_in = hi_in;
            let domain = Component { lo: w[0].clone(), hi: w[1].clone(), lo_in, hi_in };
            if self.chance(0.8) {
                pieces.push(self.piece(domain));
            } else {
                prev_hi_in = false;
            }
        }
        if pieces.is_empty() {
            let domain = Component { lo: ends[0].clone(), hi: ends[1].clone(), lo_in: false, hi_in: false };
            pieces.push(self.piece(domain));
        }
        DefinableFunction::new(pieces).expect("generated pieces are disjoint")
    }

    /// A function defined at every positive rational.
    pub fn total_candidate(&mut self, max_pieces: usize, deg: usize) -> DefinableFunction {
        let n = self.rng.gen_range(1..=max_pieces);
        let mut breaks: Vec<PiScalar> = (0..n - 1).map(|_| self.scalar(deg).abs()).filter(|b| b.sign() > 0).collect();
        breaks.sort();
        breaks.dedup();
        let mut ends = vec![ExtPoint::Finite(PiScalar::zero())];
        ends.extend(breaks.into_iter().map(ExtPoint::Finite));
        ends.push(ExtPoint::PosInf);
        let mut pieces = Vec::new();
        let mut lo_in = false;
        for w in ends.windows(2) {
            // a rational breakpoint goes to exactly one side
            let hi_in = w[1].is_rational() && self.chance(0.5);
            let domain = Component { lo: w[0].clone(), hi: w[1].clone(), lo_in, hi_in };
            pieces.push(self.piece(domain));
            lo_in = w[1].is_rational() && !hi_in;
        }
        DefinableFunction::new(pieces).expect("generated pieces are disjoint")
    }

    fn piece(&mut self, domain: Component) -> AffinePiece {
        let slope = if self.chance(0.3) { Rational::zero() } else { self.rational(5, 4) };
        AffinePiece { domain, slope, intercept: self.rational(6, 5) }
    }

    pub fn irrational_cut(&mut self, deg: usize) -> Cut {
        Cut::new(self.irrational_scalar(deg))
    }

    pub fn cut(&mut self, deg: usize) -> Cut {
        Cut::new(self.scalar(deg))
    }
}

/// Equivalence relations in `x` and `y` on all of the rationals, used to
/// exercise class codes.
pub fn ei_templates() -> Vec<Formula> {
    [
        "pi*x < 1 <-> pi*y < 1",
        "x = y \\/ (0 < x /\\ pi*x < 1 /\\ 0 < y /\\ pi*y < 1)",
        "(pi*x < 1 <-> pi*y < 1) /\\ (x < pi <-> y < pi) /\\ (x*pi^2 > 10 <-> y*pi^2 > 10)",
        "ALL z. (x < z /\\ pi*z < 1 <-> y < z /\\ pi*z < 1)",
        "x = y \\/ (pi < x /\\ x < 2*pi /\\ pi < y /\\ y < 2*pi) \\/ (x <= -1 /\\ y <= -1)",
    ]
    .iter()
    .map(|t| parse(t).expect("template parses"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a: Vec<String> = {
            let mut g = Gen::new(7);
            (0..5).map(|_| g.sentence(3, 6, 2).to_string()).collect()
        };
        let b: Vec<String> = {
            let mut g = Gen::new(7);
            (0..5).map(|_| g.sentence(3, 6, 2).to_string()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn sentences_are_closed_and_bounded() {
        let mut g = Gen::new(11);
        for _ in 0..50 {
            let s = g.sentence(3, 6, 2);
            assert!(s.free_vars().is_empty(), "{s}");
            assert!(s.atoms().len() <= 6);
        }
    }

    #[test]
    fn total_candidates_cover_positive_rationals() {
        let mut g = Gen::new(3);
        for _ in 0..50 {
            let f = g.total_candidate(5, 3);
            for k in 1..40 {
                let x = PiScalar::from_rational(Rational::new(BigInt::from(k), BigInt::from(7)));
                assert!(f.apply(&x).is_some(), "{f} at {x}");
            }
            for p in f.pieces() {
                if let Some(q) = p.domain.lo.finite().filter(|s| s.is_rational().is_some()) {
                    if q.sign() > 0 {
                        assert!(f.apply(q).is_some(), "{f} at {q}");
                    }
                }
            }
        }
    }
}

//! Rigorous rational enclosures of `pi`.
//!
//! `pi` is computed with Machin's formula `pi = 16 atan(1/5) - 4 atan(1/239)` in
//! fixed-point integer arithmetic. Every truncated division contributes at most
//! one unit in the last place and the alternating tail is bounded by the first
//! omitted term, so the error of the fixed-point value is known exactly. The
//! enclosure handed out for `bits` is the dyadic cell
//! `[floor(pi 2^n) / 2^n, (floor(pi 2^n) + 1) / 2^n]` with `n = bits + 2`; cells of
//! one dyadic grid are nested, which makes enclosures monotone in `bits`.

use std::cell::RefCell;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// A rational interval strictly containing `pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
    pub bits: u32,
}

impl Enclosure {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

static PRECISION_START: AtomicU32 = AtomicU32::new(64);
static PRECISION_GROWTH: AtomicU32 = AtomicU32::new(2);

/// Sets the precision schedule used by sign determination: the first attempt
/// uses `start` bits and every failed attempt multiplies the precision by `growth`.
pub fn set_precision_policy(start: u32, growth: u32) {
    PRECISION_START.store(start.max(1), Ordering::Relaxed);
    PRECISION_GROWTH.store(growth.max(2), Ordering::Relaxed);
}

pub fn precision_policy() -> (u32, u32) {
    (PRECISION_START.load(Ordering::Relaxed), PRECISION_GROWTH.load(Ordering::Relaxed))
}

/// Fixed-point enclosure `pi * 2^scale` in `[lo, hi]`.
struct Raw {
    scale: u64,
    lo: BigInt,
    hi: BigInt,
}

static CACHE: RwLock<Option<Raw>> = RwLock::new(None);

thread_local! {
    static TAMPER: RefCell<Option<Rational>> = const { RefCell::new(None) };
}

/// Shifts every enclosure produced on the current thread by `shift` until the
/// guard is dropped. Only meant for negative controls in test suites.
pub fn tamper_for_testing(shift: Rational) -> TamperGuard {
    TAMPER.with(|t| *t.borrow_mut() = Some(shift));
    TamperGuard { _private: () }
}

pub struct TamperGuard {
    _private: (),
}

impl Drop for TamperGuard {
    fn drop(&mut self) {
        TAMPER.with(|t| *t.borrow_mut() = None);
    }
}

/// `floor(2^scale * atan(1/x))` up to an error returned alongside: the true
/// value lies in `[sum - err, sum + err]`.
fn atan_inv(x: u32, scale: u64) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::one() << scale) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut terms: u64 = 0;
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        terms += 1;
        power /= &x2;
        k += 1;
    }
    // each term truncated by < 1, the tail after the last nonzero power is < 1
    (sum, BigInt::from(terms + 1))
}

fn compute_raw(scale: u64) -> Raw {
    let (a5, e5) = atan_inv(5, scale);
    let (a239, e239) = atan_inv(239, scale);
    let mid = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let err = BigInt::from(16) * e5 + BigInt::from(4) * e239;
    Raw { scale, lo: &mid - &err, hi: &mid + &err }
}

/// Returns `floor(pi * 2^n)`.
fn pi_floor(n: u64) -> BigInt {
    {
        let guard = CACHE.read().unwrap();
        if let Some(raw) = guard.as_ref() {
            if let Some(f) = floor_from(raw, n) {
                return f;
            }
        }
    }
    let mut scale = n + 64;
    loop {
        let raw = compute_raw(scale);
        if let Some(f) = floor_from(&raw, n) {
            let mut guard = CACHE.write().unwrap();
            let replace = match guard.as_ref() {
                Some(old) => old.scale < raw.scale,
                None => true,
            };
            if replace {
                *guard = Some(raw);
            }
            return f;
        }
        scale *= 2;
    }
}

fn floor_from(raw: &Raw, n: u64) -> Option<BigInt> {
    if raw.scale < n {
        return None;
    }
    let shift = raw.scale - n;
    let lo = raw.lo.div_floor(&(BigInt::one() << shift));
    let hi = raw.hi.div_floor(&(BigInt::one() << shift));
    (lo == hi).then_some(lo)
}

/// Grid exponent used for a requested width of `2^-bits`.
fn grid(bits: u32) -> u64 {
    u64::from(bits) + 2
}

/// Integer endpoints `(L, L + 1)` with `pi in (L / 2^n, (L + 1) / 2^n)`, `n = bits + 2`.
pub(crate) fn pi_cell(bits: u32) -> (BigInt, BigInt, u64) {
    let n = grid(bits);
    let l = pi_floor(n);
    let tamper = TAMPER.with(|t| t.borrow().clone());
    match tamper {
        None => (l.clone(), l + 1, n),
        Some(shift) => {
            let scaled = shift * Rational::from_integer(BigInt::one() << n);
            let off = scaled.floor().to_integer();
            (&l + &off, l + off + 1, n)
        }
    }
}

/// Rational interval containing `pi` of width at most `2^-bits`.
pub fn pi_enclosure(bits: u32) -> Enclosure {
    let bits = bits.max(1);
    let (lo, hi, n) = pi_cell(bits);
    let den = BigInt::one() << n;
    Enclosure {
        lo: Rational::new(lo, den.clone()),
        hi: Rational::new(hi, den),
        bits,
    }
}

/// Sign of the integer polynomial `coeffs` over the cell `(lo/2^n, hi/2^n)`,
/// with `0 < lo`, or `None` when the interval evaluation straddles zero.
pub(crate) fn interval_sign(coeffs: &[BigInt], lo: &BigInt, hi: &BigInt, n: u64) -> Option<i8> {
    let d = coeffs.len().checked_sub(1)?;
    let mut lo_sum = BigInt::zero();
    let mut hi_sum = BigInt::zero();
    let mut lo_pow = BigInt::one();
    let mut hi_pow = BigInt::one();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let shift = n * (d - i) as u64;
            let a = (c * &lo_pow) << shift;
            let b = (c * &hi_pow) << shift;
            if c.is_positive() {
                lo_sum += a;
                hi_sum += b;
            } else {
                lo_sum += b;
                hi_sum += a;
            }
        }
        if i < d {
            lo_pow *= lo;
            hi_pow *= hi;
        }
    }
    if lo_sum.is_positive() {
        Some(1)
    } else if hi_sum.is_negative() {
        Some(-1)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn seven_bits_is_tight() {
        let e = pi_enclosure(7);
        assert!(e.lo >= q("3140/1000") && e.hi <= q("3143/1000"));
        assert!(e.lo < q("314159265/100000000") && q("314159266/100000000") < e.hi);
    }

    #[test]
    fn one_bit_contains_pi() {
        let e = pi_enclosure(1);
        assert!(e.width() <= q("1/2"));
        assert!(e.lo < q("314159265/100000000") && q("314159266/100000000") < e.hi);
    }

    #[test]
    fn thirty_bits_separates_classical_approximations() {
        let e = pi_enclosure(30);
        for approx in ["22/7", "355/113"] {
            let a = q(approx);
            assert!(!(e.lo <= a && a <= e.hi), "{approx} inside enclosure");
        }
    }

    #[test]
    fn enclosures_are_nested() {
        let mut prev = pi_enclosure(1);
        for b in 2..300 {
            let e = pi_enclosure(b);
            assert!(prev.contains(&e), "bits {b}");
            assert!(e.width() <= Rational::new(BigInt::one(), BigInt::one() << b));
            prev = e;
        }
    }

    #[test]
    fn high_precision_matches_known_digits() {
        // 3.14159265358979323846264338327950288419716939937510
        let digits = q("314159265358979323846264338327950288419716939937510/100000000000000000000000000000000000000000000000000");
        let e = pi_enclosure(200);
        let tol = q("1/100000000000000000000000000000000000000000000000000");
        assert!(e.lo < &digits + &tol && &digits - &tol < e.hi);
    }

    #[test]
    fn tamper_guard_shifts_and_restores() {
        let honest = pi_enclosure(20);
        {
            let _g = tamper_for_testing(q("1/10"));
            let t = pi_enclosure(20);
            assert!(t.lo > honest.hi);
        }
        assert_eq!(pi_enclosure(20), honest);
    }
}

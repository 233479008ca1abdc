//! Seeded self-test suites covering the decision procedure, cut calculus,
//! limits, class codes, compilation and scalar signs.
//!
//! Every suite compares two independent computations exactly and records
//! each disagreement.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::compile::{is_primitive, verify_compile, compile_atom};
use crate::cuts::{decompose, is_valuational, Cut};
use crate::eval::{eval_qf, oracle_exists, Assignment};
use crate::formula::{Formula, LinearTerm};
use crate::gen::{ei_templates, Gen};
use crate::imaginaries::{ei_code, same_class, CutCode};
use crate::limits::{check_no_external_limits, check_skolem, phi_c, phi_c_matrix, FailureReason, SkolemVerdict};
use crate::qe::{decide_with, eliminate_one, Strategy};
use crate::scalar::{tamper_for_testing, PiPoly, PiScalar, Rational};

pub const DEFAULT_SEED: u64 = 20_061;

/// Fifty decimals of pi, used only by the reference sign oracle.
const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Caps the number of cases per suite; `Some(0)` runs nothing.
    pub iterations: Option<usize>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: DEFAULT_SEED, iterations: None }
    }
}

impl SelftestConfig {
    fn cases(&self, default: usize) -> usize {
        self.iterations.map_or(default, |cap| cap.min(default))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub id: u32,
    pub name: &'static str,
    pub cases: usize,
    pub failure_count: usize,
    /// The first few failures, described.
    pub failures: Vec<String>,
    pub elapsed_ms: u64,
    pub limit_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases > 0 && self.elapsed_ms <= self.limit_ms
    }

    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "[{verdict}] {:>2} {:<26} cases={:<5} failures={:<3} time={}ms (limit {}ms)",
            self.id, self.name, self.cases, self.failure_count, self.elapsed_ms, self.limit_ms
        );
        if let Some(first) = self.failures.first() {
            line.push_str(&format!(" first: {first}"));
        }
        line
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

struct Tally {
    cases: usize,
    failure_count: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failure_count: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }
}

fn timed(id: u32, name: &'static str, limit_ms: u64, body: impl FnOnce(&mut Tally)) -> SuiteReport {
    let start = Instant::now();
    let mut t = Tally::new();
    body(&mut t);
    SuiteReport {
        id,
        name,
        cases: t.cases,
        failure_count: t.failure_count,
        failures: t.failures,
        elapsed_ms: start.elapsed().as_millis() as u64,
        limit_ms,
    }
}

fn inv_pi() -> Cut {
    Cut::new(PiScalar::pi().recip().expect("pi is nonzero"))
}

/// `ALL x. x > 0 -> phi_C(x)` for the cut at `1/pi`, decided by both strategies.
pub fn suite_dc1(_cfg: &SelftestConfig) -> SuiteReport {
    timed(1, "density-lemma sentence", 1_000, |t| {
        let s = Formula::forall("x", Formula::implies(Formula::lt(&LinearTerm::zero(), &LinearTerm::var("x")), phi_c(&inv_pi())));
        for strategy in [Strategy::FourierMotzkin, Strategy::VirtualSubstitution] {
            let r = decide_with(&s, strategy);
            t.check(r == Ok(true), || format!("{strategy:?} returned {r:?}"));
        }
    })
}

/// Random total candidates against random irrational cuts: every one must
/// be refuted, and every counterexample must survive direct evaluation.
pub fn suite_skolem(cfg: &SelftestConfig) -> SuiteReport {
    timed(2, "skolem refutation", 300_000, |t| {
        let mut g = Gen::fork(cfg.seed, 2);
        let cuts: Vec<Cut> = (0..cfg.cases(10)).map(|_| g.irrational_cut(2)).collect();
        let candidates: Vec<_> = (0..cfg.cases(100)).map(|_| g.total_candidate(5, 2)).collect();
        for c in &cuts {
            let matrix = phi_c_matrix(c);
            for f in &candidates {
                let verdict = check_skolem(c, f);
                let ok = match &verdict {
                    Ok(SkolemVerdict::Counterexample { x, reason }) => {
                        let xs = PiScalar::from_rational(x.clone());
                        let positive = x.is_positive();
                        match (reason, f.apply(&xs)) {
                            (FailureReason::Undefined, None) => positive,
                            (FailureReason::NotWitness { .. }, Some(y)) => {
                                let a: Assignment = [("x".to_string(), xs), ("y".to_string(), y)].into();
                                positive && eval_qf(&matrix, &a) == Ok(false)
                            }
                            _ => false,
                        }
                    }
                    _ => false,
                };
                t.check(ok, || format!("cut {} candidate {f}: {verdict:?}", c.value));
            }
        }
    })
}

/// Both elimination strategies decide random sentences identically.
pub fn suite_qe_agreement(cfg: &SelftestConfig) -> SuiteReport {
    timed(3, "strategy agreement", 600_000, |t| {
        let mut g = Gen::fork(cfg.seed, 3);
        for _ in 0..cfg.cases(500) {
            let s = g.sentence(3, 6, 2);
            let a = decide_with(&s, Strategy::FourierMotzkin);
            let b = decide_with(&s, Strategy::VirtualSubstitution);
            t.check(a.is_ok() && a == b, || format!("{s}: {a:?} vs {b:?}"));
        }
    })
}

/// Elimination of one existential agrees with interval decomposition.
pub fn suite_oracle(cfg: &SelftestConfig) -> SuiteReport {
    timed(4, "one-quantifier oracle", 300_000, |t| {
        let mut g = Gen::fork(cfg.seed, 4);
        for _ in 0..cfg.cases(300) {
            let others: &[&str] = if g.chance(0.5) { &["x"] } else { &["x", "w"] };
            let mut vars = vec!["y"];
            vars.extend_from_slice(others);
            let n_atoms = 1 + g.below(4);
            let f = g.qf_formula(&vars, Some("y"), n_atoms, 2);
            let a: Assignment =
                others.iter().map(|v| (v.to_string(), PiScalar::from_rational(g.rational(12, 6)))).collect();
            let direct = oracle_exists(&f, "y", &a);
            let via_qe = eliminate_one(&f, "y").map(|e| eval_qf(&e, &a));
            t.check(matches!((&direct, &via_qe), (Ok(d), Ok(Ok(q))) if d == q), || {
                format!("{f} at {a:?}: oracle {direct:?}, qe {via_qe:?}")
            });
        }
    })
}

/// Compiled atoms are primitive and equivalent to the original.
pub fn suite_compile(cfg: &SelftestConfig) -> SuiteReport {
    timed(5, "primitive compilation", 600_000, |t| {
        let mut g = Gen::fork(cfg.seed, 5);
        let vars = ["a", "b", "c"];
        for _ in 0..cfg.cases(200) {
            let n = 1 + g.below(3);
            let term = g.term(&vars[..n], 3);
            let primitive = is_primitive(compile_atom(&term).formula());
            let verified = verify_compile(&term);
            t.check(primitive && verified == Ok(true), || format!("{term}: primitive={primitive} verify={verified:?}"));
        }
    })
}

/// Decomposition membership matches direct evaluation, and every produced
/// set is canonical with rational included endpoints.
pub fn suite_decompose(cfg: &SelftestConfig) -> SuiteReport {
    timed(6, "decomposition soundness", 120_000, |t| {
        let mut g = Gen::fork(cfg.seed, 6);
        let probes_per_formula = 5;
        let formulas = cfg.cases(1000).div_ceil(probes_per_formula);
        let mut remaining = cfg.cases(1000);
        for _ in 0..formulas {
            let n_atoms = 1 + g.below(4);
            let f = g.qf_formula(&["x"], Some("x"), n_atoms, 2);
            let set = match decompose(&f, "x") {
                Ok(s) => s,
                Err(e) => {
                    t.check(false, || format!("{f}: {e}"));
                    continue;
                }
            };
            let canonical = set.is_canonical();
            let mut points: Vec<PiScalar> = Vec::new();
            for c in set.components() {
                points.extend(c.lo.finite().cloned());
                points.extend(c.hi.finite().cloned());
            }
            for a in f.atoms() {
                let (b, rest) = a.term().split("x");
                if !b.is_zero() {
                    points.push(&-rest.constant_term() / &b);
                }
            }
            for _ in 0..probes_per_formula.min(remaining) {
                remaining -= 1;
                let q = PiScalar::from_rational(g.probe(&points));
                let a: Assignment = [("x".to_string(), q.clone())].into();
                let direct = eval_qf(&f, &a);
                t.check(canonical && direct == Ok(set.contains(&q)), || {
                    format!("{f} at {q}: set {set} canonical={canonical}, direct {direct:?}")
                });
            }
        }
    })
}

/// No random cut is valuational.
pub fn suite_nonvaluational(cfg: &SelftestConfig) -> SuiteReport {
    timed(7, "non-valuational cuts", 120_000, |t| {
        let mut g = Gen::fork(cfg.seed, 7);
        for _ in 0..cfg.cases(100) {
            let c = g.cut(4);
            t.check(!is_valuational(&c), || format!("cut at {} reported valuational", c.value));
        }
    })
}

/// Limits at rational and infinite endpoints stay rational or infinite.
pub fn suite_limits(cfg: &SelftestConfig) -> SuiteReport {
    timed(8, "no external limits", 120_000, |t| {
        let mut g = Gen::fork(cfg.seed, 8);
        for _ in 0..cfg.cases(200) {
            let f = g.function(5, 3);
            let r = check_no_external_limits(&f);
            t.check(r.pass, || format!("{f}: {:?}", r.entries.iter().find(|e| !e.ok)));
        }
    })
}

fn ei_pool(g: &mut Gen, e: &Formula, size: usize) -> Vec<Rational> {
    let marks: Vec<PiScalar> = e
        .atoms()
        .iter()
        .filter(|a| a.term().var_set().len() == 1)
        .map(|a| {
            let v = a.term().vars().next().unwrap().clone();
            let (b, rest) = a.term().split(&v);
            &-rest.constant_term() / &b
        })
        .collect();
    let mut pool: Vec<Rational> = (0..size).map(|_| g.probe(&marks)).collect();
    pool.sort();
    pool.dedup();
    pool
}

/// Class codes are equal exactly for related pairs.
pub fn suite_imaginaries(cfg: &SelftestConfig) -> SuiteReport {
    timed(9, "class codes", 300_000, |t| {
        let mut g = Gen::fork(cfg.seed, 9);
        for e in ei_templates() {
            let pool = ei_pool(&mut g, &e, 48);
            let mut codes: HashMap<Rational, CutCode> = HashMap::new();
            for a in &pool {
                match ei_code(&e, a) {
                    Ok(code) => {
                        let member = code.contains(&PiScalar::from_rational(a.clone()));
                        t.check(member, || format!("{e}: {a} outside its own code {code}"));
                        codes.insert(a.clone(), code);
                    }
                    Err(err) => t.check(false, || format!("{e} at {a}: {err}")),
                }
            }
            for _ in 0..cfg.cases(1000) {
                let a = &pool[g.below(pool.len())];
                let b = &pool[g.below(pool.len())];
                let (Some(ca), Some(cb)) = (codes.get(a), codes.get(b)) else { continue };
                let related = same_class(&e, a, b);
                t.check(related == Ok(ca == cb), || format!("{e} at ({a}, {b}): codes {ca} / {cb}, related {related:?}"));
            }
        }
    })
}

/// Interval evaluation of `p` over `[lo, hi]` with `0 < lo`.
fn poly_range(p: &PiPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mut acc = (Rational::zero(), Rational::zero());
    let mut lo_pow = Rational::one();
    let mut hi_pow = Rational::one();
    for c in p.coeffs() {
        let (a, b) = (c * &lo_pow, c * &hi_pow);
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        acc = (acc.0 + a, acc.1 + b);
        lo_pow *= lo;
        hi_pow *= hi;
    }
    acc
}

fn interval_sign(range: &(Rational, Rational)) -> Option<i8> {
    if range.0.is_positive() {
        Some(1)
    } else if range.1.is_negative() {
        Some(-1)
    } else {
        None
    }
}

/// Sign of a scalar from a fixed fifty-digit value of pi, or `None` when
/// that precision cannot separate it from zero.
pub fn reference_sign(s: &PiScalar) -> Option<i8> {
    let digits = PI_50.replace('.', "");
    let scale = BigInt::from(10u32).pow((digits.len() - 1) as u32);
    let mid = Rational::new(digits.parse::<BigInt>().expect("digits"), scale.clone());
    let err = Rational::new(BigInt::one(), scale);
    let (lo, hi) = (&mid - &err, &mid + &err);
    let n = interval_sign(&poly_range(s.num(), &lo, &hi))?;
    let d = interval_sign(&poly_range(s.den(), &lo, &hi))?;
    Some(n * d)
}

fn scalar_suite(cfg: &SelftestConfig, id: u32, name: &'static str) -> SuiteReport {
    timed(id, name, 60_000, |t| {
        let mut g = Gen::fork(cfg.seed, 10);
        for _ in 0..cfg.cases(1000) {
            let s = if g.chance(0.3) {
                // a close rational approximation subtracted, to force fine enclosures
                let base = g.irrational_scalar(5);
                let approx = g.probe(std::slice::from_ref(&base));
                &base - &PiScalar::from_rational(approx)
            } else {
                g.scalar(5)
            };
            let reference = reference_sign(&s);
            let got = s.sign();
            t.check(reference == Some(got), || format!("{s}: sign {got}, reference {reference:?}"));
        }
    })
}

/// Exact signs agree with the fifty-digit reference.
pub fn suite_scalar(cfg: &SelftestConfig) -> SuiteReport {
    scalar_suite(cfg, 10, "scalar signs")
}

/// The scalar suite with a deliberately shifted pi enclosure. It is expected
/// to fail; a pass means the sign check would not notice a broken enclosure.
pub fn suite_scalar_tampered(cfg: &SelftestConfig) -> SuiteReport {
    let _guard = tamper_for_testing(Rational::new(BigInt::one(), BigInt::from(2)));
    scalar_suite(cfg, 10, "scalar signs (tampered)")
}

pub type Suite = fn(&SelftestConfig) -> SuiteReport;

/// All suites in order.
pub fn suites() -> Vec<Suite> {
    vec![
        suite_dc1,
        suite_skolem,
        suite_qe_agreement,
        suite_oracle,
        suite_compile,
        suite_decompose,
        suite_nonvaluational,
        suite_limits,
        suite_imaginaries,
        suite_scalar,
    ]
}

pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let suites: Vec<SuiteReport> = if cfg.iterations == Some(0) {
        Vec::new()
    } else {
        suites().into_iter().map(|s| s(cfg)).collect()
    };
    let pass = suites.iter().all(SuiteReport::passed);
    SelftestReport { seed: cfg.seed, suites, pass }
}

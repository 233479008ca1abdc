use proptest::prelude::*;
use qvspi::cuts::{decompose, ExtPoint, IntervalSet};
use qvspi::gen::Gen;
use qvspi::imaginaries::{closure_code, ei_code, in_domain};
use qvspi::qe::decide;
use qvspi::{Formula, LinearTerm, PiScalar};

/// A rewrite of `f` that must define the same set: De Morgan, double
/// negation, reordering, splitting `<=` and rescaling by a positive scalar.
fn rewrite(f: &Formula, g: &mut Gen) -> Formula {
    match f {
        Formula::Atom(a) => {
            let c = g.scalar(1).abs();
            let c = if c.is_zero() { PiScalar::from_int(3) } else { c };
            let scaled = Formula::atom(a.term().scale(&c), a.rel());
            match a.rel() {
                qvspi::Rel::Le if g.chance(0.5) => Formula::or(vec![
                    Formula::lt(&a.term().scale(&c), &LinearTerm::zero()),
                    Formula::eq(a.term(), &LinearTerm::zero()),
                ]),
                _ if g.chance(0.3) => Formula::not(Formula::not(scaled)),
                _ => scaled,
            }
        }
        Formula::And(gs) => {
            let mut parts: Vec<Formula> = gs.iter().map(|h| rewrite(h, g)).collect();
            parts.reverse();
            if g.chance(0.5) {
                Formula::not(Formula::or(parts.into_iter().map(Formula::not).collect()))
            } else {
                Formula::and(parts)
            }
        }
        Formula::Or(gs) => {
            let mut parts: Vec<Formula> = gs.iter().map(|h| rewrite(h, g)).collect();
            parts.reverse();
            Formula::or(parts)
        }
        Formula::Not(h) => Formula::not(rewrite(h, g)),
        Formula::Implies(a, b) => Formula::or(vec![Formula::not(rewrite(a, g)), rewrite(b, g)]),
        Formula::Iff(a, b) => Formula::iff(rewrite(b, g), rewrite(a, g)),
        other => other.clone(),
    }
}

fn endpoints_disciplined(s: &IntervalSet) -> bool {
    s.components().iter().all(|c| {
        let ok = |p: &ExtPoint, included: bool| !included || p.is_rational();
        ok(&c.lo, c.lo_in) && ok(&c.hi, c.hi_in)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn equivalent_formulas_decompose_identically(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(5);
        let f = g.qf_formula(&["x"], Some("x"), n, 2);
        let h = rewrite(&f, &mut g);
        prop_assert!(decide(&Formula::forall("x", Formula::iff(f.clone(), h.clone()))).unwrap());
        let a = decompose(&f, "x").unwrap();
        let b = decompose(&h, "x").unwrap();
        prop_assert_eq!(&a, &b, "{} vs {}", f, h);
        prop_assert!(a.is_canonical());
        prop_assert!(endpoints_disciplined(&a));
    }

    #[test]
    fn closure_is_idempotent(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(5);
        let f = g.qf_formula(&["x"], Some("x"), n, 2);
        let code = closure_code(&decompose(&f, "x").unwrap());
        prop_assert_eq!(closure_code(&code.as_interval_set()), code);
    }

    #[test]
    fn a_point_lies_in_its_own_code(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let templates = qvspi::gen::ei_templates();
        let e = &templates[g.below(templates.len())];
        let a = g.rational(10, 6);
        if in_domain(e, &a).unwrap() {
            let code = ei_code(e, &a).unwrap();
            prop_assert!(code.contains(&PiScalar::from_rational(a.clone())), "{} at {}: {}", e, a, code);
        }
    }
}

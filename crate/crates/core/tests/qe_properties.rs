use proptest::prelude::*;
use qvspi::eval::{eval_qf, oracle_exists, Assignment};
use qvspi::formula::Atom;
use qvspi::gen::Gen;
use qvspi::qe::{decide, eliminate, eliminate_one, eliminate_vs};
use qvspi::{Formula, PiScalar};

fn close(f: Formula) -> Formula {
    f.free_vars().into_iter().rev().fold(f, |body, v| Formula::forall(v, body))
}

fn equivalent(a: &Formula, b: &Formula) -> bool {
    decide(&close(Formula::iff(a.clone(), b.clone()))).unwrap()
}

/// A formula in `x` with some quantified variables among `y`, `z`.
fn open_formula(g: &mut Gen) -> Formula {
    let n = 1 + g.below(4);
    let body = g.qf_formula(&["x", "y", "z"], Some("y"), n, 2);
    let inner = if g.chance(0.5) { Formula::exists("z", body) } else { Formula::forall("z", body) };
    if g.chance(0.5) {
        Formula::exists("y", inner)
    } else {
        Formula::forall("y", inner)
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn elimination_is_idempotent_and_hygienic(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let f = open_formula(&mut g);
        let once = eliminate(&f).unwrap();
        prop_assert!(once.is_quantifier_free());
        let vars = once.all_vars();
        prop_assert!(!vars.contains("y") && !vars.contains("z"), "{} -> {}", f, once);
        let twice = eliminate(&once).unwrap();
        prop_assert!(equivalent(&once, &twice));
        let vs = eliminate_vs(&f).unwrap();
        prop_assert!(!vs.all_vars().contains("y") && !vs.all_vars().contains("z"));
        prop_assert!(equivalent(&once, &vs), "{} : {} vs {}", f, once, vs);
    }

    #[test]
    fn elimination_agrees_with_the_interval_oracle(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(5);
        let f = g.qf_formula(&["x", "y"], Some("y"), n, 2);
        let e = eliminate_one(&f, "y").unwrap();
        prop_assert!(!e.all_vars().contains("y"));
        for _ in 0..4 {
            let a: Assignment = [("x".to_string(), PiScalar::from_rational(g.rational(12, 6)))].into();
            prop_assert_eq!(eval_qf(&e, &a).unwrap(), oracle_exists(&f, "y", &a).unwrap(), "{} at {:?}", f, a);
        }
    }

    #[test]
    fn truth_ignores_positive_rescaling(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let t = g.term(&["x", "y"], 2);
        let rel = g.rel();
        let c = g.scalar(2).abs();
        let a: Assignment = ["x", "y"].iter().map(|v| (v.to_string(), PiScalar::from_rational(g.rational(8, 5)))).collect();
        if !c.is_zero() {
            let raw = rel.holds(t.scale(&c).eval(&a).unwrap().sign());
            prop_assert_eq!(eval_qf(&Formula::Atom(Atom::new(t.scale(&c), rel)), &a).unwrap(), raw);
            prop_assert_eq!(eval_qf(&Formula::atom(t.clone(), rel), &a).unwrap(), raw);
        }
    }
}

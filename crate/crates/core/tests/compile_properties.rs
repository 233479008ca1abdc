use proptest::prelude::*;
use qvspi::compile::{compile_formula, compile_relation, independent_family, is_primitive};
use qvspi::eval::{eval, eval_qf, Assignment};
use qvspi::gen::Gen;
use qvspi::scalar::PiPoly;
use qvspi::{Formula, PiScalar, Rational};

const VARS: [&str; 3] = ["a", "b", "c"];

fn assignment(g: &mut Gen) -> Assignment {
    VARS.iter().map(|v| (v.to_string(), PiScalar::from_rational(g.rational(9, 5)))).collect()
}

/// Rank over the rationals of the coefficient vectors of `ps`.
fn rank(ps: &[PiPoly]) -> usize {
    let width = ps.iter().filter_map(PiPoly::degree).max().map_or(0, |d| d + 1);
    let mut rows: Vec<Vec<Rational>> = ps.iter().map(|p| (0..width).map(|k| p.coeff(k)).collect()).collect();
    let mut r = 0;
    for col in 0..width {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][col] != Rational::from_integer(0.into())) else { continue };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && rows[i][col] != Rational::from_integer(0.into()) {
                let f = &rows[i][col] / &rows[r][col];
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn family_reduction_preserves_values(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(3);
        let t = g.term(&VARS[..n], 3);
        let family = independent_family(&t);
        let alphas: Vec<PiPoly> = family.iter().map(|(p, _)| p.clone()).collect();
        prop_assert_eq!(rank(&alphas), alphas.len());
        for (_, u) in &family {
            prop_assert!(u.is_rational());
        }
        for _ in 0..4 {
            let a = assignment(&mut g);
            let direct = t.eval(&a).unwrap();
            let rebuilt = family.iter().fold(PiScalar::zero(), |acc, (alpha, u)| {
                &acc + &(&PiScalar::from_poly(alpha.clone()) * &u.eval(&a).unwrap())
            });
            prop_assert_eq!(direct.sign(), rebuilt.sign(), "{} at {:?}", t, a);
        }
    }

    #[test]
    fn compiled_relations_are_primitive_and_agree_pointwise(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(2);
        let t = g.term(&VARS[..n], 2);
        let rel = g.rel();
        let compiled = compile_relation(&t, rel);
        prop_assert!(is_primitive(compiled.formula()));
        for _ in 0..3 {
            let a = assignment(&mut g);
            let native = eval_qf(&Formula::atom(t.clone(), rel), &a).unwrap();
            prop_assert_eq!(eval(compiled.formula(), &a).unwrap(), native, "{} {:?}", t, rel);
        }
    }

    #[test]
    fn whole_formulas_compile_to_primitive_form(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = 1 + g.below(3);
        let f = g.qf_formula(&VARS[..2], None, n, 2);
        prop_assert!(is_primitive(compile_formula(&f).formula()));
    }
}

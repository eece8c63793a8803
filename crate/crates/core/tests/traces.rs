use proptest::prelude::*;
use rigiduality_core::forms::SmoothTower;
use rigiduality_core::{make_hom_strs, AlgebraHom, AlgebraPresentation, Field};

fn tower(n: u32) -> SmoothTower {
    let b = AlgebraPresentation::polynomial(Field::Rational, &["s"]);
    let c = AlgebraPresentation::polynomial(Field::Rational, &["t"]);
    let mut t = SmoothTower::new(&AlgebraHom::from_field(&b), false).unwrap();
    t.push_finite(make_hom_strs(&b, &c, &[&format!("t^{n}")]).unwrap(), false)
        .unwrap();
    t
}

fn poly_text(var: &str, coeffs: &[i64]) -> String {
    let mut s = String::from("0");
    for (i, c) in coeffs.iter().enumerate() {
        s.push_str(&format!(" + ({c})*{var}^{i}"));
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_base_linear(n in 2u32..=4, b in prop::collection::vec(-5i64..=5, 0..4), w in prop::collection::vec(-5i64..=5, 0..7)) {
        let t = tower(n);
        let beta = t.level(0).algebra.parse(&poly_text("s", &b)).unwrap();
        let form = t.parse_form(1, &poly_text("t", &w)).unwrap();
        let step = t.level(1).step.as_ref().unwrap();
        let scaled = t.form(1, &(&step.apply(&beta) * &form.coeff)).unwrap();
        let lhs = t.trace_form(&scaled, 0).unwrap().coeff;
        let rhs = t.level(0).algebra.reduce(&(&beta * &t.trace_form(&form, 0).unwrap().coeff));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn companion_and_newton_traces_agree(n in 2u32..=5, w in prop::collection::vec(-5i64..=5, 0..9)) {
        let t = tower(n);
        let form = t.parse_form(1, &poly_text("t", &w)).unwrap();
        let comp = t.trace_step(&form).unwrap();
        prop_assert!(comp.companion.equals(&comp.newton, &t.level(0).algebra));
    }

    #[test]
    fn traces_are_additive(n in 2u32..=4, a in prop::collection::vec(-5i64..=5, 0..6), b in prop::collection::vec(-5i64..=5, 0..6)) {
        let t = tower(n);
        let fa = t.parse_form(1, &poly_text("t", &a)).unwrap();
        let fb = t.parse_form(1, &poly_text("t", &b)).unwrap();
        let sum = t.form(1, &(&fa.coeff + &fb.coeff)).unwrap();
        let lhs = t.trace_form(&sum, 0).unwrap().coeff;
        let rhs = &t.trace_form(&fa, 0).unwrap().coeff + &t.trace_form(&fb, 0).unwrap().coeff;
        prop_assert_eq!(lhs, rhs);
    }
}

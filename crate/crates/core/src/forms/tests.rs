use super::*;
use crate::algebra::{make_hom_strs, AlgebraPresentation};
use crate::scalar::Field;

const Q: Field = Field::Rational;

/// `Q -> Q[s] -> Q[t]` with `s = t^n`.
fn power_tower(n: u32) -> SmoothTower {
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = AlgebraPresentation::polynomial(Q, &["t"]);
    let mut tower = SmoothTower::new(&AlgebraHom::from_field(&b), false).unwrap();
    tower
        .push_finite(make_hom_strs(&b, &c, &[&format!("t^{n}")]).unwrap(), false)
        .unwrap();
    tower
}

#[test]
fn power_map_trace_values() {
    for n in 2..=5u32 {
        let tower = power_tower(n);
        let top = tower.parse_form(1, &format!("t^{}", n - 1)).unwrap();
        let tr = tower.trace_form(&top, 0).unwrap();
        assert_eq!(tower.display(&tr).text, "ds");
        for i in 0..n - 1 {
            let w = tower.parse_form(1, &format!("t^{i}")).unwrap();
            assert!(
                tower.trace_form(&w, 0).unwrap().coeff.is_zero(),
                "n = {n}, i = {i}"
            );
        }
    }
}

#[test]
fn pullback_of_ds() {
    let tower = power_tower(3);
    let ds = tower.parse_form(0, "1").unwrap();
    let pulled = tower.pullback_form(&ds, 1).unwrap();
    assert_eq!(tower.display(&pulled).text, "3*t^2 * dt");
    assert_eq!(tower.pullback_form(&ds, 0).unwrap(), ds);
    let zero = tower.parse_form(0, "0").unwrap();
    assert!(tower.pullback_form(&zero, 1).unwrap().coeff.is_zero());
}

#[test]
fn trace_of_pullback_is_classical_trace() {
    for n in 2..=5u32 {
        let tower = power_tower(n);
        let LevelKind::Monogenic { finite, .. } = &tower.level(1).kind else {
            unreachable!()
        };
        let ds = tower.parse_form(0, "1").unwrap();
        let pulled = tower.pullback_form(&ds, 1).unwrap();
        for k in 0..n {
            let c = tower.level(1).algebra.parse(&format!("t^{k}")).unwrap();
            let w = tower.form(1, &(&c * &pulled.coeff)).unwrap();
            let tr = tower.trace_form(&w, 0).unwrap();
            assert_eq!(tr.coeff, classical_trace(finite, &c).unwrap());
        }
    }
}

#[test]
fn traces_are_transitive() {
    let s = AlgebraPresentation::polynomial(Q, &["s"]);
    let t = AlgebraPresentation::polynomial(Q, &["t"]);
    let u = AlgebraPresentation::polynomial(Q, &["u"]);
    let mut two = SmoothTower::new(&AlgebraHom::from_field(&s), false).unwrap();
    two.push_finite(make_hom_strs(&s, &t, &["t^2"]).unwrap(), false)
        .unwrap();
    two.push_finite(make_hom_strs(&t, &u, &["u^2"]).unwrap(), false)
        .unwrap();
    let mut one = SmoothTower::new(&AlgebraHom::from_field(&s), false).unwrap();
    one.push_finite(make_hom_strs(&s, &u, &["u^4"]).unwrap(), false)
        .unwrap();
    for i in 0..4 {
        let w2 = two.parse_form(2, &format!("u^{i}")).unwrap();
        let w1 = one.parse_form(1, &format!("u^{i}")).unwrap();
        assert_eq!(
            two.trace_form(&w2, 0).unwrap().coeff,
            one.trace_form(&w1, 0).unwrap().coeff
        );
    }
    assert_eq!(
        one.display(
            &one.trace_form(&one.parse_form(1, "u^3").unwrap(), 0)
                .unwrap()
        )
        .text,
        "ds"
    );
}

#[test]
fn localization_commutes_with_trace() {
    let tower = power_tower(3);
    let s = tower.level(0).algebra.parse("s").unwrap();
    let (local, qs) = tower.localized(&s).unwrap();
    for i in 0..3 {
        let w = tower.parse_form(1, &format!("t^{i}")).unwrap();
        let tr = tower.trace_form(&w, 0).unwrap();
        let q_tr = map_form(&qs[0], tower.level(0), local.level(0), &tr, 0);
        let q_w = map_form(&qs[1], tower.level(1), local.level(1), &w, 1);
        let tr_q = local.trace_form(&q_w, 0).unwrap();
        assert!(
            local.level(0).algebra.equal(&q_tr.coeff, &tr_q.coeff),
            "i = {i}"
        );
    }
    // a form with s in the denominator has an honest trace after localizing
    let c = &local.level(1).algebra;
    let inv = c.unit_inverse(&c.parse("t^3").unwrap()).unwrap();
    let w = local.form(1, &(&c.parse("t^2").unwrap() * &inv)).unwrap();
    let tr = local.trace_form(&w, 0).unwrap();
    let b = &local.level(0).algebra;
    let inv_s = b.unit_inverse(&b.parse("s").unwrap()).unwrap();
    assert!(b.equal(&tr.coeff, &inv_s));
}

#[test]
fn localize_form_needs_a_localization_step() {
    let mut tower = power_tower(2);
    let w = tower.parse_form(1, "t").unwrap();
    assert!(matches!(
        tower.localize_form(&w),
        Err(Error::NotLocalization)
    ));
    let t = tower.level(1).algebra.parse("t").unwrap();
    tower.push_localization(&t).unwrap();
    let q = tower.localize_form(&w).unwrap();
    assert_eq!(tower.display(&q).text, "t * dt");
    let zero = tower.parse_form(1, "0").unwrap();
    assert!(tower.localize_form(&zero).unwrap().coeff.is_zero());
}

#[test]
fn degree_one_step_is_the_identity() {
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = AlgebraPresentation::polynomial(Q, &["t"]);
    let mut tower = SmoothTower::new(&AlgebraHom::from_field(&b), false).unwrap();
    tower
        .push_finite(make_hom_strs(&b, &c, &["t + 1"]).unwrap(), false)
        .unwrap();
    let w = tower.parse_form(1, "t^2").unwrap();
    let tr = tower.trace_form(&w, 0).unwrap();
    assert_eq!(tr.coeff, b.parse("(s - 1)^2").unwrap());
}

#[test]
fn newton_power_sums() {
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let s = b.parse("s").unwrap();
    let lower = vec![-&s, b.ring().zero()];
    let basis = |i: usize| -> Vec<FracElem> {
        (0..2)
            .map(|j| {
                FracElem::integral(if i == j {
                    b.ring().one()
                } else {
                    b.ring().zero()
                })
            })
            .collect()
    };
    assert!(
        newton_trace_oracle(&b, &lower, &basis(0)).equals(&FracElem::integral(b.ring().int(2)), &b)
    );
    assert!(newton_trace_oracle(&b, &lower, &basis(1)).num.is_zero());
    // t^2 = s in the quotient, so tr(t^2) = tr(s) = 2s
    let h = vec![
        FracElem::integral(s.clone()),
        FracElem::integral(b.ring().zero()),
    ];
    assert!(newton_trace_oracle(&b, &lower, &h)
        .equals(&FracElem::integral(b.parse("2*s").unwrap()), &b));
    // t^(i+1)/s in Q[t]/(t^n - s) has trace zero
    for n in 2..=5usize {
        let mut lower = vec![b.ring().zero(); n];
        lower[0] = -&s;
        for i in 0..n - 1 {
            let h: Vec<FracElem> = (0..n)
                .map(|j| FracElem {
                    num: if j == i + 1 {
                        b.ring().one()
                    } else {
                        b.ring().zero()
                    },
                    den: s.clone(),
                })
                .collect();
            assert!(newton_trace_oracle(&b, &lower, &h).num.is_zero());
        }
    }
}

#[test]
fn oracle_agrees_inside_trace_steps() {
    let tower = power_tower(4);
    for i in 0..8 {
        let w = tower.parse_form(1, &format!("t^{i} + {i}*t")).unwrap();
        let comp = tower.trace_step(&w).unwrap();
        assert!(comp.companion.equals(&comp.newton, &tower.level(0).algebra));
    }
}

#[test]
fn trace_pairing_is_nondegenerate() {
    for n in 2..=4u32 {
        let tower = power_tower(n);
        let (mat, det) = tower.nondegeneracy(1).unwrap();
        assert_eq!(mat.len(), n as usize);
        assert!(!det.is_zero());
    }
}

#[test]
fn trace_is_linear_over_the_base() {
    let tower = power_tower(3);
    let b = &tower.level(0).algebra;
    let step = tower.level(1).step.as_ref().unwrap();
    for (elem, form) in [("s + 2", "t^2 + t"), ("s^2", "t^5 - 3"), ("-1/2", "t^4")] {
        let beta = b.parse(elem).unwrap();
        let w = tower.parse_form(1, form).unwrap();
        let scaled = tower.form(1, &(&step.apply(&beta) * &w.coeff)).unwrap();
        let lhs = tower.trace_form(&scaled, 0).unwrap().coeff;
        let rhs = b.reduce(&(&beta * &tower.trace_form(&w, 0).unwrap().coeff));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn finite_steps_must_be_monogenic_and_free() {
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = crate::algebra::algebra_from_strs(Q, &["s", "t"], &["t^2 - s"], &[]).unwrap();
    let mut tower = SmoothTower::new(&AlgebraHom::from_field(&b), false).unwrap();
    // C = Q[s, t]/(t^2 - s) is smooth over Q of rank 1 with basis 1, t
    tower
        .push_finite(make_hom_strs(&b, &c, &["s"]).unwrap(), true)
        .unwrap();
    let w = tower.parse_form(1, "t").unwrap();
    assert_eq!(tower.display(&tower.trace_form(&w, 0).unwrap()).text, "ds");

    let plane = AlgebraPresentation::polynomial(Q, &["x", "y"]);
    let mut bad = SmoothTower::new(&AlgebraHom::from_field(&b), false).unwrap();
    assert!(bad
        .push_finite(make_hom_strs(&b, &plane, &["x"]).unwrap(), false)
        .is_err());
}

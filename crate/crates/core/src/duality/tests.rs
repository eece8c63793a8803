use super::*;
use crate::algebra::{algebra_from_strs, make_hom_strs, AlgebraPresentation};
use crate::module::minimal_betti;
use crate::scalar::Field;
use crate::smooth::finiteness_basis;

const Q: Field = Field::Rational;

fn line() -> Algebra {
    AlgebraPresentation::polynomial(Q, &["x"])
}

fn cusp() -> Algebra {
    algebra_from_strs(Q, &["x", "y"], &["y^2 - x^3"], &[]).unwrap()
}

fn iso(m: &FPModule, n: &FPModule) -> bool {
    iso_probe(m, n, 0, DEFAULT_ATTEMPTS).unwrap().is_iso()
}

#[test]
fn canonical_module_of_polynomial_rings() {
    for vars in [&["x"][..], &["x", "y"], &["x", "y", "z"]] {
        let a = AlgebraPresentation::polynomial(Q, vars);
        let cd = canonical_module(&a).unwrap();
        assert_eq!(cd.shift, vars.len() as i64);
        assert_eq!(cd.codim, 0);
        assert_eq!(cd.cm_certificate, (1..=vars.len()).collect::<Vec<_>>());
        assert!(iso(&cd.omega, &FPModule::free(&a, 1)));
    }
    let k = AlgebraPresentation::field_algebra(Q);
    let cd = canonical_module(&k).unwrap();
    assert_eq!(cd.shift, 0);
    assert_eq!(cd.omega.ngens(), 1);
}

#[test]
fn hypersurfaces_are_gorenstein() {
    let a = cusp();
    let cd = canonical_module(&a).unwrap();
    assert_eq!(cd.shift, 1);
    assert_eq!(cd.codim, 1);
    assert_eq!(cd.cm_certificate, vec![0, 2]);
    assert!(cd.gorenstein(0).unwrap().is_iso());
}

#[test]
fn monomial_curve_is_not_gorenstein() {
    // K[t^3, t^4, t^5] = K[x,y,z] / (2x2 minors)
    let a = algebra_from_strs(
        Q,
        &["x", "y", "z"],
        &["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"],
        &[],
    )
    .unwrap();
    let cd = canonical_module(&a).unwrap();
    assert_eq!(cd.shift, 1);
    assert_eq!(cd.omega.fiber_rank(), Some(2));
    assert_eq!(minimal_betti(&cd.omega).unwrap()[0], 2);
    assert!(matches!(
        cd.gorenstein(0).unwrap(),
        IsoVerdict::Mismatch { .. }
    ));
}

#[test]
fn non_cohen_macaulay_is_reported() {
    // a plane and a line meeting at a point
    let a =
        algebra_from_strs(Q, &["x", "y", "z", "w"], &["x*z", "x*w", "y*z", "y*w"], &[]).unwrap();
    match canonical_module(&a) {
        Err(Error::NotCohenMacaulay(bad)) => assert!(!bad.is_empty()),
        other => panic!("expected a Cohen-Macaulay failure, got {other:?}"),
    }
    let table = dualizing_table(&a).unwrap();
    assert!(table.entries.len() >= 2);
}

#[test]
fn smooth_twist_matches_direct_computation() {
    let k = AlgebraPresentation::field_algebra(Q);
    let cd_k = canonical_module(&k).unwrap();
    let a = line();
    let twisted = smooth_twist(&AlgebraHom::from_field(&a), &cd_k, false).unwrap();
    assert_eq!(twisted.shift, 1);
    assert!(iso(&twisted.omega, &canonical_module(&a).unwrap().omega));

    // K[x] -> K[x, y]
    let plane = AlgebraPresentation::polynomial(Q, &["x", "y"]);
    let f = make_hom_strs(&a, &plane, &["x"]).unwrap();
    let t = smooth_twist(&f, &canonical_module(&a).unwrap(), false).unwrap();
    assert_eq!(t.shift, 2);
    assert!(iso(&t.omega, &FPModule::free(&plane, 1)));

    // localization of the cusp away from the singular point
    let c = cusp();
    let loc = AlgebraHom::localization(&c, &c.parse("x").unwrap()).unwrap();
    let cd_c = canonical_module(&c).unwrap();
    let t = smooth_twist(&loc, &cd_c, false).unwrap();
    let direct = canonical_module(loc.target()).unwrap();
    assert_eq!(t.shift, direct.shift);
    assert!(iso(&t.omega, &direct.omega));
}

#[test]
fn finite_shriek_of_a_point_on_the_line() {
    let a = line();
    let b = algebra_from_strs(Q, &["x"], &["x"], &[]).unwrap();
    let f = make_hom_strs(&a, &b, &["x"]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    let table = finite_upper_shriek(&f, &fin, &FPModule::free(&a, 1), 1).unwrap();
    let (deg, m) = table.concentrated().unwrap();
    assert_eq!(deg, 0);
    assert!(iso(m, &FPModule::free(&b, 1)));

    let b2 = algebra_from_strs(Q, &["x"], &["x^2"], &[]).unwrap();
    let f2 = make_hom_strs(&a, &b2, &["x"]).unwrap();
    let fin2 = finiteness_basis(&f2).unwrap();
    let table = finite_upper_shriek(&f2, &fin2, &FPModule::free(&a, 1), 1).unwrap();
    let (deg, m) = table.concentrated().unwrap();
    assert_eq!(deg, 0);
    assert!(iso(m, &FPModule::free(&b2, 1)));
}

#[test]
fn finite_shriek_along_identity_is_the_module() {
    let a = cusp();
    let id = AlgebraHom::identity(&a);
    let fin = finiteness_basis(&id).unwrap();
    let m = FPModule::cyclic(&a, &[a.parse("x").unwrap(), a.parse("y").unwrap()]).unwrap();
    let table = finite_upper_shriek(&id, &fin, &m, 0).unwrap();
    assert!(iso(&table.entry(0), &m));
}

#[test]
fn finite_route_gives_canonical_modules() {
    // the cusp and the monomial curve are finite over K[x]
    let a = line();
    let cd_a = canonical_module(&a).unwrap();
    let c = cusp();
    let f = make_hom_strs(&a, &c, &["x"]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    let routed = finite_route(&f, &fin, &cd_a).unwrap();
    let direct = canonical_module(&c).unwrap();
    assert_eq!(routed.shift, 1);
    assert!(iso(&routed.omega, &direct.omega));

    let m = algebra_from_strs(
        Q,
        &["x", "y", "z"],
        &["y^2 - x*z", "x^3 - y*z", "z^2 - x^2*y"],
        &[],
    )
    .unwrap();
    let g = make_hom_strs(&a, &m, &["x"]).unwrap();
    let fin = finiteness_basis(&g).unwrap();
    let routed = finite_route(&g, &fin, &cd_a).unwrap();
    let direct = canonical_module(&m).unwrap();
    assert_eq!(routed.shift, direct.shift);
    assert!(iso(&routed.omega, &direct.omega));
}

#[test]
fn evaluation_on_hom() {
    // A = Q, B = Q[x]/(x^2), M = Q: evaluation is the first coordinate
    let k = AlgebraPresentation::field_algebra(Q);
    let b = algebra_from_strs(Q, &["x"], &["x^2"], &[]).unwrap();
    let f = make_hom_strs(&k, &b, &[]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    let ev = eval_trace(&f, &fin, &FPModule::free(&k, 1)).unwrap();
    assert_eq!(ev.maps.len(), 2);
    for (map, value) in ev.maps.iter().zip(&ev.values) {
        assert_eq!(value[0], map[0][0]);
    }

    // A = Q[x], B = A/(x): no maps into A
    let a = line();
    let p = algebra_from_strs(Q, &["x"], &["x"], &[]).unwrap();
    let g = make_hom_strs(&a, &p, &["x"]).unwrap();
    let fin = finiteness_basis(&g).unwrap();
    let ev = eval_trace(&g, &fin, &FPModule::free(&a, 1)).unwrap();
    assert!(ev.hom.is_zero());
    assert!(ev.values.iter().all(|v| v.iter().all(|p| p.is_zero())));

    // identity: evaluation is the identity of M
    let id = AlgebraHom::identity(&a);
    let fin = finiteness_basis(&id).unwrap();
    let m = FPModule::cyclic(&a, &[a.parse("x^2").unwrap()]).unwrap();
    let ev = eval_trace(&id, &fin, &m).unwrap();
    for (map, value) in ev.maps.iter().zip(&ev.values) {
        assert_eq!(&map[0], value);
    }
}

#[test]
fn traces_of_square_root() {
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = algebra_from_strs(Q, &["s", "t"], &["t^2 - s"], &[]).unwrap();
    let f = make_hom_strs(&b, &c, &["s"]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    assert_eq!(
        classical_trace(&fin, &c.parse("1").unwrap()).unwrap(),
        b.parse("2").unwrap()
    );
    assert!(classical_trace(&fin, &c.parse("t").unwrap())
        .unwrap()
        .is_zero());
    assert_eq!(
        classical_trace(&fin, &c.parse("t^2").unwrap()).unwrap(),
        b.parse("2*s").unwrap()
    );
    let pairing = etale_pairing(&f, &fin).unwrap();
    assert_eq!(pairing.determinant, b.parse("4*s").unwrap());
    assert!(!pairing.etale);
    assert_eq!(pairing.evaluation_matches, None);

    let bs = algebra_from_strs(Q, &["s"], &[], &["s"]).unwrap();
    let cs = algebra_from_strs(Q, &["s", "t"], &["t^2 - s"], &["s"]).unwrap();
    let g = make_hom_strs(&bs, &cs, &["s"]).unwrap();
    let fin = finiteness_basis(&g).unwrap();
    let pairing = etale_pairing(&g, &fin).unwrap();
    let two = bs.parse("2").unwrap();
    assert_eq!(
        pairing.gram,
        vec![
            vec![two.clone(), bs.ring().zero()],
            vec![bs.ring().zero(), bs.parse("2*s").unwrap()]
        ]
    );
    assert!(pairing.etale);
    assert_eq!(pairing.evaluation_matches, Some(true));
}

#[test]
fn trace_over_identity() {
    let a = cusp();
    let id = AlgebraHom::identity(&a);
    let fin = finiteness_basis(&id).unwrap();
    let y = a.parse("x*y + 3").unwrap();
    assert_eq!(classical_trace(&fin, &y).unwrap(), y);
    assert_eq!(
        etale_pairing(&id, &fin).unwrap().gram,
        vec![vec![a.ring().one()]]
    );
}

#[test]
fn trace_is_basis_independent() {
    // Q[s] -> Q[t], s = t^3 against the basis 1, t + 1, t^2 - t
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = AlgebraPresentation::polynomial(Q, &["t"]);
    let f = make_hom_strs(&b, &c, &["t^3"]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    let other = [
        c.parse("1").unwrap(),
        c.parse("t + 1").unwrap(),
        c.parse("t^2 - t").unwrap(),
    ];
    // change of basis P (rows: new vectors in old coordinates) and inverse
    let p: Vec<Row> = other.iter().map(|e| fin.coords(e)).collect();
    for elem in ["t", "t^2", "t^4 + 2*t", "5"] {
        let e = c.parse(elem).unwrap();
        let direct = classical_trace(&fin, &e).unwrap();
        // trace in the new basis: sum_i (coordinate i of e * new_i in new basis)
        let mut acc = b.ring().zero();
        for (i, v) in other.iter().enumerate() {
            let old = fin.coords(&(&e * v));
            let new = solve_unitriangular(&p, &old);
            acc = &acc + &new[i];
        }
        assert_eq!(b.reduce(&acc), direct, "{elem}");
    }
}

/// Solve `x P = w` for `P` lower unitriangular up to constant diagonal.
fn solve_unitriangular(p: &[Row], w: &[Polynomial]) -> Row {
    let n = p.len();
    let mut w = w.to_vec();
    let mut x = vec![w[0].ring().zero(); n];
    for j in (0..n).rev() {
        let piv = p[j][j].constant_value().unwrap().inv().unwrap();
        x[j] = w[j].scalar_mul(&piv);
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = &*wk - &(&x[j] * &p[j][k]);
        }
    }
    x
}

#[test]
fn gram_determinant_is_the_discriminant() {
    // disc(t^3 - s) = -27 s^2 via the Sylvester resultant of f and f'
    let b = AlgebraPresentation::polynomial(Q, &["s"]);
    let c = AlgebraPresentation::polynomial(Q, &["t"]);
    let f = make_hom_strs(&b, &c, &["t^3"]).unwrap();
    let fin = finiteness_basis(&f).unwrap();
    let det = etale_pairing(&f, &fin).unwrap().determinant;
    let r = b.ring();
    let (s, z) = (b.parse("s").unwrap(), r.zero());
    let one = r.one();
    let three = r.int(3);
    // f = t^3 - s, f' = 3 t^2; Sylvester rows in t^4..t^0
    let sylvester = vec![
        vec![one.clone(), z.clone(), z.clone(), -&s, z.clone()],
        vec![z.clone(), one.clone(), z.clone(), z.clone(), -&s],
        vec![three.clone(), z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), three.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), three, z.clone(), z],
    ];
    let res = poly_determinant(r, &sylvester);
    // disc = (-1)^(n(n-1)/2) res(f, f') for monic f of degree n = 3
    assert_eq!(det, -&res);
    assert_eq!(det, b.parse("-27*s^2").unwrap());
}

#[test]
fn squaring_of_the_line() {
    let a = line();
    let table = squaring_table(&a, &FPModule::free(&a, 1), 1, 3).unwrap();
    // E_0 = 0 at degree -2, E_1 = A at degree -1, nothing else
    assert!(table.get(-2).is_none());
    assert!(iso(&table.entry(-1), &FPModule::free(&a, 1)));
    assert_eq!(table.nonzero_degrees(), vec![-1]);
}

#[test]
fn rigidity_of_small_algebras() {
    let k = AlgebraPresentation::field_algebra(Q);
    let dual = algebra_from_strs(Q, &["x"], &["x^2"], &[]).unwrap();
    for a in [k, line(), dual] {
        let cd = canonical_module(&a).unwrap();
        let report = rigidity_check(&cd, 4, 0).unwrap();
        assert_eq!(report.rigid, Tri::Yes, "{a}");
        assert!(report.verdict.is_iso());
    }
}

#[test]
fn dualize_on_the_line() {
    let a = line();
    let cd = canonical_module(&a).unwrap();
    let free = FPModule::free(&a, 1);
    let d = dualize(&cd, &free).unwrap();
    let (deg, m) = d.concentrated().unwrap();
    assert_eq!(deg, -1);
    assert!(iso(m, &cd.omega));

    let point = FPModule::cyclic(&a, &[a.parse("x").unwrap()]).unwrap();
    let d = dualize(&cd, &point).unwrap();
    let (deg, m) = d.concentrated().unwrap();
    assert_eq!(deg, 0);
    assert!(iso(m, &point));
    // biduality
    let dd = dualize_at(&cd, m, deg).unwrap();
    let (deg2, m2) = dd.concentrated().unwrap();
    assert_eq!(deg2, 0);
    assert!(iso(m2, &point));

    assert!(dualize(&cd, &FPModule::zero(&a)).unwrap().is_zero());
}

#[test]
fn twisted_inverse_image_routes() {
    let k = AlgebraPresentation::field_algebra(Q);
    let a = line();
    let cd_k = canonical_module(&k).unwrap();
    let cd_a = canonical_module(&a).unwrap();

    // identity
    let m = FPModule::cyclic(&a, &[a.parse("x^3").unwrap()]).unwrap();
    let t = twisted_inverse_image(&AlgebraHom::identity(&a), &cd_a, &cd_a, &m, 0).unwrap();
    assert!(iso(&t.entry(0), &m));

    // K -> K[x], M = K: K[x] at degree -1
    let f = AlgebraHom::from_field(&a);
    let t = twisted_inverse_image(&f, &cd_k, &cd_a, &FPModule::free(&k, 1), 0).unwrap();
    let (deg, e) = t.concentrated().unwrap();
    assert_eq!(deg, -1);
    assert!(iso(e, &FPModule::free(&a, 1)));

    // K[x] -> K[x]/(x), M = K[x]: agrees with the finite route
    let b = algebra_from_strs(Q, &["x"], &["x"], &[]).unwrap();
    let cd_b = canonical_module(&b).unwrap();
    let g = make_hom_strs(&a, &b, &["x"]).unwrap();
    let fin = finiteness_basis(&g).unwrap();
    let free = FPModule::free(&a, 1);
    let t = twisted_inverse_image(&g, &cd_a, &cd_b, &free, 0).unwrap();
    let flat = finite_upper_shriek(&g, &fin, &free, 0).unwrap();
    assert_eq!(t.nonzero_degrees(), flat.nonzero_degrees());
    assert_eq!(t.nonzero_degrees(), vec![1]);
    assert!(iso(&t.entry(1), &flat.entry(1)));
}

#[test]
fn rigidity_of_the_cusp() {
    let a = cusp();
    let cd = canonical_module(&a).unwrap();
    let report = rigidity_check(&cd, 4, 0).unwrap();
    assert_eq!(
        report.rigid,
        Tri::Yes,
        "{:?}",
        report.table.nonzero_degrees()
    );
}

#[test]
fn biduality_on_the_cusp() {
    let a = cusp();
    let cd = canonical_module(&a).unwrap();
    let point = FPModule::cyclic(&a, &[a.parse("x").unwrap(), a.parse("y").unwrap()]).unwrap();
    let line_mod = FPModule::cyclic(&a, &[a.parse("x").unwrap()]).unwrap();
    for m in [FPModule::free(&a, 1), line_mod, point, cd.omega.clone()] {
        let d = dualize(&cd, &m).unwrap();
        let (deg, e) = d.concentrated().unwrap();
        let dd = dualize_at(&cd, e, deg).unwrap();
        let (deg2, back) = dd.concentrated().unwrap();
        assert_eq!(deg2, 0);
        assert!(iso(back, &m));
    }
}

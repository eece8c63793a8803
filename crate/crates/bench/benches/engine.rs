use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rigiduality_bench::{cyclic, power_text, power_tower, residue_field};
use rigiduality_core::parse::parse_polynomial;
use rigiduality_core::{
    algebra_from_strs, buchberger, canonical_module, free_resolution, rigidity_check, Field,
    MonomialOrder, PolyRing,
};

fn groebner(c: &mut Criterion) {
    let mut g = c.benchmark_group("buchberger");
    for (label, field) in [("QQ", Field::Rational), ("Fp32003", Field::Prime(32003))] {
        for n in [3, 4] {
            let (ring, gens) = cyclic(field, n, MonomialOrder::GrevLex);
            g.bench_with_input(
                BenchmarkId::new(format!("cyclic/{label}"), n),
                &n,
                |b, _| {
                    b.iter(|| buchberger(&ring, black_box(&gens), MonomialOrder::GrevLex).unwrap())
                },
            );
        }
    }
    g.finish();
}

fn resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("free_resolution");
    for n in [2, 3, 4] {
        let k = residue_field(Field::Rational, n).unwrap();
        g.bench_with_input(BenchmarkId::new("koszul", n), &n, |b, &n| {
            b.iter(|| free_resolution(black_box(&k), n + 1))
        });
    }
    g.finish();
}

fn duality(c: &mut Criterion) {
    let cusp = algebra_from_strs(Field::Rational, &["x", "y"], &["y^2 - x^3"], &[]).unwrap();
    c.bench_function("canonical_module/cusp", |b| {
        b.iter(|| canonical_module(black_box(&cusp)).unwrap())
    });
    let cd = canonical_module(&cusp).unwrap();
    c.bench_function("rigidity_check/cusp", |b| {
        b.iter(|| rigidity_check(black_box(&cd), 4, 0).unwrap())
    });
}

fn traces(c: &mut Criterion) {
    let mut g = c.benchmark_group("trace_form");
    for n in [2u32, 5, 8] {
        let tower = power_tower(n).unwrap();
        let w = tower.parse_form(1, &format!("t^{}", n - 1)).unwrap();
        g.bench_with_input(BenchmarkId::new("power_map", n), &n, |b, _| {
            b.iter(|| tower.trace_form(black_box(&w), 0).unwrap())
        });
    }
    g.finish();
}

fn parsing(c: &mut Criterion) {
    let ring = PolyRing::new(
        Field::Rational,
        vec!["x".into(), "y".into(), "z".into()],
        MonomialOrder::GrevLex,
    );
    let text = power_text(12);
    c.bench_function("parse_polynomial/power_12", |b| {
        b.iter(|| parse_polynomial(&ring, black_box(&text)).unwrap())
    });
}

criterion_group!(benches, groebner, resolution, duality, traces, parsing);
criterion_main!(benches);

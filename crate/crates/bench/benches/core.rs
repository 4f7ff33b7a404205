use criterion::{black_box, criterion_group, criterion_main, Criterion};
use yfrieze_core::{belt, enumerate_patterns, knit, FiniteType, Flavor, PatternKind, SemiringId};

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for (t, cap) in [(FiniteType::A(2), 32u64), (FiniteType::C(2), 64), (FiniteType::G2, 128), (FiniteType::A(3), 16)] {
        let a = t.cartan();
        let caps = vec![cap; t.rank()];
        g.bench_function(format!("{t} y cap {cap}"), |b| {
            b.iter(|| enumerate_patterns(&a, PatternKind::YFrieze, black_box(&caps)).unwrap())
        });
    }
    g.finish();
}

fn knitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("knit");
    let q = SemiringId::PositiveRationals;
    for t in [FiniteType::A(4), FiniteType::F4, FiniteType::E(8)] {
        let a = t.cartan();
        let init: Vec<_> = (0..t.rank()).map(|i| q.parse_value(&format!("{}/{}", i + 2, i + 1)).unwrap()).collect();
        let h = t.coxeter_number();
        g.bench_function(format!("{t} qpos period"), |b| {
            b.iter(|| knit(&a, q, PatternKind::YFrieze, black_box(&init), 0, h + 2).unwrap())
        });
    }
    let u = SemiringId::Universal(3);
    let a3 = FiniteType::A(3).cartan();
    let vars: Vec<_> = (0..3).map(|i| u.variable(i).unwrap()).collect();
    g.bench_function("A3 universal period", |b| {
        b.iter(|| knit(&a3, u, PatternKind::YFrieze, black_box(&vars), 0, 6).unwrap())
    });
    g.finish();
}

fn belts(c: &mut Criterion) {
    let mut g = c.benchmark_group("belt");
    g.sample_size(10);
    for t in [FiniteType::A(3), FiniteType::B(3), FiniteType::G2, FiniteType::D(4)] {
        let a = t.cartan();
        let h = t.coxeter_number();
        g.bench_function(format!("{t} y period"), |b| {
            b.iter(|| belt(&a, Flavor::Y, 0, black_box(h + 2)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, enumeration, knitting, belts);
criterion_main!(benches);

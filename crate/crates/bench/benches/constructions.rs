use criterion::{black_box, criterion_group, criterion_main, Criterion};
use holey_core::construct::{nmss, stacked, two_per_column};
use holey_core::ingredients::catalog;
use holey_core::{enumerate, parse, realize, Ingredients};

fn constructions(c: &mut Criterion) {
    let s0 = parse(catalog::MS_5_3).unwrap();
    c.bench_function("two_per_column(50, 20)", |b| {
        b.iter(|| two_per_column(black_box(50), black_box(20)).unwrap())
    });
    c.bench_function("stacked(5, 25, 3)", |b| {
        b.iter(|| stacked(5, black_box(25), 3, Some(&s0)).unwrap())
    });
    c.bench_function("nmss(5, 3, 5)", |b| {
        b.iter(|| nmss(5, 3, black_box(5), &s0).unwrap())
    });
}

fn search(c: &mut Criterion) {
    c.bench_function("ingredient MS(7;3)", |b| {
        b.iter(|| {
            Ingredients::new()
                .magic_square_holes(black_box(7), 3, None)
                .unwrap()
        })
    });
    c.bench_function("ingredient MR(3,5)", |b| {
        b.iter(|| {
            Ingredients::new()
                .classical_rectangle(3, black_box(5))
                .unwrap()
        })
    });
    c.bench_function("realize MR(15,25;15,9)", |b| {
        b.iter(|| realize(15, 25, 15, 9, &mut Ingredients::new()).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    c.bench_function("oracle MR(4,4;2,2)", |b| {
        b.iter(|| enumerate(4, 4, 2, 2, 0, u64::MAX).unwrap())
    });
}

criterion_group!(benches, constructions, search, oracle);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geomrec_core::abelian::{smith_normal_form, IntMatrix};
use geomrec_core::{low_index_subgroups, parse_presentation, todd_coxeter};

fn coset_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("todd_coxeter");
    let cases = [
        ("S3", "<a,b | a^2, b^2, (ab)^3>"),
        ("Q8", "<x,y | x^4, x^2 y^-2, x y x y^-1>"),
        ("2T", "<a,b | a^3 b^-3, (ab)^2 b^-3>"),
        ("2I", "<a,b | a^5 b^-3, (ab)^2 b^-3>"),
    ];
    for (name, text) in cases {
        let p = parse_presentation(text).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(name), &p, |b, p| {
            b.iter(|| todd_coxeter(black_box(p), &[], 1 << 16).unwrap().index())
        });
    }
    group.finish();
}

fn low_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("low_index");
    let f2 = parse_presentation("<a,b | >").unwrap();
    for k in [2, 3, 4] {
        group.bench_with_input(BenchmarkId::new("F2", k), &k, |b, &k| {
            b.iter(|| low_index_subgroups(black_box(&f2), k).unwrap().len())
        });
    }
    let z3 = parse_presentation("<a,b,c | [a,b], [a,c], [b,c]>").unwrap();
    group.bench_function("Z3/4", |b| b.iter(|| low_index_subgroups(black_box(&z3), 4).unwrap().len()));
    group.finish();
}

fn smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith_normal_form");
    for n in [3usize, 6, 10] {
        // deterministic dense matrix with small entries
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| ((i * 7 + j * 13 + i * j) % 21) as i64 - 10).collect())
            .collect();
        let m = IntMatrix::from_rows(n, &rows);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| smith_normal_form(black_box(m)).rank())
        });
    }
    group.finish();
}

criterion_group!(benches, coset_enumeration, low_index, smith);
criterion_main!(benches);

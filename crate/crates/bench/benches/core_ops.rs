use arithdyn::algebra::places::Place;
use arithdyn::bottcher::compute_bottcher;
use arithdyn::heights::{canonical_height, green_nonarch};
use arithdyn::pairs::{equivalent, EquivOptions};
use arithdyn::plane::periodic_curve_census;
use arithdyn_bench::{point, related_pairs, square_map, system};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bottcher(c: &mut Criterion) {
    let f = system(&["3", "-2", "0", "1"]);
    c.bench_function("bottcher cubic order 20", |b| b.iter(|| compute_bottcher(black_box(&f), 20, 0).unwrap()));
    let g = system(&["1", "0", "2"]);
    c.bench_function("bottcher non-monic order 12", |b| b.iter(|| compute_bottcher(black_box(&g), 12, 0).unwrap()));
}

fn heights(c: &mut Criterion) {
    let f = system(&["0", "1/2", "1"]);
    let a = point("1/16");
    c.bench_function("canonical height 2-adic", |b| b.iter(|| canonical_height(&f, black_box(&a), 128, 64).unwrap()));
    let g = system(&["1", "0", "1"]);
    let one = point("1");
    c.bench_function("canonical height archimedean", |b| b.iter(|| canonical_height(&g, black_box(&one), 128, 64).unwrap()));
    let h = system(&["1/3", "1", "1"]);
    let v = Place::rational_prime(3);
    c.bench_function("green 3-adic", |b| b.iter(|| green_nonarch(&h, black_box(&one), &v, 64).unwrap()));
}

fn pairs(c: &mut Criterion) {
    let (p, q) = related_pairs();
    let opts = EquivOptions::default();
    c.bench_function("equivalence certificate", |b| b.iter(|| equivalent(black_box(&p), &q, &opts).unwrap()));
}

fn plane(c: &mut Criterion) {
    let f = square_map();
    c.bench_function("census n_max 2", |b| b.iter(|| periodic_curve_census(black_box(&f), 2, 2, 12, false, 128).unwrap()));
}

criterion_group!(benches, bottcher, heights, pairs, plane);
criterion_main!(benches);

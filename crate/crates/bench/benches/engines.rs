use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use genus_forge::catalog::Catalog;
use genus_forge::{c_of_b, elliptic_genus, genus_value, EllipticKind, GenusKind, TorusQuotientGraph};

fn elliptic(c: &mut Criterion) {
    let cat = Catalog::shipped();
    let k3k3 = cat.resolve("K3xK3").unwrap();
    let hp2 = cat.resolve("HP2").unwrap();
    c.bench_function("ell2 K3xK3 q^24", |b| b.iter(|| elliptic_genus(black_box(&k3k3), EllipticKind::Ell2, 24)));
    c.bench_function("witten HP2 q^24", |b| b.iter(|| elliptic_genus(black_box(&hp2), EllipticKind::Witten, 24)));
}

fn genera(c: &mut Criterion) {
    let cat = Catalog::shipped();
    let m = cat.resolve("HP2xHP2").unwrap();
    c.bench_function("signature HP2xHP2", |b| b.iter(|| genus_value(black_box(&m), GenusKind::Signature)));
}

fn analytic(c: &mut Criterion) {
    c.bench_function("c_of_b m=6", |b| b.iter(|| c_of_b(black_box(6), black_box(2.0))));
}

fn covering(c: &mut Criterion) {
    let g = TorusQuotientGraph::new(vec![40, 50, 30]).unwrap();
    c.bench_function("bfs 40x50x30", |b| b.iter(|| g.bfs_diameter(1_000_000)));
}

criterion_group!(benches, elliptic, genera, analytic, covering);
criterion_main!(benches);

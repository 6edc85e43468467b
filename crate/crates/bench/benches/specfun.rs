use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quadid_core::specfun::{
    bessel_i0, catalan_const, ellip_k, gamma_fn, hyp3f2_half, hyp3f2_half_quadrature, struve_l0, Modulus,
};

fn specfun(c: &mut Criterion) {
    let xs = [0.1, 2.0, 10.0, 30.0];
    c.bench_function("ellip_k", |b| {
        b.iter(|| {
            [0.1, 0.5, 0.9, 0.999999]
                .map(|k| ellip_k(Modulus::new(black_box(k)).unwrap()))
        })
    });
    c.bench_function("bessel_i0", |b| b.iter(|| xs.map(|x| bessel_i0(black_box(x)).unwrap())));
    c.bench_function("struve_l0", |b| b.iter(|| xs.map(|x| struve_l0(black_box(x)).unwrap())));
    c.bench_function("gamma_fn", |b| b.iter(|| [0.5, 3.7, 20.5].map(|x| gamma_fn(black_box(x)).unwrap())));
    c.bench_function("catalan_const", |b| b.iter(|| black_box(catalan_const())));
    c.bench_function("hyp3f2_half", |b| b.iter(|| [0.3, 0.9, 0.999].map(|x| hyp3f2_half(black_box(x)).unwrap())));
    c.bench_function("hyp3f2_half_quadrature", |b| b.iter(|| hyp3f2_half_quadrature(black_box(0.99)).unwrap()));
}

criterion_group!(benches, specfun);
criterion_main!(benches);

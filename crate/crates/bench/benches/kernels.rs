use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use ivhs_core::{
    alpha2_table, cup_matrix, ks_from_tails, xi_phi_filtration, CanonicalRing, Matrix, MlContext, MlOptions, PlaneCurve, Poly,
    PrimeField, TailEntry, TailRep,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(src: &str) -> Arc<CanonicalRing<PrimeField>> {
    let k = PrimeField::new(101).unwrap();
    let c = PlaneCurve::new(&Poly::parse(&k, &["x", "y", "z"], src).unwrap(), None).unwrap();
    Arc::new(CanonicalRing::new(Arc::new(c)))
}

fn tails(r: &CanonicalRing<PrimeField>, orders: &[usize]) -> TailRep<PrimeField> {
    let k = *r.field();
    let pts = r.curve().find_points(orders.len(), 5).unwrap();
    let entries = pts.into_iter().zip(orders).map(|(point, &m)| TailEntry { point, coeffs: (1..=m as u64).collect() }).collect();
    TailRep::new(&k, entries).unwrap()
}

fn linalg(c: &mut Criterion) {
    let k = PrimeField::new(101).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = Matrix::random(&k, 45, 55, &mut rng);
    c.bench_function("rref 45x55 F_101", |b| b.iter(|| black_box(&m).rref()));
}

fn ring_maps(c: &mut Criterion) {
    c.bench_function("canonical ring d=6", |b| b.iter(|| ring(black_box("x^6+y^6+z^6"))));
    let r = ring("x^6+y^6+z^6");
    c.bench_function("sym2 map d=6", |b| b.iter(|| black_box(&r).sym2_map().rank()));
    c.bench_function("mult map H0(K) x H0(2K) d=6", |b| b.iter(|| black_box(&r).mult_map(1, 2).rank()));
}

fn ml(c: &mut Criterion) {
    let r = ring("x^6+y^6+z^6");
    let t = tails(&r, &[2, 1, 1]);
    let xi = ks_from_tails(&r, t.clone(), "bench").unwrap();
    let w = cup_matrix(&r, &xi).w;
    let ctx = MlContext::new(&r, &t, MlOptions::default()).unwrap();
    let phi = w.basis()[0].clone();
    c.bench_function("ml context d=6", |b| b.iter(|| MlContext::new(&r, &t, MlOptions::default()).unwrap()));
    c.bench_function("ml solve d=6", |b| b.iter(|| ctx.solve(black_box(&phi)).unwrap()));
}

fn filtration(c: &mut Criterion) {
    let r = ring("x^6+y^6+z^6");
    let xi = ks_from_tails(&r, tails(&r, &[3, 2]), "bench").unwrap();
    c.bench_function("alpha2 table d=6", |b| {
        b.iter(|| alpha2_table(&r, &xi, None, MlOptions::default()).unwrap())
    });
    let t = alpha2_table(&r, &xi, None, MlOptions::default()).unwrap();
    let phi = t.w_basis()[0].clone();
    c.bench_function("filtration d=6", |b| b.iter(|| xi_phi_filtration(&t.values, black_box(&phi)).unwrap()));
}

criterion_group!(benches, linalg, ring_maps, ml, filtration);
criterion_main!(benches);

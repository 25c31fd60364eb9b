use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gauge_core::connection::{
    connection_to_form, enumerate_connection_forms, enumerate_connections, random_connection,
    verify_curvature_identity, DEFAULT_CEILING,
};
use gauge_core::forms::{check_transform, hat_transform, random_gauge_form};
use gauge_core::neighbourhood::trivial_model;
use gauge_core::{BundleWithNeighbours, FiniteGroup, Neighbourhood};

fn model(points: usize, group: FiniteGroup) -> BundleWithNeighbours {
    let names = (0..points).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    trivial_model(names, Neighbourhood::codiscrete(points), group).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let k3z3 = model(3, FiniteGroup::cyclic(3));
    let k4z2 = model(4, FiniteGroup::cyclic(2));
    c.bench_function("enumerate connections K3 Z3", |b| {
        b.iter(|| enumerate_connections(black_box(&k3z3), DEFAULT_CEILING).unwrap())
    });
    c.bench_function("enumerate connections K4 Z2", |b| {
        b.iter(|| enumerate_connections(black_box(&k4z2), DEFAULT_CEILING).unwrap())
    });
    c.bench_function("enumerate connection forms K3 Z3", |b| {
        b.iter(|| enumerate_connection_forms(black_box(&k3z3), DEFAULT_CEILING).unwrap())
    });
}

fn curvature(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (label, bn) in [("K3 S3", model(3, FiniteGroup::symmetric(3))), ("K4 Z4", model(4, FiniteGroup::cyclic(4)))] {
        let nabla = random_connection(&bn, &mut rng).unwrap();
        c.bench_function(&format!("curvature identity {label}"), |b| {
            b.iter(|| verify_curvature_identity(black_box(&bn), black_box(&nabla)).unwrap())
        });
        c.bench_function(&format!("connection form {label}"), |b| {
            b.iter(|| connection_to_form(black_box(&bn), black_box(&nabla)).unwrap())
        });
    }
}

fn transforms(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let bn = model(3, FiniteGroup::symmetric(3));
    let alpha = random_gauge_form(&bn, 2, &mut rng).unwrap();
    let hat = hat_transform(&bn, &alpha).unwrap();
    c.bench_function("hat 2-form K3 S3", |b| b.iter(|| hat_transform(black_box(&bn), black_box(&alpha)).unwrap()));
    c.bench_function("check 2-form K3 S3", |b| b.iter(|| check_transform(black_box(&bn), black_box(&hat)).unwrap()));
}

criterion_group!(benches, enumeration, curvature, transforms);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use tempered_bench::{oracle_instance, random_matrix};
use tempered_core::field::FieldSpec;
use tempered_core::modules::{augmentation_modules, is_projective};
use tempered_core::nonassoc::{envelope, random_tensor, EnvelopeSide};
use tempered_core::structure::jacobson_radical;

fn exact_linalg(c: &mut Criterion) {
    let q = FieldSpec::Rationals;
    let f101 = FieldSpec::prime(101).unwrap();
    let m_q = random_matrix(q, 24, 1);
    let m_p = random_matrix(f101, 64, 2);
    c.bench_function("rref_rational_24x24", |b| b.iter(|| black_box(&m_q).rref()));
    c.bench_function("rref_f101_64x64", |b| b.iter(|| black_box(&m_p).rref()));
    c.bench_function("kernel_rational_24x24", |b| b.iter(|| black_box(&m_q).kernel_basis()));
}

fn well_tempered_oracle(c: &mut Criterion) {
    let (a, delta) = oracle_instance(3);
    c.bench_function("criterion_ideal_dim8", |b| {
        b.iter(|| a.is_well_tempered_criterion(black_box(&delta)).unwrap())
    });
    c.bench_function("projectivity_pair_dim8", |b| {
        b.iter(|| {
            let aug = augmentation_modules(&a, black_box(&delta)).unwrap();
            is_projective(&aug.b_plus_left).unwrap() && is_projective(&aug.b_plus_right).unwrap()
        })
    });
    c.bench_function("radical_of_augmented_dim9", |b| {
        b.iter(|| {
            let bb = a.augmented_homotope(black_box(&delta)).unwrap();
            jacobson_radical(&bb).unwrap()
        })
    });
}

fn envelope_closure(c: &mut Criterion) {
    let f101 = FieldSpec::prime(101).unwrap();
    let m = random_tensor(3, f101, 5);
    c.bench_function("envelope_closure_d3_f101", |b| {
        b.iter(|| envelope(black_box(&m), EnvelopeSide::Left))
    });
}

criterion_group!(benches, exact_linalg, well_tempered_oracle, envelope_closure);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use leftq_core::census;
use leftq_core::commutator;
use leftq_core::congruence::{self, CongruenceLattice};
use leftq_core::fixtures;
use leftq_core::maltsev;
use leftq_core::Groups;

fn lattice(c: &mut Criterion) {
    let q = fixtures::get("dihedral-3xP2").unwrap();
    c.bench_function("congruence_lattice/dihedral-3xP2", |b| {
        b.iter(|| CongruenceLattice::build(black_box(&q), congruence::DEFAULT_LATTICE_CAP).unwrap())
    });
    c.bench_function("groups/dihedral-3xP2", |b| b.iter(|| Groups::new(black_box(&q)).unwrap()));
}

fn commutators(c: &mut Criterion) {
    let q = fixtures::get("dihedral-3xP2").unwrap();
    c.bench_function("central_series/dihedral-3xP2", |b| {
        b.iter(|| commutator::central_series(black_box(&q)).unwrap())
    });
    let q = fixtures::get("semiregular-witness").unwrap();
    c.bench_function("classify_abelianness/semiregular-witness", |b| {
        b.iter(|| commutator::classify_abelianness(black_box(&q)).unwrap())
    });
}

fn maltsev_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("maltsev_search");
    group.sample_size(10);
    for name in ["dihedral-5", "tetrahedral", "P3"] {
        let q = fixtures::get(name).unwrap();
        group.bench_function(name, |b| b.iter(|| maltsev::maltsev_search(black_box(&q), maltsev::DEFAULT_BUDGET)));
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let tables = census::sample(4, 64, false, 1).unwrap();
    let perms = census::permutations(4);
    c.bench_function("canonical_form/order4x64", |b| {
        b.iter(|| tables.iter().map(|q| census::canonical_form_with(black_box(q), &perms)).collect::<Vec<_>>())
    });
}

criterion_group!(benches, lattice, commutators, maltsev_search, canonical);
criterion_main!(benches);

//! Benchmarks for the hot paths of calogero-core: annihilation on large
//! monomials, Gram matrix construction, exact rank, expansion fits and the
//! relation verifier.

use calogero_core::fock::{AlgebraParams, BasisKind, FockState, Guards, Occupation};
use calogero_core::gram::{build_gram, DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS};
use calogero_core::opexpr::{fit_expansion, verify_relation, FitTarget, Relation};
use calogero_core::scalar::Rat;
use criterion::{black_box, BenchmarkId, Criterion};

fn annihilate(c: &mut Criterion) {
    let mut group = c.benchmark_group("annihilate");
    for (name, params) in [
        ("symbolic", AlgebraParams::symbolic(4).unwrap()),
        ("nu=1/2", AlgebraParams::at(4, Rat::new(1, 2)).unwrap()),
    ] {
        let s = FockState::monomial(Occupation::new(vec![3, 1, 2, 0]));
        group.bench_function(name, |b| b.iter(|| params.annihilate(black_box(0), black_box(&s))));
    }
    group.finish();
}

fn gram(c: &mut Criterion) {
    let guards = Guards::default();
    let mut group = c.benchmark_group("build_gram");
    group.sample_size(20);
    for (m, n) in [(3, 2), (3, 3), (4, 3)] {
        let symbolic = AlgebraParams::symbolic(m).unwrap();
        group.bench_with_input(BenchmarkId::new("symbolic", format!("M{m}n{n}")), &n, |b, &n| {
            b.iter(|| build_gram(&symbolic, n, BasisKind::Sequence, &guards).unwrap())
        });
    }
    let params = AlgebraParams::at(4, Rat::new(1, 3)).unwrap();
    group.bench_function("nu=1/3/M4n4", |b| {
        b.iter(|| build_gram(&params, 4, BasisKind::Sequence, &guards).unwrap())
    });
    group.finish();

    let g = build_gram(&params, 3, BasisKind::Sequence, &guards).unwrap();
    c.bench_function("rank_exact/M4n3", |b| b.iter(|| g.rank_exact().unwrap()));
    c.bench_function("eigen_numeric/M4n3", |b| {
        b.iter(|| g.eigen_numeric(DEFAULT_EIGEN_TOL, DEFAULT_MAX_SWEEPS).unwrap())
    });
}

fn fits(c: &mut Criterion) {
    let guards = Guards::default();
    let params = AlgebraParams::symbolic(3).unwrap();
    let mut group = c.benchmark_group("fit");
    group.sample_size(10);
    for target in [FitTarget::Exchange(0, 1), FitTarget::TotalNumber] {
        group.bench_function(format!("{target}/M3D2"), |b| {
            b.iter(|| fit_expansion(target, &params, 2, &guards).unwrap())
        });
    }
    group.finish();
}

fn relations(c: &mut Criterion) {
    let guards = Guards::default();
    let params = AlgebraParams::symbolic(3).unwrap();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for rel in [Relation::TripleAlgebra, Relation::NumberOperators] {
        group.bench_function(format!("{rel}/M3D3"), |b| {
            b.iter(|| verify_relation(rel, &params, 3, &guards).unwrap())
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    annihilate(c);
    gram(c);
    fits(c);
    relations(c);
}

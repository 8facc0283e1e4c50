use criterion::{black_box, criterion_group, criterion_main, Criterion};

use liesym::detsys::solve_determining;
use liesym::dsl::Problem;
use liesym::expr::Symbol;
use liesym::liealg::{adjoint_matrix, from_fields};
use liesym::vfield::prolong;

fn problem() -> Problem {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/stagnation.pde");
    Problem::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn solve(c: &mut Criterion) {
    let p = problem();
    let sys = p.system().unwrap();
    c.bench_function("solve_determining degree 2", |b| b.iter(|| solve_determining(black_box(&sys), 2).unwrap()));
}

fn prolongation(c: &mut Criterion) {
    let p = problem();
    let fields: Vec<_> = p.vfields.iter().map(|(_, v)| v.clone()).collect();
    c.bench_function("prolong declared fields to order 2", |b| {
        b.iter(|| {
            for v in &fields {
                black_box(prolong(p.space(), v, 2).unwrap());
            }
        })
    });
}

fn adjoint(c: &mut Criterion) {
    let p = problem();
    let fields: Vec<_> = p.vfields.iter().map(|(_, v)| v.clone()).collect();
    let g = from_fields(&fields).unwrap();
    let eps = Symbol::group_parameter("eps");
    c.bench_function("adjoint matrices", |b| {
        b.iter(|| {
            for i in 0..g.dim() {
                black_box(adjoint_matrix(&g, i, &eps).unwrap());
            }
        })
    });
}

criterion_group!(benches, solve, prolongation, adjoint);
criterion_main!(benches);

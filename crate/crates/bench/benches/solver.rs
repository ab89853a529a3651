//! Timings for the main stages of the solver.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use quartdiff_core::certificate::Config;
use quartdiff_core::descent::OctalEquation;
use quartdiff_core::elliptic::two_isogeny_descent;
use quartdiff_core::local::{obstruct_mod_prime_power, DiagonalForm};
use quartdiff_core::pipeline::solve;
use quartdiff_core::verify::verify_certificate;
use quartdiff_core::witness::find_witness;

fn witness(c: &mut Criterion) {
    c.bench_function("find_witness(239, 250)", |b| b.iter(|| find_witness(black_box(239), 250)));
    c.bench_function("find_witness(1, 250)", |b| b.iter(|| find_witness(black_box(1), 250)));
}

fn stages(c: &mut Criterion) {
    c.bench_function("descent A = 3844", |b| b.iter(|| two_isogeny_descent(black_box(3844), Some(316))));
    let form = DiagonalForm::octal(31, 1, 2);
    c.bench_function("obstruction mod 2^8 for (31, 1, 2)", |b| {
        b.iter(|| obstruct_mod_prime_power(black_box(&form), 2, 8))
    });
    let eq = OctalEquation::from_triple(295, 6, 1);
    c.bench_function("pythag (295, 6, 1)", |b| {
        b.iter(|| quartdiff_core::pythag::pythag_eliminate(black_box(&eq), 229))
    });
}

fn end_to_end(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for n in [31u64, 219, 463] {
        group.bench_function(format!("n = {n}"), |b| b.iter(|| solve(black_box(n), &cfg)));
    }
    group.finish();
    let cert = solve(219, &cfg).certificate().clone();
    c.bench_function("verify n = 219", |b| b.iter(|| verify_certificate(black_box(&cert))));
}

criterion_group!(benches, witness, stages, end_to_end);
criterion_main!(benches);

//! Sequential against rayon maps over the same per-draw closures.
//! Build with default features for the parallel arm.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rmt_core::coulomb_gas::{metropolis_from, PotentialSpec};
use rmt_core::par::{map_indexed_seq, stream};
use rmt_core::sampling::{draw_gaussian, eigenvalues};
use rmt_core::RngSeed;
use std::hint::black_box;

fn spectrum(beta: u8, n: usize, i: usize) -> Vec<f64> {
    let d = draw_gaussian(beta, n, &mut stream(RngSeed(1), i as u64)).unwrap();
    eigenvalues(&d).unwrap().values
}

fn chain(i: usize) -> f64 {
    let p = PotentialSpec::gaussian();
    let mut rng = stream(RngSeed(2), i as u64);
    let init: Vec<f64> = (0..50).map(|k| -1.0 + 2.0 * k as f64 / 49.0).collect();
    let run = metropolis_from(&p, init, 2.0, 200, &mut rng).unwrap();
    run.energy_trace[run.energy_trace.len() - 1]
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("gaussian_spectra");
    g.sample_size(10);
    for (beta, n) in [(1u8, 32usize), (2, 32), (4, 16)] {
        let draws = 64;
        g.bench_with_input(BenchmarkId::new("seq", format!("beta{beta}_n{n}")), &(beta, n), |b, &(beta, n)| {
            b.iter(|| map_indexed_seq(draws, |i| spectrum(beta, n, i)))
        });
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("par", format!("beta{beta}_n{n}")), &(beta, n), |b, &(beta, n)| {
            b.iter(|| rmt_core::par::map_indexed_par(draws, |i| spectrum(beta, n, i)))
        });
    }
    g.finish();
}

fn chains(c: &mut Criterion) {
    let mut g = c.benchmark_group("metropolis_chains");
    g.sample_size(10);
    g.bench_function("seq", |b| b.iter(|| black_box(map_indexed_seq(8, chain))));
    #[cfg(feature = "parallel")]
    g.bench_function("par", |b| b.iter(|| black_box(rmt_core::par::map_indexed_par(8, chain))));
    g.finish();
}

criterion_group!(benches, sampling, chains);
criterion_main!(benches);

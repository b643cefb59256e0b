//! Parallel against sequential execution of the data-parallel sweeps.
//! Build with `--no-default-features` to measure the fallback alone.

use ay_core::binseq::{orbit_partition_check, verify_conjugacies};
use ay_core::par::Mode;
use ay_core::veech::sweep;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Mode); 2] = [("parallel", Mode::Auto), ("sequential", Mode::Sequential)];

fn veech_sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("veech_sweep");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 8), &8, |b, &r| b.iter(|| sweep(r, mode)));
    }
    g.finish();
}

fn conjugacies(c: &mut Criterion) {
    let mut g = c.benchmark_group("conjugacies");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 2000), &2000, |b, &n| {
            b.iter(|| verify_conjugacies(n, 1, mode))
        });
    }
    g.finish();
}

fn partition(c: &mut Criterion) {
    let mut g = c.benchmark_group("orbit_partition");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| b.iter(|| orbit_partition_check(1 << 14, 10, mode)));
    }
    g.finish();
}

criterion_group!(benches, veech_sweep, conjugacies, partition);
criterion_main!(benches);

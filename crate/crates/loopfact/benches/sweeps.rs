//! Parallel vs sequential throughput of the batch sweeps that dominate the
//! verification suites: chain synthesis followed by the exact determinant
//! pair, and the polar reassembly check.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use loopfact::laurent::LaurentSeries;
use loopfact::loop2::{polar_su11, sup_distance};
use loopfact::par;
use loopfact::rootsub::{synth_full, RootSubgroupData};
use loopfact::toeplitz::det_aa;

fn draw_data(case: usize) -> RootSubgroupData {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ case as u64);
    let mut disk = |max: f64| {
        let m: f64 = rng.random::<f64>();
        Complex64::from_polar(max * m.sqrt(), std::f64::consts::TAU * rng.random::<f64>())
    };
    let etas: Vec<Complex64> = (0..2).map(|_| disk(0.6)).collect();
    let zetas: Vec<Complex64> = (0..2).map(|_| disk(0.6)).collect();
    let c1 = disk(0.1);
    let chi = LaurentSeries::from_pairs(&[(1, c1), (-1, -c1.conj())]);
    RootSubgroupData::new(etas, zetas, chi, 0.3).unwrap()
}

/// One sweep case: synthesize, invert, and take both determinants.
fn det_case(case: usize) -> f64 {
    let data = draw_data(case);
    let g = synth_full(&data, 16).unwrap();
    let gi = g.inverse().unwrap();
    det_aa(&g, &gi, false).unwrap() + det_aa(&g, &gi, true).unwrap()
}

/// One sweep case: synthesize and check the polar reassembly defect.
fn polar_case(case: usize) -> f64 {
    let data = draw_data(case);
    let g = synth_full(&data, 10).unwrap();
    let p = polar_su11(&g, 128, 48).unwrap();
    sup_distance(&p.reconstruct(), &g, 128)
}

fn bench_sweeps(c: &mut Criterion) {
    let cases = 64;

    let mut group = c.benchmark_group("det-sweep");
    group.bench_function(BenchmarkId::new("parallel", cases), |b| {
        b.iter(|| par::map_collect(black_box(cases), det_case))
    });
    group.bench_function(BenchmarkId::new("sequential", cases), |b| {
        b.iter(|| par::map_collect_seq(black_box(cases), det_case))
    });
    group.finish();

    let mut group = c.benchmark_group("polar-sweep");
    group.bench_function(BenchmarkId::new("parallel", cases), |b| {
        b.iter(|| par::map_collect(black_box(cases), polar_case))
    });
    group.bench_function(BenchmarkId::new("sequential", cases), |b| {
        b.iter(|| par::map_collect_seq(black_box(cases), polar_case))
    });
    group.finish();
}

criterion_group!(benches, bench_sweeps);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use elastogreen::fd_oracle::solver::Operator;
use elastogreen::fd_oracle::{Grid, VoxelDomain};
use elastogreen::gap_analysis::{zero_locus_scan, GapCase, NuISampling, SampleRange, ScanGrid};
use elastogreen::geometry::{distance_transform, VoxelSet};
use elastogreen::par::{self, Mode};
use elastogreen::verify::reference_pair;
use elastogreen::Vec3;

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn bench_matvec(c: &mut Criterion) {
    let grid = Grid::new(33, -1.0, 1.0).unwrap();
    let dom = VoxelDomain::sphere(grid, Vec3::zeros(), 0.5);
    let op = Operator::new(&reference_pair(), &dom);
    let x: Vec<f64> = (0..op.len()).map(|i| (i as f64 * 0.37).sin()).collect();
    let mut out = vec![0.0; op.len()];
    let mut g = c.benchmark_group("fd_matvec_33");
    for (name, mode) in MODES {
        par::set_mode(mode);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| op.apply(black_box(&x), &mut out)));
    }
    g.finish();
}

fn bench_dot(c: &mut Criterion) {
    let a: Vec<f64> = (0..1 << 20).map(|i| i as f64).collect();
    let b: Vec<f64> = a.iter().map(|v| 1.0 / (1.0 + v)).collect();
    let mut g = c.benchmark_group("dot_1m");
    for (name, mode) in MODES {
        par::set_mode(mode);
        g.bench_function(BenchmarkId::from_parameter(name), |bn| bn.iter(|| par::dot(black_box(&a), black_box(&b))));
    }
    g.finish();
}

fn bench_zero_locus(c: &mut Criterion) {
    let grid = ScanGrid {
        nu: SampleRange::new(-2.0, 2.0, 101).unwrap(),
        nu_i: NuISampling::EqualNu,
        s: SampleRange::new(0.0, 2.0, 400).unwrap(),
    };
    let mut g = c.benchmark_group("zero_locus_scan");
    for (name, mode) in MODES {
        par::set_mode(mode);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| zero_locus_scan(GapCase::Zz, black_box(&grid))));
    }
    g.finish();
}

fn bench_distance_transform(c: &mut Criterion) {
    let set = VoxelSet::ball(Grid::new(64, -1.0, 1.0).unwrap(), Vec3::zeros(), 0.6);
    let mut g = c.benchmark_group("distance_transform_64");
    for (name, mode) in MODES {
        par::set_mode(mode);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| distance_transform(black_box(&set))));
    }
    g.finish();
}

criterion_group!(benches, bench_matvec, bench_dot, bench_zero_locus, bench_distance_transform);
criterion_main!(benches);

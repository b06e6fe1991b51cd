use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use radial_itp::sweep::{map_parallel, map_sequential};
use radial_itp::{
    build_grid, effective_potential, solve_spectrum, CrankNicolson, DiffusionState, PotentialSpec,
    RadialGrid, SolverConfig,
};

const COUPLINGS: [f64; 8] = [0.001, 0.01, 0.1, 1.0, 2.0, 5.0, 10.0, 20.0];

fn ground(grid: &RadialGrid, lambda: f64) -> f64 {
    let config = SolverConfig {
        dt: 1.0,
        ..SolverConfig::default()
    };
    let sp = solve_spectrum(&PotentialSpec::spiked(lambda, 1.0), grid, &config).unwrap();
    sp.results[0].energy
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("coupling_sweep");
    group.sample_size(10);
    for n in [1001usize, 4001] {
        let grid = build_grid(n, 10.0, 1e-6).unwrap();
        group.bench_with_input(BenchmarkId::new("sequential", n), &grid, |b, g| {
            b.iter(|| map_sequential(&COUPLINGS, |&l| ground(g, l)))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &grid, |b, g| {
            b.iter(|| map_parallel(&COUPLINGS, |&l| ground(g, l)))
        });
    }
    group.finish();
}

fn step(c: &mut Criterion) {
    let mut group = c.benchmark_group("crank_nicolson_step");
    for n in [1001usize, 10001, 100001] {
        let grid = build_grid(n, 10.0, 1e-6).unwrap();
        let v = effective_potential(&PotentialSpec::harmonic(), &grid).unwrap();
        let cn = CrankNicolson::new(&grid, &v, 1e-3).unwrap();
        let psi = DiffusionState::normalized(
            grid.r().iter().map(|r| (-0.5 * r * r).exp()).collect(),
            &grid,
        )
        .unwrap();
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| cn.step(black_box(&psi), 0.5).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, step);
criterion_main!(benches);

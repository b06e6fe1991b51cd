use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radial_itp::{
    build_grid, count_nodes, effective_potential, expectation_set, solve_spectrum, thomas_solve,
    CrankNicolson, DiffusionState, Hamiltonian, PotentialSpec, SolverConfig, TridiagonalSystem,
};

fn gershgorin_max(ham: &Hamiltonian) -> f64 {
    (0..ham.len())
        .map(|j| {
            let (l, d, u) = ham.row(j);
            l.abs() + d.abs() + u.abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn pure_step_energy_never_increases() {
    for spec in [
        PotentialSpec::harmonic(),
        PotentialSpec::spiked(10.0, 1.0),
        PotentialSpec::spiked(0.01, 1.0),
    ] {
        let grid = build_grid(120, 10.0, 1e-6).unwrap();
        let v = effective_potential(&spec, &grid).unwrap();
        let ham = Hamiltonian::new(&grid, &v).unwrap();
        // dt·ε_max/2 ≤ 1 keeps every amplification factor in [0, 1].
        let dt = 2.0 / gershgorin_max(&ham);
        let cn = CrankNicolson::new(&grid, &v, dt).unwrap();
        let mut s = DiffusionState::normalized(
            grid.r().iter().map(|r| r * (-0.3 * r).exp()).collect(),
            &grid,
        )
        .unwrap();
        let mut e = ham.expectation(&s.values, &grid);
        let start = e;
        for _ in 0..20_000 {
            s = cn.step(&s, 1.0).unwrap();
            s.normalize(&grid).unwrap();
            let next = ham.expectation(&s.values, &grid);
            assert!(next <= e + 1e-13, "{spec:?}: {e} -> {next}");
            e = next;
        }
        assert!(e < start);
    }
}

#[test]
fn thomas_residual_on_random_dominant_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(1..=300);
        let sub: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sup: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|j| {
                let off = if j > 0 { sub[j].abs() } else { 0.0 }
                    + if j + 1 < n { sup[j].abs() } else { 0.0 };
                let mag = off + rng.random_range(1e-3..2.0);
                if rng.random_bool(0.5) { mag } else { -mag }
            })
            .collect();
        let rhs: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let sys = TridiagonalSystem { sub, diag, sup, rhs };
        assert!(sys.is_diagonally_dominant());
        let y = thomas_solve(&sys).unwrap();
        worst = worst.max(sys.relative_residual(&y));
    }
    assert!(worst <= 1e-12, "worst residual {worst:e}");
}

#[test]
fn harmonic_spectrum_properties() {
    let grid = build_grid(2001, 10.0, 1e-6).unwrap();
    let config = SolverConfig { dt: 1.0, n_states: 6, ..SolverConfig::default() };
    let sp = solve_spectrum(&PotentialSpec::harmonic(), &grid, &config).unwrap();
    assert!(sp.is_complete());
    let mut last_r = 0.0;
    for (n, res) in sp.results.iter().enumerate() {
        assert_eq!(count_nodes(&res.state.values), n);
        let r1 = res.expectations.moments.get(1).unwrap();
        assert!(r1 > last_r);
        last_r = r1;
        assert!((res.expectations.moments.get(0).unwrap() - 1.0).abs() <= 1e-6);
        let x = &res.expectations;
        assert!((x.energy - x.radial_kinetic - x.effective_potential_exp).abs() <= 1e-10);
        assert!((x.energy - x.kinetic - x.potential_exp).abs() <= 1e-10);
    }
    for w in sp.results.windows(2) {
        assert!(w[0].energy < w[1].energy);
    }
    for a in &sp.results {
        for b in &sp.results {
            let g = grid.inner(&a.state.values, &b.state.values);
            let target = if a.index == b.index { 1.0 } else { 0.0 };
            assert!((g - target).abs() <= 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hypervirial_identity_holds_for_any_state(
        width in 0.2f64..3.0,
        power in 0i32..4,
        lambda in -5.0f64..50.0,
        alpha in 0.5f64..6.0,
        ell in 0u32..3,
    ) {
        let grid = build_grid(801, 10.0, 1e-6).unwrap();
        let spec = PotentialSpec { ell, ..PotentialSpec::spiked(lambda, alpha) };
        let s = DiffusionState::normalized(
            grid.r().iter().map(|r| r.powi(power + 1) * (-width * r * r).exp()).collect(),
            &grid,
        ).unwrap();
        let x = expectation_set(&s, &spec, &grid).unwrap();
        let scale = x.energy.abs().max(1.0);
        prop_assert!((x.energy - x.radial_kinetic - x.effective_potential_exp).abs() <= 1e-10 * scale);
        prop_assert!((x.energy - x.kinetic - x.potential_exp).abs() <= 1e-10 * scale);
        prop_assert!((x.moments.get(0).unwrap() - 1.0).abs() <= 1e-6);
    }
}

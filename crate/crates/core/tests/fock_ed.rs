use std::f64::consts::PI;

use bogospec::fock_ed::{
    assemble_bogoliubov_quadratic, assemble_hamiltonian, build_basis, lowest_eigenvalues, many_body_excitations,
    min_eigenvalue_dense, EigenMethod, EigenOptions,
};
use bogospec::{EdConfig, LatticeSpec, Momentum, Potential};
use proptest::prelude::*;

fn line() -> LatticeSpec {
    LatticeSpec::new(2.0 * PI, 1).unwrap()
}

fn cfg(n: usize, amp: f64, radius: f64) -> EdConfig {
    EdConfig::new(n, line(), Potential::gaussian(amp, 5.0, 1).unwrap(), radius).unwrap()
}

#[test]
fn sectors_partition_the_basis() {
    let c = cfg(4, 0.1, 2.0);
    let bases = build_basis(&c).unwrap();
    let modes = c.modes();
    for (p, basis) in &bases {
        for s in &basis.states {
            assert_eq!(&s.momentum(&modes), p);
            assert!(s.total() <= c.max_excited());
        }
    }
    let total: usize = bases.values().map(|b| b.len()).sum();
    // Excited occupations of 4 modes with at most 4 particles: C(8, 4).
    assert_eq!(total, 70);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hamiltonian_is_symmetric(n in 2usize..7, amp in 0.0..3.0f64, p in -2i32..=2) {
        let c = cfg(n, amp, 2.0);
        let h = assemble_hamiltonian(&c, &Momentum::new(&[p])).unwrap();
        prop_assert!(h.matrix.asymmetry() <= 1e-14 * h.matrix.max_abs_entry().max(1.0));
    }

    #[test]
    fn ground_energy_decreases_with_truncation(n in 3usize..7, amp in 0.05..1.0f64) {
        let opts = EigenOptions::default();
        let small = cfg(n, amp, 2.0).with_max_excited(2);
        let large = cfg(n, amp, 2.0);
        let e_small = many_body_excitations(&small, &[], 1, &opts).unwrap().ground_energy;
        let e_large = many_body_excitations(&large, &[], 1, &opts).unwrap().ground_energy;
        prop_assert!(e_large <= e_small + 1e-10);
    }
}

#[test]
fn dense_and_lanczos_agree() {
    let c = cfg(24, 0.1, 2.0);
    let h = assemble_hamiltonian(&c, &Momentum::new(&[1])).unwrap();
    assert!(h.dim() > 300);
    let lanczos = EigenOptions {
        dense_threshold: 0,
        ..EigenOptions::default()
    };
    let a = lowest_eigenvalues(&h.matrix, 3, &lanczos).unwrap();
    let dense = EigenOptions {
        dense_threshold: 2000,
        ..EigenOptions::default()
    };
    let b = lowest_eigenvalues(&h.matrix, 3, &dense).unwrap();
    assert_eq!(a.method, EigenMethod::Lanczos);
    assert_eq!(b.method, EigenMethod::Dense);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 1e-8, "{x} vs {y}");
    }
    let m = min_eigenvalue_dense(&h.matrix.to_dense()).unwrap();
    assert!((m - b.values[0]).abs() < 1e-10);
}

#[test]
fn single_pair_quadratic_levels() {
    let pot = Potential::table(vec![(0.0, 1.0), (2.0, 1.0)], 1).unwrap();
    let modes = [Momentum::new(&[-1]), Momentum::new(&[1])];
    let h = assemble_bogoliubov_quadratic(&line(), &pot, &modes, 40, &Momentum::zero(1)).unwrap();
    let levels = lowest_eigenvalues(&h.matrix, 4, &EigenOptions::default()).unwrap().values;
    let e = 3f64.sqrt();
    for (n, l) in levels.iter().enumerate() {
        assert!((l - (-(2.0 - e) + 2.0 * n as f64 * e)).abs() < 1e-9);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let c = cfg(8, 0.3, 2.0);
    let sectors: Vec<Momentum> = (-2..=2).map(|n| Momentum::new(&[n])).collect();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| many_body_excitations(&c, &sectors, 3, &EigenOptions::default()).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.ground_energy.to_bits(), b.ground_energy.to_bits());
    for p in &sectors {
        assert_eq!(a.sectors[p].eigenvalues, b.sectors[p].eigenvalues);
    }
}
